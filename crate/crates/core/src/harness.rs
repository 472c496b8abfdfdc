//! Inequality checks built on the spectral machinery: exponent classification,
//! single and orthonormal Strichartz estimates on `(−π/2, π/2)`, orthonormal
//! restriction to the surface, the `|sin(t−τ)|^{−λ}` HLS-type bound, and the
//! transfer to the Dunkl propagator through `s = tan t`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenbasis::{basis_indices, basis_matrix, eigenvalue, synthesize, SpectralField};
use crate::error::{LabError, Result};
use crate::geometry::{lp_weighted, GeometryConfig, SpatialGrid, WeightedPoint};
use crate::special_fn::{build_quadrature, QuadratureKind};
use crate::transform::{basis_nus, mixed_norm_abs, TimeGrid};
use crate::C64;

/// Upper cap on `p` when the general-range window has no finite endpoint.
pub const DEGENERATE_P_CAP: f64 = 8.0;

/// Gram tolerance for orthonormal inputs.
pub const GRAM_TOLERANCE: f64 = 1e-10;

// ---------------------------------------------------------------------------
// exponents

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneralRange {
    InRange,
    OutOfRange,
    /// `4γ + 2n + a − 4 ≤ 0`: the window `[1, p_max)` has no finite endpoint
    DegenerateRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
    /// inside the Strichartz trapezoid
    pub admissible: bool,
    /// `p = q = 1 + a/(2γ+n+a−2)`
    pub diagonal: bool,
    pub general_range: GeneralRange,
    /// `1/q + (2γ+n+a−2)/(pa) = (2γ+n+a−2)/a`
    pub general_scaling: bool,
    /// `(1/2 − 1/p)(2γ+n+a−2)/a = 1/q`
    pub dunkl_scaling: bool,
}

impl ExponentPair {
    /// Exponent `2p/(p+1)` of the coefficient sequence.
    pub fn ell_exponent(&self) -> f64 {
        if self.p.is_infinite() {
            2.0
        } else {
            2.0 * self.p / (self.p + 1.0)
        }
    }

    /// Whether the orthonormal estimates apply: the diagonal pair, or the
    /// scaling line inside the window (capped at `cap` when degenerate).
    pub fn in_orthonormal_window(&self, cap: f64) -> bool {
        self.diagonal
            || (self.general_scaling
                && match self.general_range {
                    GeneralRange::InRange => true,
                    GeneralRange::DegenerateRange => self.p < cap,
                    GeneralRange::OutOfRange => false,
                })
    }
}

/// Recovers a simple rational from a float (denominator ≤ 10⁶, agreement to
/// 1e-12 relative); otherwise returns the exact binary value.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let exact = BigRational::from_float(x)?;
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > 1_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    Some(exact)
}

fn recip(x: &Option<BigRational>) -> BigRational {
    match x {
        None => BigRational::zero(),
        Some(v) => v.recip(),
    }
}

fn beta_rational(cfg: &GeometryConfig) -> BigRational {
    let g = rational_from_f64(cfg.gamma).expect("γ is finite");
    let n = BigRational::from_integer(BigInt::from(cfg.n));
    let a = BigRational::from_integer(BigInt::from(cfg.a));
    let two = BigRational::from_integer(BigInt::from(2));
    (two.clone() * g + n + a.clone() - two) / a
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if !(v >= 1.0) {
        return Err(LabError::Domain(format!("exponent {name} = {v} must lie in [1, ∞]")));
    }
    Ok(())
}

/// Classification in exact rational arithmetic (inputs are read as the
/// simplest rationals they represent; `∞` is allowed).
pub fn classify_exponents(cfg: &GeometryConfig, p: f64, q: f64) -> Result<ExponentPair> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let pr = rational_from_f64(p);
    let qr = rational_from_f64(q);
    let (ip, iq) = (recip(&pr), recip(&qr));
    let b = beta_rational(cfg);
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let half = one.clone() / two.clone();
    let zero = BigRational::zero();

    let lower = (b.clone() - one.clone()) / (two.clone() * b.clone());
    let branch1 = lower < ip && ip <= half && half <= iq && iq <= one;
    let branch2 = zero <= iq && iq < half && iq >= b.clone() * (half.clone() - ip.clone());
    let diag_p = one.clone() + one.clone() / b.clone();
    let diagonal = pr.as_ref() == Some(&diag_p) && qr.as_ref() == Some(&diag_p);
    let den = two.clone() * b.clone() - one.clone();
    let general_range = if !den.is_positive() {
        GeneralRange::DegenerateRange
    } else {
        let pmax = (two.clone() * b.clone() + one.clone()) / den;
        match &pr {
            Some(pv) if *pv >= one && *pv < pmax => GeneralRange::InRange,
            _ => GeneralRange::OutOfRange,
        }
    };
    let general_scaling = iq == b.clone() * (one - ip.clone());
    let dunkl_scaling = (half - ip) * b == iq;
    Ok(ExponentPair { p, q, admissible: branch1 || branch2, diagonal, general_range, general_scaling, dunkl_scaling })
}

/// Floating-point classification with comparisons resolved to 1e-12.
pub fn classify_exponents_float(cfg: &GeometryConfig, p: f64, q: f64) -> Result<ExponentPair> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    const TOL: f64 = 1e-12;
    let lt = |x: f64, y: f64| x < y - TOL;
    let le = |x: f64, y: f64| x <= y + TOL;
    let eq = |x: f64, y: f64| (x - y).abs() <= TOL;
    let (ip, iq) = (1.0 / p, 1.0 / q);
    let b = cfg.beta();
    let lower = (b - 1.0) / (2.0 * b);
    let branch1 = lt(lower, ip) && le(ip, 0.5) && le(0.5, iq) && le(iq, 1.0);
    let branch2 = le(0.0, iq) && lt(iq, 0.5) && le(b * (0.5 - ip), iq);
    let dp = 1.0 + 1.0 / b;
    let diagonal = eq(p, dp) && eq(q, dp);
    let den = 2.0 * b - 1.0;
    let general_range = if le(den, 0.0) {
        GeneralRange::DegenerateRange
    } else if p.is_finite() && le(1.0, p) && lt(p, (2.0 * b + 1.0) / den) {
        GeneralRange::InRange
    } else {
        GeneralRange::OutOfRange
    };
    Ok(ExponentPair {
        p,
        q,
        admissible: branch1 || branch2,
        diagonal,
        general_range,
        general_scaling: eq(iq, b * (1.0 - ip)),
        dunkl_scaling: eq((0.5 - ip) * b, iq),
    })
}

/// `q` on the general scaling line for a given `p`: `1/q = β(1 − 1/p)`.
pub fn scaling_q(cfg: &GeometryConfig, p: f64) -> f64 {
    let iq = cfg.beta() * (1.0 - 1.0 / p);
    if iq == 0.0 {
        f64::INFINITY
    } else {
        1.0 / iq
    }
}

/// Upper end of the general `p` window, or the cap when it is degenerate.
pub fn general_p_max(cfg: &GeometryConfig, cap: f64) -> f64 {
    let b = cfg.beta();
    if 2.0 * b - 1.0 <= 0.0 {
        cap
    } else {
        (2.0 * b + 1.0) / (2.0 * b - 1.0)
    }
}

/// The diagonal pair followed by three pairs on the general scaling line at
/// fractions 1/5, 2/5 and 4/5 of the window `[1, p_max)`.
pub fn sweep_exponent_pairs(cfg: &GeometryConfig) -> Vec<(f64, f64)> {
    let pd = 1.0 + 1.0 / cfg.beta();
    let pmax = general_p_max(cfg, DEGENERATE_P_CAP);
    let mut pairs = vec![(pd, pd)];
    for f in [0.2, 0.4, 0.8] {
        let p = 1.0 + (pmax - 1.0) * f;
        pairs.push((p, scaling_q(cfg, p)));
    }
    pairs
}

// ---------------------------------------------------------------------------
// orthonormal systems

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mixing", rename_all = "kebab-case")]
pub enum Mixing {
    /// the first `N` eigenfunctions by eigenvalue
    FirstN,
    /// first `N` columns of a Haar unitary on the first `band` eigenfunctions
    Haar { band: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthonormalSystem {
    pub fields: Vec<SpectralField>,
    pub gram_defect: f64,
    /// coefficients `n_ι`
    pub n: Vec<f64>,
    pub seed: u64,
    pub mixing: Mixing,
}

impl OrthonormalSystem {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Coefficients as a `basis × N` matrix.
    pub fn coefficient_matrix(&self) -> DMatrix<C64> {
        let nb = self.fields.first().map_or(0, |f| f.coeffs.len());
        DMatrix::from_fn(nb, self.fields.len(), |i, j| self.fields[j].coeffs[i])
    }

    pub fn with_weights(mut self, n: Vec<f64>) -> Result<Self> {
        if n.len() != self.fields.len() {
            return Err(LabError::LengthMismatch { expected: self.fields.len(), got: n.len() });
        }
        self.n = n;
        Ok(self)
    }
}

/// Basis positions ordered by eigenvalue (ties by sector).
pub fn eigen_order(cfg: &GeometryConfig, l_max: usize) -> Vec<usize> {
    let idx = basis_indices(cfg, l_max);
    let mut pos: Vec<usize> = (0..idx.len()).collect();
    pos.sort_by(|&i, &j| eigenvalue(cfg, idx[i]).total_cmp(&eigenvalue(cfg, idx[j])).then(idx[i].m.cmp(&idx[j].m)));
    pos
}

/// Haar-distributed unitary of size `b` (QR of a complex Gaussian matrix with
/// the phases of `R` divided out).
pub fn haar_unitary(b: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(b, b, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..b {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// Complex Gaussian coefficients on the `modes` lowest eigenfunctions.
pub fn random_field(cfg: &GeometryConfig, l_max: usize, modes: usize, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zero(cfg, l_max);
    for &pos in eigen_order(cfg, l_max).iter().take(modes) {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        f.coeffs[pos] = C64::new(re, im);
    }
    f
}

/// Seeded real weights with random signs and magnitudes in [1/2, 3/2].
pub fn random_weights(count: usize, seed: u64) -> Vec<f64> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| {
            let m: f64 = rng.random_range(0.5..1.5);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// `N` orthonormal fields with unit coefficients `n_ι = 1`.
pub fn generate_orthonormal_system(
    cfg: &GeometryConfig,
    l_max: usize,
    count: usize,
    seed: u64,
    mixing: Mixing,
) -> Result<OrthonormalSystem> {
    let order = eigen_order(cfg, l_max);
    let band = match mixing {
        Mixing::FirstN => count,
        Mixing::Haar { band } => band,
    };
    if count == 0 || count > band || band > order.len() {
        return Err(LabError::Domain(format!(
            "system of size {count} needs 1 ≤ N ≤ band ≤ basis size (band {band}, basis {})",
            order.len()
        )));
    }
    let mix = match mixing {
        Mixing::FirstN => DMatrix::<C64>::identity(band, band),
        Mixing::Haar { .. } => haar_unitary(band, seed),
    };
    let mut fields = Vec::with_capacity(count);
    for j in 0..count {
        let mut f = SpectralField::zero(cfg, l_max);
        for (k, &pos) in order.iter().take(band).enumerate() {
            f.coeffs[pos] = mix[(k, j)];
        }
        fields.push(f);
    }
    let mut defect = 0.0f64;
    for i in 0..count {
        for j in 0..count {
            let g: C64 = fields[i].coeffs.iter().zip(&fields[j].coeffs).map(|(a, b)| a.conj() * b).sum();
            let e = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((g - e).norm());
        }
    }
    Ok(OrthonormalSystem { fields, gram_defect: defect, n: vec![1.0; count], seed, mixing })
}

// ---------------------------------------------------------------------------
// grids and mixed norms

/// Grid parameters for the mixed-norm engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub time_refine: usize,
    pub space_panels: usize,
    pub space_order: usize,
    pub u_max: f64,
}

impl Resolution {
    /// Defaults that resolve basis functions up to `ℓ = l_top`.
    pub fn for_degree(cfg: &GeometryConfig, l_top: usize) -> Self {
        let lam = cfg.sectors().iter().map(|&m| cfg.lambda_m(m)).fold(0.0, f64::max);
        let u_max = 4.0 * (l_top as f64 + 1.0) + 2.0 * lam + 60.0;
        Self { time_refine: 1, space_panels: (l_top / 2).max(16), space_order: 10, u_max }
    }

    /// Twice the time nodes and twice the spatial panels.
    pub fn doubled(&self) -> Self {
        Self { time_refine: 2 * self.time_refine, space_panels: 2 * self.space_panels, ..*self }
    }
}

#[derive(Debug, Clone)]
pub struct NormGrids {
    pub time: TimeGrid,
    pub space: SpatialGrid,
    pub resolution: Resolution,
}

impl NormGrids {
    pub fn new(cfg: &GeometryConfig, res: Resolution) -> Result<Self> {
        Ok(Self {
            time: TimeGrid::half_period(res.time_refine)?,
            space: SpatialGrid::composite(cfg, res.space_panels, res.space_order, res.u_max)?,
            resolution: res,
        })
    }

    pub fn grid_id(&self) -> String {
        crate::transform::SpaceTimeGrid::new(self.time.clone(), self.space.clone()).grid_id()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedNormReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub p: f64,
    pub q: f64,
    pub geometry: String,
    pub grid_id: String,
    pub seed: Option<u64>,
    pub size: usize,
}

impl MixedNormReport {
    #[allow(clippy::too_many_arguments)]
    fn new(cfg: &GeometryConfig, lhs: f64, rhs: f64, p: f64, q: f64, grid_id: String, seed: Option<u64>, size: usize) -> Result<Self> {
        let ratio = lhs / rhs;
        if !lhs.is_finite() || !rhs.is_finite() || !ratio.is_finite() || lhs < 0.0 || rhs <= 0.0 {
            return Err(LabError::Numerical(format!("mixed-norm report is not finite (lhs {lhs}, rhs {rhs})")));
        }
        Ok(Self { lhs, rhs, ratio, p, q, geometry: cfg.label(), grid_id, seed, size })
    }
}

/// `Σ_ι n_ι |Σ_b C_{bι} Φ_b(x) e^{−i t ω_b}|²` on `times × space`, returned for
/// every prefix size in `sizes` (each ≤ number of columns of `coeffs`).
pub fn prefix_densities(
    basis: &DMatrix<f64>,
    coeffs: &DMatrix<C64>,
    n: &[f64],
    freqs: &[f64],
    times: &[f64],
    sizes: &[usize],
) -> Vec<DMatrix<f64>> {
    // keep only basis columns that carry coefficients
    let active: Vec<usize> = (0..coeffs.nrows()).filter(|&i| coeffs.row(i).iter().any(|c| c.norm() > 0.0)).collect();
    let b = DMatrix::from_fn(basis.nrows(), active.len(), |i, j| basis[(i, active[j])]);
    let ncols = sizes.iter().copied().max().unwrap_or(0).min(coeffs.ncols());
    let nx = basis.nrows();
    let rows: Vec<Vec<Vec<f64>>> = times
        .par_iter()
        .map(|t| {
            let re = DMatrix::from_fn(active.len(), ncols, |i, j| (coeffs[(active[i], j)] * C64::new(0.0, -t * freqs[active[i]]).exp()).re);
            let im = DMatrix::from_fn(active.len(), ncols, |i, j| (coeffs[(active[i], j)] * C64::new(0.0, -t * freqs[active[i]]).exp()).im);
            let ur = &b * re;
            let ui = &b * im;
            let mut acc = vec![0.0; nx];
            let mut out = Vec::with_capacity(sizes.len());
            let mut done = 0;
            let mut sorted: Vec<(usize, usize)> = sizes.iter().copied().enumerate().map(|(k, s)| (s, k)).collect();
            sorted.sort();
            let mut slots = vec![Vec::new(); sizes.len()];
            for (s, k) in sorted {
                while done < s.min(ncols) {
                    for x in 0..nx {
                        acc[x] += n[done] * (ur[(x, done)].powi(2) + ui[(x, done)].powi(2));
                    }
                    done += 1;
                }
                slots[k] = acc.clone();
            }
            out.extend(slots);
            out
        })
        .collect();
    (0..sizes.len())
        .map(|k| DMatrix::from_fn(times.len(), nx, |i, x| rows[i][k][x]))
        .collect()
}

fn eigen_freqs(cfg: &GeometryConfig, l_max: usize) -> Vec<f64> {
    basis_indices(cfg, l_max).into_iter().map(|i| eigenvalue(cfg, i)).collect()
}

fn field_l_max(fields: &[SpectralField]) -> Result<(GeometryConfig, usize)> {
    let f = fields.first().ok_or_else(|| LabError::Domain("empty system".into()))?;
    Ok((f.cfg, f.l_max))
}

/// `‖e^{−itΔ} f‖_{L^q((−π/2,π/2), L^p)}` without any admissibility check.
pub fn propagated_mixed_norm(f: &SpectralField, p: f64, q: f64, grids: &NormGrids) -> f64 {
    let basis = basis_matrix(&f.cfg, &grids.space.points, f.l_max);
    let c = DMatrix::from_fn(f.coeffs.len(), 1, |i, _| f.coeffs[i]);
    let freqs = eigen_freqs(&f.cfg, f.l_max);
    let d = prefix_densities(&basis, &c, &[1.0], &freqs, &grids.time.nodes, &[1]).remove(0);
    mixed_norm_abs(&d.map(f64::sqrt), &grids.time.weights, &grids.space.weights, p, q)
}

/// Ratio `‖e^{−itΔ}f‖_{L^q L^p} / ‖f‖` for admissible pairs.
pub fn strichartz_single(cfg: &GeometryConfig, f: &SpectralField, p: f64, q: f64, grids: &NormGrids) -> Result<MixedNormReport> {
    let class = classify_exponents(cfg, p, q)?;
    if !class.admissible {
        return Err(LabError::Refused(format!("(p, q) = ({p}, {q}) is not admissible: {class:?}")));
    }
    let lhs = propagated_mixed_norm(f, p, q, grids);
    MixedNormReport::new(cfg, lhs, f.norm(), p, q, grids.grid_id(), None, 1)
}

fn check_system(sys_fields: &[SpectralField], gram: f64) -> Result<()> {
    if gram > GRAM_TOLERANCE {
        return Err(LabError::Refused(format!("system Gram defect {gram:.2e} exceeds {GRAM_TOLERANCE:.0e}")));
    }
    field_l_max(sys_fields).map(|_| ())
}

fn check_window(cfg: &GeometryConfig, p: f64, q: f64) -> Result<ExponentPair> {
    let class = classify_exponents(cfg, p, q)?;
    if !class.in_orthonormal_window(DEGENERATE_P_CAP) {
        return Err(LabError::Refused(format!("(p, q) = ({p}, {q}) is outside the orthonormal window: {class:?}")));
    }
    Ok(class)
}

fn density_report(
    cfg: &GeometryConfig,
    sys: &OrthonormalSystem,
    freqs: &[f64],
    class: &ExponentPair,
    grids: &NormGrids,
) -> Result<MixedNormReport> {
    let (_, l_max) = field_l_max(&sys.fields)?;
    let basis = basis_matrix(cfg, &grids.space.points, l_max);
    let d = prefix_densities(&basis, &sys.coefficient_matrix(), &sys.n, freqs, &grids.time.nodes, &[sys.len()]).remove(0);
    let lhs = mixed_norm_abs(&d.map(f64::abs), &grids.time.weights, &grids.space.weights, class.p, class.q);
    let ones = vec![1.0; sys.n.len()];
    let rhs = lp_weighted(&ones, sys.n.iter().map(|v| v.abs()), class.ell_exponent());
    MixedNormReport::new(cfg, lhs, rhs, class.p, class.q, grids.grid_id(), Some(sys.seed), sys.len())
}

/// `‖Σ n_ι |e^{−itΔ} f_ι|²‖_{L^q L^p} / ‖n‖_{2p/(p+1)}`.
pub fn strichartz_orthonormal(cfg: &GeometryConfig, sys: &OrthonormalSystem, p: f64, q: f64, grids: &NormGrids) -> Result<MixedNormReport> {
    check_system(&sys.fields, sys.gram_defect)?;
    let class = check_window(cfg, p, q)?;
    let (_, l_max) = field_l_max(&sys.fields)?;
    density_report(cfg, sys, &eigen_freqs(cfg, l_max), &class, grids)
}

/// As [`strichartz_orthonormal`] for surface data, through `E_S`.
pub fn restriction_orthonormal(cfg: &GeometryConfig, sys: &OrthonormalSystem, p: f64, q: f64, grids: &NormGrids) -> Result<MixedNormReport> {
    check_system(&sys.fields, sys.gram_defect)?;
    let class = check_window(cfg, p, q)?;
    let (_, l_max) = field_l_max(&sys.fields)?;
    density_report(cfg, sys, &basis_nus(cfg, l_max), &class, grids)
}

/// ‖Σ n_ι |e^{−itΔ} f_ι|²‖_{L^∞ L¹} against `Σ|n_ι|`; returns `(lhs, rhs)`.
pub fn endpoint_check(cfg: &GeometryConfig, sys: &OrthonormalSystem, grids: &NormGrids) -> Result<(f64, f64)> {
    check_system(&sys.fields, sys.gram_defect)?;
    let (_, l_max) = field_l_max(&sys.fields)?;
    let basis = basis_matrix(cfg, &grids.space.points, l_max);
    let d = prefix_densities(&basis, &sys.coefficient_matrix(), &sys.n, &eigen_freqs(cfg, l_max), &grids.time.nodes, &[sys.len()]).remove(0);
    let lhs = mixed_norm_abs(&d.map(f64::abs), &grids.time.weights, &grids.space.weights, 1.0, f64::INFINITY);
    Ok((lhs, sys.n.iter().map(|v| v.abs()).sum()))
}

/// One row of an orthonormal sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: u32,
    pub n: usize,
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
    pub size: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub grid_id: String,
}

/// Orthonormal Strichartz ratios for every pair, size and seed, with unit
/// coefficients. Systems for one seed are nested: size `N` uses the first `N`
/// columns of a single Haar unitary on the first `band` eigenfunctions.
pub fn orthonormal_sweep(
    cfg: &GeometryConfig,
    l_max: usize,
    pairs: &[(f64, f64)],
    sizes: &[usize],
    seeds: &[u64],
    band: usize,
    grids: &NormGrids,
) -> Result<Vec<SweepRow>> {
    let classes: Vec<ExponentPair> = pairs.iter().map(|(p, q)| check_window(cfg, *p, *q)).collect::<Result<_>>()?;
    let nmax = sizes.iter().copied().max().unwrap_or(0);
    let basis = basis_matrix(cfg, &grids.space.points, l_max);
    let freqs = eigen_freqs(cfg, l_max);
    let id = grids.grid_id();
    let mut rows = Vec::new();
    for &seed in seeds {
        let sys = generate_orthonormal_system(cfg, l_max, nmax, seed, Mixing::Haar { band })?;
        check_system(&sys.fields, sys.gram_defect)?;
        let dens = prefix_densities(&basis, &sys.coefficient_matrix(), &sys.n, &freqs, &grids.time.nodes, sizes);
        for class in &classes {
            for (d, &size) in dens.iter().zip(sizes) {
                let lhs = mixed_norm_abs(d, &grids.time.weights, &grids.space.weights, class.p, class.q);
                let rhs = (size as f64).powf(1.0 / class.ell_exponent());
                rows.push(SweepRow {
                    a: cfg.a,
                    n: cfg.n,
                    gamma: cfg.gamma,
                    p: class.p,
                    q: class.q,
                    size,
                    seed,
                    lhs,
                    rhs,
                    ratio: lhs / rhs,
                    grid_id: id.clone(),
                });
            }
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// HLS-type lemma on the half period

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhlsReport {
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    /// `∫∫ g(t) h(τ) |sin(t−τ)|^{−λ}` over `(−π/2, π/2)²`
    pub integral: f64,
    /// contributions of `|t−τ| ≤ π/2`, `t−τ > π/2`, `t−τ < −π/2`
    pub regions: [f64; 3],
    /// the `t−τ > π/2` piece evaluated in `(t, τ)` corner coordinates
    pub b2_direct: f64,
    pub b2_defect: f64,
    /// `∫∫_{|t−τ| ≤ π/2} g h |t−τ|^{−λ}`
    pub classical_b1: f64,
    /// `J₁ ≤ I₁ ≤ (π/2)^λ J₁` (meaningful for non-negative g, h)
    pub b1_bracket_ok: bool,
    pub g_norm: f64,
    pub h_norm: f64,
    pub ratio: f64,
    /// Hölder bound `‖g‖_p ‖h‖_q π^{1/p′+1/q′}` when `λ = 0`
    pub hoelder_bound: Option<f64>,
}

fn lp_interval(f: &dyn Fn(f64) -> f64, p: f64, order: usize) -> Result<f64> {
    let mut acc = 0.0;
    let mut sup = 0.0f64;
    let panels = 8;
    for k in 0..panels {
        let lo = -PI / 2.0 + PI * k as f64 / panels as f64;
        let hi = lo + PI / panels as f64;
        let q = build_quadrature(QuadratureKind::GaussLegendre { lo, hi }, order)?;
        for (t, w) in q.nodes.iter().zip(&q.weights) {
            let v = f(*t).abs();
            sup = sup.max(v);
            if p.is_finite() {
                acc += w * v.powf(p);
            }
        }
    }
    Ok(if p.is_infinite() { sup } else { acc.powf(1.0 / p) })
}

/// `F(d) = ∫ g(t) h(t − d) dt` over `t, t − d ∈ (−π/2, π/2)`.
fn overlap(g: &dyn Fn(f64) -> f64, h: &dyn Fn(f64) -> f64, d: f64, rule: &[(f64, f64)]) -> f64 {
    let lo = (-PI / 2.0).max(d - PI / 2.0);
    let hi = (PI / 2.0).min(d + PI / 2.0);
    if hi <= lo {
        return 0.0;
    }
    let (c, r) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    rule.iter().map(|(x, w)| w * r * g(c + r * x) * h(c + r * x - d)).sum()
}

/// Checks `∫∫ g(t)h(τ)|sin(t−τ)|^{−λ} ≤ C ‖g‖_p ‖h‖_q` with `1/p + 1/q + λ = 2`.
/// For `λ = 0` any `p, q ∈ [1, ∞]` are accepted and the Hölder bound is reported.
pub fn rhls_check(
    lambda: f64,
    p: f64,
    q: f64,
    g: &dyn Fn(f64) -> f64,
    h: &dyn Fn(f64) -> f64,
    order: usize,
) -> Result<RhlsReport> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(LabError::Domain(format!("λ = {lambda} must lie in [0, 1)")));
    }
    if lambda > 0.0 {
        if !(p > 1.0 && p.is_finite() && q > 1.0 && q.is_finite()) {
            return Err(LabError::Domain(format!("need 1 < p, q < ∞, got ({p}, {q})")));
        }
        if (1.0 / p + 1.0 / q + lambda - 2.0).abs() > 1e-12 {
            return Err(LabError::Domain(format!("scaling 1/p + 1/q + λ = 2 violated for ({p}, {q}, {lambda})")));
        }
    } else if !(p >= 1.0 && q >= 1.0) {
        return Err(LabError::Domain(format!("need p, q ≥ 1, got ({p}, {q})")));
    }
    let gl = build_quadrature(QuadratureKind::GaussLegendre { lo: -1.0, hi: 1.0 }, order)?;
    let inner: Vec<(f64, f64)> = gl.nodes.iter().copied().zip(gl.weights.iter().copied()).collect();
    // ∫_0^{π/2} e^{−λ} φ(e) de via Gauss–Jacobi on e = (π/4)(1+x)
    let gj = build_quadrature(QuadratureKind::GaussJacobi { alpha: 0.0, beta: -lambda }, order)?;
    let half = PI / 4.0;
    let singular = |phi: &dyn Fn(f64) -> f64| -> f64 {
        gj.nodes.iter().zip(&gj.weights).map(|(x, w)| w * half.powf(1.0 - lambda) * phi(half * (1.0 + x))).sum()
    };
    let sinc = |e: f64| if e == 0.0 { 1.0 } else { (e / e.sin()).powf(lambda) };
    let f = |d: f64| overlap(g, h, d, &inner);
    let i1 = singular(&|e| sinc(e) * (f(e) + f(-e)));
    let j1 = singular(&|e| f(e) + f(-e));
    let i2 = singular(&|e| sinc(e) * f(PI - e));
    let i3 = singular(&|e| sinc(e) * f(e - PI));

    // t − τ > π/2 in corner coordinates u = π/2 − t, v = τ + π/2, u = ρ(1−σ), v = ρσ
    let o2 = order + 7;
    let gj2 = build_quadrature(QuadratureKind::GaussJacobi { alpha: 0.0, beta: 1.0 - lambda }, o2)?;
    let sig = build_quadrature(QuadratureKind::GaussLegendre { lo: 0.0, hi: 1.0 }, o2)?;
    let mut b2 = 0.0;
    for (x, wx) in gj2.nodes.iter().zip(&gj2.weights) {
        let rho = half * (1.0 + x);
        let wr = wx * half.powf(2.0 - lambda) * sinc(rho);
        for (s, ws) in sig.nodes.iter().zip(&sig.weights) {
            let (u, v) = (rho * (1.0 - s), rho * s);
            b2 += wr * ws * g(PI / 2.0 - u) * h(v - PI / 2.0);
        }
    }

    let integral = i1 + i2 + i3;
    let g_norm = lp_interval(g, p, order)?;
    let h_norm = lp_interval(h, q, order)?;
    let conj = crate::schatten::conjugate_exponent;
    let hoelder_bound = (lambda == 0.0).then(|| {
        let e = |r: f64| if r.is_infinite() { 0.0 } else { 1.0 / r };
        g_norm * h_norm * PI.powf(e(conj(p)) + e(conj(q)))
    });
    let b1_bracket_ok = j1 <= i1 * (1.0 + 1e-12) && i1 <= (PI / 2.0).powf(lambda) * j1 * (1.0 + 1e-12);
    Ok(RhlsReport {
        lambda,
        p,
        q,
        integral,
        regions: [i1, i2, i3],
        b2_direct: b2,
        b2_defect: (b2 - i2).abs() / i2.abs().max(1e-300),
        classical_b1: j1,
        b1_bracket_ok,
        g_norm,
        h_norm,
        ratio: integral / (g_norm * h_norm),
        hoelder_bound,
    })
}

// ---------------------------------------------------------------------------
// Dunkl transfer

/// `e^{i(s/a)‖x‖^{2−a}Δ_k} f` at `points`, from the relation
/// `e^{−i arctan(s) Δ_{k,a}} f(x) = (1+s²)^{β/2} e^{−is‖x‖^a/a} w(s, (1+s²)^{1/a} x)`.
pub fn dunkl_propagator(f: &SpectralField, s: f64, points: &[WeightedPoint]) -> Vec<C64> {
    let cfg = &f.cfg;
    let af = cfg.a_f64();
    let lam = 1.0 + s * s;
    let scaled: Vec<WeightedPoint> = points.iter().map(|p| WeightedPoint { r: p.r * lam.powf(-1.0 / af), omega: p.omega }).collect();
    let u = synthesize(&crate::semigroup::propagate(f, s.atan()), &scaled);
    points
        .iter()
        .zip(u)
        .map(|(y, v)| v * lam.powf(-cfg.beta() / 2.0) * C64::new(0.0, s * y.r.powf(af) / (af * lam)).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DunklReport {
    pub p: f64,
    pub q: f64,
    /// `(Dunkl side on (0,∞), Laguerre side on (0,π/2))`
    pub positive: (f64, f64),
    /// `(Dunkl side on (−∞,0), Laguerre side on (−π/2,0))`
    pub negative: (f64, f64),
    /// largest relative defect of the two equalities
    pub defect: f64,
    /// relative defect of `‖w(s)‖_p` on the unscaled grid vs the matched grid, `|s| ≤ 1`
    pub fixed_grid_defect: f64,
}

fn half_line_norms(
    cfg: &GeometryConfig,
    grids: &NormGrids,
    abs_u: &DMatrix<f64>,
    p: f64,
    q: f64,
    power: f64,
    positive: bool,
) -> (f64, f64) {
    // tan-matched grids: y_j = (1+s²)^{1/a} x_j with weights scaled by (1+s²)^β
    let b = cfg.beta();
    let mut dunkl_t = Vec::new();
    let mut lag_t = Vec::new();
    let mut dunkl_w = Vec::new();
    let mut lag_w = Vec::new();
    for (i, (t, w)) in grids.time.nodes.iter().zip(&grids.time.weights).enumerate() {
        if (*t > 0.0) != positive {
            continue;
        }
        let s = t.tan();
        let lam = 1.0 + s * s;
        let row: Vec<f64> = abs_u.row(i).iter().copied().collect();
        let lag = lp_weighted(&grids.space.weights, row.iter().copied(), p);
        let yw: Vec<f64> = grids.space.weights.iter().map(|v| v * lam.powf(b)).collect();
        let dunkl = lp_weighted(&yw, row.iter().map(|v| v * lam.powf(-power * b / 2.0)), p);
        dunkl_t.push(dunkl);
        lag_t.push(lag);
        dunkl_w.push(w * lam);
        lag_w.push(*w);
    }
    (lp_weighted(&dunkl_w, dunkl_t.into_iter(), q), lp_weighted(&lag_w, lag_t.into_iter(), q))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Norm equalities between the Dunkl propagator on `(0, ±∞)` and
/// `e^{−itΔ_{k,a}}` on `(0, ±π/2)`, under `(1/2 − 1/p)β = 1/q`.
pub fn dunkl_transfer(cfg: &GeometryConfig, f: &SpectralField, p: f64, q: f64, grids: &NormGrids) -> Result<DunklReport> {
    let class = classify_exponents(cfg, p, q)?;
    if !class.dunkl_scaling {
        return Err(LabError::Refused(format!("(p, q) = ({p}, {q}) violates (1/2 − 1/p)β = 1/q")));
    }
    let basis = basis_matrix(cfg, &grids.space.points, f.l_max);
    let c = DMatrix::from_fn(f.coeffs.len(), 1, |i, _| f.coeffs[i]);
    let d = prefix_densities(&basis, &c, &[1.0], &eigen_freqs(cfg, f.l_max), &grids.time.nodes, &[1]).remove(0);
    let abs_u = d.map(f64::sqrt);
    let pos = half_line_norms(cfg, grids, &abs_u, p, q, 1.0, true);
    let neg = half_line_norms(cfg, grids, &abs_u, p, q, 1.0, false);

    // independent evaluation of ‖w(s)‖_p on the unscaled grid
    let mut fixed = 0.0f64;
    let b = cfg.beta();
    for (i, t) in grids.time.nodes.iter().enumerate() {
        let s = t.tan();
        if s.abs() > 1.0 || i % 8 != 0 {
            continue;
        }
        let w = dunkl_propagator(f, s, &grids.space.points);
        let direct = grids.space.lp_norm(&w, p)?;
        let lam = 1.0 + s * s;
        let yw: Vec<f64> = grids.space.weights.iter().map(|v| v * lam.powf(b)).collect();
        let matched = lp_weighted(&yw, abs_u.row(i).iter().map(|v| v * lam.powf(-b / 2.0)), p);
        fixed = fixed.max(relative(direct, matched));
    }
    Ok(DunklReport {
        p,
        q,
        positive: pos,
        negative: neg,
        defect: relative(pos.0, pos.1).max(relative(neg.0, neg.1)),
        fixed_grid_defect: fixed,
    })
}

/// Orthonormal version: densities `Σ n_ι |·|²` under `β(1 − 1/p) = 1/q`.
/// Returns the report and the two full-line ratios `(Dunkl, Laguerre)` against
/// `‖n‖_{2p/(p+1)}`.
pub fn dunkl_transfer_orthonormal(
    cfg: &GeometryConfig,
    sys: &OrthonormalSystem,
    p: f64,
    q: f64,
    grids: &NormGrids,
) -> Result<(DunklReport, f64, f64)> {
    check_system(&sys.fields, sys.gram_defect)?;
    let class = classify_exponents(cfg, p, q)?;
    if !class.general_scaling {
        return Err(LabError::Refused(format!("(p, q) = ({p}, {q}) violates β(1 − 1/p) = 1/q")));
    }
    let (_, l_max) = field_l_max(&sys.fields)?;
    let basis = basis_matrix(cfg, &grids.space.points, l_max);
    let d = prefix_densities(&basis, &sys.coefficient_matrix(), &sys.n, &eigen_freqs(cfg, l_max), &grids.time.nodes, &[sys.len()]).remove(0);
    let abs_d = d.map(f64::abs);
    let pos = half_line_norms(cfg, grids, &abs_d, p, q, 2.0, true);
    let neg = half_line_norms(cfg, grids, &abs_d, p, q, 2.0, false);
    let join = |a: f64, b: f64| if q.is_infinite() { a.max(b) } else { (a.powf(q) + b.powf(q)).powf(1.0 / q) };
    let ones = vec![1.0; sys.n.len()];
    let rhs = lp_weighted(&ones, sys.n.iter().map(|v| v.abs()), class.ell_exponent());
    let report = DunklReport {
        p,
        q,
        positive: pos,
        negative: neg,
        defect: relative(pos.0, pos.1).max(relative(neg.0, neg.1)),
        fixed_grid_defect: 0.0,
    };
    Ok((report, join(pos.0, neg.0) / rhs, join(pos.1, neg.1) / rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::{apply_dunkl_laplacian_rank1, SpectralIndex};
    use crate::geometry::{make_config, Sector};

    #[test]
    fn classification_examples() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.0 }).unwrap();
        let d = classify_exponents(&cfg, 3.0, 3.0).unwrap();
        assert!(d.diagonal && d.general_scaling);
        assert_eq!(d.general_range, GeneralRange::DegenerateRange);
        assert!(classify_exponents(&cfg, 2.0, 2.0).unwrap().admissible);
        assert!(!classify_exponents(&cfg, 1.0, 1.0).unwrap().admissible);
        assert!(classify_exponents(&cfg, 2.0, f64::INFINITY).unwrap().admissible);
        let cfg = make_config(2, 3, Sector::Radial { gamma: 0.0 }).unwrap();
        // β = 3/2: diagonal p = 5/3, window p < 2
        let d = classify_exponents(&cfg, 5.0 / 3.0, 5.0 / 3.0).unwrap();
        assert!(d.diagonal && d.general_range == GeneralRange::InRange);
        assert!((d.ell_exponent() - 1.25).abs() < 1e-15);
        assert_eq!(classify_exponents(&cfg, 2.0, 3.0).unwrap().general_range, GeneralRange::OutOfRange);
        assert!(classify_exponents(&cfg, 0.5, 2.0).is_err());
    }

    #[test]
    fn rational_recovery() {
        assert_eq!(rational_from_f64(4.0 / 3.0).unwrap(), BigRational::new(4.into(), 3.into()));
        assert_eq!(rational_from_f64(0.7).unwrap(), BigRational::new(7.into(), 10.into()));
        assert_eq!(rational_from_f64(5.0).unwrap(), BigRational::from_integer(5.into()));
    }

    #[test]
    fn systems_are_orthonormal() {
        let cfg = make_config(1, 1, Sector::Rank1 { k: 0.5 }).unwrap();
        let s = generate_orthonormal_system(&cfg, 10, 6, 3, Mixing::Haar { band: 12 }).unwrap();
        assert!(s.gram_defect < 1e-12);
        let one = generate_orthonormal_system(&cfg, 10, 1, 0, Mixing::FirstN).unwrap();
        assert_eq!(one.fields[0].get(SpectralIndex::new(0, 0)), C64::new(1.0, 0.0));
        assert!(generate_orthonormal_system(&cfg, 3, 9, 0, Mixing::FirstN).is_err());
    }

    #[test]
    fn full_band_density_is_mixing_invariant() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.3 }).unwrap();
        let l_max = 6;
        let grids = NormGrids::new(&cfg, Resolution::for_degree(&cfg, l_max)).unwrap();
        let plain = generate_orthonormal_system(&cfg, l_max, 8, 0, Mixing::FirstN).unwrap();
        let mixed = generate_orthonormal_system(&cfg, l_max, 8, 5, Mixing::Haar { band: 8 }).unwrap();
        let p = 1.0 + 1.0 / cfg.beta();
        let q = p;
        let a = strichartz_orthonormal(&cfg, &plain, p, q, &grids).unwrap();
        let b = strichartz_orthonormal(&cfg, &mixed, p, q, &grids).unwrap();
        assert!((a.lhs / b.lhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_function_examples() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.5 }).unwrap();
        let l_max = 6;
        let grids = NormGrids::new(&cfg, Resolution::for_degree(&cfg, l_max)).unwrap();
        let mut f = SpectralField::zero(&cfg, l_max);
        for (i, c) in f.coeffs.iter_mut().enumerate() {
            *c = C64::new(1.0 / (1.0 + i as f64), (i as f64).sin());
        }
        let r = strichartz_single(&cfg, &f, 2.0, f64::INFINITY, &grids).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        // one mode: |e^{−itΔ}Φ| = |Φ|
        let g = SpectralField::single(&cfg, l_max, SpectralIndex::new(0, 0)).unwrap();
        let r = strichartz_single(&cfg, &g, 2.5, 1.5, &grids).unwrap();
        let phi = synthesize(&g, &grids.space.points);
        let expect = grids.space.lp_norm(&phi, 2.5).unwrap() * PI.powf(1.0 / 1.5);
        assert!((r.ratio / expect - 1.0).abs() < 1e-12);
        assert!(matches!(strichartz_single(&cfg, &f, 1.0, 1.0, &grids), Err(LabError::Refused(_))));
    }

    #[test]
    fn endpoint_and_restriction_identity() {
        let cfg = make_config(1, 1, Sector::Rank1 { k: 0.5 }).unwrap();
        let l_max = 8;
        let grids = NormGrids::new(&cfg, Resolution::for_degree(&cfg, l_max)).unwrap();
        let sys = generate_orthonormal_system(&cfg, l_max, 10, 7, Mixing::Haar { band: 14 }).unwrap();
        let sys = sys.with_weights(random_weights(10, 7)).unwrap();
        let (lhs, rhs) = endpoint_check(&cfg, &sys, &grids).unwrap();
        assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
        let p = 1.2;
        let q = scaling_q(&cfg, p);
        let a = strichartz_orthonormal(&cfg, &sys, p, q, &grids).unwrap();
        let b = restriction_orthonormal(&cfg, &sys, p, q, &grids).unwrap();
        assert!((a.lhs / b.lhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rhls_regions_and_hoelder() {
        let g = |t: f64| 1.0 + 0.5 * t.sin();
        let h = |t: f64| (0.3 * t).cos().powi(2);
        let r = rhls_check(0.5, 4.0 / 3.0, 4.0 / 3.0, &g, &h, 24).unwrap();
        assert!(r.b2_defect < 1e-8, "{}", r.b2_defect);
        assert!(r.b1_bracket_ok);
        let r0 = rhls_check(0.0, 2.0, 3.0, &g, &h, 24).unwrap();
        let ig = lp_interval(&g, 1.0, 24).unwrap();
        let ih = lp_interval(&h, 1.0, 24).unwrap();
        assert!((r0.integral / (ig * ih) - 1.0).abs() < 1e-12);
        assert!(r0.integral <= r0.hoelder_bound.unwrap());
        let inf = rhls_check(0.0, 1.0, f64::INFINITY, &g, &h, 24).unwrap();
        assert!(inf.integral <= inf.hoelder_bound.unwrap());
        assert!(rhls_check(0.5, 2.0, 2.0, &g, &h, 24).is_err());
    }

    #[test]
    fn dunkl_propagator_solves_its_equation() {
        // i ∂_s w + (1/a)|x|^{2−a} Δ_k w = 0, rank one
        for (a, k) in [(2, 0.5), (1, 0.5)] {
            let cfg = make_config(a, 1, Sector::Rank1 { k }).unwrap();
            let l_max = 4;
            let mut f = SpectralField::zero(&cfg, l_max);
            for (i, c) in f.coeffs.iter_mut().enumerate() {
                *c = C64::new((i as f64 * 0.8).cos(), 0.3 * i as f64) / (1.0 + i as f64);
            }
            let at = |s: f64, x: f64| dunkl_propagator(&f, s, &[WeightedPoint::rank1(x).unwrap()])[0];
            for &(s, x) in &[(0.4, 0.7), (-0.9, -1.3), (1.5, 0.45)] {
                let h = 1e-4;
                let ds = (at(s + h, x) - at(s - h, x)) / (2.0 * h);
                let re = apply_dunkl_laplacian_rank1(&cfg, &|y| at(s, y).re, x).unwrap();
                let im = apply_dunkl_laplacian_rank1(&cfg, &|y| at(s, y).im, x).unwrap();
                let lap = C64::new(re, im) * x.abs().powf(2.0 - a as f64) / a as f64;
                let res = C64::new(0.0, 1.0) * ds + lap;
                assert!(res.norm() < 1e-5 * (1.0 + lap.norm()), "a={a} s={s} x={x}: {res}");
            }
        }
    }

    #[test]
    fn dunkl_norm_equalities() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.3 }).unwrap();
        let l_max = 6;
        let grids = NormGrids::new(&cfg, Resolution::for_degree(&cfg, 2 * l_max)).unwrap();
        let mut f = SpectralField::zero(&cfg, l_max);
        for (i, c) in f.coeffs.iter_mut().enumerate().take(10) {
            *c = C64::new(1.0, i as f64 * 0.2) / (1.0 + i as f64);
        }
        let b = cfg.beta();
        let p = 4.0;
        let q = 1.0 / ((0.5 - 1.0 / p) * b);
        let r = dunkl_transfer(&cfg, &f, p, q, &grids).unwrap();
        assert!(r.defect < 1e-6, "{r:?}");
        assert!(r.fixed_grid_defect < 1e-6, "{r:?}");
        assert!(dunkl_transfer(&cfg, &f, 4.0, 4.0, &grids).is_err());
    }
}
