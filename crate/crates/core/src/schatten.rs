//! Singular values, Schatten norms, weighted sandwiches `W₁ M W₂`, and the
//! pairing form of the duality principle for orthonormal systems.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::analytic_family::{OperatorMatrix, OperatorRepr};
use crate::error::{LabError, Result};
use crate::geometry::lp_weighted;
use crate::transform::SpaceTimeGrid;
use crate::C64;

/// Non-increasing singular values; length `min(rows, cols)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

fn check_finite(m: &DMatrix<C64>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(LabError::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn svd_values(m: DMatrix<C64>) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let svd = m
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| LabError::Numerical("singular value decomposition did not converge".into()))?;
    let mut v: Vec<f64> = svd.singular_values.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Triangular factor `R` of a thin QR, so that `R* R = M* M`.
fn thin_r(m: &DMatrix<C64>) -> DMatrix<C64> {
    if m.nrows() >= m.ncols() {
        m.clone().qr().r()
    } else {
        m.clone()
    }
}

/// Singular values of the weight-symmetrized matrix. Factored operators
/// `L R*` of small inner dimension go through `σ(R_L R_R*)`.
pub fn singular_values(op: &OperatorMatrix) -> Result<SingularSpectrum> {
    let full = op.nrows().min(op.ncols());
    let mut values = match &op.repr {
        OperatorRepr::Dense(m) => {
            check_finite(m)?;
            svd_values(m.clone())?
        }
        OperatorRepr::Factored { left, right } => {
            check_finite(left)?;
            check_finite(right)?;
            if left.ncols() >= full {
                svd_values(left * right.adjoint())?
            } else {
                let core = thin_r(left) * thin_r(right).adjoint();
                svd_values(core)?
            }
        }
    };
    values.truncate(full);
    values.resize(full, 0.0);
    Ok(SingularSpectrum { values })
}

/// `(Σ σ^r)^{1/r}`; `r = ∞` gives `σ₁`. For `r < 1` this is only a quasi-norm.
pub fn schatten_norm(spec: &SingularSpectrum, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!("Schatten exponent must be positive, got {r}")));
    }
    let top = spec.largest();
    if r.is_infinite() || top == 0.0 {
        return Ok(top);
    }
    let s: f64 = spec.values.iter().map(|v| (v / top).powf(r)).sum();
    Ok(top * s.powf(1.0 / r))
}

/// `W₁ M W₂` with the weights sampled on the row and column grids.
pub fn weighted_sandwich(w1: &[C64], op: &OperatorMatrix, w2: &[C64]) -> Result<OperatorMatrix> {
    if w1.len() != op.nrows() {
        return Err(LabError::LengthMismatch { expected: op.nrows(), got: w1.len() });
    }
    if w2.len() != op.ncols() {
        return Err(LabError::LengthMismatch { expected: op.ncols(), got: w2.len() });
    }
    let scale_rows = |m: &DMatrix<C64>, w: &[C64], conj: bool| {
        let mut out = m.clone();
        for (i, wi) in w.iter().enumerate() {
            let f = if conj { wi.conj() } else { *wi };
            let mut row = out.row_mut(i);
            row *= f;
        }
        out
    };
    let repr = match &op.repr {
        OperatorRepr::Dense(m) => {
            let mut out = scale_rows(m, w1, false);
            for (j, wj) in w2.iter().enumerate() {
                let mut col = out.column_mut(j);
                col *= *wj;
            }
            OperatorRepr::Dense(out)
        }
        OperatorRepr::Factored { left, right } => OperatorRepr::Factored {
            left: scale_rows(left, w1, false),
            right: scale_rows(right, w2, true),
        },
    };
    Ok(OperatorMatrix { repr, ..op.clone() })
}

/// Conjugate exponent; `1 ↦ ∞`.
pub fn conjugate_exponent(r: f64) -> f64 {
    if r == 1.0 {
        f64::INFINITY
    } else if r.is_infinite() {
        1.0
    } else {
        r / (r - 1.0)
    }
}

/// `(Σ|n|^r)^{1/r}`, `r = ∞` allowed.
pub fn sequence_norm(n: &[C64], r: f64) -> f64 {
    let ones = vec![1.0; n.len()];
    lp_weighted(&ones, n.iter().map(|v| v.norm()), r)
}

/// Orthonormal vectors in `ℓ²(S_trunc)` (columns) with coefficients `n_ι`.
#[derive(Debug, Clone)]
pub struct CoefficientSystem {
    pub vectors: DMatrix<C64>,
    pub n: Vec<C64>,
}

impl CoefficientSystem {
    pub fn gram_defect(&self) -> f64 {
        let g = self.vectors.adjoint() * &self.vectors;
        let mut d = 0.0f64;
        for j in 0..g.ncols() {
            for i in 0..g.nrows() {
                let e = if i == j { 1.0 } else { 0.0 };
                d = d.max((g[(i, j)] - e).norm());
            }
        }
        d
    }
}

/// Exponents for `duality_check`. `W` is measured in `L^{w_q}_t L^{w_p}_x`, the
/// density in `L^{rho_q}_t L^{rho_p}_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityExponents {
    pub lambda: f64,
    pub w_p: f64,
    pub w_q: f64,
    pub rho_p: f64,
    pub rho_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityInstance {
    pub size: usize,
    /// `|Σ n_ι ∫∫ |W|² |A f_ι|²|`
    pub pairing: f64,
    /// `‖W A A* W̄‖_{𝒢^λ} ‖n‖_{λ′}`
    pub bound: f64,
    pub slack: f64,
    /// `‖Σ n_ι |A f_ι|²‖ / ‖n‖_{λ′}`
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub exponents: DualityExponents,
    pub lambda_prime: f64,
    pub schatten: f64,
    pub w_norm: f64,
    /// `‖W A A* W̄‖_{𝒢^λ} / ‖W‖²`
    pub c1: f64,
    pub instances: Vec<DualityInstance>,
}

impl DualityReport {
    pub fn min_slack(&self) -> f64 {
        self.instances.iter().map(|i| i.slack).fold(f64::INFINITY, f64::min)
    }
}

/// Checks the direction (1) ⇒ (2) of the duality principle in pairing form:
/// for orthonormal `f_ι`, `|Σ n_ι ∫∫ |W|²|A f_ι|²| ≤ ‖W A A* W̄‖_{𝒢^λ} ‖n‖_{λ′}`.
///
/// `a` is the weight-symmetrized matrix of `A` (rows on `grid`), `w` the
/// samples of `W` on `grid`.
pub fn duality_check(
    a: &DMatrix<C64>,
    grid: &SpaceTimeGrid,
    w: &[C64],
    systems: &[CoefficientSystem],
    ex: DualityExponents,
) -> Result<DualityReport> {
    if a.nrows() != grid.len() || w.len() != grid.len() {
        return Err(LabError::LengthMismatch { expected: grid.len(), got: a.nrows().min(w.len()) });
    }
    for s in systems {
        let d = s.gram_defect();
        if d > 1e-10 {
            return Err(LabError::Refused(format!("input system is not orthonormal (Gram defect {d:.2e})")));
        }
        if s.vectors.nrows() != a.ncols() || s.n.len() != s.vectors.ncols() {
            return Err(LabError::LengthMismatch { expected: a.ncols(), got: s.vectors.nrows() });
        }
    }
    let lp = conjugate_exponent(ex.lambda);
    let mut wa = a.clone();
    for (i, wi) in w.iter().enumerate() {
        let mut row = wa.row_mut(i);
        row *= *wi;
    }
    // σ(W A A* W̄) = σ(W A)²
    let sv = svd_values(thin_r(&wa))?;
    let squared = SingularSpectrum { values: sv.iter().map(|s| s * s).collect() };
    let schatten = schatten_norm(&squared, ex.lambda)?;

    let (nt, nx) = (grid.time.len(), grid.space.len());
    let w_abs = DMatrix::from_fn(nt, nx, |i, j| w[i * nx + j].norm());
    let w_norm = crate::transform::mixed_norm_abs(&w_abs, &grid.time.weights, &grid.space.weights, ex.w_p, ex.w_q);
    let sqrt_w: Vec<f64> = grid.weights().into_iter().map(f64::sqrt).collect();

    let mut instances = Vec::with_capacity(systems.len());
    for s in systems {
        let af = a * &s.vectors;
        let mut pairing = C64::new(0.0, 0.0);
        let mut density = DMatrix::<f64>::zeros(nt, nx);
        for (c, n) in s.n.iter().enumerate() {
            let col: DVector<C64> = af.column(c).into();
            for (row, v) in col.iter().enumerate() {
                let e = v.norm_sqr();
                pairing += *n * (w[row].norm_sqr() * e);
                density[(row / nx, row % nx)] += n.re * e / (sqrt_w[row] * sqrt_w[row]);
            }
        }
        let nn = sequence_norm(&s.n, lp);
        let bound = schatten * nn;
        let rho = crate::transform::mixed_norm_abs(&density.map(f64::abs), &grid.time.weights, &grid.space.weights, ex.rho_p, ex.rho_q) / nn;
        instances.push(DualityInstance { size: s.n.len(), pairing: pairing.norm(), bound, slack: bound - pairing.norm(), rho });
    }
    Ok(DualityReport { exponents: ex, lambda_prime: lp, schatten, w_norm, c1: schatten / (w_norm * w_norm), instances })
}

/// Smooth seeded weight on a space-time grid: `e^{−c u(x)}(1 + sin(ωt + φ)/2)`
/// times a phase `e^{iα cos(t + ψ)}`, decaying in space.
pub fn smooth_weight(grid: &SpaceTimeGrid, seed: u64) -> Vec<C64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let decay: f64 = rng.random_range(0.1..0.6);
    let amp: f64 = rng.random_range(0.0..2.0);
    let freq: f64 = rng.random_range(1.0..3.0);
    let (ph1, ph2): (f64, f64) = (rng.random_range(0.0..6.3), rng.random_range(0.0..6.3));
    let mut out = Vec::with_capacity(grid.len());
    for t in &grid.time.nodes {
        for u in &grid.space.u {
            let mag = (-decay * u).exp() * (1.0 + 0.5 * (freq * t + ph1).sin());
            out.push(C64::from_polar(mag, amp * (t + ph2).cos()));
        }
    }
    out
}

/// `‖W‖_{L^r_t L^r_x}` on the grid.
pub fn weight_norm(grid: &SpaceTimeGrid, w: &[C64], r: f64) -> f64 {
    let nx = grid.space.len();
    let abs = DMatrix::from_fn(grid.time.len(), nx, |i, j| w[i * nx + j].norm());
    crate::transform::mixed_norm_abs(&abs, &grid.time.weights, &grid.space.weights, r, r)
}

/// `‖W₁ 𝒯_S W₂‖_{𝒢^r} / (‖W₁‖_{L^r} ‖W₂‖_{L^r})` with `𝒯_S = E_S E_S*` on the
/// grid, for the weight pairs seeded `(2s, 2s+1)`, `s ∈ seeds`.
pub fn sandwich_ratios(
    cfg: &crate::geometry::GeometryConfig,
    l_max: usize,
    grid: &SpaceTimeGrid,
    r: f64,
    seeds: std::ops::Range<u64>,
) -> Result<Vec<f64>> {
    let e = crate::transform::extension_matrix(cfg, l_max, grid);
    let sw: Vec<f64> = grid.weights().into_iter().map(f64::sqrt).collect();
    let id = grid.grid_id();
    let ts = OperatorMatrix::factored(e.clone(), e, sw.clone(), sw, id.clone(), id)?;
    seeds
        .map(|s| {
            let w1 = smooth_weight(grid, 2 * s);
            let w2 = smooth_weight(grid, 2 * s + 1);
            let op = weighted_sandwich(&w1, &ts, &w2)?;
            let norm = schatten_norm(&singular_values(&op)?, r)?;
            Ok(norm / (weight_norm(grid, &w1, r) * weight_norm(grid, &w2, r)))
        })
        .collect()
}
