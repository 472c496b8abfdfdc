//! Orthonormal eigenbasis `Φ_{ℓ,m,j} = Y_j^m ψ_{ℓ,m}` of `L²_{k,a}`,
//! eigenvalues, and coefficient/sample conversions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::geometry::{GeometryConfig, Sector, SpatialGrid, WeightedPoint};
use crate::special_fn::laguerre_functions;
use crate::C64;

/// Default basis truncation.
pub const DEFAULT_L_MAX: usize = 48;

/// Tail energy above which a report should warn about truncation.
pub const TAIL_WARNING: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpectralIndex {
    pub l: usize,
    pub m: usize,
    /// harmonic label; every supported sector has a single harmonic
    pub j: usize,
}

impl SpectralIndex {
    pub fn new(l: usize, m: usize) -> Self {
        Self { l, m, j: 1 }
    }
}

fn check_index(cfg: &GeometryConfig, idx: SpectralIndex) -> Result<()> {
    if !cfg.sectors().contains(&idx.m) || idx.j != 1 {
        return Err(LabError::UnsupportedIndex(format!(
            "(ℓ={}, m={}, j={}) is outside the sectors of {}",
            idx.l,
            idx.m,
            idx.j,
            cfg.label()
        )));
    }
    Ok(())
}

/// Basis indices with `ℓ ≤ l_max`, grouped by sector then by ℓ.
pub fn basis_indices(cfg: &GeometryConfig, l_max: usize) -> Vec<SpectralIndex> {
    cfg.sectors()
        .iter()
        .flat_map(|&m| (0..=l_max).map(move |l| SpectralIndex::new(l, m)))
        .collect()
}

/// `2ℓ + λ_{k,a,m} + 1`
pub fn eigenvalue(cfg: &GeometryConfig, idx: SpectralIndex) -> f64 {
    2.0 * idx.l as f64 + cfg.lambda_m(idx.m) + 1.0
}

/// `ψ_{ℓ,m}(r)` for `ℓ = 0..=l_max`, normalized to unit norm in
/// `L²(ℝ₊, r^{2γ+n+a−3} dr)`:
/// `ψ = (2^{λ+1} ℓ! / (a^λ Γ(λ+ℓ+1)))^{1/2} r^m L^{(λ)}_ℓ((2/a) r^a) e^{−r^a/a}`.
pub fn psi_table(cfg: &GeometryConfig, m: usize, r: f64, l_max: usize) -> Vec<f64> {
    let af = cfg.a_f64();
    let lam = cfg.lambda_m(m);
    let u = 2.0 / af * r.powf(af);
    let pre = (2.0 * (2.0 / af).powf(lam)).sqrt() * r.powi(m as i32);
    let mut v = laguerre_functions(lam, u, l_max);
    for x in &mut v {
        *x *= pre;
    }
    v
}

/// Normalized radial eigenfunction `ψ_{ℓ,m}(r)`.
pub fn psi_radial(cfg: &GeometryConfig, l: usize, m: usize, r: f64) -> Result<f64> {
    check_index(cfg, SpectralIndex::new(l, m))?;
    if !(r > 0.0) {
        return Err(LabError::Domain(format!("ψ needs r > 0, got {r}")));
    }
    Ok(psi_table(cfg, m, r, l)[l])
}

/// Angular factor `Y^m(ω)`.
pub fn angular(cfg: &GeometryConfig, m: usize, omega: f64) -> f64 {
    match cfg.sector {
        Sector::Rank1 { .. } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            if m == 0 {
                s
            } else {
                s * omega
            }
        }
        Sector::Radial { .. } => cfg.d_k.sqrt(),
    }
}

pub fn phi_eigenfunction(cfg: &GeometryConfig, idx: SpectralIndex, point: &WeightedPoint) -> Result<f64> {
    Ok(angular(cfg, idx.m, point.omega) * psi_radial(cfg, idx.l, idx.m, point.r)?)
}

/// Values of every basis function with `ℓ ≤ l_max` at one point, in
/// `basis_indices` order.
pub fn phi_row(cfg: &GeometryConfig, point: &WeightedPoint, l_max: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(cfg.sectors().len() * (l_max + 1));
    for &m in cfg.sectors() {
        let y = angular(cfg, m, point.omega);
        row.extend(psi_table(cfg, m, point.r, l_max).into_iter().map(|v| v * y));
    }
    row
}

/// Basis sampled on a grid: rows are points, columns follow `basis_indices`.
pub fn basis_matrix(cfg: &GeometryConfig, points: &[WeightedPoint], l_max: usize) -> DMatrix<f64> {
    let cols = cfg.sectors().len() * (l_max + 1);
    let mut out = DMatrix::zeros(points.len(), cols);
    for (i, p) in points.iter().enumerate() {
        for (j, v) in phi_row(cfg, p, l_max).into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    out
}

/// Gram matrix `⟨Φ_i, Φ_j⟩` of the truncated basis on a grid.
pub fn gram_matrix(grid: &SpatialGrid, l_max: usize) -> DMatrix<f64> {
    let b = basis_matrix(&grid.cfg, &grid.points, l_max);
    let mut wb = b.clone();
    for (i, w) in grid.weights.iter().enumerate() {
        wb.row_mut(i).scale_mut(*w);
    }
    b.transpose() * wb
}

/// A function held by its coefficients on the truncated basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    pub cfg: GeometryConfig,
    pub l_max: usize,
    /// indexed like `basis_indices(cfg, l_max)`
    pub coeffs: Vec<C64>,
}

impl SpectralField {
    pub fn zero(cfg: &GeometryConfig, l_max: usize) -> Self {
        let len = cfg.sectors().len() * (l_max + 1);
        Self { cfg: *cfg, l_max, coeffs: vec![C64::new(0.0, 0.0); len] }
    }

    pub fn from_coeffs(cfg: &GeometryConfig, l_max: usize, coeffs: Vec<C64>) -> Result<Self> {
        let len = cfg.sectors().len() * (l_max + 1);
        if coeffs.len() != len {
            return Err(LabError::LengthMismatch { expected: len, got: coeffs.len() });
        }
        Ok(Self { cfg: *cfg, l_max, coeffs })
    }

    pub fn single(cfg: &GeometryConfig, l_max: usize, idx: SpectralIndex) -> Result<Self> {
        let mut f = Self::zero(cfg, l_max);
        let pos = f.position(idx)?;
        f.coeffs[pos] = C64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn indices(&self) -> Vec<SpectralIndex> {
        basis_indices(&self.cfg, self.l_max)
    }

    pub fn position(&self, idx: SpectralIndex) -> Result<usize> {
        check_index(&self.cfg, idx)?;
        if idx.l > self.l_max {
            return Err(LabError::UnsupportedIndex(format!("ℓ = {} exceeds L_max = {}", idx.l, self.l_max)));
        }
        let s = self.cfg.sectors().iter().position(|&m| m == idx.m).unwrap();
        Ok(s * (self.l_max + 1) + idx.l)
    }

    pub fn get(&self, idx: SpectralIndex) -> C64 {
        self.position(idx).map(|p| self.coeffs[p]).unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Energy carried by the top quarter of each sector's ℓ-range.
    pub fn tail_energy(&self) -> f64 {
        let cut = self.l_max - self.l_max / 4;
        self.indices()
            .iter()
            .zip(&self.coeffs)
            .filter(|(i, _)| i.l > cut)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }
}

/// Coefficients of sampled data together with the Plancherel defect
/// `‖f‖² − Σ|f̂|²` measured on the same grid.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub field: SpectralField,
    pub plancherel_defect: f64,
}

/// `f̂(ℓ,m,j) = ∫ f Φ v dx` by quadrature on `grid`.
pub fn analyze(grid: &SpatialGrid, samples: &[C64], l_max: usize) -> Result<Analysis> {
    if samples.len() != grid.len() {
        return Err(LabError::LengthMismatch { expected: grid.len(), got: samples.len() });
    }
    let b = basis_matrix(&grid.cfg, &grid.points, l_max);
    let mut coeffs = vec![C64::new(0.0, 0.0); b.ncols()];
    let mut mass = 0.0;
    for (i, (w, f)) in grid.weights.iter().zip(samples).enumerate() {
        mass += w * f.norm_sqr();
        let wf = *w * f;
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c += wf * b[(i, j)];
        }
    }
    let field = SpectralField::from_coeffs(&grid.cfg, l_max, coeffs)?;
    let defect = mass - field.norm().powi(2);
    Ok(Analysis { field, plancherel_defect: defect })
}

/// `Σ f̂ Φ` at the given points.
pub fn synthesize(field: &SpectralField, points: &[WeightedPoint]) -> Vec<C64> {
    points
        .iter()
        .map(|p| {
            phi_row(&field.cfg, p, field.l_max)
                .into_iter()
                .zip(&field.coeffs)
                .map(|(v, c)| c * v)
                .sum()
        })
        .collect()
}

fn fd_second_and_first(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let (fp1, fm1) = (f(x + h), f(x - h));
    let (fp2, fm2) = (f(x + 2.0 * h), f(x - 2.0 * h));
    let f0 = f(x);
    let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    (d2, d1)
}

/// Rank-one Dunkl Laplacian
/// `Δ_k f = f'' + (2k/x) f' − (k/x²)(f(x) − f(−x))` by centered 4th-order
/// differences. Returns the value and the Richardson estimate of its error
/// (difference to the same stencil at twice the step).
pub fn dunkl_laplacian_rank1_with_error(
    cfg: &GeometryConfig,
    f: &dyn Fn(f64) -> f64,
    x: f64,
) -> Result<(f64, f64)> {
    let k = match cfg.sector {
        Sector::Rank1 { k } => k,
        Sector::Radial { .. } => {
            return Err(LabError::Domain("the rank-one Dunkl Laplacian needs the rank-one sector".into()))
        }
    };
    if x == 0.0 || !x.is_finite() {
        return Err(LabError::Domain(format!("Dunkl Laplacian is evaluated at x ≠ 0, got {x}")));
    }
    let h = 1e-3 * x.abs().clamp(0.05, 1.0);
    let eval = |h: f64| {
        let (d2, d1) = fd_second_and_first(f, x, h);
        d2 + 2.0 * k / x * d1 - k / (x * x) * (f(x) - f(-x))
    };
    let v = eval(h);
    let v2 = eval(2.0 * h);
    Ok((v, (v - v2).abs() / 15.0))
}

pub fn apply_dunkl_laplacian_rank1(cfg: &GeometryConfig, f: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    dunkl_laplacian_rank1_with_error(cfg, f, x).map(|(v, _)| v)
}

/// `Δ_{k,a} f(x) = (1/a)(|x|^a f − |x|^{2−a} Δ_k f)` in the rank-one sector.
pub fn apply_laguerre_operator_rank1(cfg: &GeometryConfig, f: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    let af = cfg.a_f64();
    let lap = apply_dunkl_laplacian_rank1(cfg, f, x)?;
    Ok((x.abs().powf(af) * f(x) - x.abs().powf(2.0 - af) * lap) / af)
}

/// `Φ_idx(x)` as a plain function of `x ∈ ℝ \ {0}` (rank one).
pub fn rank1_function(cfg: &GeometryConfig, idx: SpectralIndex) -> impl Fn(f64) -> f64 + '_ {
    move |x: f64| {
        let r = x.abs().max(f64::MIN_POSITIVE);
        angular(cfg, idx.m, x.signum()) * psi_table(cfg, idx.m, r, idx.l)[idx.l]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_config;
    use crate::special_fn::gamma;

    #[test]
    fn ground_state_closed_form() {
        let cfg = make_config(1, 3, Sector::Radial { gamma: 0.7 }).unwrap();
        let lam = cfg.lambda_m(0);
        let af = 1.0_f64;
        for &r in &[0.1_f64, 1.0, 3.7] {
            let expect = (2.0 * (2.0 / af).powf(lam) / gamma(lam + 1.0)).sqrt() * (-r / af).exp();
            assert!((psi_radial(&cfg, 0, 0, r).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.0 }).unwrap();
        assert!((eigenvalue(&cfg, SpectralIndex::new(3, 0)) - 6.5).abs() < 1e-15);
        let cfg = make_config(1, 3, Sector::Radial { gamma: 0.0 }).unwrap();
        assert!((eigenvalue(&cfg, SpectralIndex::new(4, 0)) - 10.0).abs() < 1e-15);
    }

    #[test]
    fn unsupported_index() {
        let cfg = make_config(2, 3, Sector::Radial { gamma: 0.0 }).unwrap();
        assert!(psi_radial(&cfg, 0, 1, 1.0).is_err());
        let p = WeightedPoint::radial(1.0).unwrap();
        assert!(phi_eigenfunction(&cfg, SpectralIndex::new(0, 1), &p).is_err());
    }

    #[test]
    fn odd_sector_is_odd() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.5 }).unwrap();
        let f = rank1_function(&cfg, SpectralIndex::new(3, 1));
        for &x in &[0.3, 1.1, 2.5] {
            assert!((f(-x) + f(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn gram_is_identity() {
        let cfg = make_config(1, 1, Sector::Rank1 { k: 0.5 }).unwrap();
        let grid = SpatialGrid::exact(&cfg, 30).unwrap();
        let g = gram_matrix(&grid, 15);
        let id = DMatrix::<f64>::identity(g.nrows(), g.ncols());
        let d = g - id;
        assert!(d.amax() < 1e-12, "{}", d.amax());
    }

    #[test]
    fn dunkl_laplacian_k0_is_second_derivative() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.0 }).unwrap();
        let f = |x: f64| (-x * x).exp();
        for &x in &[0.4_f64, -1.3, 2.0] {
            let exact = (4.0 * x * x - 2.0) * (-x * x).exp();
            let v = apply_dunkl_laplacian_rank1(&cfg, &f, x).unwrap();
            assert!((v - exact).abs() <= 1e-6 * exact.abs());
        }
        assert!(apply_dunkl_laplacian_rank1(&cfg, &f, 0.0).is_err());
    }
}
