//! The analytic family `T_z`, `−λ₀ ≤ Re z ≤ 0`, with multiplier
//! `G_z(ν,ℓ,m,j) = (ν − 2ℓ − 2m/a)_+^z / Γ(z+1)`, its space-time kernel `K_z`,
//! and dense or factored matrix discretizations.

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenbasis::{basis_indices, basis_matrix, SpectralIndex};
use crate::error::{LabError, Result};
use crate::geometry::{GeometryConfig, WeightedPoint};
use crate::semigroup::kernel_closed_form;
use crate::special_fn::{gamma_complex, polylog_unit_circle, rgamma_complex};
use crate::transform::{surface_offset, SpaceTimeGrid};
use crate::C64;

/// Abel parameters `q` for the singular series on `−1 ≤ Re z ≤ 0`.
pub const ABEL_Q: [f64; 3] = [0.99, 0.995, 0.9975];

const STRIP_SLACK: f64 = 1e-12;

/// A point of the strip together with `ψ(z) = 1/Γ(z+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticFamilyPoint {
    pub z: C64,
    pub psi: C64,
}

impl AnalyticFamilyPoint {
    pub fn new(cfg: &GeometryConfig, z: C64) -> Result<Self> {
        let lo = -cfg.lambda0;
        if !(z.re >= lo - STRIP_SLACK && z.re <= STRIP_SLACK) || !z.im.is_finite() {
            return Err(LabError::Domain(format!("z = {z} is outside the strip {lo} ≤ Re z ≤ 0")));
        }
        Ok(Self { z, psi: psi(z) })
    }
}

pub fn psi(z: C64) -> C64 {
    rgamma_complex(z + 1.0)
}

fn is_minus_one(z: C64) -> bool {
    z == C64::new(-1.0, 0.0)
}

/// `G_z` at `(ν, idx)`. The value at `ν = 2ℓ + 2m/a` is the limit of
/// `r_+^z/Γ(z+1)` as a distribution: 1 at `z = −1`, 0 elsewhere.
pub fn g_multiplier(a: u32, z: C64, nu: i64, idx: SpectralIndex) -> C64 {
    let off = surface_offset(a, nu, idx);
    if off < 0 {
        return C64::new(0.0, 0.0);
    }
    if off == 0 {
        return if is_minus_one(z) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    // a | off since ν, 2ℓ and 2m/a are integers
    let r = (off / a as i64) as f64;
    psi(z) * (z * r.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum SeriesMethod {
    /// closed form through `Li_{−z}(e^{−it})`
    Polylog,
    /// `Σ r^z q^r e^{−irt}` along `ABEL_Q`, extrapolated to `q = 1`
    Abel { terms: usize },
    /// raw partial sum; meaningful for `Re z < −1`
    Direct { terms: usize },
}

/// `Σ_{r≥1} r^z e^{−irt}` for `t ∈ [−π, π] \ {0}`.
pub fn singular_series(z: C64, t: f64, method: SeriesMethod) -> Result<C64> {
    if t == 0.0 || !(t.abs() <= PI) {
        return Err(LabError::Domain(format!("singular series needs t ∈ [−π, π] \\ {{0}}, got {t}")));
    }
    match method {
        SeriesMethod::Polylog => Ok(polylog_unit_circle(-z, t)),
        SeriesMethod::Direct { terms } => Ok(damped_sum(z, C64::new(0.0, t), terms)),
        SeriesMethod::Abel { terms } => {
            let eps: Vec<f64> = ABEL_Q.iter().map(|q| -q.ln()).collect();
            let need = (40.0 / eps[2]).ceil() as usize;
            let v: Vec<C64> = eps.iter().map(|e| damped_sum(z, C64::new(*e, t), terms.max(need))).collect();
            // quadratic Lagrange extrapolation to ε = 0
            let mut out = C64::new(0.0, 0.0);
            for i in 0..3 {
                let mut l = 1.0;
                for j in 0..3 {
                    if i != j {
                        l *= eps[j] / (eps[j] - eps[i]);
                    }
                }
                out += v[i] * l;
            }
            Ok(out)
        }
    }
}

fn damped_sum(z: C64, w: C64, terms: usize) -> C64 {
    (1..=terms).map(|r| (z * (r as f64).ln() - w * r as f64).exp()).sum()
}

/// Leading singular term `Γ(z+1)(it)^{−z−1}` (principal branch).
pub fn singular_series_dominant(z: C64, t: f64) -> Result<C64> {
    let g = gamma_complex(z + 1.0)?;
    Ok(g * ((-z - 1.0) * C64::new(0.0, t).ln()).exp())
}

fn reduce_time(t: f64) -> f64 {
    let r = t - 2.0 * PI * (t / (2.0 * PI)).round();
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// `K_z(t, x, y)`, the kernel of `T_z` against `dτ v_{k,a}(y) dy`:
/// `c_{k,a} e^{iθt} Λ(x, y; it) ψ(z) Σ r_+^z e^{−irt} / 2π`, plus the on-surface
/// term `c_{k,a} e^{iθt} Λ / 2π` at `z = −1`.
pub fn kz_kernel(cfg: &GeometryConfig, z: C64, t: f64, x: &WeightedPoint, y: &WeightedPoint) -> Result<C64> {
    let t = reduce_time(t);
    if t == 0.0 || t == PI {
        return Err(LabError::Domain("K_z is singular for t ∈ πℤ".into()));
    }
    let lam = kernel_closed_form(cfg, x, y, C64::new(0.0, t))?.value;
    let series = if is_minus_one(z) {
        C64::new(1.0, 0.0)
    } else {
        psi(z) * singular_series(z, t, SeriesMethod::Polylog)?
    };
    Ok(cfg.c_ka() * C64::new(0.0, cfg.theta() * t).exp() * lam * series / (2.0 * PI))
}

/// The same kernel from the windowed eigen-series, `ν ≤ 2 l_max + 2`.
pub fn kz_kernel_truncated(
    cfg: &GeometryConfig,
    z: C64,
    t: f64,
    x: &WeightedPoint,
    y: &WeightedPoint,
    l_max: usize,
) -> C64 {
    let nu_max = 2 * l_max as i64 + 2;
    let pts = [*x, *y];
    let b = basis_matrix(cfg, &pts, l_max);
    let mut s = C64::new(0.0, 0.0);
    for (p, idx) in basis_indices(cfg, l_max).into_iter().enumerate() {
        let pp = b[(0, p)] * b[(1, p)];
        for nu in 0..=nu_max {
            let g = g_multiplier(cfg.a, z, nu, idx);
            if g != C64::new(0.0, 0.0) {
                s += g * pp * C64::new(0.0, -t * nu as f64).exp();
            }
        }
    }
    s / (2.0 * PI)
}

/// Least-squares slope of `−ln|K_z(t, 0, y)|` against `ln t` over 24
/// log-spaced `t ∈ [t0, t1]`, with `x` at (numerically) the origin, where
/// `|Λ(x, y; it)| = |sin t|^{−β}`.
pub fn kz_scaling_exponent(cfg: &GeometryConfig, z: C64, y: f64, t0: f64, t1: f64) -> Result<f64> {
    let (x, y) = if cfg.is_rank1() {
        (WeightedPoint::rank1(1e-20)?, WeightedPoint::rank1(y)?)
    } else {
        (WeightedPoint::radial(1e-20)?, WeightedPoint::radial(y.abs())?)
    };
    let mut pts = Vec::with_capacity(24);
    for i in 0..24 {
        let t = t0 * (t1 / t0).powf(i as f64 / 23.0);
        pts.push((t.ln(), kz_kernel(cfg, z, t, &x, &y)?.norm().ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// `T_z` on the grid from the windowed kernel `kz_kernel_truncated`, entry
/// `√(w_i w_j) K(t_i − τ_j, x_i, y_j)`. Independent of the factored assembly.
pub fn assemble_tz_windowed_kernel(cfg: &GeometryConfig, z: C64, grid: &SpaceTimeGrid, l_max: usize) -> Result<DMatrix<C64>> {
    AnalyticFamilyPoint::new(cfg, z)?;
    let w = grid.weights();
    let nx = grid.space.len();
    let pts = &grid.space.points;
    Ok(DMatrix::from_fn(grid.len(), grid.len(), |i, j| {
        let d = grid.time.nodes[i / nx] - grid.time.nodes[j / nx];
        kz_kernel_truncated(cfg, z, d, &pts[i % nx], &pts[j % nx], l_max) * (w[i] * w[j]).sqrt()
    }))
}


#[derive(Debug, Clone)]
pub enum OperatorRepr {
    Dense(DMatrix<C64>),
    /// `left · right*`
    Factored { left: DMatrix<C64>, right: DMatrix<C64> },
}

/// A discretized operator in the weight-symmetrized normalization
/// `D_r^{1/2} K D_c^{1/2}`, so its singular values approximate those of the
/// operator on L².
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub repr: OperatorRepr,
    /// square roots of the row quadrature weights
    pub row_weights: Vec<f64>,
    pub col_weights: Vec<f64>,
    pub row_grid: String,
    pub col_grid: String,
}

impl OperatorMatrix {
    pub fn dense(m: DMatrix<C64>, row_weights: Vec<f64>, col_weights: Vec<f64>, row_grid: String, col_grid: String) -> Result<Self> {
        let op = Self { repr: OperatorRepr::Dense(m), row_weights, col_weights, row_grid, col_grid };
        op.validate()?;
        Ok(op)
    }

    pub fn factored(
        left: DMatrix<C64>,
        right: DMatrix<C64>,
        row_weights: Vec<f64>,
        col_weights: Vec<f64>,
        row_grid: String,
        col_grid: String,
    ) -> Result<Self> {
        if left.ncols() != right.ncols() {
            return Err(LabError::LengthMismatch { expected: left.ncols(), got: right.ncols() });
        }
        let op = Self { repr: OperatorRepr::Factored { left, right }, row_weights, col_weights, row_grid, col_grid };
        op.validate()?;
        Ok(op)
    }

    fn validate(&self) -> Result<()> {
        if self.row_weights.len() != self.nrows() {
            return Err(LabError::LengthMismatch { expected: self.nrows(), got: self.row_weights.len() });
        }
        if self.col_weights.len() != self.ncols() {
            return Err(LabError::LengthMismatch { expected: self.ncols(), got: self.col_weights.len() });
        }
        if self.row_weights.iter().chain(&self.col_weights).any(|w| !(*w > 0.0)) {
            return Err(LabError::Domain("operator weights must be positive".into()));
        }
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        match &self.repr {
            OperatorRepr::Dense(m) => m.nrows(),
            OperatorRepr::Factored { left, .. } => left.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match &self.repr {
            OperatorRepr::Dense(m) => m.ncols(),
            OperatorRepr::Factored { right, .. } => right.nrows(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.repr {
            OperatorRepr::Dense(m) => m.clone(),
            OperatorRepr::Factored { left, right } => left * right.adjoint(),
        }
    }

    /// Action on raw column-grid samples, returning raw row-grid samples.
    pub fn apply_samples(&self, f: &[C64]) -> Result<Vec<C64>> {
        if f.len() != self.ncols() {
            return Err(LabError::LengthMismatch { expected: self.ncols(), got: f.len() });
        }
        let v = nalgebra::DVector::from_iterator(f.len(), f.iter().zip(&self.col_weights).map(|(x, w)| x * *w));
        let out = match &self.repr {
            OperatorRepr::Dense(m) => m * v,
            OperatorRepr::Factored { left, right } => left * (right.adjoint() * v),
        };
        Ok(out.iter().zip(&self.row_weights).map(|(x, w)| x / *w).collect())
    }

    /// Largest entry of the unsymmetrized kernel matrix `K`.
    pub fn max_abs_kernel_entry(&self) -> f64 {
        let m = self.to_dense();
        let mut best = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                best = best.max(m[(i, j)].norm() / (self.row_weights[i] * self.col_weights[j]));
            }
        }
        best
    }

    /// Writes `<stem>.bin` (row-major, little-endian f64 pairs re, im) and a
    /// `<stem>.txt` sidecar with the dimensions and grid ids.
    pub fn dump(&self, dir: &Path, stem: &str) -> Result<()> {
        let m = self.to_dense();
        let io = |e: std::io::Error| LabError::Numerical(format!("matrix dump failed: {e}"));
        let mut buf = Vec::with_capacity(m.len() * 16);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                buf.extend_from_slice(&m[(i, j)].re.to_le_bytes());
                buf.extend_from_slice(&m[(i, j)].im.to_le_bytes());
            }
        }
        std::fs::write(dir.join(format!("{stem}.bin")), buf).map_err(io)?;
        let mut side = std::fs::File::create(dir.join(format!("{stem}.txt"))).map_err(io)?;
        writeln!(
            side,
            "rows = {}\ncols = {}\nlayout = row-major complex128 little-endian (re, im)\nnormalization = weight-symmetrized\nrow_grid = {}\ncol_grid = {}",
            m.nrows(),
            m.ncols(),
            self.row_grid,
            self.col_grid
        )
        .map_err(io)?;
        Ok(())
    }
}

fn sqrt_weights(grid: &SpaceTimeGrid) -> Vec<f64> {
    grid.weights().into_iter().map(f64::sqrt).collect()
}

/// `T_z` on the grid through its multiplier: the factored sum of
/// `G_z(ν, idx) u u* / 2π` over the window `ν ≤ 2 l_max + 2`, with
/// `u = √w Φ_idx(x) e^{−itν}`.
pub fn assemble_tz(cfg: &GeometryConfig, z: C64, grid: &SpaceTimeGrid, l_max: usize) -> Result<OperatorMatrix> {
    AnalyticFamilyPoint::new(cfg, z)?;
    let nu_max = 2 * l_max as i64 + 2;
    let b = basis_matrix(cfg, &grid.space.points, l_max);
    let mut cols: Vec<(usize, i64, C64)> = Vec::new();
    for (p, idx) in basis_indices(cfg, l_max).into_iter().enumerate() {
        for nu in 0..=nu_max {
            let g = g_multiplier(cfg.a, z, nu, idx);
            if g != C64::new(0.0, 0.0) {
                cols.push((p, nu, g));
            }
        }
    }
    let sw = sqrt_weights(grid);
    let nx = grid.space.len();
    let right = DMatrix::from_fn(grid.len(), cols.len(), |row, c| {
        let (p, nu, _) = cols[c];
        let (it, ix) = (row / nx, row % nx);
        C64::new(0.0, -grid.time.nodes[it] * nu as f64).exp() * (sw[row] * b[(ix, p)])
    });
    let mut left = right.clone();
    for (c, (_, _, g)) in cols.iter().enumerate() {
        let mut col = left.column_mut(c);
        col *= *g / (2.0 * PI);
    }
    let id = grid.grid_id();
    OperatorMatrix::factored(left, right, sw.clone(), sw, id.clone(), id)
}

/// `T_z` on the grid through its kernel, entry `√(w_i w_j) K_z(t−τ, x, y)`.
/// Equal time nodes use the offset of half the smallest node spacing.
/// Only meaningful where `K_z` is bounded, i.e. on `Re z = −λ₀`.
pub fn assemble_tz_kernel(cfg: &GeometryConfig, z: C64, grid: &SpaceTimeGrid) -> Result<OperatorMatrix> {
    AnalyticFamilyPoint::new(cfg, z)?;
    let times = &grid.time.nodes;
    let offset = times.windows(2).map(|w| (w[1] - w[0]).abs()).fold(f64::INFINITY, f64::min) / 2.0;
    let nt = times.len();
    // distinct time differences, each evaluated once per (x, y)
    let mut diffs: Vec<Vec<f64>> = vec![vec![0.0; nt]; nt];
    for i in 0..nt {
        for j in 0..nt {
            let d = if i == j { offset } else { times[i] - times[j] };
            if (reduce_time(d).abs() - PI).abs() < 1e-14 {
                return Err(LabError::Domain("time grid contains a pair with t − τ ∈ πℤ \\ {0}".into()));
            }
            diffs[i][j] = d;
        }
    }
    let pts = &grid.space.points;
    let nx = pts.len();
    let sw = sqrt_weights(grid);
    let entries: Vec<Result<Vec<C64>>> = (0..grid.len())
        .into_par_iter()
        .map(|row| {
            let (it, ix) = (row / nx, row % nx);
            let mut out = Vec::with_capacity(grid.len());
            for col in 0..grid.len() {
                let (jt, jx) = (col / nx, col % nx);
                let k = kz_kernel(cfg, z, diffs[it][jt], &pts[ix], &pts[jx])?;
                out.push(k * (sw[row] * sw[col]));
            }
            Ok(out)
        })
        .collect();
    let mut m = DMatrix::<C64>::zeros(grid.len(), grid.len());
    for (i, row) in entries.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    let id = grid.grid_id();
    OperatorMatrix::dense(m, sw.clone(), sw, id.clone(), id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_config, Sector, SpatialGrid};
    use crate::special_fn::zeta;
    use crate::transform::{extension_matrix, TimeGrid};

    #[test]
    fn multiplier_examples() {
        let idx = SpectralIndex::new(1, 1);
        // a = 2: ν_idx = 3
        assert_eq!(g_multiplier(2, C64::new(-1.0, 0.0), 3, idx), C64::new(1.0, 0.0));
        assert_eq!(g_multiplier(2, C64::new(-0.4, 0.3), 2, idx), C64::new(0.0, 0.0));
        assert!((g_multiplier(2, C64::new(0.0, 0.0), 6, idx) - 1.0).norm() < 1e-15);
        // z = −1 kills every off-surface entry
        assert_eq!(g_multiplier(1, C64::new(-1.0, 0.0), 9, idx), C64::new(0.0, 0.0));
    }

    #[test]
    fn singular_series_values() {
        let v = singular_series(C64::new(-2.0, 0.0), PI, SeriesMethod::Polylog).unwrap();
        assert!((v + PI * PI / 12.0).norm() < 1e-12);
        assert!(singular_series(C64::new(-0.5, 0.0), 0.0, SeriesMethod::Polylog).is_err());
        // (it)^{0.5} on the principal branch
        let d = singular_series_dominant(C64::new(-1.5, 0.0), 0.04).unwrap();
        let g = gamma_complex(C64::new(-0.5, 0.0)).unwrap();
        let e = g * 0.2 * C64::new(0.0, PI / 4.0).exp();
        assert!((d - e).norm() < 1e-14);
    }

    #[test]
    fn abel_and_direct_agree_with_polylog() {
        for (z, t) in [(C64::new(-0.5, 0.0), 1.0), (C64::new(-0.2, 0.7), -2.0), (C64::new(0.0, 0.0), 0.5)] {
            let exact = singular_series(z, t, SeriesMethod::Polylog).unwrap();
            let abel = singular_series(z, t, SeriesMethod::Abel { terms: 0 }).unwrap();
            assert!((abel - exact).norm() < 1e-5 * exact.norm().max(1.0), "{z} {t}: {abel} vs {exact}");
        }
        let z = C64::new(-3.0, 0.5);
        let exact = singular_series(z, 0.8, SeriesMethod::Polylog).unwrap();
        let direct = singular_series(z, 0.8, SeriesMethod::Direct { terms: 20_000 }).unwrap();
        assert!((direct - exact).norm() < 1e-8);
    }

    #[test]
    fn remainder_after_leading_term_is_bounded() {
        // Σ r^z e^{−irt} − Γ(z+1)(it)^{−z−1} = ζ(−z) + O(t)
        let z = C64::new(-1.5, 0.0);
        let z0 = zeta(-z);
        for t in [1e-3, 1e-2, 1e-1] {
            let s = singular_series(z, t, SeriesMethod::Polylog).unwrap();
            let b = s - singular_series_dominant(z, t).unwrap();
            assert!((b - z0).norm() < 2.0 * t, "t = {t}: {b}");
        }
    }

    #[test]
    fn t_minus_one_is_extension_gram() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.5 }).unwrap();
        let l_max = 4;
        let grid = SpaceTimeGrid::new(TimeGrid::half_period(1).unwrap(), SpatialGrid::exact(&cfg, 8).unwrap());
        let t = assemble_tz(&cfg, C64::new(-1.0, 0.0), &grid, l_max).unwrap().to_dense();
        let e = extension_matrix(&cfg, l_max, &grid);
        let ee = (&e * e.adjoint()).map(|v| v / (2.0 * PI));
        assert!((&t - &ee).norm() < 1e-12 * ee.norm());
        assert!((&t - t.adjoint()).norm() < 1e-13 * t.norm());
    }

    #[test]
    fn pairing_is_analytic_in_z() {
        let cfg = make_config(1, 1, Sector::Rank1 { k: 0.3 }).unwrap();
        let l_max = 3;
        let grid = SpaceTimeGrid::new(TimeGrid::torus(24).unwrap(), SpatialGrid::exact(&cfg, 6).unwrap());
        let f: Vec<C64> = (0..grid.len()).map(|i| C64::new((i as f64 * 0.37).sin(), 0.0)).collect();
        let g: Vec<C64> = (0..grid.len()).map(|i| C64::new((i as f64 * 0.11).cos(), 0.2)).collect();
        let pair = |z: C64| -> C64 {
            let tf = assemble_tz(&cfg, z, &grid, l_max).unwrap().apply_samples(&f).unwrap();
            tf.iter().zip(&g).zip(grid.weights()).map(|((a, b), w)| a * b.conj() * w).sum()
        };
        let z0 = C64::new(-0.6, 0.4);
        let h = 1e-4;
        let dx = (pair(z0 + h) - pair(z0 - h)) / (2.0 * h);
        let dy = (pair(z0 + C64::new(0.0, h)) - pair(z0 - C64::new(0.0, h))) / (2.0 * h);
        assert!((dx + C64::new(0.0, 1.0) * dy).norm() < 1e-6 * dx.norm().max(1.0));
    }

    #[test]
    fn kernel_assembly_and_dump() {
        let cfg = make_config(2, 1, Sector::Rank1 { k: 0.0 }).unwrap();
        let z = C64::new(-cfg.lambda0, 0.7);
        let mut time = TimeGrid::half_period(1).unwrap();
        time.nodes.truncate(20);
        time.weights.truncate(20);
        let grid = SpaceTimeGrid::new(time, SpatialGrid::exact(&cfg, 3).unwrap());
        let op = assemble_tz_kernel(&cfg, z, &grid).unwrap();
        let mut sup = 0.0f64;
        let pts = &grid.space.points;
        let offset = grid.time.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) / 2.0;
        for (i, t) in grid.time.nodes.iter().enumerate() {
            for (j, s) in grid.time.nodes.iter().enumerate() {
                let d = if i == j { offset } else { t - s };
                for x in pts {
                    for y in pts {
                        sup = sup.max(kz_kernel(&cfg, z, d, x, y).unwrap().norm());
                    }
                }
            }
        }
        assert!((op.max_abs_kernel_entry() / sup - 1.0).abs() < 1e-12);
        let dir = std::env::temp_dir().join(format!("klab-dump-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        op.dump(&dir, "tz").unwrap();
        let bytes = std::fs::read(dir.join("tz.bin")).unwrap();
        assert_eq!(bytes.len(), op.nrows() * op.ncols() * 16);
        let side = std::fs::read_to_string(dir.join("tz.txt")).unwrap();
        assert!(side.contains(&format!("rows = {}", op.nrows())));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
