//! Fourier-Δ_{k,a} transform on 𝕋×ℝⁿ, the discrete surface `ν = 2ℓ + 2m/a`,
//! and the restriction/extension pair.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::eigenbasis::{basis_indices, basis_matrix, SpectralField, SpectralIndex};
use crate::error::{LabError, Result};
use crate::geometry::{lp_weighted, GeometryConfig, SpatialGrid};
use crate::special_fn::{build_quadrature, QuadratureKind};
use crate::C64;

/// Panel edges of the half-period grid, in units of π/2, for t ≥ 0.
const HALF_PERIOD_EDGES: [f64; 7] = [0.0, 0.125, 0.25, 0.5, 0.75, 0.875, 1.0];
pub const HALF_PERIOD_NODES_PER_PANEL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "time_grid", rename_all = "kebab-case")]
pub enum TimeGridKind {
    /// (−π/2, π/2), 12 Gauss–Legendre panels graded toward 0 and the ends
    HalfPeriod { nodes_per_panel: usize },
    /// (−π, π), equispaced midpoint rule
    Torus { n: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeGrid {
    pub kind: TimeGridKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl TimeGrid {
    /// Composite grid on (−π/2, π/2); `refine = 1` is the default 16 nodes
    /// per panel, `refine = 2` doubles them.
    pub fn half_period(refine: usize) -> Result<Self> {
        let per = HALF_PERIOD_NODES_PER_PANEL * refine.max(1);
        let mut edges: Vec<f64> = HALF_PERIOD_EDGES.iter().rev().map(|e| -e * PI / 2.0).collect();
        edges.extend(HALF_PERIOD_EDGES.iter().skip(1).map(|e| e * PI / 2.0));
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in edges.windows(2) {
            let q = build_quadrature(QuadratureKind::GaussLegendre { lo: w[0], hi: w[1] }, per)?;
            nodes.extend(q.nodes);
            weights.extend(q.weights);
        }
        Ok(Self { kind: TimeGridKind::HalfPeriod { nodes_per_panel: per }, nodes, weights })
    }

    /// `n` midpoints on (−π, π); exact for trigonometric polynomials of degree < n.
    pub fn torus(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(LabError::Domain("torus grid needs at least one node".into()));
        }
        let h = 2.0 * PI / n as f64;
        let nodes = (0..n).map(|j| -PI + (j as f64 + 0.5) * h).collect();
        Ok(Self { kind: TimeGridKind::Torus { n }, nodes, weights: vec![h; n] })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes with `t > 0` and their weights (a rule on (0, π/2) for the half-period grid).
    pub fn positive_part(&self) -> (Vec<f64>, Vec<f64>) {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(t, _)| **t > 0.0)
            .map(|(t, w)| (*t, *w))
            .unzip()
    }
}

/// `(ν, ℓ, m, j)` label on ℤ × 𝒜.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceIndex {
    pub nu: i64,
    pub idx: SpectralIndex,
}

/// `a·ν − 2aℓ − 2m`, i.e. `a·(ν − 2ℓ − 2m/a)`; an integer.
pub fn surface_offset(a: u32, nu: i64, idx: SpectralIndex) -> i64 {
    let a = a as i64;
    a * nu - 2 * a * idx.l as i64 - 2 * idx.m as i64
}

pub fn on_surface(a: u32, s: &SurfaceIndex) -> bool {
    surface_offset(a, s.nu, s.idx) == 0
}

/// The surface frequency `ν = 2ℓ + 2m/a` of a basis index.
pub fn surface_nu(a: u32, idx: SpectralIndex) -> i64 {
    2 * idx.l as i64 + (2 * idx.m as i64) / a as i64
}

/// Every on-surface tuple with `ν ≤ nu_max`, sorted by (ν, m).
pub fn surface_enumerate(cfg: &GeometryConfig, nu_max: i64) -> Vec<SurfaceIndex> {
    let mut out = Vec::new();
    for &m in cfg.sectors() {
        let mut l = 0usize;
        loop {
            let idx = SpectralIndex::new(l, m);
            let nu = surface_nu(cfg.a, idx);
            if nu > nu_max {
                break;
            }
            out.push(SurfaceIndex { nu, idx });
            l += 1;
        }
    }
    out.sort_by_key(|s| (s.nu, s.idx.m, s.idx.l));
    out
}

/// Space-time samples, rows indexed by time nodes and columns by spatial nodes.
#[derive(Debug, Clone)]
pub struct TimeSpaceField {
    pub samples: DMatrix<C64>,
}

/// `F̂(ν, ℓ, m, j)` for `ν ∈ [nu_min, nu_max]`, stored ν-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub cfg: GeometryConfig,
    pub nu_min: i64,
    pub nu_max: i64,
    pub l_max: usize,
    pub data: Vec<C64>,
}

impl CoefficientTable {
    fn nb(&self) -> usize {
        self.cfg.sectors().len() * (self.l_max + 1)
    }

    pub fn get(&self, nu: i64, pos: usize) -> C64 {
        if nu < self.nu_min || nu > self.nu_max {
            return C64::new(0.0, 0.0);
        }
        self.data[(nu - self.nu_min) as usize * self.nb() + pos]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rows `(ν, ℓ, m, j, re, im)`, in storage order.
    pub fn rows(&self) -> Vec<(i64, usize, usize, usize, f64, f64)> {
        let idx = basis_indices(&self.cfg, self.l_max);
        let mut out = Vec::with_capacity(self.data.len());
        for nu in self.nu_min..=self.nu_max {
            for (pos, i) in idx.iter().enumerate() {
                let c = self.get(nu, pos);
                out.push((nu, i.l, i.m, i.j, c.re, c.im));
            }
        }
        out
    }

    /// CSV text with header `nu,l,m,j,re,im`; values in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("nu,l,m,j,re,im\n");
        for (nu, l, m, j, re, im) in self.rows() {
            s.push_str(&format!("{nu},{l},{m},{j},{re:e},{im:e}\n"));
        }
        s
    }
}

fn phase_matrix(times: &[f64], nus: &[f64]) -> DMatrix<C64> {
    DMatrix::from_fn(times.len(), nus.len(), |i, b| C64::new(0.0, -times[i] * nus[b]).exp())
}

fn complex_times_real(c: &DMatrix<C64>, real: &DMatrix<f64>) -> DMatrix<C64> {
    let re = c.map(|v| v.re);
    let im = c.map(|v| v.im);
    let pr = re * real;
    let pi = im * real;
    DMatrix::from_fn(pr.nrows(), pr.ncols(), |i, j| C64::new(pr[(i, j)], pi[(i, j)]))
}

/// `F̂(ν,ℓ,m,j) = (1/2π) ∫∫ F Φ e^{itν} dt v dx` by quadrature on the given grids.
pub fn fourier_coefficients(
    field: &TimeSpaceField,
    tgrid: &TimeGrid,
    sgrid: &SpatialGrid,
    nu_range: (i64, i64),
    l_max: usize,
) -> Result<CoefficientTable> {
    let (nt, nx) = field.samples.shape();
    if nt != tgrid.len() || nx != sgrid.len() {
        return Err(LabError::LengthMismatch { expected: tgrid.len() * sgrid.len(), got: nt * nx });
    }
    let cfg = sgrid.cfg;
    let mut bw = basis_matrix(&cfg, &sgrid.points, l_max);
    for (i, w) in sgrid.weights.iter().enumerate() {
        bw.row_mut(i).scale_mut(*w);
    }
    // spatial projection: (nt × nx)(nx × nb)
    let proj = complex_times_real(&field.samples, &bw);
    let nus: Vec<i64> = (nu_range.0..=nu_range.1).collect();
    let nb = bw.ncols();
    let mut data = vec![C64::new(0.0, 0.0); nus.len() * nb];
    for (k, &nu) in nus.iter().enumerate() {
        for (i, (t, w)) in tgrid.nodes.iter().zip(&tgrid.weights).enumerate() {
            let ph = C64::new(0.0, *t * nu as f64).exp() * (*w / (2.0 * PI));
            for b in 0..nb {
                data[k * nb + b] += ph * proj[(i, b)];
            }
        }
    }
    Ok(CoefficientTable { cfg, nu_min: nu_range.0, nu_max: nu_range.1, l_max, data })
}

/// `F(t,x) = Σ F̂ Φ e^{−itν}` on the grids.
pub fn inverse_fourier(table: &CoefficientTable, tgrid: &TimeGrid, sgrid: &SpatialGrid) -> TimeSpaceField {
    let b = basis_matrix(&table.cfg, &sgrid.points, table.l_max);
    let nb = b.ncols();
    let mut coeff_t = DMatrix::<C64>::zeros(tgrid.len(), nb);
    for nu in table.nu_min..=table.nu_max {
        for (i, t) in tgrid.nodes.iter().enumerate() {
            let ph = C64::new(0.0, -t * nu as f64).exp();
            for p in 0..nb {
                coeff_t[(i, p)] += ph * table.get(nu, p);
            }
        }
    }
    TimeSpaceField { samples: complex_times_real(&coeff_t, &b.transpose()) }
}

/// `R_S`: the on-surface part of a coefficient table, as a vector indexed by
/// the basis (each basis index sits on the surface at exactly one ν).
pub fn restrict(table: &CoefficientTable) -> SpectralField {
    let idx = basis_indices(&table.cfg, table.l_max);
    let coeffs = idx
        .iter()
        .enumerate()
        .map(|(p, i)| table.get(surface_nu(table.cfg.a, *i), p))
        .collect();
    SpectralField { cfg: table.cfg, l_max: table.l_max, coeffs }
}

/// Collects explicitly labelled surface coefficients, rejecting off-surface labels.
pub fn surface_vector(cfg: &GeometryConfig, l_max: usize, entries: &[(SurfaceIndex, C64)]) -> Result<SpectralField> {
    let mut f = SpectralField::zero(cfg, l_max);
    for (s, c) in entries {
        if !on_surface(cfg.a, s) {
            return Err(LabError::Domain(format!(
                "(ν={}, ℓ={}, m={}) is off the surface ν = 2ℓ + 2m/a",
                s.nu, s.idx.l, s.idx.m
            )));
        }
        let p = f.position(s.idx)?;
        f.coeffs[p] += c;
    }
    Ok(f)
}

/// Surface frequencies of the basis in `basis_indices` order.
pub fn basis_nus(cfg: &GeometryConfig, l_max: usize) -> Vec<f64> {
    basis_indices(cfg, l_max).into_iter().map(|i| surface_nu(cfg.a, i) as f64).collect()
}

/// `E_S c (t, x) = Σ_S c Φ(x) e^{−itν}` sampled on `times × points`.
pub fn extend(c: &SpectralField, times: &[f64], sgrid: &SpatialGrid) -> TimeSpaceField {
    let b = basis_matrix(&c.cfg, &sgrid.points, c.l_max);
    extend_with_basis(c, times, &b)
}

/// As [`extend`] with a precomputed basis matrix (points × basis).
pub fn extend_with_basis(c: &SpectralField, times: &[f64], basis: &DMatrix<f64>) -> TimeSpaceField {
    let nus = basis_nus(&c.cfg, c.l_max);
    let mut ph = phase_matrix(times, &nus);
    for (j, cj) in c.coeffs.iter().enumerate() {
        let mut col = ph.column_mut(j);
        col *= *cj;
    }
    TimeSpaceField { samples: complex_times_real(&ph, &basis.transpose()) }
}

/// `(e^{−itΔ} f)(x)` sampled on `times × points`.
pub fn propagate_samples(f: &SpectralField, times: &[f64], basis: &DMatrix<f64>) -> TimeSpaceField {
    let theta = f.cfg.theta();
    let mut out = extend_with_basis(f, times, basis);
    for (i, t) in times.iter().enumerate() {
        let mut row = out.samples.row_mut(i);
        row *= C64::new(0.0, -theta * t).exp();
    }
    out
}

/// `‖F‖_{L^q(T, L^p_{k,a})}` with time and space weights; `p` or `q` may be ∞.
pub fn mixed_norm_abs(abs: &DMatrix<f64>, tw: &[f64], sw: &[f64], p: f64, q: f64) -> f64 {
    let per_t: Vec<f64> = (0..abs.nrows())
        .into_par_iter()
        .map(|i| lp_weighted(sw, abs.row(i).iter().copied(), p))
        .collect();
    lp_weighted(tw, per_t.into_iter(), q)
}

pub fn mixed_norm(field: &TimeSpaceField, tgrid_weights: &[f64], sgrid: &SpatialGrid, p: f64, q: f64) -> f64 {
    let abs = field.samples.map(|v| v.norm());
    mixed_norm_abs(&abs, tgrid_weights, &sgrid.weights, p, q)
}

/// Space-time L² inner product `∫∫ F Ḡ dt v dx`.
pub fn space_time_inner(f: &TimeSpaceField, g: &TimeSpaceField, tw: &[f64], sgrid: &SpatialGrid) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for (i, w) in tw.iter().enumerate() {
        for (j, v) in sgrid.weights.iter().enumerate() {
            s += *w * *v * f.samples[(i, j)] * g.samples[(i, j)].conj();
        }
    }
    s
}

/// Product grid on time × space, flattened time-major (`i_t · n_x + i_x`).
#[derive(Debug, Clone)]
pub struct SpaceTimeGrid {
    pub time: TimeGrid,
    pub space: SpatialGrid,
}

impl SpaceTimeGrid {
    pub fn new(time: TimeGrid, space: SpatialGrid) -> Self {
        Self { time, space }
    }

    pub fn len(&self) -> usize {
        self.time.len() * self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.len());
        for wt in &self.time.weights {
            w.extend(self.space.weights.iter().map(|wx| wt * wx));
        }
        w
    }

    pub fn grid_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.space.grid_id().as_bytes());
        for (t, w) in self.time.nodes.iter().zip(&self.time.weights) {
            h.update(t.to_le_bytes());
            h.update(w.to_le_bytes());
        }
        let d = h.finalize();
        d.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Flattens a time × space sample matrix.
    pub fn flatten(&self, f: &TimeSpaceField) -> Vec<C64> {
        let (nt, nx) = f.samples.shape();
        let mut out = Vec::with_capacity(nt * nx);
        for i in 0..nt {
            out.extend(f.samples.row(i).iter().copied());
        }
        out
    }
}

/// `E_S` as a matrix from `ℓ²(S_trunc)` to the weight-symmetrized grid space:
/// entry `√(w_t w_x) Φ(x) e^{−itν}`.
pub fn extension_matrix(cfg: &GeometryConfig, l_max: usize, grid: &SpaceTimeGrid) -> DMatrix<C64> {
    let b = basis_matrix(cfg, &grid.space.points, l_max);
    let nus = basis_nus(cfg, l_max);
    let nx = grid.space.len();
    let sw: Vec<f64> = grid.space.weights.iter().map(|w| w.sqrt()).collect();
    DMatrix::from_fn(grid.len(), b.ncols(), |row, col| {
        let (it, ix) = (row / nx, row % nx);
        let t = grid.time.nodes[it];
        let amp = grid.time.weights[it].sqrt() * sw[ix] * b[(ix, col)];
        C64::new(0.0, -t * nus[col]).exp() * amp
    })
}
