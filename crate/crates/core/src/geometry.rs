//! Deformation and multiplicity data, the weight `v_{k,a}`, and spatial grids
//! realizing `L²_{k,a}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};
use crate::special_fn::{build_quadrature, ln_gamma, QuadratureKind};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sector", rename_all = "kebab-case")]
pub enum Sector {
    /// ℤ₂ acting on ℝ, multiplicity `k`, parity sectors m ∈ {0, 1}.
    Rank1 { k: f64 },
    /// m = 0 sector in dimension n, multiplicity data entering only via γ.
    Radial { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub a: u32,
    pub n: usize,
    pub sector: Sector,
    pub gamma: f64,
    /// `1 + (2γ+n+a−2)/a`
    pub lambda0: f64,
    pub d_k: f64,
}

/// Validates `(a, n, sector)` and fills in the derived constants.
pub fn make_config(a: u32, n: usize, sector: Sector) -> Result<GeometryConfig> {
    if a != 1 && a != 2 {
        return Err(LabError::Config(format!("deformation a = {a} is unsupported; a must be 1 or 2")));
    }
    if n == 0 {
        return Err(LabError::Config("dimension n must be at least 1".into()));
    }
    let gamma = match sector {
        Sector::Rank1 { k } => {
            if n != 1 {
                return Err(LabError::Config(format!("rank-one sector requires n = 1, got n = {n}")));
            }
            if !(k >= 0.0) || !k.is_finite() {
                return Err(LabError::Config(format!("multiplicity k = {k} must be finite and ≥ 0")));
            }
            k
        }
        Sector::Radial { gamma } => {
            if !(gamma >= 0.0) || !gamma.is_finite() {
                return Err(LabError::Config(format!("γ = {gamma} must be finite and ≥ 0")));
            }
            gamma
        }
    };
    let af = a as f64;
    let nf = n as f64;
    let hyp = af + 2.0 * gamma + nf - 2.0;
    if !(hyp > 0.0) {
        return Err(LabError::Config(format!(
            "standing hypothesis a + 2γ + n − 2 > 0 fails: {a} + 2·{gamma} + {n} − 2 = {hyp}"
        )));
    }
    let d_k = match sector {
        Sector::Rank1 { .. } => 0.5,
        Sector::Radial { gamma } => {
            // total angular mass of an effective (2γ+n)-dimensional sphere
            let big_n = 2.0 * gamma + nf;
            (ln_gamma(big_n / 2.0) - (big_n / 2.0) * PI.ln()).exp() / 2.0
        }
    };
    let cfg = GeometryConfig { a, n, sector, gamma, lambda0: 1.0 + hyp / af, d_k };
    for &m in cfg.sectors() {
        if !(cfg.lambda_m(m) > -1.0) {
            return Err(LabError::Config(format!(
                "λ_(k,a,{m}) = {} must exceed −1",
                cfg.lambda_m(m)
            )));
        }
    }
    Ok(cfg)
}

impl GeometryConfig {
    pub fn a_f64(&self) -> f64 {
        self.a as f64
    }

    /// Parity/harmonic sectors carried by the basis.
    pub fn sectors(&self) -> &'static [usize] {
        match self.sector {
            Sector::Rank1 { .. } => &[0, 1],
            Sector::Radial { .. } => &[0],
        }
    }

    pub fn is_rank1(&self) -> bool {
        matches!(self.sector, Sector::Rank1 { .. })
    }

    /// `λ_{k,a,m} = (2m + 2γ + n − 2)/a`
    pub fn lambda_m(&self, m: usize) -> f64 {
        (2.0 * m as f64 + 2.0 * self.gamma + self.n as f64 - 2.0) / self.a_f64()
    }

    /// `(2γ + n + a − 2)/a`; exponent of the dispersive decay.
    pub fn beta(&self) -> f64 {
        self.lambda0 - 1.0
    }

    /// `1 + (2γ + n − 2)/a`; lowest eigenvalue and the extension phase rate.
    pub fn theta(&self) -> f64 {
        1.0 + self.lambda_m(0)
    }

    /// Exponent of `r` in the radial measure `r^{2γ+n+a−3} dr`.
    pub fn radial_power(&self) -> f64 {
        2.0 * self.gamma + self.n as f64 + self.a_f64() - 3.0
    }

    /// Kernel normalization `a^{−(2γ+n−2)/a} Γ(β)^{−1} d_k`.
    pub fn c_ka(&self) -> f64 {
        let af = self.a_f64();
        (-(2.0 * self.gamma + self.n as f64 - 2.0) / af * af.ln() - ln_gamma(self.beta())).exp() * self.d_k
    }

    /// Angular mass ∫ h_k dσ.
    pub fn angular_mass(&self) -> f64 {
        1.0 / self.d_k
    }

    /// Short label used in reports and grid ids.
    pub fn label(&self) -> String {
        match self.sector {
            Sector::Rank1 { k } => format!("a{}-n{}-rank1-k{}", self.a, self.n, k),
            Sector::Radial { gamma } => format!("a{}-n{}-radial-g{}", self.a, self.n, gamma),
        }
    }
}

/// A point of ℝⁿ in polar form. For rank one `omega = sgn x`; for the radial
/// sector `omega` is fixed to 1 and the angle is integrated out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub r: f64,
    pub omega: f64,
}

impl WeightedPoint {
    pub fn rank1(x: f64) -> Result<Self> {
        if x == 0.0 || !x.is_finite() {
            return Err(LabError::Domain(format!("rank-one point must be finite and non-zero, got {x}")));
        }
        Ok(Self { r: x.abs(), omega: x.signum() })
    }

    pub fn radial(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(LabError::Domain(format!("radius must be positive, got {r}")));
        }
        Ok(Self { r, omega: 1.0 })
    }

    pub fn x(&self) -> f64 {
        self.omega * self.r
    }
}

/// `v_{k,a}` at a point: `r^{a−2+2γ}` (the angular factor of `h_k` is folded
/// into `d_k`; for rank one `|x|^{2k}` is purely radial).
pub fn weight_density(cfg: &GeometryConfig, point: &WeightedPoint) -> Result<f64> {
    let e = cfg.a_f64() - 2.0 + 2.0 * cfg.gamma;
    if point.r == 0.0 {
        return match e {
            e if e < 0.0 => Err(LabError::Domain(format!("weight r^{e} is singular at r = 0"))),
            0.0 => Ok(1.0),
            _ => Ok(0.0),
        };
    }
    if !(point.r > 0.0) {
        return Err(LabError::Domain(format!("radius must be non-negative, got {}", point.r)));
    }
    Ok(point.r.powf(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "grid", rename_all = "kebab-case")]
pub enum GridKind {
    /// Generalized Gauss–Laguerre in `u = (2/a)r^a`; exact for Gram entries.
    Exact { order: usize },
    /// Composite rule in `u` on `[0, u_max]`, for `L^p` norms of non-polynomial integrands.
    Composite { panels: usize, order: usize, u_max: f64 },
}

/// Spatial nodes with weights such that `Σ w f ḡ ≈ ∫ f ḡ v_{k,a} dx`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub cfg: GeometryConfig,
    pub kind: GridKind,
    pub points: Vec<WeightedPoint>,
    /// `(2/a) r^a` at each point
    pub u: Vec<f64>,
    pub weights: Vec<f64>,
}

fn r_of_u(a: f64, u: f64) -> f64 {
    (a * u / 2.0).powf(1.0 / a)
}

impl SpatialGrid {
    /// Gauss–Laguerre grid of the given order in `u`, with the `e^{−u}` factor
    /// moved into the weights so samples are plain function values.
    pub fn exact(cfg: &GeometryConfig, order: usize) -> Result<Self> {
        let mu = cfg.lambda_m(0);
        let q = build_quadrature(QuadratureKind::GaussGeneralizedLaguerre { mu }, order)?;
        let af = cfg.a_f64();
        // r^{2γ+n+a−3} dr = (1/a)(a/2)^β u^{β−1} du
        let ln_jac = (af / 2.0).ln() * cfg.beta() - af.ln();
        let radial: Vec<(f64, f64)> = q
            .nodes
            .iter()
            .zip(&q.ln_weights)
            .map(|(&u, &lw)| (u, (lw + u + ln_jac).exp()))
            .collect();
        Ok(Self::assemble(cfg, GridKind::Exact { order }, &radial))
    }

    /// Composite grid on `[0, u_max]` in `u`: Gauss–Jacobi absorbing `u^{β−1}`
    /// on the first panel, Gauss–Legendre on quadratically graded panels after.
    pub fn composite(cfg: &GeometryConfig, panels: usize, order: usize, u_max: f64) -> Result<Self> {
        if panels == 0 || order == 0 || !(u_max > 0.0) {
            return Err(LabError::Domain(format!(
                "composite grid needs panels, order ≥ 1 and u_max > 0 (got {panels}, {order}, {u_max})"
            )));
        }
        let af = cfg.a_f64();
        let b = cfg.beta();
        let jac = (af / 2.0).powf(b) / af;
        let edge = |k: usize| u_max * (k as f64 / panels as f64).powi(2);
        let mut radial = Vec::with_capacity(panels * order);

        // first panel: ∫_0^h f(u) u^{β−1} du, u = h(1+t)/2
        let h = edge(1);
        let gj = build_quadrature(QuadratureKind::GaussJacobi { alpha: 0.0, beta: b - 1.0 }, order)?;
        let scale = (h / 2.0).powf(b);
        for (t, w) in gj.nodes.iter().zip(&gj.weights) {
            radial.push((h * (1.0 + t) / 2.0, jac * scale * w));
        }
        for p in 1..panels {
            let q = build_quadrature(QuadratureKind::GaussLegendre { lo: edge(p), hi: edge(p + 1) }, order)?;
            for (u, w) in q.nodes.iter().zip(&q.weights) {
                radial.push((*u, jac * w * u.powf(b - 1.0)));
            }
        }
        Ok(Self::assemble(cfg, GridKind::Composite { panels, order, u_max }, &radial))
    }

    fn assemble(cfg: &GeometryConfig, kind: GridKind, radial: &[(f64, f64)]) -> Self {
        let af = cfg.a_f64();
        let mut points = Vec::new();
        let mut u = Vec::new();
        let mut weights = Vec::new();
        match cfg.sector {
            Sector::Rank1 { .. } => {
                // counting measure on {±1}; negative half-line first, increasing x
                for &(uu, w) in radial.iter().rev() {
                    points.push(WeightedPoint { r: r_of_u(af, uu), omega: -1.0 });
                    u.push(uu);
                    weights.push(w);
                }
                for &(uu, w) in radial {
                    points.push(WeightedPoint { r: r_of_u(af, uu), omega: 1.0 });
                    u.push(uu);
                    weights.push(w);
                }
            }
            Sector::Radial { .. } => {
                let mass = cfg.angular_mass();
                for &(uu, w) in radial {
                    points.push(WeightedPoint { r: r_of_u(af, uu), omega: 1.0 });
                    u.push(uu);
                    weights.push(w * mass);
                }
            }
        }
        Self { cfg: *cfg, kind, points, u, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Content hash of nodes and weights.
    pub fn grid_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.cfg.label().as_bytes());
        for (p, w) in self.points.iter().zip(&self.weights) {
            h.update(p.r.to_le_bytes());
            h.update(p.omega.to_le_bytes());
            h.update(w.to_le_bytes());
        }
        let d = h.finalize();
        d.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// `(Σ w |f|^p)^{1/p}`, or the max for `p = ∞`.
    pub fn lp_norm(&self, f: &[C64], p: f64) -> Result<f64> {
        check_len(self.len(), f.len())?;
        if p.is_infinite() {
            return Ok(f.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        Ok(lp_weighted(&self.weights, f.iter().map(|v| v.norm()), p))
    }
}

pub(crate) fn lp_weighted(weights: &[f64], abs: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return abs.fold(0.0, f64::max);
    }
    let s: f64 = weights.iter().zip(abs).map(|(w, v)| w * v.powf(p)).sum();
    s.powf(1.0 / p)
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(LabError::LengthMismatch { expected, got });
    }
    Ok(())
}

/// `∫ f ḡ v_{k,a} dx` on the grid.
pub fn lebesgue_pairing(grid: &SpatialGrid, f: &[C64], g: &[C64]) -> Result<C64> {
    check_len(grid.len(), f.len())?;
    check_len(grid.len(), g.len())?;
    Ok(grid
        .weights
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| *w * a * b.conj())
        .sum())
}
