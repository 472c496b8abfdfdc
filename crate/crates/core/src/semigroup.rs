//! The semigroup `e^{−zΔ_{k,a}}`, `Re z ≥ 0`: spectral action, kernel by
//! eigen-series and by closed form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigenbasis::{angular, basis_indices, eigenvalue, psi_table, SpectralField};
use crate::error::{LabError, Result};
use crate::geometry::{GeometryConfig, Sector, WeightedPoint};
use crate::special_fn::{gauss_jacobi_cached, ln_bessel_i_normalized_sq, ln_gamma};
use crate::C64;

/// Abel damping ladder used for boundary (`Re z = 0`) spectral kernels.
pub const ABEL_LADDER: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    SpectralSeries,
    AbelSpectralSeries,
    ClosedFormH,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: C64,
    pub method: KernelMethod,
    /// rough size of the omitted tail (series methods only)
    pub tail_estimate: f64,
}

fn check_half_plane(z: C64) -> Result<()> {
    if !(z.re >= 0.0) || !z.im.is_finite() {
        return Err(LabError::Domain(format!("semigroup parameter needs Re z ≥ 0, got {z}")));
    }
    Ok(())
}

/// Coefficient-wise `e^{−z(2ℓ+λ+1)}`.
pub fn apply_semigroup(field: &SpectralField, z: C64) -> Result<SpectralField> {
    check_half_plane(z)?;
    let mut out = field.clone();
    for (c, idx) in out.coeffs.iter_mut().zip(basis_indices(&field.cfg, field.l_max)) {
        *c *= (-z * eigenvalue(&field.cfg, idx)).exp();
    }
    Ok(out)
}

/// `e^{−itΔ_{k,a}} f`.
pub fn propagate(field: &SpectralField, t: f64) -> SpectralField {
    apply_semigroup(field, C64::new(0.0, t)).expect("imaginary parameter is in the closed half-plane")
}

/// `‖e^{−zΔ}‖` restricted to the truncated space.
pub fn truncated_operator_norm(cfg: &GeometryConfig, z: C64, l_max: usize) -> f64 {
    basis_indices(cfg, l_max)
        .into_iter()
        .map(|i| (-z.re * eigenvalue(cfg, i)).exp())
        .fold(0.0, f64::max)
}

/// Hilbert–Schmidt norm of `e^{−zΔ}` over `ℓ ≤ l_max`.
pub fn truncated_hs_norm(cfg: &GeometryConfig, z: C64, l_max: usize) -> f64 {
    basis_indices(cfg, l_max)
        .into_iter()
        .map(|i| (-2.0 * z.re * eigenvalue(cfg, i)).exp())
        .sum::<f64>()
        .sqrt()
}

/// Right-hand side of the boundary kernel bound, `|sin μ|^{−(2γ+n+a−2)/a}`.
pub fn kernel_bound(cfg: &GeometryConfig, mu: f64) -> f64 {
    mu.sin().abs().powf(-cfg.beta())
}

/// Terms `Φ_i(x) Φ_i(y)` and eigenvalues up to `l_max`.
fn product_terms(cfg: &GeometryConfig, x: &WeightedPoint, y: &WeightedPoint, l_max: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(cfg.sectors().len() * (l_max + 1));
    for &m in cfg.sectors() {
        let px = psi_table(cfg, m, x.r, l_max);
        let py = psi_table(cfg, m, y.r, l_max);
        let ang = angular(cfg, m, x.omega) * angular(cfg, m, y.omega);
        let lam = cfg.lambda_m(m);
        for l in 0..=l_max {
            out.push((ang * px[l] * py[l], 2.0 * l as f64 + lam + 1.0));
        }
    }
    out
}

fn series_sum(terms: &[(f64, f64)], z: C64) -> C64 {
    terms.iter().map(|(p, e)| *p * (-z * *e).exp()).sum()
}

/// `Λ(x,y;z) = c_{k,a}^{−1} Σ e^{−z·eig} Φ(x) Φ(y)`.
///
/// For `Re z > 0` the series is truncated at `l_max`. For `Re z = 0` the
/// series is refused unless `abel` is set; it is then evaluated at
/// `ε + i Im z` along `ABEL_LADDER` (with the truncation raised to resolve the
/// damping) and extrapolated to `ε = 0`.
pub fn kernel_spectral(
    cfg: &GeometryConfig,
    x: &WeightedPoint,
    y: &WeightedPoint,
    z: C64,
    l_max: usize,
    abel: bool,
) -> Result<KernelValue> {
    check_half_plane(z)?;
    let c = cfg.c_ka();
    if z.re > 0.0 {
        let terms = product_terms(cfg, x, y, l_max);
        let v = series_sum(&terms, z) / c;
        let last = terms.iter().rev().take(cfg.sectors().len()).map(|(p, e)| p.abs() * (-z.re * e).exp());
        let q = (-2.0 * z.re).exp();
        let tail = last.sum::<f64>() * q / (1.0 - q) / c;
        return Ok(KernelValue { value: v, method: KernelMethod::SpectralSeries, tail_estimate: tail });
    }
    if !abel {
        return Err(LabError::Refused(
            "spectral kernel on Re z = 0 does not converge absolutely; enable Abel regularization".into(),
        ));
    }
    let eps_min = ABEL_LADDER[2];
    let l_abel = l_max.max((20.0 / eps_min) as usize);
    let terms = product_terms(cfg, x, y, l_abel);
    let v: Vec<C64> = ABEL_LADDER.iter().map(|e| series_sum(&terms, C64::new(*e, z.im)) / c).collect();
    let value = (8.0 * v[2] - 6.0 * v[1] + v[0]) / 3.0;
    let spread = (value - v[2]).norm();
    Ok(KernelValue { value, method: KernelMethod::AbelSpectralSeries, tail_estimate: spread })
}

/// Continuous branch of `ln sinh z` on `Re z ≥ 0`, `z ∉ iπℤ`, agreeing with
/// the real logarithm on the positive axis.
pub fn ln_sinh(z: C64) -> C64 {
    let j = (z.im / PI).round();
    let z0 = C64::new(z.re, z.im - j * PI);
    z0.sinh().ln() + C64::new(0.0, j * PI)
}

fn ln_h(cfg: &GeometryConfig, r: f64, s: f64, zeta: f64, ls: C64, coth: C64, sh: C64) -> C64 {
    let af = cfg.a_f64();
    let pre = -(r.powf(af) + s.powf(af)) * coth / af - cfg.beta() * ls;
    if cfg.a == 2 {
        pre + r * s * zeta / sh
    } else {
        let nu = cfg.gamma + (cfg.n as f64 - 3.0) / 2.0;
        let w2 = 2.0 * r * s * (1.0 + zeta) / (sh * sh);
        pre + ln_gamma(nu + 1.0) + ln_bessel_i_normalized_sq(nu, w2)
    }
}

/// Weighted average `Σ w_i e^{L_i}` with the exponentials shifted to avoid overflow.
fn log_average(ln_vals: &[C64], weights: &[f64]) -> C64 {
    let m = ln_vals.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let s: C64 = ln_vals.iter().zip(weights).map(|(l, w)| *w * (*l - m).exp()).sum();
    s * m.exp()
}

fn average_order(cfg: &GeometryConfig, r: f64, s: f64, sh: C64) -> usize {
    let scale = if cfg.a == 2 {
        r * s / sh.norm()
    } else {
        (4.0 * r * s).sqrt() / sh.norm()
    };
    let n = 32 + (2.0 * scale).ceil() as usize;
    (n.div_ceil(16) * 16).min(512)
}

/// Closed-form kernel `Λ_{k,a}(x,y;z)` for `z ∈ ℂ⁺ \ iπℤ`.
///
/// * rank one, `k = 0`: `h_a(r, s; z; sgn x · sgn y)`;
/// * rank one, `k > 0`: average of `h_a(r, s; z; sgn x sgn y · t)` against the
///   density `∝ (1−t)^{k−1}(1+t)^k` on (−1, 1);
/// * radial sector: the `m = 0` part of the kernel, the average of `h_a` over
///   `ζ` against `∝ (1−ζ²)^{γ+(n−3)/2}` (two-point average when `2γ+n = 1`).
pub fn kernel_closed_form(cfg: &GeometryConfig, x: &WeightedPoint, y: &WeightedPoint, z: C64) -> Result<KernelValue> {
    check_half_plane(z)?;
    if z.re == 0.0 && (z.im / PI).fract() == 0.0 {
        return Err(LabError::Domain(format!("closed-form kernel is undefined on iπℤ (z = {z})")));
    }
    let sh = z.sinh();
    let ls = ln_sinh(z);
    let coth = z.cosh() / sh;
    let (r, s) = (x.r, y.r);
    let value = match cfg.sector {
        Sector::Rank1 { k } => {
            let sign = x.omega * y.omega;
            if k == 0.0 {
                ln_h(cfg, r, s, sign, ls, coth, sh).exp()
            } else {
                let rule = gauss_jacobi_cached(k - 1.0, k, average_order(cfg, r, s, sh));
                let total: f64 = rule.weights.iter().sum();
                let lv: Vec<C64> = rule.nodes.iter().map(|t| ln_h(cfg, r, s, sign * t, ls, coth, sh)).collect();
                log_average(&lv, &rule.weights) / total
            }
        }
        Sector::Radial { gamma } => {
            let e = gamma + (cfg.n as f64 - 3.0) / 2.0;
            if e <= -1.0 {
                let lv = [ln_h(cfg, r, s, 1.0, ls, coth, sh), ln_h(cfg, r, s, -1.0, ls, coth, sh)];
                log_average(&lv, &[0.5, 0.5])
            } else {
                let rule = gauss_jacobi_cached(e, e, average_order(cfg, r, s, sh));
                let total: f64 = rule.weights.iter().sum();
                let lv: Vec<C64> = rule.nodes.iter().map(|t| ln_h(cfg, r, s, *t, ls, coth, sh)).collect();
                log_average(&lv, &rule.weights) / total
            }
        }
    };
    Ok(KernelValue { value, method: KernelMethod::ClosedFormH, tail_estimate: 0.0 })
}

/// The reflection `(−1)^{2/a} x` appearing in the half-period shift.
pub fn half_period_reflection(cfg: &GeometryConfig, x: &WeightedPoint) -> WeightedPoint {
    if cfg.a == 2 {
        WeightedPoint { r: x.r, omega: -x.omega }
    } else {
        *x
    }
}
