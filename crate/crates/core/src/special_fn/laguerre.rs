//! Generalized Laguerre polynomials by three-term recurrence.

use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreParams {
    pub degree: usize,
    pub order: f64,
}

impl LaguerreParams {
    pub fn new(degree: usize, order: f64) -> Result<Self> {
        if !(order > -1.0) || !order.is_finite() {
            return Err(LabError::Domain(format!(
                "Laguerre order must exceed -1, got {order}"
            )));
        }
        Ok(Self { degree, order })
    }
}

/// `L^{(μ)}_ℓ(t)` evaluated by the forward recurrence
/// `ℓ L_ℓ = (2ℓ − 1 + μ − t) L_{ℓ−1} − (ℓ − 1 + μ) L_{ℓ−2}`.
pub fn laguerre_poly(params: LaguerreParams, t: f64) -> f64 {
    let mu = params.order;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for l in 1..=params.degree {
        let lf = l as f64;
        let next = ((2.0 * lf - 1.0 + mu - t) * cur - (lf - 1.0 + mu) * prev) / lf;
        prev = cur;
        cur = next;
    }
    cur
}

const RESCALE_HI: f64 = 1e150;

/// Normalized Laguerre functions
/// `sqrt(ℓ!/Γ(μ+ℓ+1)) · L^{(μ)}_ℓ(t) · e^{−t/2}` for `ℓ = 0..=max_degree`.
///
/// The recurrence runs on the normalized values with a running log-scale so
/// large degrees and large `t` neither overflow nor underflow prematurely.
pub fn laguerre_functions(mu: f64, t: f64, max_degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree + 1);
    let mut vals = Vec::with_capacity(max_degree + 1);
    let mut scales = Vec::with_capacity(max_degree + 1);

    let mut log_scale = -0.5 * ln_gamma(mu + 1.0) - 0.5 * t;
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    vals.push(cur);
    scales.push(log_scale);
    for l in 1..=max_degree {
        let lf = l as f64;
        let c1 = (2.0 * lf - 1.0 + mu - t) / (lf * (mu + lf)).sqrt();
        let c2 = ((lf - 1.0) * (lf - 1.0 + mu) / (lf * (lf + mu))).sqrt();
        let next = c1 * cur - c2 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_HI {
            cur /= RESCALE_HI;
            prev /= RESCALE_HI;
            log_scale += RESCALE_HI.ln();
        }
        vals.push(cur);
        scales.push(log_scale);
    }
    for (v, s) in vals.into_iter().zip(scales) {
        out.push(if v == 0.0 { 0.0 } else { v * s.exp() });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        let p0 = LaguerreParams::new(0, 0.7).unwrap();
        assert_eq!(laguerre_poly(p0, 3.3), 1.0);
        let p1 = LaguerreParams::new(1, 0.7).unwrap();
        assert!((laguerre_poly(p1, 3.3) - (0.7 + 1.0 - 3.3)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(LaguerreParams::new(3, -1.0).is_err());
        assert!(LaguerreParams::new(3, f64::NAN).is_err());
    }

    #[test]
    fn normalized_functions_match_plain_recurrence() {
        let mu = 1.3;
        let t = 4.2;
        let f = laguerre_functions(mu, t, 30);
        for (l, v) in f.iter().enumerate() {
            let plain = laguerre_poly(LaguerreParams::new(l, mu).unwrap(), t);
            let lf = l as f64;
            let norm = (ln_gamma(lf + 1.0) - ln_gamma(mu + lf + 1.0)).mul_add(0.5, -0.5 * t).exp();
            let expect = plain * norm;
            assert!((v - expect).abs() <= 1e-12 * expect.abs().max(1e-3), "l = {l}");
        }
    }

    #[test]
    fn huge_argument_stays_finite() {
        let f = laguerre_functions(0.5, 900.0, 400);
        assert!(f.iter().all(|v| v.is_finite()));
    }
}
