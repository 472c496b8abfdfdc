//! Gauss rules by Golub–Welsch, with Newton-polished nodes and weights taken
//! from the Christoffel function (computed in log space so high-order
//! Laguerre rules keep their tiny weights).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuadratureKind {
    /// ∫₀^∞ f(t) t^μ e^{−t} dt
    GaussGeneralizedLaguerre { mu: f64 },
    /// ∫_lo^hi f(t) dt
    GaussLegendre { lo: f64, hi: f64 },
    /// ∫_{−1}^{1} f(t) (1−t)^α (1+t)^β dt
    GaussJacobi { alpha: f64, beta: f64 },
    /// ∫_lo^hi f(t) dt, panel edges lo + (hi−lo)(k/P)^grading, Gauss–Legendre per panel
    GradedComposite { lo: f64, hi: f64, grading: f64, panels: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureScheme {
    pub kind: QuadratureKind,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// ln of `weights`; finite even where `weights` would underflow.
    pub ln_weights: Vec<f64>,
}

impl QuadratureScheme {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    /// Polynomial degree the rule integrates exactly against its weight.
    pub fn exactness_degree(&self) -> usize {
        2 * self.order - 1
    }

    /// Largest relative error over the moments of degree `0..=exactness_degree`,
    /// measured against closed forms. Monomials are taken in a variable
    /// shifted to the left end of the interval so that moments stay positive.
    pub fn exactness_defect(&self) -> f64 {
        let deg = self.exactness_degree();
        let mut worst = 0.0_f64;
        for j in 0..=deg {
            let jf = j as f64;
            let (approx, exact) = match self.kind {
                QuadratureKind::GaussGeneralizedLaguerre { mu } => {
                    // normalize by Γ(j+μ+1) in log space
                    let lg = ln_gamma(jf + mu + 1.0);
                    let s: f64 = self
                        .nodes
                        .iter()
                        .zip(&self.ln_weights)
                        .map(|(x, lw)| (lw + jf * x.ln() - lg).exp())
                        .sum();
                    (s, 1.0)
                }
                QuadratureKind::GaussJacobi { alpha, beta } => {
                    // ∫ ((1+t)/2)^j (1−t)^α (1+t)^β = 2^{α+β+1} B(α+1, β+j+1)
                    let ln_exact = (alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)
                        + ln_gamma(beta + jf + 1.0)
                        - ln_gamma(alpha + beta + jf + 2.0);
                    let s: f64 = self
                        .nodes
                        .iter()
                        .zip(&self.ln_weights)
                        .map(|(x, lw)| (lw + jf * ((1.0 + x) / 2.0).ln() - ln_exact).exp())
                        .sum();
                    (s, 1.0)
                }
                QuadratureKind::GaussLegendre { lo, hi } | QuadratureKind::GradedComposite { lo, hi, .. } => {
                    let len = hi - lo;
                    let s = self.integrate(|x| ((x - lo) / len).powi(j as i32));
                    (s, len / (jf + 1.0))
                }
            };
            worst = worst.max((approx - exact).abs() / exact.abs());
        }
        worst
    }

    fn check_invariants(&self) -> Result<()> {
        if self.ln_weights.iter().any(|l| !l.is_finite()) {
            return Err(LabError::Numerical(format!("{:?}: non-positive weight", self.kind)));
        }
        if self.nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(LabError::Numerical(format!("{:?}: nodes not strictly increasing", self.kind)));
        }
        Ok(())
    }
}

/// Three-term recurrence of the orthonormal polynomials:
/// `x p_j = b_{j+1} p_{j+1} + a_j p_j + b_j p_{j−1}`, plus `ln μ₀`.
struct Recurrence {
    a: Vec<f64>,
    b: Vec<f64>, // b[j] for j = 0..=n, b[0] unused
    ln_mu0: f64,
}

fn laguerre_recurrence(mu: f64, n: usize) -> Recurrence {
    let a = (0..n).map(|j| 2.0 * j as f64 + mu + 1.0).collect();
    let b = (0..=n).map(|j| (j as f64 * (j as f64 + mu)).sqrt()).collect();
    Recurrence { a, b, ln_mu0: ln_gamma(mu + 1.0) }
}

fn jacobi_recurrence(alpha: f64, beta: f64, n: usize) -> Recurrence {
    let ab = alpha + beta;
    let mut a = Vec::with_capacity(n);
    for j in 0..n {
        let jf = j as f64;
        if j == 0 {
            a.push((beta - alpha) / (ab + 2.0));
        } else {
            a.push((beta * beta - alpha * alpha) / ((2.0 * jf + ab) * (2.0 * jf + ab + 2.0)));
        }
    }
    let mut b = vec![0.0; n + 1];
    for (j, bj) in b.iter_mut().enumerate().skip(1) {
        let jf = j as f64;
        let v = if j == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * jf + ab;
            4.0 * jf * (jf + alpha) * (jf + beta) * (jf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        *bj = v.sqrt();
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0);
    Recurrence { a, b, ln_mu0 }
}

const BIG: f64 = 1e100;

/// Returns (p_n, p_n') up to a common positive factor.
fn eval_pn(rec: &Recurrence, n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    for j in 0..n {
        let p2 = ((x - rec.a[j]) * p1 - rec.b[j] * p0) / rec.b[j + 1];
        let d2 = (p1 + (x - rec.a[j]) * d1 - rec.b[j] * d0) / rec.b[j + 1];
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        let m = p1.abs().max(d1.abs());
        if m > BIG {
            p0 /= BIG;
            p1 /= BIG;
            d0 /= BIG;
            d1 /= BIG;
        }
    }
    (p1, d1)
}

/// ln Σ_{j<n} q_j(x)² with q_0 = 1.
fn ln_christoffel_sum(rec: &Recurrence, n: usize, x: f64) -> f64 {
    let (mut q0, mut q1) = (0.0, 1.0);
    let mut sum = 1.0;
    let mut ln_scale = 0.0; // sum is stored divided by e^{ln_scale}
    for j in 0..n.saturating_sub(1) {
        let q2 = ((x - rec.a[j]) * q1 - rec.b[j] * q0) / rec.b[j + 1];
        q0 = q1;
        q1 = q2;
        if q1.abs() > BIG {
            q0 /= BIG;
            q1 /= BIG;
            sum /= BIG * BIG;
            ln_scale += 2.0 * BIG.ln();
        }
        sum += q1 * q1;
    }
    sum.ln() + ln_scale
}

fn golub_welsch(rec: &Recurrence, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jm[(i, i)] = rec.a[i];
        if i + 1 < n {
            jm[(i, i + 1)] = rec.b[i + 1];
            jm[(i + 1, i)] = rec.b[i + 1];
        }
    }
    let eig = SymmetricEigen::try_new(jm, 1e-15, 10_000).ok_or_else(|| {
        LabError::Numerical(format!("Jacobi-matrix eigensolve did not converge (n = {n})"))
    })?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    for i in 0..n {
        let gap = {
            let left = if i > 0 { nodes[i] - nodes[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < n { nodes[i + 1] - nodes[i] } else { f64::INFINITY };
            left.min(right)
        };
        for _ in 0..3 {
            let (p, d) = eval_pn(rec, n, nodes[i]);
            if d == 0.0 || !p.is_finite() || !d.is_finite() {
                break;
            }
            let step = p / d;
            if step.abs() > 0.1 * gap {
                break;
            }
            nodes[i] -= step;
            if step.abs() <= 1e-16 * nodes[i].abs().max(1e-300) {
                break;
            }
        }
    }
    let ln_w = nodes
        .iter()
        .map(|&x| rec.ln_mu0 - ln_christoffel_sum(rec, n, x))
        .collect();
    Ok((nodes, ln_w))
}

fn from_ln(kind: QuadratureKind, order: usize, nodes: Vec<f64>, ln_weights: Vec<f64>) -> QuadratureScheme {
    let weights = ln_weights.iter().map(|l| l.exp()).collect();
    QuadratureScheme { kind, order, nodes, weights, ln_weights }
}

/// Builds the rule of the given kind with `order` nodes (per panel for composites).
pub fn build_quadrature(kind: QuadratureKind, order: usize) -> Result<QuadratureScheme> {
    if order == 0 {
        return Err(LabError::Domain("quadrature order must be at least 1".into()));
    }
    let scheme = match kind {
        QuadratureKind::GaussGeneralizedLaguerre { mu } => {
            if !(mu > -1.0) {
                return Err(LabError::Domain(format!("Laguerre order μ = {mu} must exceed −1")));
            }
            let rec = laguerre_recurrence(mu, order);
            let (x, lw) = golub_welsch(&rec, order)?;
            from_ln(kind, order, x, lw)
        }
        QuadratureKind::GaussJacobi { alpha, beta } => {
            if !(alpha > -1.0 && beta > -1.0) {
                return Err(LabError::Domain(format!(
                    "Jacobi parameters α = {alpha}, β = {beta} must exceed −1"
                )));
            }
            let rec = jacobi_recurrence(alpha, beta, order);
            let (x, lw) = golub_welsch(&rec, order)?;
            from_ln(kind, order, x, lw)
        }
        QuadratureKind::GaussLegendre { lo, hi } => {
            if !(hi > lo) {
                return Err(LabError::Domain(format!("empty interval ({lo}, {hi})")));
            }
            let base = legendre_cached(order)?;
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let nodes = base.nodes.iter().map(|t| mid + half * t).collect();
            let ln_w = base.ln_weights.iter().map(|l| l + half.ln()).collect();
            from_ln(kind, order, nodes, ln_w)
        }
        QuadratureKind::GradedComposite { lo, hi, grading, panels } => {
            if !(hi > lo) || panels == 0 || !(grading > 0.0) {
                return Err(LabError::Domain(format!(
                    "bad composite: ({lo}, {hi}), grading {grading}, {panels} panels"
                )));
            }
            let base = legendre_cached(order)?;
            let mut nodes = Vec::with_capacity(panels * order);
            let mut ln_w = Vec::with_capacity(panels * order);
            let edge = |k: usize| lo + (hi - lo) * (k as f64 / panels as f64).powf(grading);
            for p in 0..panels {
                let (a, b) = (edge(p), edge(p + 1));
                let half = 0.5 * (b - a);
                let mid = 0.5 * (b + a);
                for (t, l) in base.nodes.iter().zip(&base.ln_weights) {
                    nodes.push(mid + half * t);
                    ln_w.push(l + half.ln());
                }
            }
            from_ln(kind, order, nodes, ln_w)
        }
    };
    scheme.check_invariants()?;
    Ok(scheme)
}

type Key = (u64, u64, usize);

fn cache() -> &'static Mutex<HashMap<Key, Arc<QuadratureScheme>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<QuadratureScheme>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Jacobi rule shared across threads. Panics only on parameters that
/// `build_quadrature` would reject.
pub fn gauss_jacobi_cached(alpha: f64, beta: f64, order: usize) -> Arc<QuadratureScheme> {
    let key = (alpha.to_bits(), beta.to_bits(), order);
    if let Some(s) = cache().lock().unwrap().get(&key) {
        return s.clone();
    }
    let s = Arc::new(
        build_quadrature(QuadratureKind::GaussJacobi { alpha, beta }, order)
            .expect("valid Jacobi parameters"),
    );
    cache().lock().unwrap().insert(key, s.clone());
    s
}

fn legendre_cached(order: usize) -> Result<Arc<QuadratureScheme>> {
    if order == 0 {
        return Err(LabError::Domain("quadrature order must be at least 1".into()));
    }
    Ok(gauss_jacobi_cached(0.0, 0.0, order))
}
