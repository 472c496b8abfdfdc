//! Normalized modified Bessel function `Ĩ_λ(w) = (w/2)^{−λ} I_λ(w)`.
//!
//! `Ĩ_λ` is an even entire function of `w`, so everything below is written in
//! terms of `w²`. Three regimes:
//!
//! * `|w| ≤ 8`: ascending series.
//! * `8 < |w| < 25`: Poisson integral on (−1, 1) with a Gauss–Jacobi rule.
//!   The series is useless here for imaginary `w` (the terms reach `e^{|w|}`
//!   while the sum is `O(|w|^{−λ−1/2})`).
//! * `|w| ≥ 25`: Hankel expansion, both exponentials kept.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma_complex};
use super::quadrature::gauss_jacobi_cached;
use crate::C64;

const SERIES_RADIUS: f64 = 8.0;
const ASYMPTOTIC_RADIUS: f64 = 25.0;
const INTEGRAL_ORDER: usize = 64;

/// `Ĩ_λ(w)` for real `λ > −1` and complex `w`.
pub fn bessel_i_normalized(lambda: f64, w: C64) -> C64 {
    bessel_i_normalized_sq(lambda, w * w)
}

/// `Ĩ_λ` as a function of `w²`.
pub fn bessel_i_normalized_sq(lambda: f64, w2: C64) -> C64 {
    let aw = w2.norm().sqrt();
    if aw <= SERIES_RADIUS {
        series(lambda, w2)
    } else if aw < ASYMPTOTIC_RADIUS {
        integral(lambda, w2)
    } else {
        ln_hankel(lambda, w2).exp()
    }
}

/// `ln Ĩ_λ` as a function of `w²`, usable where `Ĩ_λ` itself would overflow.
/// The imaginary part is defined modulo 2π.
pub fn ln_bessel_i_normalized_sq(lambda: f64, w2: C64) -> C64 {
    let aw = w2.norm().sqrt();
    if aw < ASYMPTOTIC_RADIUS {
        bessel_i_normalized_sq(lambda, w2).ln()
    } else {
        ln_hankel(lambda, w2)
    }
}

/// Ascending series `Σ (w²/4)^k / (k! Γ(λ+k+1))`.
pub fn series(lambda: f64, w2: C64) -> C64 {
    let q = w2 / 4.0;
    let mut term = rgamma_complex(C64::new(lambda + 1.0, 0.0));
    let mut sum = term;
    for k in 1..400 {
        let kf = k as f64;
        term *= q / (kf * (lambda + kf));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn integral(lambda: f64, w2: C64) -> C64 {
    if lambda <= -0.5 {
        // Ĩ_λ = (w²/4) Ĩ_{λ+2} + (λ+1) Ĩ_{λ+1}
        return w2 / 4.0 * integral(lambda + 2.0, w2) + (lambda + 1.0) * integral(lambda + 1.0, w2);
    }
    let w = w2.sqrt();
    let rule = gauss_jacobi_cached(lambda - 0.5, lambda - 0.5, INTEGRAL_ORDER);
    let mut acc = C64::new(0.0, 0.0);
    for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
        acc += wt * (w * *t).exp();
    }
    acc * (-(0.5 * PI.ln()) - ln_gamma(lambda + 0.5)).exp()
}

fn ln_hankel(lambda: f64, w2: C64) -> C64 {
    let w = w2.sqrt(); // principal root, Re w ≥ 0
    let mu = 4.0 * lambda * lambda;
    let mut a = 1.0_f64;
    let mut s_plus = C64::new(1.0, 0.0);
    let mut s_minus = C64::new(1.0, 0.0);
    let mut wk = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (8.0 * k as f64);
        wk /= w;
        let term = a * wk;
        let mag = term.norm();
        if mag > last || mag < 1e-18 {
            break;
        }
        last = mag;
        s_plus += term;
        if k % 2 == 1 {
            s_minus -= term;
        } else {
            s_minus += term;
        }
    }
    let sign = if w.im >= 0.0 { 1.0 } else { -1.0 };
    let phase = C64::new(0.0, sign * PI * (lambda + 0.5));
    let tail = (-2.0 * w + phase).exp() * s_plus;
    let ln_i = w - 0.5 * (2.0 * PI * w).ln() + (s_minus + tail).ln();
    ln_i - lambda * (w / 2.0).ln()
}
