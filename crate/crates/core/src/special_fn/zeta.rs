//! Riemann zeta for complex argument and the polylogarithm on the unit circle.

use std::f64::consts::PI;

use super::gamma::{gamma_complex, is_gamma_pole};
use crate::C64;

// B_{2j} / (2j)!
const BERNOULLI_OVER_FACT: [f64; 12] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
    854_513.0 / 138.0 / 1.124_000_727_777_607_7e21,
    -236_364_091.0 / 2730.0 / 6.204_484_017_332_394e23,
];

const EM_TERMS: usize = 30;

fn zeta_em(s: C64) -> C64 {
    let n = EM_TERMS as f64;
    let mut sum = C64::new(0.0, 0.0);
    for k in 1..EM_TERMS {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * n.ln()).exp(); // N^{−s}
    sum += n_pow * n / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s(s+1)…(s+2j−2) times N^{−s−2j+1}
    let mut rising = s;
    let mut npow = n_pow / n;
    for (j, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        sum += *b * rising * npow;
        let jj = (2 * j + 1) as f64;
        rising *= (s + jj) * (s + jj + 1.0);
        npow /= n * n;
    }
    sum
}

/// ζ(s) for complex `s ≠ 1`. Euler–Maclaurin for `Re s ≥ 1/2`, functional
/// equation below.
pub fn zeta(s: C64) -> C64 {
    if s == C64::new(0.0, 0.0) {
        return C64::new(-0.5, 0.0);
    }
    if s.re >= 0.5 {
        return zeta_em(s);
    }
    // trivial zeros
    if s.im == 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
        return C64::new(0.0, 0.0);
    }
    // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    let one_minus = 1.0 - s;
    let g = gamma_complex(one_minus).unwrap_or(C64::new(f64::NAN, f64::NAN));
    (s * 2f64.ln()).exp() * ((s - 1.0) * PI.ln()).exp() * (PI * s / 2.0).sin() * g * zeta_em(one_minus)
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// `Li_s(e^{−it}) = Σ_{r≥1} r^{−s} e^{−irt}` for real `t ∈ [−π, π] \ {0}`.
///
/// Uses the expansion around `μ = −it = 0`:
/// `Li_s(e^μ) = Γ(1−s)(−μ)^{s−1} + Σ_k ζ(s−k) μ^k / k!`, with the logarithmic
/// form when `s` is a positive integer. The series converges for `|μ| < 2π`.
pub fn polylog_unit_circle(s: C64, t: f64) -> C64 {
    let mu = C64::new(0.0, -t);
    let neg_mu = -mu;
    let int_s = if s.im == 0.0 && s.re >= 1.0 && s.re == s.re.round() {
        Some(s.re as usize)
    } else {
        None
    };

    let mut sum = C64::new(0.0, 0.0);
    let mut pow = C64::new(1.0, 0.0); // μ^k / k!
    let mut small = 0;
    for k in 0..200usize {
        if k > 0 {
            pow *= mu / k as f64;
        }
        if Some(k + 1) == int_s {
            sum += pow * (C64::new(harmonic(k), 0.0) - neg_mu.ln());
            continue;
        }
        let term = zeta(s - k as f64) * pow;
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1e-300) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    if int_s.is_none() {
        let one_minus = 1.0 - s;
        if !is_gamma_pole(one_minus) {
            sum += gamma_complex(one_minus).unwrap() * ((s - 1.0) * neg_mu.ln()).exp();
        }
    }
    sum
}
