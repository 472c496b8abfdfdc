//! Special functions and quadrature primitives.

pub mod bessel;
pub mod gamma;
pub mod laguerre;
pub mod quadrature;
pub mod zeta;

pub use bessel::{bessel_i_normalized, bessel_i_normalized_sq, ln_bessel_i_normalized_sq};
pub use gamma::{gamma, gamma_complex, ln_gamma, ln_gamma_complex, rgamma_complex};
pub use laguerre::{laguerre_functions, laguerre_poly, LaguerreParams};
pub use quadrature::{build_quadrature, gauss_jacobi_cached, QuadratureKind, QuadratureScheme};
pub use zeta::{polylog_unit_circle, zeta};

use crate::C64;

/// `r_+^z`: `exp(z ln r)` for `r ≥ 1`, zero for `r = 0`.
pub fn complex_power_plus(r: u64, z: C64) -> C64 {
    if r == 0 {
        C64::new(0.0, 0.0)
    } else {
        (z * (r as f64).ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_power() {
        let z = C64::new(-1.0, 2.0);
        assert_eq!(complex_power_plus(0, z), C64::new(0.0, 0.0));
        assert_eq!(complex_power_plus(5, C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
        let v = complex_power_plus(3, z);
        assert!((v - (z * 3f64.ln()).exp()).norm() < 1e-16);
    }
}
