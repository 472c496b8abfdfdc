//! Numerical laboratory for the (k,a)-generalized Laguerre operator
//! `Δ_{k,a} = (1/a)(‖x‖^a − ‖x‖^{2−a} Δ_k)` and the Dunkl Laplacian.
//!
//! The crate builds the orthonormal eigenbasis of `L²_{k,a}`, the semigroup
//! `e^{−zΔ_{k,a}}` and its kernel, the Fourier-Δ_{k,a} transform with its
//! restriction/extension pair on the discrete surface `ν = 2ℓ + 2m/a`, the
//! analytic family `T_z`, Schatten-norm machinery, and checkers for the
//! single-function and orthonormal Strichartz inequalities.
//!
//! Supported geometries are the rank-one reflection group on ℝ (both parity
//! sectors) and the radial sector in any dimension, with `a ∈ {1, 2}`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic_family;
pub mod eigenbasis;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod schatten;
pub mod semigroup;
pub mod special_fn;
pub mod transform;

pub use error::{LabError, Result};
pub use num_complex::Complex64 as C64;
