//! The limiting objects of the scaling experiments: Bessel functions of the
//! first kind for real order, the Bessel kernel, and the sine kernel.

pub mod bessel;
pub mod gamma;

pub use bessel::{
    bessel_j, bessel_j_prime, bessel_j_prime_with, bessel_j_with, bessel_kernel,
    bessel_kernel_with, sine_kernel, BesselError, BesselEvalConfig,
};
pub use gamma::{log_gamma, GammaError, LogGamma};
