//! Numerical laboratory for orthonormal polynomials and reproducing kernels
//! of generalized Jacobi measures `w = h(x) (1-x)^alpha (1+x)^beta` on
//! `[-1, 1]`, and for the scaling limits of their kernels: the Bessel kernel
//! at the hard edge and the sine kernel in the bulk.
//!
//! The crate is organized around six parts:
//!
//! - [`measure`]: measure specifications with a small expression grammar for
//!   the smooth factor `h` and piecewise overrides away from the edge;
//! - [`quadrature`]: Golub-Welsch Gauss rules and singularity-aware composite
//!   rules that integrate against a measure;
//! - [`recurrence`]: three-term recurrence coefficients, closed-form for pure
//!   Jacobi weights and via the Stieltjes procedure otherwise;
//! - [`kernel`]: orthonormal polynomial values, the reproducing kernel, the
//!   Christoffel function, and the edge/bulk rescaled kernels;
//! - [`limits`]: the limiting special functions (Bessel `J`, the Bessel
//!   kernel, the sine kernel);
//! - [`experiment`]: config-driven convergence experiments with CSV/JSON
//!   reports.

pub mod experiment;
pub mod kernel;
pub mod limits;
pub mod measure;
pub mod quadrature;
pub mod recurrence;

pub use kernel::{christoffel_oracle, KernelError, KernelEvaluator};
pub use limits::{
    bessel_j, bessel_j_prime, bessel_kernel, sine_kernel, BesselError, BesselEvalConfig,
};
pub use measure::{parse_weight_expr, MeasureSpec, Piece, SpecViolation, WeightExpr};
pub use quadrature::{composite_quadrature, gauss_rule_from_recurrence, QuadratureRule};
pub use recurrence::{jacobi_recurrence_closed_form, stieltjes_recurrence, RecurrenceTable};
