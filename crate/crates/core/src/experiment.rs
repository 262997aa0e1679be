//! Config-driven convergence experiments tying the measure, recurrence,
//! kernel, and limit modules together, with CSV/JSON reporting.

pub mod config;
pub mod rate;
pub mod report;
pub mod rng;
pub mod runners;

use crate::kernel::KernelError;
use crate::limits::BesselError;
use crate::measure::SpecViolation;
use crate::quadrature::QuadratureError;
use crate::recurrence::RecurrenceError;
use thiserror::Error;

pub use config::{ConfigError, ConfigMap, ExperimentConfig};
pub use rate::{estimate_rate, RateError};
pub use report::{ConvergenceReport, InequalityCheck, InequalityReport, ReportRow};
pub use rng::SplitMix64;
pub use runners::{
    check_kernel_inequalities, run_bulk_sine, run_christoffel_ratio, run_edge_universality,
    run_localization, run_smoothing,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error(transparent)]
    Measure(#[from] crate::measure::MeasureError),
    #[error("smooth factor has no positive edge value (h(1) = {0})")]
    EdgeValueNotPositive(f64),
    #[error("comparison measure must agree with the base measure on [{0}, 1]")]
    MeasuresDisagreeOnEdge(f64),
    #[error("domination check failed at x = {x}: w = {w} exceeds w* = {w_star}")]
    DominationFailed { x: f64, w: f64, w_star: f64 },
    #[error("no dyadic window satisfies the smoothing bracket for epsilon = {0}")]
    NoSmoothingWindow(f64),
    #[error("measure violates hypotheses: {0:?}")]
    InvalidMeasure(Vec<SpecViolation>),
}
