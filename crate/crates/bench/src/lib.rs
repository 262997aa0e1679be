//! Shared fixtures for the criterion benches.

use edgekernel_core::measure::MeasureSpec;
use edgekernel_core::quadrature::composite_quadrature;
use edgekernel_core::recurrence::stieltjes_recurrence;
use edgekernel_core::{parse_weight_expr, KernelEvaluator};

/// A measure with a non-trivial smooth factor, sized for kernel evaluations
/// up to `n_max`.
pub fn exp_weight_evaluator(n_max: usize) -> KernelEvaluator {
    let spec = MeasureSpec::new(
        0.0,
        0.0,
        parse_weight_expr("exp(x-1)").expect("fixture expression"),
        vec![],
        1.0,
    );
    let rule = composite_quadrature(&spec, 2 * n_max + 16).expect("fixture rule");
    let table = stieltjes_recurrence(&spec, n_max, &rule).expect("fixture table");
    KernelEvaluator::new(spec, table)
}
