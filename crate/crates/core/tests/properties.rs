//! Property tests for the structural invariants: parser round-trips, kernel
//! symmetries, quadrature positivity and interlacing, and the reproducing /
//! extremal properties of the kernel under quadrature.

use edgekernel_core::experiment::SplitMix64;
use edgekernel_core::kernel::KernelEvaluator;
use edgekernel_core::limits::sine_kernel;
use edgekernel_core::measure::{parse_weight_expr, MeasureSpec, WeightExpr};
use edgekernel_core::quadrature::{composite_quadrature, gauss_rule_from_recurrence};
use edgekernel_core::recurrence::jacobi_recurrence_closed_form;
use proptest::prelude::*;

/// Random expression trees over the full grammar.
fn weight_expr_strategy() -> impl Strategy<Value = WeightExpr> {
    let leaf = prop_oneof![
        (-8.0..8.0f64).prop_map(WeightExpr::Const),
        Just(WeightExpr::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| WeightExpr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| WeightExpr::Exp(Box::new(e))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| WeightExpr::Add(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| WeightExpr::Sub(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| WeightExpr::Mul(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| WeightExpr::Div(Box::new(l), Box::new(r))),
            (inner.clone(), -3.0..3.0f64)
                .prop_map(|(b, e)| WeightExpr::Pow(Box::new(b), Box::new(WeightExpr::Const(e)))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// parse(print(e)) evaluates identically to e at 64 sample points.
    #[test]
    fn print_parse_round_trip(expr in weight_expr_strategy()) {
        let printed = expr.to_text();
        let reparsed = parse_weight_expr(&printed)
            .unwrap_or_else(|err| panic!("printed form `{printed}` failed to parse: {err}"));
        for i in 0..64 {
            let x = -1.0 + 2.0 * (i as f64) / 63.0;
            let original = expr.eval(x);
            let round_tripped = reparsed.eval(x);
            prop_assert!(
                original.to_bits() == round_tripped.to_bits()
                    || (original.is_nan() && round_tripped.is_nan()),
                "`{printed}` at x={x}: {original} vs {round_tripped}"
            );
        }
    }

    /// Kernel symmetry and diagonal monotonicity for random arguments.
    #[test]
    fn kernel_symmetry(n in 1usize..64, x in -0.999f64..0.999, y in -0.999f64..0.999) {
        let evaluator = KernelEvaluator::new(
            MeasureSpec::jacobi(0.0, 0.0),
            jacobi_recurrence_closed_form(0.0, 0.0, 64).unwrap(),
        );
        let forward = evaluator.kernel(n, x, y).unwrap();
        let backward = evaluator.kernel(n, y, x).unwrap();
        prop_assert_eq!(forward.to_bits(), backward.to_bits());
        let diag = evaluator.kernel(n, x, x).unwrap();
        prop_assert!(diag > 0.0);
        prop_assert!(evaluator.kernel(n + 1, x, x).unwrap() >= diag);
    }

    /// Sine kernel: symmetric, bounded by one, exact at zero separation.
    #[test]
    fn sine_kernel_properties(a in -30.0f64..30.0, b in -30.0f64..30.0) {
        prop_assert_eq!(sine_kernel(a, b).to_bits(), sine_kernel(b, a).to_bits());
        prop_assert!(sine_kernel(a, b) <= 1.0 + 1e-15);
        prop_assert_eq!(sine_kernel(a, a), 1.0);
    }

    /// Gauss rules of random Jacobi measures: positive weights, interior
    /// nodes, interlacing with the next rule size.
    #[test]
    fn gauss_rule_positivity_and_interlacing(
        alpha in -0.95f64..3.0,
        beta in -0.95f64..3.0,
        n in 1usize..24,
    ) {
        let table = jacobi_recurrence_closed_form(alpha, beta, n + 1).unwrap();
        let rule = gauss_rule_from_recurrence(&table, n).unwrap();
        let finer = gauss_rule_from_recurrence(&table, n + 1).unwrap();
        for (&node, &weight) in rule.nodes().iter().zip(rule.weights()) {
            prop_assert!(weight > 0.0);
            prop_assert!(-1.0 < node && node < 1.0);
        }
        for i in 0..n {
            prop_assert!(finer.nodes()[i] < rule.nodes()[i]);
            prop_assert!(rule.nodes()[i] < finer.nodes()[i + 1]);
        }
        let mass_err = (rule.mass() - table.mass()).abs() / table.mass();
        prop_assert!(mass_err < 1e-12);
    }
}

/// Reproducing property: integrating `K_n(x, .) P(.)` against the measure
/// recovers `P(x)` for polynomials of degree below n.
#[test]
fn kernel_reproduces_polynomials_under_quadrature() {
    let spec = MeasureSpec::new(
        0.0,
        0.0,
        parse_weight_expr("exp(x-1)").unwrap(),
        vec![],
        1.0,
    );
    let n = 24;
    let rule = composite_quadrature(&spec, 2 * n + 16).unwrap();
    let table = edgekernel_core::stieltjes_recurrence(&spec, n, &rule).unwrap();
    let evaluator = KernelEvaluator::new(spec, table);
    let mut rng = SplitMix64::new(0xfeed);
    for _ in 0..20 {
        let coefficients: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let x = rng.uniform(-0.99, 0.99);
        let px = evaluator.orthopoly_values(n, x).unwrap();
        let value_at_x: f64 = coefficients.iter().zip(&px).map(|(c, p)| c * p).sum();
        let reproduced = rule.integrate(|t| {
            let pt = evaluator.orthopoly_values(n, t).unwrap();
            let kernel: f64 = px.iter().zip(&pt).map(|(a, b)| a * b).sum();
            let poly: f64 = coefficients.iter().zip(&pt).map(|(c, p)| c * p).sum();
            kernel * poly
        });
        assert!(
            (reproduced - value_at_x).abs() <= 1e-8 * (1.0 + value_at_x.abs()),
            "x={x}: reproduced {reproduced} vs {value_at_x}"
        );
    }
}

/// Extremal property of the Christoffel function: for any polynomial P of
/// degree below n with P(x) != 0, `lambda_n(x) <= rule(P^2) / P(x)^2`.
#[test]
fn christoffel_is_the_extremal_value() {
    let spec = MeasureSpec::jacobi(-0.5, 0.5);
    let n = 16;
    let rule = composite_quadrature(&spec, 2 * n + 16).unwrap();
    let table = jacobi_recurrence_closed_form(-0.5, 0.5, n).unwrap();
    let evaluator = KernelEvaluator::new(spec, table);
    let mut rng = SplitMix64::new(0xbeef);
    for _ in 0..20 {
        let coefficients: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let x = rng.uniform(-0.95, 0.95);
        let px = evaluator.orthopoly_values(n, x).unwrap();
        let p_at_x: f64 = coefficients.iter().zip(&px).map(|(c, p)| c * p).sum();
        if p_at_x.abs() < 1e-6 {
            continue;
        }
        let p_squared = rule.integrate(|t| {
            let pt = evaluator.orthopoly_values(n, t).unwrap();
            let p: f64 = coefficients.iter().zip(&pt).map(|(c, q)| c * q).sum();
            p * p
        });
        let lambda = evaluator.christoffel(n, x).unwrap();
        assert!(
            lambda <= p_squared / (p_at_x * p_at_x) + 1e-10,
            "lambda {lambda} vs quotient {}",
            p_squared / (p_at_x * p_at_x)
        );
    }
}

/// Two evaluations of the same weight at the same point are bit-identical.
#[test]
fn weight_evaluation_is_pure() {
    let spec = MeasureSpec::new(
        -0.3,
        0.7,
        parse_weight_expr("exp(x-1)*(1+(1-x)^2)").unwrap(),
        vec![],
        0.75,
    );
    let mut rng = SplitMix64::new(1);
    for _ in 0..100 {
        let x = rng.uniform(-0.999, 0.999);
        let first = spec.eval_weight(x).unwrap();
        let second = spec.eval_weight(x).unwrap();
        assert_eq!(first.to_bits(), second.to_bits());
        assert!(first >= 0.0);
    }
}
