//! Experiment-level behavior beyond the acceptance gate: other measures,
//! n-doubling stability, and byte-level determinism of reports.

use edgekernel_core::experiment::{
    run_bulk_sine, run_christoffel_ratio, run_edge_universality, run_localization, run_smoothing,
    ExperimentConfig,
};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_text(text).unwrap()
}

#[test]
fn edge_decay_for_chebyshev_type_weight() {
    // Negative exponents: the limit is the Bessel kernel of order -1/2 and
    // the offsets must stay positive.
    let cfg = config(
        "alpha = -0.5\nbeta = -0.5\nn_ladder = 64,128,256\na_grid = 0.25,1,4\nb_grid = 0.25,1,4\n",
    );
    let report = run_edge_universality(&cfg).unwrap();
    assert!(report.pass, "sups: {:?}", report.sup_error_per_n);
    let sups = &report.sup_error_per_n;
    assert!(sups[2].1 < sups[0].1);
}

#[test]
fn edge_grid_may_touch_zero_for_nonnegative_alpha() {
    // a = 0 evaluates the kernel at the closed endpoint itself, allowed when
    // alpha >= 0; the diagonal limit there is 1/4 for alpha = 0.
    let cfg = config("alpha = 0\nbeta = 0\nn_ladder = 64,128\na_grid = 0,1\nb_grid = 0,1\n");
    let report = run_edge_universality(&cfg).unwrap();
    let corner = report
        .rows
        .iter()
        .find(|r| r.n == 128 && r.a == Some(0.0) && r.b == Some(0.0))
        .unwrap();
    assert_eq!(corner.limit, Some(0.25));
    assert!((corner.computed - 0.25).abs() < 1e-4);
}

#[test]
fn core_types_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<edgekernel_core::MeasureSpec>();
    assert_send_sync::<edgekernel_core::RecurrenceTable>();
    assert_send_sync::<edgekernel_core::QuadratureRule>();
    assert_send_sync::<edgekernel_core::KernelEvaluator>();
    assert_send_sync::<ExperimentConfig>();
}

#[test]
fn edge_error_shrinks_at_named_point() {
    // At (a, b) = (1, 1) the error falls by better than 1.5x per doubling.
    let cfg = config("alpha = 0\nbeta = 0\nn_ladder = 64,128,256\na_grid = 1\nb_grid = 1\n");
    let report = run_edge_universality(&cfg).unwrap();
    let sups = &report.sup_error_per_n;
    assert!(sups[1].1 < sups[0].1 / 1.5);
    assert!(sups[2].1 < sups[1].1 / 1.5);
}

#[test]
fn bulk_limit_for_chebyshev_away_from_center() {
    // The bulk limit does not depend on the exponents; probe x = 0.4.
    let cfg = config(
        "alpha = -0.5\nbeta = -0.5\nx_list = 0.4\na_grid = 0.25,0.5,1\nb_grid = 0.25,0.5,1\nn_ladder = 128,256,512\n",
    );
    let report = run_bulk_sine(&cfg).unwrap();
    assert!(report.pass, "sups: {:?}", report.sup_error_per_n);
    assert!(report.sup_error_per_n.last().unwrap().1 < 0.02);
}

#[test]
fn bulk_named_value_near_sine_zero() {
    // x = 0, (a, b) = (0, 1), n = 512: the limit sin(pi)/pi = 0, and the
    // finite-n value stays within the empirical deviation budget.
    let cfg = config("alpha = 0\nbeta = 0\nx_list = 0\na_grid = 0\nb_grid = 1\nn_ladder = 512\n");
    let report = run_bulk_sine(&cfg).unwrap();
    let row = &report.rows[0];
    assert!(row.limit.unwrap().abs() < 1e-15);
    assert!(row.computed.abs() < 0.02, "value {}", row.computed);
}

#[test]
fn smoothing_stable_under_n_doubling() {
    // The constant in front of sqrt(eps) does not depend on n: doubling n at
    // fixed epsilon moves the normalized sup-difference by at most 3x.
    let base = "alpha = 0\nbeta = 0\nh = \"exp(x-1)\"\nrho = 1\nepsilon_list = 0.05\n";
    let at_256 = run_smoothing(&config(&format!("{base}n_ladder = 256\n"))).unwrap();
    let at_512 = run_smoothing(&config(&format!("{base}n_ladder = 512\n"))).unwrap();
    let coarse = at_256.rows[0].computed;
    let fine = at_512.rows[0].computed;
    let change = (fine / coarse).max(coarse / fine);
    assert!(change <= 3.0, "normalized sup-difference changed {change}x");
}

#[test]
fn ratio_report_records_scaled_lambda_rows() {
    let cfg = config("alpha = 0\nbeta = 0\nh = \"exp(x-1)\"\nn_ladder = 32,64,128\na_grid = 1,4\n");
    let report = run_christoffel_ratio(&cfg).unwrap();
    let scaled: Vec<_> = report.rows.iter().filter(|r| r.label.is_some()).collect();
    assert_eq!(scaled.len(), 3 * 2);
    for row in scaled {
        assert_eq!(row.label.as_deref(), Some("ratio-lambda-scaled"));
        assert!(row.computed > 0.0);
        assert!(row.limit.is_none());
    }
}

#[test]
fn reports_are_deterministic() {
    let text =
        "alpha = 0\nbeta = 0\nrho = 0.5\nstar_piece = \"-1,0,2\"\nn_ladder = 16,32,64\nseed = 123\n";
    let first = run_localization(&config(text)).unwrap();
    let second = run_localization(&config(text)).unwrap();
    assert_eq!(first.to_csv(), second.to_csv());
    assert_eq!(first.to_json_summary(), second.to_json_summary());
}

#[test]
fn report_rows_cover_the_full_grid() {
    let cfg = config("alpha = 0\nbeta = 0\nn_ladder = 16,32\na_grid = 1,2,3\nb_grid = 1,2\n");
    let report = run_edge_universality(&cfg).unwrap();
    assert_eq!(report.rows.len(), 2 * 3 * 2);
    for &n in &[16usize, 32] {
        let per_n = report.rows.iter().filter(|r| r.n == n).count();
        assert_eq!(per_n, 6);
    }
    // Canonical ordering: n, then a, then b.
    let mut previous = (0usize, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for row in &report.rows {
        let key = (row.n, row.a.unwrap(), row.b.unwrap());
        assert!(
            key.0 > previous.0 || key.1 > previous.1 || (key.1 == previous.1 && key.2 > previous.2),
            "rows out of canonical order"
        );
        previous = key;
    }
}
