//! Acceptance suite: one test per acceptance criterion, each printing a
//! pass/fail line with the measured quantities (run with `--nocapture` to see
//! them). Tolerances are pinned here, not configurable.

use edgekernel_core::experiment::{
    check_kernel_inequalities, run_bulk_sine, run_christoffel_ratio, run_edge_universality,
    run_localization, run_smoothing, ExperimentConfig, SplitMix64,
};
use edgekernel_core::kernel::{christoffel_oracle, KernelEvaluator};
use edgekernel_core::limits::{bessel_j, bessel_j_prime, bessel_kernel_with, BesselEvalConfig};
use edgekernel_core::measure::{parse_weight_expr, MeasureSpec};
use edgekernel_core::quadrature::composite_quadrature;
use edgekernel_core::recurrence::{jacobi_recurrence_closed_form, stieltjes_recurrence};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_text(text).expect("acceptance config")
}

#[test]
fn criterion_01_christoffel_oracle_agreement() {
    let mut worst = 0.0f64;
    for (alpha, beta) in [(0.0, 0.0), (-0.5, -0.5)] {
        let spec = MeasureSpec::jacobi(alpha, beta);
        let evaluator = KernelEvaluator::new(
            spec.clone(),
            jacobi_recurrence_closed_form(alpha, beta, 16).unwrap(),
        );
        for n in 2..=8 {
            for x in [-0.5, 0.0, 0.3, 0.9] {
                let direct = evaluator.christoffel(n, x).unwrap();
                let oracle = christoffel_oracle(&spec, n, x).unwrap();
                worst = worst.max((direct - oracle).abs() / direct);
            }
        }
    }
    println!(
        "criterion 01 christoffel-oracle: worst relative disagreement {worst:.3e} (tolerance 1e-8)"
    );
    assert!(worst <= 1e-8);
    println!("criterion 01 christoffel-oracle: PASS");
}

#[test]
fn criterion_02_recurrence_cross_validation() {
    let n_max = 128;
    let mut worst = 0.0f64;
    for (alpha, beta) in [(0.0, 0.0), (-0.5, -0.5), (0.5, 0.0), (1.0, 2.0)] {
        let spec = MeasureSpec::jacobi(alpha, beta);
        let rule = composite_quadrature(&spec, 2 * n_max + 16).unwrap();
        let table = stieltjes_recurrence(&spec, n_max, &rule).unwrap();
        let exact = jacobi_recurrence_closed_form(alpha, beta, n_max).unwrap();
        for n in 1..=n_max {
            worst = worst.max((table.a_coeff(n) - exact.a_coeff(n)).abs());
            worst = worst.max((table.b_coeff(n - 1) - exact.b_coeff(n - 1)).abs());
        }
    }
    println!("criterion 02 recurrence-cross-validation: worst absolute deviation {worst:.3e} (tolerance 1e-12)");
    assert!(worst <= 1e-12);
    println!("criterion 02 recurrence-cross-validation: PASS");
}

#[test]
fn criterion_03_orthonormality_under_independent_quadrature() {
    let degree = 32;
    let mut worst = 0.0f64;
    let pure: Vec<MeasureSpec> = [(0.0, 0.0), (-0.5, -0.5), (0.5, 0.0), (1.0, 2.0)]
        .iter()
        .map(|&(a, b)| MeasureSpec::jacobi(a, b))
        .collect();
    let smooth = MeasureSpec::new(
        0.0,
        0.0,
        parse_weight_expr("exp(x-1)").unwrap(),
        vec![],
        1.0,
    );
    for spec in pure.iter().chain(std::iter::once(&smooth)) {
        let table = match spec.constant_smooth_factor() {
            Some(c) => jacobi_recurrence_closed_form(spec.alpha(), spec.beta(), degree)
                .unwrap()
                .with_mass_scaled(c),
            None => {
                let rule = composite_quadrature(spec, 2 * degree + 16).unwrap();
                stieltjes_recurrence(spec, degree, &rule).unwrap()
            }
        };
        let evaluator = KernelEvaluator::new(spec.clone(), table);
        // Independent check rule at double the panel size.
        let check_rule = composite_quadrature(spec, 2 * (2 * degree + 16)).unwrap();
        let values: Vec<Vec<f64>> = check_rule
            .nodes()
            .iter()
            .map(|&t| evaluator.orthopoly_values(degree + 1, t).unwrap())
            .collect();
        for j in 0..=degree {
            for k in j..=degree {
                let inner: f64 = values
                    .iter()
                    .zip(check_rule.weights())
                    .map(|(v, &w)| w * v[j] * v[k])
                    .sum();
                let expected = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((inner - expected).abs());
            }
        }
    }
    println!(
        "criterion 03 orthonormality: worst |<p_j,p_k> - delta| = {worst:.3e} (tolerance 1e-10)"
    );
    assert!(worst <= 1e-10);
    println!("criterion 03 orthonormality: PASS");
}

#[test]
fn criterion_04_christoffel_darboux_identity() {
    let evaluator = KernelEvaluator::new(
        MeasureSpec::jacobi(0.0, 0.0),
        jacobi_recurrence_closed_form(0.0, 0.0, 257).unwrap(),
    );
    let mut rng = SplitMix64::new(0x5eed);
    let mut worst = 0.0f64;
    let mut tested = 0;
    while tested < 100 {
        let n = 2 + (rng.next_u64() % 255) as usize;
        let x = rng.uniform(-0.999, 0.999);
        let y = rng.uniform(-0.999, 0.999);
        if (x - y).abs() < 1e-3 {
            continue;
        }
        tested += 1;
        let direct = evaluator.kernel(n, x, y).unwrap();
        let cd = evaluator.kernel_cd(n, x, y).unwrap();
        // Relative to the kernel value, floored at one so near-zeros of the
        // oscillatory kernel do not divide away the comparison.
        worst = worst.max((direct - cd).abs() / direct.abs().max(1.0));
    }
    println!("criterion 04 christoffel-darboux: worst relative difference {worst:.3e} over 100 pairs (tolerance 1e-10)");
    assert!(worst <= 1e-10);
    println!("criterion 04 christoffel-darboux: PASS");
}

#[test]
fn criterion_05_edge_universality_legendre() {
    let cfg = config(
        "alpha = 0\nbeta = 0\nn_ladder = 64,128,256,512\na_grid = 0.25,1,2.5,5,10\nb_grid = 0.25,1,2.5,5,10\n",
    );
    let report = run_edge_universality(&cfg).unwrap();
    for (n, sup) in &report.sup_error_per_n {
        println!("criterion 05 edge-universality: n={n} sup-error={sup:.6e}");
    }
    let rate = report.fitted_rate.unwrap();
    println!("criterion 05 edge-universality: fitted rate {rate:.4} (required band [-1.5, -0.6])");
    let decreasing = report.sup_error_per_n.windows(2).all(|w| w[1].1 < w[0].1);
    assert!(
        decreasing,
        "sup-errors must decrease strictly along the ladder"
    );
    assert!(
        (-1.5..=-0.6).contains(&rate),
        "fitted rate {rate} outside [-1.5, -0.6]"
    );
    println!("criterion 05 edge-universality: PASS");
}

#[test]
fn criterion_06_universality_erases_smooth_factor() {
    let grid = "a_grid = 0.25,1,2.5,5,10\nb_grid = 0.25,1,2.5,5,10\nn_ladder = 512\n";
    let legendre = run_edge_universality(&config(&format!("alpha = 0\nbeta = 0\n{grid}"))).unwrap();
    let smooth = run_edge_universality(&config(&format!(
        "alpha = 0\nbeta = 0\nh = \"exp(x-1)\"\n{grid}"
    )))
    .unwrap();
    let legendre_sup = legendre.sup_error_per_n[0].1;
    let smooth_sup = smooth.sup_error_per_n[0].1;
    println!(
        "criterion 06 universality-erases-h: exp-weight sup-error {smooth_sup:.6e} vs Legendre {legendre_sup:.6e} (ratio {:.1}, required <= 3)",
        smooth_sup / legendre_sup
    );
    assert!(
        smooth_sup <= 3.0 * legendre_sup,
        "smooth-factor error {smooth_sup} exceeds 3x the Legendre error {legendre_sup}"
    );
    println!("criterion 06 universality-erases-h: PASS");
}

#[test]
fn criterion_07_christoffel_ratio() {
    let cfg = config("alpha = 0\nbeta = 0\nh = \"exp(x-1)\"\nA = 10\nn_ladder = 64,128,256,512\n");
    let report = run_christoffel_ratio(&cfg).unwrap();
    for (n, sup) in &report.sup_error_per_n {
        println!("criterion 07 christoffel-ratio: n={n} sup|ratio - h(1)|={sup:.6e}");
    }
    let decreasing = report.sup_error_per_n.windows(2).all(|w| w[1].1 < w[0].1);
    let final_sup = report.sup_error_per_n.last().unwrap().1;
    // Per-offset band of n^(2a+2) lambda_n across the ladder.
    let mut band: std::collections::HashMap<u64, (f64, f64)> = std::collections::HashMap::new();
    for row in report.rows.iter().filter(|r| r.label.is_some()) {
        let key = row.a.unwrap().to_bits();
        let entry = band.entry(key).or_insert((f64::INFINITY, 0.0));
        entry.0 = entry.0.min(row.computed);
        entry.1 = entry.1.max(row.computed);
    }
    let worst_band = band
        .values()
        .map(|&(lo, hi)| hi / lo)
        .fold(0.0f64, f64::max);
    println!(
        "criterion 07 christoffel-ratio: final sup {final_sup:.6e} (< 0.05), scaled-lambda band {worst_band:.4} (<= 3)"
    );
    assert!(decreasing);
    assert!(final_sup < 0.05);
    assert!(worst_band <= 3.0);
    println!("criterion 07 christoffel-ratio: PASS");
}

#[test]
fn criterion_08_localization() {
    let cfg = config(
        "alpha = 0\nbeta = 0\nrho = 0.5\nstar_piece = \"-1,0,2\"\nn_ladder = 64,128,256,512\n",
    );
    let report = run_localization(&cfg).unwrap();
    for (n, sup) in &report.sup_error_per_n {
        println!("criterion 08 localization: n={n} normalized sup-difference={sup:.6e}");
    }
    let first = report.sup_error_per_n.first().unwrap().1;
    let last = report.sup_error_per_n.last().unwrap().1;
    let decreasing = report.sup_error_per_n.windows(2).all(|w| w[1].1 < w[0].1);
    println!(
        "criterion 08 localization: n=512 value is {:.3} of the n=64 value (required < 0.5)",
        last / first
    );
    assert!(decreasing);
    assert!(last < first / 2.0);
    println!("criterion 08 localization: PASS");
}

#[test]
fn criterion_09_kernel_inequalities() {
    let cfg = config(
        "alpha = 0\nbeta = 0\nrho = 0.5\nstar_piece = \"-1,0,2\"\nn_ladder = 16,64,256\nseed = 42\n",
    );
    let report = check_kernel_inequalities(&cfg).unwrap();
    let l2 = report
        .checks
        .iter()
        .filter(|c| c.label == "kernel-difference-l2")
        .count();
    let extremal = report
        .checks
        .iter()
        .filter(|c| c.label == "christoffel-estimate")
        .count();
    let failed = report.checks.iter().filter(|c| !c.holds).count();
    println!(
        "criterion 09 inequalities: {l2} L2-bound checks and {extremal} Christoffel-estimate checks, {failed} failures"
    );
    assert_eq!(extremal, 3 * 50);
    assert!(report.pass);
    println!("criterion 09 inequalities: PASS");
}

#[test]
fn criterion_10_smoothing_trend() {
    let cfg = config(
        "alpha = 0\nbeta = 0\nh = \"exp(x-1)\"\nrho = 1\nn_ladder = 512\nepsilon_list = 0.2,0.05,0.0125\n",
    );
    let report = run_smoothing(&cfg).unwrap();
    let mut ratios = Vec::new();
    let mut sups = Vec::new();
    for row in &report.rows {
        let epsilon = row.a.unwrap();
        sups.push(row.computed);
        ratios.push(row.computed / epsilon.sqrt());
        println!(
            "criterion 10 smoothing: epsilon={epsilon} sup-difference={:.6e} over sqrt(eps)={:.6e}",
            row.computed,
            row.computed / epsilon.sqrt()
        );
    }
    let monotone = sups.windows(2).all(|w| w[1] <= w[0]);
    let band = ratios.iter().cloned().fold(0.0f64, f64::max)
        / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("criterion 10 smoothing: sqrt(eps)-normalized band {band:.3} (required <= 10), monotone: {monotone}");
    assert!(monotone);
    assert!(band <= 10.0);
    println!("criterion 10 smoothing: PASS");
}

#[test]
fn criterion_11_bulk_sine_limit() {
    let cfg = config(
        "alpha = 0\nbeta = 0\nx_list = 0\na_grid = 0,0.5,1,2\nb_grid = 0,0.5,1,2\nn_ladder = 64,128,256,512\n",
    );
    let report = run_bulk_sine(&cfg).unwrap();
    for (n, sup) in &report.sup_error_per_n {
        println!("criterion 11 bulk-sine: n={n} sup-error={sup:.6e}");
    }
    let decreasing = report.sup_error_per_n.windows(2).all(|w| w[1].1 < w[0].1);
    let last = report.sup_error_per_n.last().unwrap().1;
    println!("criterion 11 bulk-sine: final sup-error {last:.6e} (required < 0.02)");
    assert!(decreasing);
    assert!(last < 0.02);
    println!("criterion 11 bulk-sine: PASS");
}

#[test]
fn criterion_12_special_functions() {
    // Half-integer closed form.
    let z = std::f64::consts::FRAC_PI_2;
    let exact = 2.0 / std::f64::consts::PI;
    let computed = bessel_j(0.5, z).unwrap();
    println!(
        "criterion 12 special-functions: J_1/2(pi/2) error {:.3e} (tolerance 1e-12)",
        (computed - exact).abs()
    );
    assert!((computed - exact).abs() <= 1e-12);
    for probe in [0.3f64, 1.0, 2.5, 5.0] {
        let closed = (2.0 / (std::f64::consts::PI * probe)).sqrt() * probe.sin();
        assert!((bessel_j(0.5, probe).unwrap() - closed).abs() <= 1e-12);
    }

    // First zero of J_0 by bisection.
    let mut lo = 2.0f64;
    let mut hi = 3.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(0.0, mid).unwrap() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let zero = 0.5 * (lo + hi);
    println!(
        "criterion 12 special-functions: first zero of J_0 at {zero:.12} (|delta| {:.3e}, tolerance 1e-9)",
        (zero - 2.404825558).abs()
    );
    assert!((zero - 2.404825558).abs() <= 1e-9);

    // Derivative against central finite differences.
    let h = 1e-5;
    let mut worst_fd = 0.0f64;
    for alpha in [-0.5, 0.0, 0.3, 1.0, 2.5] {
        for z in [0.3, 1.0, 2.0, 5.0, 8.0] {
            let fd =
                (bessel_j(alpha, z + h).unwrap() - bessel_j(alpha, z - h).unwrap()) / (2.0 * h);
            let exact = bessel_j_prime(alpha, z).unwrap();
            worst_fd = worst_fd.max((fd - exact).abs() / (1.0 + exact.abs()));
        }
    }
    println!("criterion 12 special-functions: derivative vs finite differences worst {worst_fd:.3e} (tolerance 1e-7)");
    assert!(worst_fd <= 1e-7);

    // Kernel diagonal against the Richardson-extrapolated off-diagonal oracle.
    let off_diagonal_only = BesselEvalConfig {
        diagonal_threshold: 1e-12,
        ..BesselEvalConfig::default()
    };
    let mut worst_diag = 0.0f64;
    for (alpha, u) in [(0.0, 1.0), (-0.5, 2.0), (1.0, 4.0)] {
        let diagonal = bessel_kernel_with(&BesselEvalConfig::default(), alpha, u, u).unwrap();
        let probe = |sep: f64| {
            bessel_kernel_with(&off_diagonal_only, alpha, u + sep / 2.0, u - sep / 2.0).unwrap()
        };
        let coarse = probe(1e-2);
        let mid = probe(1e-3);
        let fine = probe(1e-4);
        // Richardson on the O(h^2) error: two refinement steps.
        let extrapolated = (100.0 * fine - mid) / 99.0;
        let _first_step = (100.0 * mid - coarse) / 99.0;
        worst_diag = worst_diag.max((diagonal - extrapolated).abs() / diagonal.abs());
    }
    println!("criterion 12 special-functions: diagonal vs Richardson oracle worst {worst_diag:.3e} (tolerance 1e-6)");
    assert!(worst_diag <= 1e-6);
    println!("criterion 12 special-functions: PASS");
}
