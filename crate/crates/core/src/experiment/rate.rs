//! Convergence-exponent fitting from ladder sup-errors.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RateError {
    #[error("rate fitting needs at least 3 ladder points, got {0}")]
    TooFewPoints(usize),
}

/// Least-squares slope of `log(sup_error)` against `log(n)`, the empirical
/// convergence exponent. All ladder points enter with equal weight. Exact
/// agreement anywhere (a zero error) is reported as the `-inf` sentinel.
pub fn estimate_rate(sup_errors: &[(usize, f64)]) -> Result<f64, RateError> {
    if sup_errors.len() < 3 {
        return Err(RateError::TooFewPoints(sup_errors.len()));
    }
    if sup_errors.iter().any(|&(_, e)| e == 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    let points: Vec<(f64, f64)> = sup_errors
        .iter()
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let mut covariance = 0.0;
    let mut variance = 0.0;
    for (x, y) in points {
        covariance += (x - mean_x) * (y - mean_y);
        variance += (x - mean_x) * (x - mean_x);
    }
    Ok(covariance / variance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_halving_is_minus_one() {
        let rate = estimate_rate(&[(64, 0.4), (128, 0.2), (256, 0.1)]).unwrap();
        assert!((rate + 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_quartering_is_minus_two() {
        let rate = estimate_rate(&[(64, 0.4), (128, 0.1), (256, 0.025)]).unwrap();
        assert!((rate + 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_errors_fit_zero() {
        let rate = estimate_rate(&[(64, 0.3), (128, 0.3), (256, 0.3), (512, 0.3)]).unwrap();
        assert!(rate.abs() < 1e-12);
    }

    #[test]
    fn zero_error_gives_sentinel() {
        let rate = estimate_rate(&[(64, 0.1), (128, 0.0), (256, 0.01)]).unwrap();
        assert_eq!(rate, f64::NEG_INFINITY);
    }

    #[test]
    fn too_few_points_rejected() {
        assert_eq!(
            estimate_rate(&[(64, 0.1), (128, 0.05)]),
            Err(RateError::TooFewPoints(2))
        );
    }
}
