//! Orthonormal polynomial values, the reproducing kernel
//! `K_n(x, y) = sum_{k<n} p_k(x) p_k(y)`, the Christoffel function
//! `lambda_n = 1/K_n(x, x)`, and the edge/bulk rescaled kernels.
//!
//! `K_n` is always the direct sum: evaluating `p_n` already costs `O(n)`, so
//! the Christoffel-Darboux form saves nothing and loses accuracy near the
//! diagonal. It is kept only as a cross-check oracle.

use crate::measure::{MeasureError, MeasureSpec, SpecViolation};
use crate::quadrature::{composite_quadrature, QuadratureError};
use crate::recurrence::RecurrenceTable;
use thiserror::Error;

/// Below this separation the Christoffel-Darboux quotient loses more than
/// ten digits to cancellation and is refused.
pub const CD_MIN_SEPARATION: f64 = 1e-6;

/// Largest degree the moment-matrix oracle accepts; the Hankel system is
/// too ill-conditioned beyond this.
pub const ORACLE_MAX_DEGREE: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("degree {requested} exceeds the table size {available}")]
    DegreeTooLarge { requested: usize, available: usize },
    #[error("kernel degree must be at least 1")]
    DegreeZero,
    #[error("|x - y| = {0} is below the Christoffel-Darboux threshold; use the direct sum")]
    ArgumentsTooClose(f64),
    #[error("edge scaling with negative order requires a, b > 0")]
    EdgeRequiresPositiveOffsets,
    #[error("edge offset {0} pushes the argument outside (-1, 1]")]
    EdgeOffsetTooLarge(f64),
    #[error("bulk-shifted argument {0} leaves (-1, 1)")]
    ShiftedArgumentOutOfRange(f64),
    #[error("moment-matrix oracle supports n <= {max} (requested {requested})")]
    OracleDegreeTooLarge { requested: usize, max: usize },
    #[error("Gram matrix is numerically singular or indefinite (pivot ratio {0:.2e})")]
    IllConditionedGram(f64),
    #[error("measure spec violates hypotheses: {0:?}")]
    InvalidSpec(Vec<SpecViolation>),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// A measure bound to its recurrence table; every kernel quantity of the pair
/// is a pure function evaluated through this.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    spec: MeasureSpec,
    table: RecurrenceTable,
}

impl KernelEvaluator {
    pub fn new(spec: MeasureSpec, table: RecurrenceTable) -> Self {
        KernelEvaluator { spec, table }
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn table(&self) -> &RecurrenceTable {
        &self.table
    }

    /// `p_0(x) .. p_{n-1}(x)` by the forward recurrence
    /// `a_{k+1} p_{k+1} = (x - b_k) p_k - a_k p_{k-1}`.
    pub fn orthopoly_values(&self, n: usize, x: f64) -> Result<Vec<f64>, KernelError> {
        if n > self.table.n_max() + 1 {
            return Err(KernelError::DegreeTooLarge {
                requested: n,
                available: self.table.n_max(),
            });
        }
        let mut values = Vec::with_capacity(n);
        if n == 0 {
            return Ok(values);
        }
        let p0 = 1.0 / self.table.mass().sqrt();
        values.push(p0);
        if n == 1 {
            return Ok(values);
        }
        values.push((x - self.table.b_coeff(0)) * p0 / self.table.a_coeff(1));
        for k in 1..n - 1 {
            let next = ((x - self.table.b_coeff(k)) * values[k]
                - self.table.a_coeff(k) * values[k - 1])
                / self.table.a_coeff(k + 1);
            values.push(next);
        }
        Ok(values)
    }

    /// `K_n(x, y)` by direct summation.
    pub fn kernel(&self, n: usize, x: f64, y: f64) -> Result<f64, KernelError> {
        if n == 0 {
            return Err(KernelError::DegreeZero);
        }
        let px = self.orthopoly_values(n, x)?;
        if x == y {
            return Ok(px.iter().map(|p| p * p).sum());
        }
        let py = self.orthopoly_values(n, y)?;
        Ok(px.iter().zip(&py).map(|(a, b)| a * b).sum())
    }

    /// Christoffel-Darboux form
    /// `a_n (p_n(x) p_{n-1}(y) - p_n(y) p_{n-1}(x)) / (x - y)`; cross-check
    /// only, refused near the diagonal where cancellation dominates.
    pub fn kernel_cd(&self, n: usize, x: f64, y: f64) -> Result<f64, KernelError> {
        if n == 0 {
            return Err(KernelError::DegreeZero);
        }
        if (x - y).abs() < CD_MIN_SEPARATION {
            return Err(KernelError::ArgumentsTooClose((x - y).abs()));
        }
        if n + 1 > self.table.n_max() {
            return Err(KernelError::DegreeTooLarge {
                requested: n + 1,
                available: self.table.n_max(),
            });
        }
        let px = self.orthopoly_values(n + 1, x)?;
        let py = self.orthopoly_values(n + 1, y)?;
        let a_n = self.table.a_coeff(n);
        Ok(a_n * (px[n] * py[n - 1] - py[n] * px[n - 1]) / (x - y))
    }

    /// Christoffel function `lambda_n(x) = 1 / K_n(x, x)`.
    pub fn christoffel(&self, n: usize, x: f64) -> Result<f64, KernelError> {
        Ok(1.0 / self.kernel(n, x, x)?)
    }

    /// `w(x)^(1/2) w(y)^(1/2) K_n(x, y)`.
    pub fn normalized_kernel(&self, n: usize, x: f64, y: f64) -> Result<f64, KernelError> {
        let wx = self.spec.eval_weight(x)?;
        let wy = self.spec.eval_weight(y)?;
        Ok((wx * wy).sqrt() * self.kernel(n, x, y)?)
    }

    /// Hard-edge rescaling
    /// `(1/(2 n^2)) K~_n(1 - a/(2 n^2), 1 - b/(2 n^2))`. For negative order
    /// the offsets must be strictly positive (the edge point itself is only
    /// integrable from the right when `alpha >= 0`).
    pub fn edge_scaled_kernel(&self, n: usize, a: f64, b: f64) -> Result<f64, KernelError> {
        if n == 0 {
            return Err(KernelError::DegreeZero);
        }
        if a < 0.0 || b < 0.0 || (self.spec.alpha() < 0.0 && (a == 0.0 || b == 0.0)) {
            return Err(KernelError::EdgeRequiresPositiveOffsets);
        }
        let scale = 2.0 * (n as f64) * (n as f64);
        let x = 1.0 - a / scale;
        let y = 1.0 - b / scale;
        if x <= -1.0 || y <= -1.0 {
            return Err(KernelError::EdgeOffsetTooLarge(a.max(b)));
        }
        // a = 0 evaluates at the endpoint itself, where the weight power of
        // (1 - x) is an exact zero exponent only for alpha = 0; for alpha > 0
        // the normalized kernel extends continuously by zero weight.
        let kernel = self.edge_normalized_at(n, x, y)?;
        Ok(kernel / scale)
    }

    // Normalized kernel that tolerates the closed endpoint x = 1 when the
    // order permits it (w(1) = h(1) * 0^alpha, a finite limit for alpha >= 0).
    fn edge_normalized_at(&self, n: usize, x: f64, y: f64) -> Result<f64, KernelError> {
        let weight_at = |t: f64| -> Result<f64, KernelError> {
            if t == 1.0 {
                let alpha = self.spec.alpha();
                let base = self.spec.smooth_factor_at(1.0) * 2.0f64.powf(self.spec.beta());
                Ok(if alpha == 0.0 { base } else { 0.0 })
            } else {
                Ok(self.spec.eval_weight(t)?)
            }
        };
        let wx = weight_at(x)?;
        let wy = weight_at(y)?;
        Ok((wx * wy).sqrt() * self.kernel(n, x, y)?)
    }

    /// Bulk rescaling
    /// `K~_n(x + a/K~_n(x,x), x + b/K~_n(x,x)) / K~_n(x,x)`, the sine-kernel
    /// normalization of Theorem-style bulk limits: the bandwidth is the
    /// normalized diagonal itself, not `n`.
    pub fn bulk_scaled_kernel(&self, n: usize, x: f64, a: f64, b: f64) -> Result<f64, KernelError> {
        let diagonal = self.normalized_kernel(n, x, x)?;
        let xa = x + a / diagonal;
        let xb = x + b / diagonal;
        for shifted in [xa, xb] {
            if !(-1.0 < shifted && shifted < 1.0) {
                return Err(KernelError::ShiftedArgumentOutOfRange(shifted));
            }
        }
        Ok(self.normalized_kernel(n, xa, xb)? / diagonal)
    }
}

/// Independent Christoffel-function oracle for small `n`:
/// `lambda_n(x) = 1 / (m(x)^T G^{-1} m(x))` with the Gram (Hankel) matrix
/// `G_ij = integral of x^(i+j) d(mu)` computed by a fine composite rule and
/// `m(x) = (1, x, ..., x^{n-1})`. Shares nothing with the recurrence path.
pub fn christoffel_oracle(spec: &MeasureSpec, n: usize, x: f64) -> Result<f64, KernelError> {
    if n == 0 {
        return Err(KernelError::DegreeZero);
    }
    if n > ORACLE_MAX_DEGREE {
        return Err(KernelError::OracleDegreeTooLarge {
            requested: n,
            max: ORACLE_MAX_DEGREE,
        });
    }
    let report = spec.validate();
    if !report.is_ok() {
        return Err(KernelError::InvalidSpec(report.violations));
    }
    let rule = composite_quadrature(spec, 96)?;
    let mut moments = vec![0.0f64; 2 * n - 1];
    for (j, moment) in moments.iter_mut().enumerate() {
        *moment = rule.integrate(|t| t.powi(j as i32));
    }
    let mut gram = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = moments[i + j];
        }
    }
    let monomials: Vec<f64> = (0..n).map(|i| x.powi(i as i32)).collect();
    let solution = solve_cholesky(&mut gram, n, &monomials)?;
    let quadratic_form: f64 = monomials.iter().zip(&solution).map(|(m, c)| m * c).sum();
    Ok(1.0 / quadratic_form)
}

/// Cholesky solve of the symmetric positive definite system, with a pivot
/// check that reports ill-conditioning instead of silently returning noise.
fn solve_cholesky(matrix: &mut [f64], n: usize, rhs: &[f64]) -> Result<Vec<f64>, KernelError> {
    let mut max_pivot = 0.0f64;
    for j in 0..n {
        for i in j..n {
            let mut sum = matrix[i * n + j];
            for k in 0..j {
                sum -= matrix[i * n + k] * matrix[j * n + k];
            }
            if i == j {
                let ratio = if max_pivot > 0.0 {
                    sum / max_pivot
                } else {
                    1.0
                };
                if sum <= 0.0 || ratio < 1e-13 {
                    return Err(KernelError::IllConditionedGram(ratio));
                }
                matrix[j * n + j] = sum.sqrt();
                max_pivot = max_pivot.max(sum);
            } else {
                matrix[i * n + j] = sum / matrix[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = rhs[i];
        for k in 0..i {
            sum -= matrix[i * n + k] * y[k];
        }
        y[i] = sum / matrix[i * n + i];
    }
    let mut solution = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= matrix[k * n + i] * solution[k];
        }
        solution[i] = sum / matrix[i * n + i];
    }
    Ok(solution)
}
