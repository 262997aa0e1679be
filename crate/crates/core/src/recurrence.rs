//! Three-term recurrence coefficients for the orthonormal polynomials of a
//! measure: closed form for pure Jacobi weights, discrete Stieltjes procedure
//! over a quadrature rule for everything else.
//!
//! Conventions: the orthonormal family satisfies
//! `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}` with `p_{-1} = 0` and
//! `p_0 = mass^{-1/2}`, so a table of size `n_max` holds `a_1 .. a_{n_max}`,
//! `b_0 .. b_{n_max - 1}`, and the total mass `mu_0`.

use crate::limits::gamma::log_gamma;
use crate::measure::{MeasureSpec, SpecViolation};
use crate::quadrature::QuadratureRule;
use thiserror::Error;

/// Recurrence coefficients of an orthonormal polynomial family.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    // a[k] stores a_{k+1}; off-diagonal of the Jacobi matrix.
    a: Vec<f64>,
    // b[k] stores b_k; diagonal of the Jacobi matrix.
    b: Vec<f64>,
    mass: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecurrenceError {
    #[error("exponent {name} = {value} out of range (must exceed -1)")]
    ExponentOutOfRange { name: &'static str, value: f64 },
    #[error("quadrature rule exact to degree {available} but degree {required} is required")]
    RuleTooShort { required: usize, available: usize },
    #[error("lost positivity at a_{index}: quadrature cannot resolve the measure")]
    LostPositivity { index: usize },
    #[error("measure spec violates hypotheses: {0:?}")]
    InvalidSpec(Vec<SpecViolation>),
}

impl RecurrenceTable {
    pub(crate) fn from_parts(a: Vec<f64>, b: Vec<f64>, mass: f64) -> Self {
        debug_assert_eq!(a.len(), b.len());
        RecurrenceTable { a, b, mass }
    }

    /// Number of coefficients held; orthonormal values `p_0 .. p_{n_max}` are
    /// reachable from a table of size `n_max`.
    pub fn n_max(&self) -> usize {
        self.a.len()
    }

    /// `a_n` for `1 <= n <= n_max`.
    pub fn a_coeff(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.a.len(), "a_{n} not in table");
        self.a[n - 1]
    }

    /// `b_n` for `0 <= n < n_max`.
    pub fn b_coeff(&self, n: usize) -> f64 {
        self.b[n]
    }

    /// Total mass `mu_0` of the measure.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Off-diagonal entries `a_1 .. a_{n_max}` of the Jacobi matrix.
    pub fn offdiag(&self) -> &[f64] {
        &self.a
    }

    /// Diagonal entries `b_0 .. b_{n_max-1}` of the Jacobi matrix.
    pub fn diag(&self) -> &[f64] {
        &self.b
    }

    /// The same family with the measure scaled by `c > 0`: the recurrence
    /// coefficients are invariant, only the mass changes.
    pub fn with_mass_scaled(&self, c: f64) -> RecurrenceTable {
        assert!(c > 0.0, "scale factor must be positive");
        RecurrenceTable {
            a: self.a.clone(),
            b: self.b.clone(),
            mass: self.mass * c,
        }
    }
}

/// Closed-form recurrence coefficients of the orthonormal polynomials for the
/// Jacobi weight `(1-x)^alpha (1+x)^beta` on `[-1, 1]`, together with the
/// mass `2^(alpha+beta+1) B(alpha+1, beta+1)`.
pub fn jacobi_recurrence_closed_form(
    alpha: f64,
    beta: f64,
    n_max: usize,
) -> Result<RecurrenceTable, RecurrenceError> {
    if alpha <= -1.0 || !alpha.is_finite() {
        return Err(RecurrenceError::ExponentOutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    if beta <= -1.0 || !beta.is_finite() {
        return Err(RecurrenceError::ExponentOutOfRange {
            name: "beta",
            value: beta,
        });
    }
    let ln_mass = (alpha + beta + 1.0) * 2.0f64.ln()
        + log_gamma(alpha + 1.0).expect("argument positive").ln_abs
        + log_gamma(beta + 1.0).expect("argument positive").ln_abs
        - log_gamma(alpha + beta + 2.0)
            .expect("argument positive")
            .ln_abs;
    let mass = ln_mass.exp();

    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    if n_max > 0 {
        b.push((beta - alpha) / (alpha + beta + 2.0));
        a.push(
            (4.0 * (alpha + 1.0) * (beta + 1.0)
                / ((alpha + beta + 2.0).powi(2) * (alpha + beta + 3.0)))
                .sqrt(),
        );
    }
    for k in 1..n_max {
        let kf = k as f64;
        let denom = 2.0 * kf + alpha + beta;
        b.push((beta * beta - alpha * alpha) / (denom * (denom + 2.0)));
        let kf = (k + 1) as f64;
        let denom = 2.0 * kf + alpha + beta;
        a.push(
            (4.0 * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta)
                / (denom * denom * (denom + 1.0) * (denom - 1.0)))
                .sqrt(),
        );
    }
    Ok(RecurrenceTable::from_parts(a, b, mass))
}

/// Discrete Stieltjes procedure: recurrence coefficients from iterated
/// quadrature inner products, `b_k = <x p_k, p_k>` and
/// `a_{k+1} = ||(x - b_k) p_k - a_k p_{k-1}||`.
///
/// The rule must integrate polynomials up to degree `2 n_max + 1` against the
/// spec's measure (exactly, or to the accuracy its construction guarantees).
pub fn stieltjes_recurrence(
    spec: &MeasureSpec,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<RecurrenceTable, RecurrenceError> {
    let report = spec.validate();
    if !report.is_ok() {
        return Err(RecurrenceError::InvalidSpec(report.violations));
    }
    let required = 2 * n_max + 1;
    if rule.exact_degree() < required {
        return Err(RecurrenceError::RuleTooShort {
            required,
            available: rule.exact_degree(),
        });
    }
    let nodes = rule.nodes();
    let weights = rule.weights();
    let mass: f64 = weights.iter().sum();

    let mut prev = vec![0.0f64; nodes.len()];
    let mut cur = vec![1.0 / mass.sqrt(); nodes.len()];
    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    for k in 0..n_max {
        let bk: f64 = nodes
            .iter()
            .zip(weights)
            .zip(&cur)
            .map(|((&x, &w), &p)| w * x * p * p)
            .sum();
        b.push(bk);
        let a_prev = if k == 0 { 0.0 } else { a[k - 1] };
        let mut next: Vec<f64> = nodes
            .iter()
            .zip(&cur)
            .zip(&prev)
            .map(|((&x, &p), &q)| (x - bk) * p - a_prev * q)
            .collect();
        let norm_sq: f64 = next.iter().zip(weights).map(|(&q, &w)| w * q * q).sum();
        let ak = norm_sq.sqrt();
        if ak <= 0.0 || !ak.is_finite() {
            return Err(RecurrenceError::LostPositivity { index: k + 1 });
        }
        a.push(ak);
        for q in &mut next {
            *q /= ak;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(RecurrenceTable::from_parts(a, b, mass))
}
