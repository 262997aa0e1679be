//! Gauss quadrature against generalized Jacobi measures.
//!
//! Rules come from the Golub-Welsch construction: the nodes of the n-point
//! rule are the eigenvalues of the n-by-n Jacobi matrix of recurrence
//! coefficients, and each weight is the measure's mass times the squared
//! first component of the corresponding eigenvector. Composite rules split
//! `[-1, 1]` at piece boundaries and at the edge-window start, pair each
//! endpoint panel with a Gauss-Jacobi rule that owns the endpoint
//! singularity, and absorb the remaining smooth factors into the weights.

mod tridiag;

use crate::measure::{MeasureSpec, SpecViolation};
use crate::recurrence::{jacobi_recurrence_closed_form, RecurrenceTable};
use thiserror::Error;

pub use tridiag::TridiagError;

/// Nodes and weights approximating `f -> integral of f d(mu)`, with the
/// polynomial degree through which the approximation is trustworthy.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exact_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("requested {requested} points but the recurrence table holds only {available}")]
    InsufficientTable { requested: usize, available: usize },
    #[error("a quadrature rule needs at least one point")]
    Empty,
    #[error("measure spec violates hypotheses: {0:?}")]
    InvalidSpec(Vec<SpecViolation>),
    #[error(transparent)]
    Eigensolver(#[from] TridiagError),
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest polynomial degree integrated exactly against the measure. For
    /// composite rules whose absorbed smooth factors are not polynomials this
    /// is a conservative declaration: the panel rules resolve those analytic
    /// factors far below 1e-12 at the declared degree (asserted by the
    /// refinement-stability tests).
    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    /// Total mass: the rule applied to the constant one.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Apply the rule to `f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Golub-Welsch: the `n_points`-point Gauss rule of the measure behind a
/// recurrence table, exact through polynomial degree `2 n_points - 1`.
pub fn gauss_rule_from_recurrence(
    table: &RecurrenceTable,
    n_points: usize,
) -> Result<QuadratureRule, QuadratureError> {
    if n_points == 0 {
        return Err(QuadratureError::Empty);
    }
    if n_points > table.n_max() {
        return Err(QuadratureError::InsufficientTable {
            requested: n_points,
            available: table.n_max(),
        });
    }
    let diag = &table.diag()[..n_points];
    let off = &table.offdiag()[..n_points - 1];
    let pairs = tridiag::eigen_first_components(diag, off)?;
    let mass = table.mass();
    let mut nodes = Vec::with_capacity(n_points);
    let mut weights = Vec::with_capacity(n_points);
    for (node, first_component) in pairs {
        nodes.push(node);
        weights.push(mass * first_component * first_component);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        exact_degree: 2 * n_points - 1,
    })
}

/// Effective polynomial degree consumed by a panel's absorbed smooth factor.
enum FactorDegree {
    Poly(u32),
    NonPoly,
}

impl FactorDegree {
    fn of_power(exponent: f64) -> FactorDegree {
        if exponent == 0.0 {
            FactorDegree::Poly(0)
        } else if exponent > 0.0 && exponent.fract() == 0.0 && exponent <= u32::MAX as f64 {
            FactorDegree::Poly(exponent as u32)
        } else {
            FactorDegree::NonPoly
        }
    }
}

/// Composite Gauss rule integrating against the spec's measure.
///
/// `[-1, 1]` is partitioned at the piece boundaries and at `1 - rho`. The
/// leftmost panel uses a Gauss-Jacobi rule for the `(1+x)^beta` singularity,
/// the rightmost for `(1-x)^alpha`, interior panels plain Gauss-Legendre; the
/// effective smooth factor and any off-panel Jacobi factors are evaluated at
/// the mapped nodes and folded into the weights, so applying the rule to a
/// smooth `f` integrates `f` against `d(mu)`.
pub fn composite_quadrature(
    spec: &MeasureSpec,
    n_per_panel: usize,
) -> Result<QuadratureRule, QuadratureError> {
    if n_per_panel == 0 {
        return Err(QuadratureError::Empty);
    }
    let report = spec.validate();
    if !report.is_ok() {
        return Err(QuadratureError::InvalidSpec(report.violations));
    }

    let mut breakpoints = vec![-1.0, 1.0];
    let edge_start = spec.edge_start();
    if edge_start > -1.0 && edge_start < 1.0 {
        breakpoints.push(edge_start);
    }
    for piece in spec.pieces() {
        breakpoints.push(piece.lo);
        breakpoints.push(piece.hi);
    }
    breakpoints.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breakpoints.dedup();

    let alpha = spec.alpha();
    let beta = spec.beta();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut exact_degree = usize::MAX;

    for window in breakpoints.windows(2) {
        let (lo, hi) = (window[0], window[1]);
        let touches_left = lo == -1.0;
        let touches_right = hi == 1.0;
        // The panel rule owns the endpoint singularities that live on it.
        let panel_alpha = if touches_right { alpha } else { 0.0 };
        let panel_beta = if touches_left { beta } else { 0.0 };
        let reference = jacobi_recurrence_closed_form(panel_alpha, panel_beta, n_per_panel)
            .expect("validated exponents");
        let base = gauss_rule_from_recurrence(&reference, n_per_panel)?;

        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        // Affine map contributes the Jacobian plus half^e for each Jacobi
        // factor the reference rule carries.
        let mut ln_scale = half.ln();
        if touches_right {
            ln_scale += alpha * half.ln();
        }
        if touches_left {
            ln_scale += beta * half.ln();
        }
        let scale = ln_scale.exp();

        for (&t, &w) in base.nodes().iter().zip(base.weights()) {
            let x = mid + half * t;
            let mut weight = w * scale * spec.smooth_factor_at(x);
            if !touches_right {
                weight *= (1.0 - x).powf(alpha);
            }
            if !touches_left {
                weight *= (1.0 + x).powf(beta);
            }
            nodes.push(x);
            weights.push(weight);
        }

        // Degree bookkeeping for the absorbed factors on this panel.
        let h_degree = match spec
            .pieces()
            .iter()
            .find(|p| p.contains(mid))
            .map(|p| &p.expr)
            .unwrap_or(spec.smooth_factor())
            .polynomial_degree()
        {
            Some(d) => FactorDegree::Poly(d),
            None => FactorDegree::NonPoly,
        };
        let right_degree = if touches_right {
            FactorDegree::Poly(0)
        } else {
            FactorDegree::of_power(alpha)
        };
        let left_degree = if touches_left {
            FactorDegree::Poly(0)
        } else {
            FactorDegree::of_power(beta)
        };
        let mut consumed = 0usize;
        let mut non_poly = false;
        for d in [h_degree, right_degree, left_degree] {
            match d {
                FactorDegree::Poly(d) => consumed += d as usize,
                FactorDegree::NonPoly => non_poly = true,
            }
        }
        if non_poly {
            // Analytic but non-polynomial factors: reserve half the panel
            // points for resolving them.
            consumed += n_per_panel / 2;
        }
        exact_degree = exact_degree.min((2 * n_per_panel - 1).saturating_sub(consumed));
    }

    Ok(QuadratureRule {
        nodes,
        weights,
        exact_degree,
    })
}
