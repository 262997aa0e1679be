//! Generalized Jacobi measures `w = h(x) (1-x)^alpha (1+x)^beta` on `[-1, 1]`,
//! with optional piecewise overrides of the smooth factor away from the edge.

pub mod expr;

use thiserror::Error;

pub use expr::{parse_weight_expr, ExprError, WeightExpr};

/// Sample count used when checking positivity on a grid.
const POSITIVITY_GRID: usize = 1024;

/// A closed subinterval of `[-1, 1 - rho]` on which `expr` replaces the base
/// smooth factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub expr: WeightExpr,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, expr: WeightExpr) -> Self {
        Piece { lo, hi, expr }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A generalized Jacobi measure. The base factor `h` applies on the edge
/// window `J = [1 - rho, 1]` and anywhere no piece covers; pieces may override
/// `h` on closed subintervals of `[-1, 1 - rho]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    alpha: f64,
    beta: f64,
    h: WeightExpr,
    pieces: Vec<Piece>,
    edge_window: f64,
}

/// One failed hypothesis found by [`MeasureSpec::validate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecViolation {
    #[error("alpha must exceed -1 for integrability (got {0})")]
    AlphaNotIntegrable(f64),
    #[error("beta must exceed -1 for integrability (got {0})")]
    BetaNotIntegrable(f64),
    #[error("edge window rho must lie in (0, 2] (got {0})")]
    EdgeWindowOutOfRange(f64),
    #[error("h is not strictly positive on the edge window (h({x}) = {value})")]
    SmoothFactorNotPositiveOnEdge { x: f64, value: f64 },
    #[error("piece {index} expression is negative on its interval (value {value} at x = {x})")]
    PieceNegative { index: usize, x: f64, value: f64 },
    #[error("piece {index} interval [{lo}, {hi}] is empty or reversed")]
    PieceEmpty { index: usize, lo: f64, hi: f64 },
    #[error("piece {index} interval [{lo}, {hi}] is not contained in [-1, {bound}]")]
    PieceOutsideAllowedRegion {
        index: usize,
        lo: f64,
        hi: f64,
        bound: f64,
    },
    #[error("pieces {first} and {second} overlap")]
    PiecesOverlap { first: usize, second: usize },
    #[error(
        "smooth factor is negative or non-finite off the edge window (value {value} at x = {x})"
    )]
    SmoothFactorNegative { x: f64, value: f64 },
}

/// Outcome of validating a [`MeasureSpec`]; `violations` empty means the spec
/// satisfies every hypothesis. `h_at_edge` reports `h(1)`.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<SpecViolation>,
    pub h_at_edge: f64,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Weight evaluation failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("weight evaluation requires x strictly inside (-1, 1), got {0}")]
    OutsideOpenInterval(f64),
    #[error("measure spec violates hypotheses: {0:?}")]
    InvalidSpec(Vec<SpecViolation>),
}

impl MeasureSpec {
    pub fn new(alpha: f64, beta: f64, h: WeightExpr, pieces: Vec<Piece>, edge_window: f64) -> Self {
        MeasureSpec {
            alpha,
            beta,
            h,
            pieces,
            edge_window,
        }
    }

    /// The pure Jacobi weight `(1-x)^alpha (1+x)^beta` (h identically one, no
    /// pieces, edge window covering all of `[-1, 1]`).
    pub fn jacobi(alpha: f64, beta: f64) -> Self {
        MeasureSpec::new(alpha, beta, WeightExpr::one(), Vec::new(), 2.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn smooth_factor(&self) -> &WeightExpr {
        &self.h
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn edge_window(&self) -> f64 {
        self.edge_window
    }

    /// Left endpoint of the edge window `J = [1 - rho, 1]`.
    pub fn edge_start(&self) -> f64 {
        1.0 - self.edge_window
    }

    /// `h(1)`, the smooth factor at the hard edge.
    pub fn h_at_edge(&self) -> f64 {
        self.h.eval(1.0)
    }

    /// A copy with additional override pieces appended. The result agrees
    /// with `self` on the edge window by construction, which is exactly the
    /// setup the localization experiments need.
    pub fn with_extra_pieces(&self, extra: Vec<Piece>) -> MeasureSpec {
        let mut pieces = self.pieces.clone();
        pieces.extend(extra);
        MeasureSpec::new(
            self.alpha,
            self.beta,
            self.h.clone(),
            pieces,
            self.edge_window,
        )
    }

    /// Smooth factor value of `c` when `h` does not depend on `x` and there
    /// are no piece overrides, i.e. the measure is `c` times a pure Jacobi
    /// weight. Used to route such measures through the closed-form recurrence.
    pub fn constant_smooth_factor(&self) -> Option<f64> {
        if self.pieces.is_empty() {
            self.h.constant_value()
        } else {
            None
        }
    }

    /// Effective smooth factor at `x`: the covering piece expression if any,
    /// otherwise the base `h`.
    pub fn smooth_factor_at(&self, x: f64) -> f64 {
        for piece in &self.pieces {
            if piece.contains(x) {
                return piece.expr.eval(x);
            }
        }
        self.h.eval(x)
    }

    /// The weight `h_eff(x) (1-x)^alpha (1+x)^beta` for `x` strictly inside
    /// `(-1, 1)`. Endpoints are rejected: depending on the exponent signs the
    /// value there is `0` or diverges, and no caller needs it.
    pub fn eval_weight(&self, x: f64) -> Result<f64, MeasureError> {
        if !(-1.0 < x && x < 1.0) {
            return Err(MeasureError::OutsideOpenInterval(x));
        }
        Ok(self.smooth_factor_at(x) * (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta))
    }

    /// Check every hypothesis the asymptotic theorems place on the measure.
    /// Violations come back as data rather than an error so callers can report
    /// all of them at once.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.alpha <= -1.0 || self.alpha.is_nan() {
            violations.push(SpecViolation::AlphaNotIntegrable(self.alpha));
        }
        if self.beta <= -1.0 || self.beta.is_nan() {
            violations.push(SpecViolation::BetaNotIntegrable(self.beta));
        }
        if self.edge_window <= 0.0 || self.edge_window > 2.0 || self.edge_window.is_nan() {
            violations.push(SpecViolation::EdgeWindowOutOfRange(self.edge_window));
        } else {
            // h must be strictly positive on the edge window.
            let lo = self.edge_start();
            for i in 0..POSITIVITY_GRID {
                let x = lo + (1.0 - lo) * (i as f64) / (POSITIVITY_GRID - 1) as f64;
                let value = self.h.eval(x);
                if value <= 0.0 || !value.is_finite() {
                    violations.push(SpecViolation::SmoothFactorNotPositiveOnEdge { x, value });
                    break;
                }
            }
        }
        let bound = self.edge_start();
        for (index, piece) in self.pieces.iter().enumerate() {
            if piece.lo >= piece.hi || piece.lo.is_nan() || piece.hi.is_nan() {
                violations.push(SpecViolation::PieceEmpty {
                    index,
                    lo: piece.lo,
                    hi: piece.hi,
                });
                continue;
            }
            if piece.lo < -1.0 || piece.hi > bound {
                violations.push(SpecViolation::PieceOutsideAllowedRegion {
                    index,
                    lo: piece.lo,
                    hi: piece.hi,
                    bound,
                });
            }
            for i in 0..POSITIVITY_GRID {
                let x =
                    piece.lo + (piece.hi - piece.lo) * (i as f64) / (POSITIVITY_GRID - 1) as f64;
                let value = piece.expr.eval(x);
                if value < 0.0 || !value.is_finite() {
                    violations.push(SpecViolation::PieceNegative { index, x, value });
                    break;
                }
            }
        }
        // The base h also applies left of the edge window wherever no piece
        // covers; it must stay nonnegative and finite there.
        if bound > -1.0 && bound <= 1.0 {
            for i in 0..POSITIVITY_GRID {
                let x = -1.0 + (bound + 1.0) * (i as f64) / (POSITIVITY_GRID - 1) as f64;
                if self.pieces.iter().any(|p| p.contains(x)) {
                    continue;
                }
                let value = self.h.eval(x);
                if value < 0.0 || !value.is_finite() {
                    violations.push(SpecViolation::SmoothFactorNegative { x, value });
                    break;
                }
            }
        }
        // Pairwise disjointness: sort by left endpoint, neighbours must not touch.
        let mut order: Vec<usize> = (0..self.pieces.len()).collect();
        order.sort_by(|&i, &j| {
            self.pieces[i]
                .lo
                .partial_cmp(&self.pieces[j].lo)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for pair in order.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            if self.pieces[i].hi >= self.pieces[j].lo {
                violations.push(SpecViolation::PiecesOverlap {
                    first: i,
                    second: j,
                });
            }
        }
        ValidationReport {
            violations,
            h_at_edge: self.h_at_edge(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}
