//! A small expression language for the smooth weight factor.
//!
//! The grammar covers exactly what the experiment configs need: numeric
//! literals, the variable `x`, the four arithmetic operators, powers with `^`,
//! unary minus, `exp(...)`, and parentheses. Precedence from loosest to
//! tightest is `+ -`, `* /`, unary minus, `^` (right-associative), so
//! `-x^2` is `-(x^2)` and `2^-1` parses.

use thiserror::Error;

/// Abstract syntax tree for a weight-factor expression in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightExpr {
    Const(f64),
    Var,
    Neg(Box<WeightExpr>),
    Add(Box<WeightExpr>, Box<WeightExpr>),
    Sub(Box<WeightExpr>, Box<WeightExpr>),
    Mul(Box<WeightExpr>, Box<WeightExpr>),
    Div(Box<WeightExpr>, Box<WeightExpr>),
    Pow(Box<WeightExpr>, Box<WeightExpr>),
    Exp(Box<WeightExpr>),
}

/// Parse failure, with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl WeightExpr {
    pub fn constant(c: f64) -> Self {
        WeightExpr::Const(c)
    }

    pub fn one() -> Self {
        WeightExpr::Const(1.0)
    }

    /// Evaluate at a point. Evaluation is a pure function of `x`: repeated
    /// calls at the same argument produce bit-identical results.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightExpr::Const(c) => *c,
            WeightExpr::Var => x,
            WeightExpr::Neg(e) => -e.eval(x),
            WeightExpr::Add(l, r) => l.eval(x) + r.eval(x),
            WeightExpr::Sub(l, r) => l.eval(x) - r.eval(x),
            WeightExpr::Mul(l, r) => l.eval(x) * r.eval(x),
            WeightExpr::Div(l, r) => l.eval(x) / r.eval(x),
            WeightExpr::Pow(b, e) => pow_value(b.eval(x), e.eval(x)),
            WeightExpr::Exp(e) => e.eval(x).exp(),
        }
    }

    /// True when the expression does not mention `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            WeightExpr::Const(_) => true,
            WeightExpr::Var => false,
            WeightExpr::Neg(e) | WeightExpr::Exp(e) => e.is_constant(),
            WeightExpr::Add(l, r)
            | WeightExpr::Sub(l, r)
            | WeightExpr::Mul(l, r)
            | WeightExpr::Div(l, r)
            | WeightExpr::Pow(l, r) => l.is_constant() && r.is_constant(),
        }
    }

    /// Constant value of the expression, when it does not depend on `x`.
    pub fn constant_value(&self) -> Option<f64> {
        if self.is_constant() {
            Some(self.eval(0.0))
        } else {
            None
        }
    }

    /// Upper bound on the polynomial degree, or `None` when the expression is
    /// not a polynomial in `x` (real powers, `exp`, non-constant divisors).
    pub fn polynomial_degree(&self) -> Option<u32> {
        match self {
            WeightExpr::Const(_) => Some(0),
            WeightExpr::Var => Some(1),
            WeightExpr::Neg(e) => e.polynomial_degree(),
            WeightExpr::Add(l, r) | WeightExpr::Sub(l, r) => {
                Some(l.polynomial_degree()?.max(r.polynomial_degree()?))
            }
            WeightExpr::Mul(l, r) => Some(l.polynomial_degree()? + r.polynomial_degree()?),
            WeightExpr::Div(l, r) => {
                if r.polynomial_degree()? == 0 {
                    l.polynomial_degree()
                } else {
                    None
                }
            }
            WeightExpr::Pow(b, e) => {
                let exponent = e.constant_value()?;
                if exponent >= 0.0 && exponent.fract() == 0.0 && exponent <= u32::MAX as f64 {
                    b.polynomial_degree()?.checked_mul(exponent as u32)
                } else {
                    None
                }
            }
            WeightExpr::Exp(e) => {
                if e.is_constant() {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }

    /// Render the expression; `parse_weight_expr(e.to_text())` evaluates
    /// identically to `e`.
    pub fn to_text(&self) -> String {
        self.print_prec(0)
    }

    // Precedence levels: 1 add/sub, 2 mul/div, 3 unary minus, 4 power.
    fn print_prec(&self, parent: u8) -> String {
        let (text, level) = match self {
            WeightExpr::Const(c) => {
                let s = format_const(*c);
                // A negative literal needs the same protection as unary minus.
                let lvl = if *c < 0.0 { 3 } else { 5 };
                (s, lvl)
            }
            WeightExpr::Var => ("x".to_string(), 5),
            WeightExpr::Neg(e) => (format!("-{}", e.print_prec(3)), 3),
            WeightExpr::Add(l, r) => (format!("{}+{}", l.print_prec(1), r.print_prec(2)), 1),
            WeightExpr::Sub(l, r) => (format!("{}-{}", l.print_prec(1), r.print_prec(2)), 1),
            WeightExpr::Mul(l, r) => (format!("{}*{}", l.print_prec(2), r.print_prec(3)), 2),
            WeightExpr::Div(l, r) => (format!("{}/{}", l.print_prec(2), r.print_prec(3)), 2),
            // `^` binds tighter than unary minus and associates right, so the
            // base must be an atom and the exponent may be a unary expression.
            WeightExpr::Pow(b, e) => (format!("{}^{}", b.print_prec(5), e.print_prec(3)), 4),
            WeightExpr::Exp(e) => (format!("exp({})", e.print_prec(0)), 5),
        };
        if level < parent {
            format!("({text})")
        } else {
            text
        }
    }
}

impl std::fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn format_const(c: f64) -> String {
    // `{}` prints the shortest digit string that round-trips, so constants
    // survive print/parse exactly.
    if c == f64::INFINITY {
        "1e400".to_string()
    } else if c == f64::NEG_INFINITY {
        "-1e400".to_string()
    } else {
        format!("{c}")
    }
}

/// Integer exponents go through `powi` so the result is deterministic across
/// platforms and exact for small powers.
fn pow_value(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

/// Parse an expression over the weight grammar.
pub fn parse_weight_expr(text: &str) -> Result<WeightExpr, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Empty);
    }
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.skip_whitespace();
    if parser.pos != parser.bytes.len() {
        return Err(ExprError::Syntax {
            offset: parser.pos,
            message: format!("unexpected `{}`", parser.current_char()),
        });
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_whitespace();
        self.bytes.get(self.pos).copied()
    }

    fn current_char(&self) -> char {
        std::str::from_utf8(&self.bytes[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn expr(&mut self) -> Result<WeightExpr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = WeightExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                b'-' => {
                    self.pos += 1;
                    lhs = WeightExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<WeightExpr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    lhs = WeightExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                b'/' => {
                    self.pos += 1;
                    lhs = WeightExpr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<WeightExpr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(WeightExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<WeightExpr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // Right-associative, and the exponent may carry a sign.
            let exponent = self.unary()?;
            return Ok(WeightExpr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<WeightExpr, ExprError> {
        match self.peek() {
            None => Err(ExprError::Syntax {
                offset: self.pos,
                message: "unexpected end of input".to_string(),
            }),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(ExprError::Syntax {
                offset: self.pos,
                message: format!("unexpected `{}`", self.current_char()),
            }),
        }
    }

    fn expect(&mut self, want: u8) -> Result<(), ExprError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ExprError::Syntax {
                offset: self.pos,
                message: format!("expected `{}`", want as char),
            })
        }
    }

    fn number(&mut self) -> Result<WeightExpr, ExprError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_digit() || self.bytes[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // Optional exponent part: e or E, optional sign, digits.
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            let mut probe = self.pos + 1;
            if probe < self.bytes.len() && matches!(self.bytes[probe], b'+' | b'-') {
                probe += 1;
            }
            if probe < self.bytes.len() && self.bytes[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let token = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        token
            .parse::<f64>()
            .map(WeightExpr::Const)
            .map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("invalid number `{token}`"),
            })
    }

    fn identifier(&mut self) -> Result<WeightExpr, ExprError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii identifier");
        match name {
            "x" => Ok(WeightExpr::Var),
            "exp" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(WeightExpr::Exp(Box::new(inner)))
            }
            _ => Err(ExprError::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            }),
        }
    }
}
