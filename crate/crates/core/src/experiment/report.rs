//! Report containers and their CSV / JSON renderings.
//!
//! Float cells print through the shortest representation that parses back to
//! the same bits, so a report is a pure function of the numbers in it and
//! reruns produce byte-identical files.

/// One grid evaluation. Fields that do not apply to an experiment stay `None`
/// and render as empty CSV cells; the smoothing experiment records epsilon in
/// the `a` column.
#[derive(Debug, Clone)]
pub struct ReportRow {
    /// Overrides the report-level experiment label when set (used for
    /// auxiliary recordings such as the scaled Christoffel values).
    pub label: Option<String>,
    pub n: usize,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub x: Option<f64>,
    pub computed: f64,
    pub limit: Option<f64>,
}

impl ReportRow {
    pub fn abs_error(&self) -> Option<f64> {
        self.limit.map(|l| (self.computed - l).abs())
    }
}

/// Grid of computed values against limit values over an n-ladder, with the
/// per-n sup-errors and the fitted convergence exponent.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub sup_error_per_n: Vec<(usize, f64)>,
    /// `None` when the ladder is too short to fit; may be the `-inf` sentinel
    /// when some sup-error is exactly zero.
    pub fitted_rate: Option<f64>,
    pub pass: bool,
    pub notes: Vec<String>,
}

pub const CSV_HEADER: &str = "experiment,n,a,b,x,computed,limit,abs_error";

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let label = row.label.as_deref().unwrap_or(&self.experiment);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                label,
                row.n,
                fmt_opt(row.a),
                fmt_opt(row.b),
                fmt_opt(row.x),
                fmt_f64(row.computed),
                fmt_opt(row.limit),
                fmt_opt(row.abs_error()),
            ));
        }
        out
    }

    pub fn to_json_summary(&self) -> String {
        let sups: Vec<String> = self
            .sup_error_per_n
            .iter()
            .map(|&(n, e)| format!("[{},{}]", n, fmt_f64(e)))
            .collect();
        format!(
            "{{\"experiment\":\"{}\",\"sup_error_per_n\":[{}],\"fitted_rate\":{},\"pass\":{}}}",
            self.experiment,
            sups.join(","),
            match self.fitted_rate {
                Some(r) if r.is_finite() => fmt_f64(r),
                _ => "null".to_string(),
            },
            self.pass
        )
    }
}

/// One evaluated inequality instance.
#[derive(Debug, Clone)]
pub struct InequalityCheck {
    pub label: String,
    pub n: usize,
    pub location: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Pass/fail detail for the reproducing-kernel inequality checks.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub checks: Vec<InequalityCheck>,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for check in &self.checks {
            out.push_str(&format!(
                "{},{},{},,,{},{},{}\n",
                check.label,
                check.n,
                fmt_f64(check.location),
                fmt_f64(check.lhs),
                fmt_f64(check.rhs),
                fmt_f64((check.lhs - check.rhs).abs()),
            ));
        }
        out
    }

    pub fn to_json_summary(&self) -> String {
        format!(
            "{{\"experiment\":\"inequalities\",\"sup_error_per_n\":[],\"fitted_rate\":null,\"pass\":{}}}",
            self.pass
        )
    }
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(fmt_f64).unwrap_or_default()
}

/// Shortest round-trip decimal; scientific notation outside a readable range.
pub fn fmt_f64(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else if value.is_finite() {
        let magnitude = value.abs();
        if (1e-4..1e15).contains(&magnitude) {
            format!("{value}")
        } else {
            format!("{value:e}")
        }
    } else if value.is_nan() {
        "nan".to_string()
    } else if value > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
