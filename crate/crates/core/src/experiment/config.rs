//! Key-value experiment configuration.
//!
//! The on-disk format is UTF-8 text, one `key = value` pair per line, `#`
//! comments, values optionally double-quoted. `piece` and `star_piece` keys
//! repeat; each holds `"<lo>,<hi>,<expr>"`. The `star_piece` entries define
//! the comparison measure of the localization and inequality experiments as
//! the base measure plus extra overrides, which keeps the two measures
//! bit-identical on the edge window by construction.

use crate::measure::{parse_weight_expr, ExprError, MeasureSpec, Piece, SpecViolation, WeightExpr};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Hard cap on recurrence length; binary64 recurrences on [-1, 1] are
/// well-conditioned this far and the experiments stay desk-scale.
pub const MAX_LADDER_N: usize = 4096;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: String, message: String },
    #[error("invalid expression in `{key}`: {source}")]
    Expr {
        key: String,
        #[source]
        source: ExprError,
    },
    #[error("measure violates hypotheses: {0:?}")]
    InvalidMeasure(Vec<SpecViolation>),
}

/// Raw parsed key-value pairs, preserving repeats and order.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: Vec<(String, String)>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<ConfigMap, ConfigError> {
        let mut entries = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Parse {
                    line: index + 1,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Parse {
                    line: index + 1,
                    message: "empty key".to_string(),
                });
            }
            let mut value = value.trim();
            if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
                value = &value[1..value.len() - 1];
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(ConfigMap { entries })
    }

    pub fn from_file(path: &Path) -> Result<ConfigMap, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        ConfigMap::parse(&text)
    }

    /// Last occurrence wins for scalar keys.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all(&self, key: &str) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| ConfigError::InvalidValue {
                    key: key.to_string(),
                    message: format!("`{v}` is not a number"),
                })
            })
            .transpose()
    }

    pub fn f64_required(&self, key: &'static str) -> Result<f64, ConfigError> {
        self.f64_opt(key)?.ok_or(ConfigError::MissingKey(key))
    }

    pub fn usize_opt(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| ConfigError::InvalidValue {
                    key: key.to_string(),
                    message: format!("`{v}` is not a count"),
                })
            })
            .transpose()
    }

    pub fn list_f64(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim()
                            .parse::<f64>()
                            .map_err(|_| ConfigError::InvalidValue {
                                key: key.to_string(),
                                message: format!("`{item}` is not a number"),
                            })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn list_usize(&self, key: &str) -> Result<Option<Vec<usize>>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim()
                            .parse::<usize>()
                            .map_err(|_| ConfigError::InvalidValue {
                                key: key.to_string(),
                                message: format!("`{item}` is not a count"),
                            })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn expr_opt(&self, key: &str) -> Result<Option<WeightExpr>, ConfigError> {
        self.get(key)
            .map(|v| {
                parse_weight_expr(v).map_err(|source| ConfigError::Expr {
                    key: key.to_string(),
                    source,
                })
            })
            .transpose()
    }
}

fn parse_piece(key: &str, text: &str) -> Result<Piece, ConfigError> {
    let mut parts = text.splitn(3, ',');
    let invalid = |message: String| ConfigError::InvalidValue {
        key: key.to_string(),
        message,
    };
    let lo = parts
        .next()
        .ok_or_else(|| invalid("missing lower endpoint".into()))?
        .trim();
    let hi = parts
        .next()
        .ok_or_else(|| invalid("missing upper endpoint".into()))?
        .trim();
    let expr_text = parts
        .next()
        .ok_or_else(|| invalid("missing expression; expected `<lo>,<hi>,<expr>`".into()))?
        .trim();
    let lo: f64 = lo
        .parse()
        .map_err(|_| invalid(format!("`{lo}` is not a number")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| invalid(format!("`{hi}` is not a number")))?;
    let expr = parse_weight_expr(expr_text).map_err(|source| ConfigError::Expr {
        key: key.to_string(),
        source,
    })?;
    Ok(Piece::new(lo, hi, expr))
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub measure: MeasureSpec,
    /// Extra overrides defining the comparison measure for localization and
    /// inequality experiments; empty means the comparison equals the base.
    pub star_pieces: Vec<Piece>,
    pub n_ladder: Vec<usize>,
    pub a_grid: Vec<f64>,
    pub b_grid: Vec<f64>,
    /// Compactum bound `A`; grids live in `[0, A]`.
    pub compactum_bound: f64,
    pub epsilon_list: Vec<f64>,
    /// Interior reference points for the bulk experiment.
    pub x_list: Vec<f64>,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_map(map: &ConfigMap) -> Result<ExperimentConfig, ConfigError> {
        let alpha = map.f64_required("alpha")?;
        let beta = map.f64_required("beta")?;
        let h = map.expr_opt("h")?.unwrap_or_else(WeightExpr::one);
        let rho = map.f64_opt("rho")?.unwrap_or(1.0);
        let mut pieces = Vec::new();
        for text in map.get_all("piece") {
            pieces.push(parse_piece("piece", text)?);
        }
        let measure = MeasureSpec::new(alpha, beta, h, pieces, rho);
        let report = measure.validate();
        if !report.is_ok() {
            return Err(ConfigError::InvalidMeasure(report.violations));
        }

        let mut star_pieces = Vec::new();
        for text in map.get_all("star_piece") {
            star_pieces.push(parse_piece("star_piece", text)?);
        }

        let n_ladder = map
            .list_usize("n_ladder")?
            .unwrap_or_else(|| vec![64, 128, 256, 512]);
        if n_ladder.is_empty() {
            return Err(ConfigError::InvalidValue {
                key: "n_ladder".to_string(),
                message: "ladder must be nonempty".to_string(),
            });
        }
        if n_ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::InvalidValue {
                key: "n_ladder".to_string(),
                message: "ladder must be strictly increasing".to_string(),
            });
        }
        if n_ladder.iter().any(|&n| n == 0 || n > MAX_LADDER_N) {
            return Err(ConfigError::InvalidValue {
                key: "n_ladder".to_string(),
                message: format!("entries must lie in [1, {MAX_LADDER_N}]"),
            });
        }

        let a_min = map.f64_opt("a_min")?.unwrap_or(0.25);
        let explicit_bound = map.f64_opt("A")?;
        let bound_default = explicit_bound.unwrap_or(10.0);
        let a_grid = match map.list_f64("a_grid")? {
            Some(grid) => grid,
            None => linspace(a_min, bound_default, 8),
        };
        let b_grid = match map.list_f64("b_grid")? {
            Some(grid) => grid,
            None => a_grid.clone(),
        };
        let mut compactum_bound = bound_default;
        for &value in a_grid.iter().chain(&b_grid) {
            if let Some(explicit) = explicit_bound {
                if value > explicit {
                    return Err(ConfigError::InvalidValue {
                        key: "a_grid".to_string(),
                        message: format!("grid value {value} exceeds A = {explicit}"),
                    });
                }
            }
            compactum_bound = compactum_bound.max(value);
            if value < 0.0 {
                return Err(ConfigError::InvalidValue {
                    key: "a_grid".to_string(),
                    message: format!("grid value {value} below 0"),
                });
            }
            if alpha < 0.0 && value == 0.0 {
                return Err(ConfigError::InvalidValue {
                    key: "a_grid".to_string(),
                    message: "a = 0 requires alpha >= 0".to_string(),
                });
            }
        }

        let epsilon_list = map
            .list_f64("epsilon_list")?
            .unwrap_or_else(|| vec![0.2, 0.05, 0.0125]);
        for &eps in &epsilon_list {
            if !(0.0 < eps && eps < 0.5) {
                return Err(ConfigError::InvalidValue {
                    key: "epsilon_list".to_string(),
                    message: format!("epsilon {eps} outside (0, 1/2)"),
                });
            }
        }

        let x_list = map
            .list_f64("x_list")?
            .unwrap_or_else(|| vec![-0.3, 0.0, 0.4]);
        for &x in &x_list {
            if !(-1.0 < x && x < 1.0) {
                return Err(ConfigError::InvalidValue {
                    key: "x_list".to_string(),
                    message: format!("bulk point {x} outside (-1, 1)"),
                });
            }
        }

        let output = map.get("output").map(PathBuf::from);
        let seed = map
            .get("seed")
            .map(|v| {
                v.parse::<u64>().map_err(|_| ConfigError::InvalidValue {
                    key: "seed".to_string(),
                    message: format!("`{v}` is not a seed"),
                })
            })
            .transpose()?
            .unwrap_or(42);

        Ok(ExperimentConfig {
            measure,
            star_pieces,
            n_ladder,
            a_grid,
            b_grid,
            compactum_bound,
            epsilon_list,
            x_list,
            output,
            seed,
        })
    }

    pub fn from_text(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::from_map(&ConfigMap::parse(text)?)
    }

    /// Largest ladder entry.
    pub fn n_top(&self) -> usize {
        *self.n_ladder.last().expect("ladder validated nonempty")
    }

    /// The comparison measure: base plus the `star_piece` overrides.
    pub fn star_measure(&self) -> MeasureSpec {
        self.measure.with_extra_pieces(self.star_pieces.clone())
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}
