use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::expr::TailConfig;
use crate::router::{DecayHypothesis, RouterConfig};
use crate::signal::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {msg}")]
    Value { key: String, msg: String },
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

/// Everything a run can be tuned by; loaded from `key = value` text and then
/// overridden by command-line flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid_half_width: f64,
    pub grid_points: usize,
    pub tail: TailConfig,
    pub ratio_tail: TailConfig,
    /// Gram threshold as a multiple of `‖g‖²`.
    pub gram_threshold: f64,
    pub ratio_alphas: Vec<f64>,
    pub full_line_alphas: Vec<f64>,
    pub relation_bound: u64,
    pub decay_hypothesis: DecayHypothesis,
    pub bounded_ratio_variant: bool,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let r = RouterConfig::default();
        RunConfig {
            grid_half_width: 8.0,
            grid_points: 1024,
            tail: r.tail,
            ratio_tail: r.ratio_tail,
            gram_threshold: crate::gram::DEFAULT_RELATIVE_THRESHOLD,
            ratio_alphas: r.ratio_alphas,
            full_line_alphas: r.full_line_alphas,
            relation_bound: r.relation_bound,
            decay_hypothesis: r.decay_hypothesis,
            bounded_ratio_variant: r.bounded_ratio_variant,
            format: Format::Json,
            seed: 0,
        }
    }
}

pub const KEYS: &[&str] = &[
    "grid_half_width",
    "grid_points",
    "tail_start",
    "tail_end",
    "tail_points",
    "ratio_tail_start",
    "ratio_tail_end",
    "ratio_tail_points",
    "gram_threshold",
    "ratio_alphas",
    "full_line_alphas",
    "relation_bound",
    "decay_hypothesis",
    "bounded_ratio_variant",
    "format",
    "seed",
];

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value { key: key.into(), msg: e.to_string() })
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(|t| parse_num::<f64>(key, t.trim())).collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, msg: format!("expected key = value, got {line:?}") })?;
            self.set(k.trim(), v.trim())?;
        }
        self.validate()
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        match key {
            "grid_half_width" => self.grid_half_width = parse_num(key, v)?,
            "grid_points" => self.grid_points = parse_num(key, v)?,
            "tail_start" => self.tail.start = parse_num(key, v)?,
            "tail_end" => self.tail.end = parse_num(key, v)?,
            "tail_points" => self.tail.points = parse_num(key, v)?,
            "ratio_tail_start" => self.ratio_tail.start = parse_num(key, v)?,
            "ratio_tail_end" => self.ratio_tail.end = parse_num(key, v)?,
            "ratio_tail_points" => self.ratio_tail.points = parse_num(key, v)?,
            "gram_threshold" => self.gram_threshold = parse_num(key, v)?,
            "ratio_alphas" => self.ratio_alphas = parse_list(key, v)?,
            "full_line_alphas" => self.full_line_alphas = parse_list(key, v)?,
            "relation_bound" => self.relation_bound = parse_num(key, v)?,
            "decay_hypothesis" => {
                self.decay_hypothesis = match v {
                    "weighted_l1" => DecayHypothesis::WeightedL1,
                    "weighted_limit" => DecayHypothesis::WeightedLimit,
                    _ => return Err(ConfigError::Value { key: key.into(), msg: "expected weighted_l1 or weighted_limit".into() }),
                }
            }
            "bounded_ratio_variant" => self.bounded_ratio_variant = parse_num(key, v)?,
            "format" => {
                self.format = <Format as clap::ValueEnum>::from_str(v, false)
                    .map_err(|msg| ConfigError::Value { key: key.into(), msg })?
            }
            "seed" => self.seed = parse_num(key, v)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, msg: String| Err(ConfigError::Value { key: key.into(), msg });
        if let Err(e) = self.grid() {
            return bad("grid_half_width/grid_points", e.to_string());
        }
        if let Err(msg) = self.tail.validate() {
            return bad("tail_*", msg);
        }
        if let Err(msg) = self.ratio_tail.validate() {
            return bad("ratio_tail_*", msg);
        }
        if !(self.gram_threshold.is_finite() && self.gram_threshold > 0.0) {
            return bad("gram_threshold", "must be positive".into());
        }
        if self.ratio_alphas.is_empty() || self.ratio_alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return bad("ratio_alphas", "must be a nonempty list of positive numbers".into());
        }
        if self.full_line_alphas.is_empty() || self.full_line_alphas.iter().any(|a| !a.is_finite() || *a == 0.0) {
            return bad("full_line_alphas", "must be a nonempty list of nonzero numbers".into());
        }
        if self.relation_bound == 0 {
            return bad("relation_bound", "must be positive".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, crate::signal::SignalError> {
        Grid::new(self.grid_half_width, self.grid_points)
    }

    pub fn router(&self) -> RouterConfig {
        RouterConfig {
            tail: self.tail,
            ratio_tail: self.ratio_tail,
            ratio_alphas: self.ratio_alphas.clone(),
            full_line_alphas: self.full_line_alphas.clone(),
            ghat: None,
            relation_bound: self.relation_bound,
            decay_hypothesis: self.decay_hypothesis,
            bounded_ratio_variant: self.bounded_ratio_variant,
        }
    }
}
