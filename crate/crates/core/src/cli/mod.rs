//! Command-line front end. Every subcommand prints one JSON document (or a
//! short text summary with `--format text`) and maps outcomes to exit codes:
//! 0 success or certificate, 2 a valid negative answer, 1 an error.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub use config::{ConfigError, Format, RunConfig, KEYS};

use crate::asym::{germ_compare, log_derivative_limit, power_law_check, ratio_limit, GermRelation, LogDerivativeLimit, RatioStatus};
use crate::dioph::{kronecker_solve, phase_sums, q_independence, ExactScalar, KroneckerError, KroneckerOptions, RelationOutcome};
use crate::expr::{classify, parse, Expr};
use crate::gram::{gram_report_for_atoms, build_system, LambdaSet};
use crate::metaplectic::{apply_ops_to_lambda, format_ops, normalize, parse_ops};
use crate::router::{corroborate, route, RouteResult};
use crate::signal::{read_csv, sample, write_csv, Signal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gabor-hrt-lab", version, about = "Linear independence toolkit for finite Gabor systems")]
pub struct Cli {
    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct TailArgs {
    #[arg(long)]
    pub tail_start: Option<f64>,
    #[arg(long)]
    pub tail_end: Option<f64>,
    #[arg(long)]
    pub tail_points: Option<usize>,
}

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    /// Grid half-width T; samples cover [-T, T).
    #[arg(long)]
    pub grid_half_width: Option<f64>,
    /// Number of samples n (even).
    #[arg(long)]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Route (g, Λ) to a known result and print the certificate.
    Check {
        #[arg(long)]
        generator: String,
        #[arg(long)]
        lambda: PathBuf,
        /// Also run the Gram test on the grid.
        #[arg(long)]
        numeric: bool,
        /// Closed-form Fourier transform of g, used by the five-point rule.
        #[arg(long)]
        ghat: Option<String>,
        #[command(flatten)]
        tail: TailArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Classify a generator: LE membership, singularities, tails, decay.
    Classify {
        #[arg(long)]
        generator: String,
        #[command(flatten)]
        tail: TailArgs,
    },
    /// Gram matrix, singular values and independence verdict.
    Gram {
        #[arg(long, conflicts_with = "signal", required_unless_present = "signal")]
        generator: Option<String>,
        /// Signal CSV instead of an expression.
        #[arg(long)]
        signal: Option<PathBuf>,
        #[arg(long)]
        lambda: PathBuf,
        /// Threshold as a multiple of ‖g‖².
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Ratio limits lim g(x+α)/g(x) on the tail.
    RatioLimit {
        #[arg(long)]
        generator: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        alpha: Vec<f64>,
        /// Add the logarithmic-derivative route.
        #[arg(long)]
        log_derivative: bool,
        /// Add the modulus power-law check over the given alphas.
        #[arg(long)]
        power_law: bool,
        #[command(flatten)]
        tail: TailArgs,
    },
    /// Compare the germs of f and g at +∞.
    Germ {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        tail: TailArgs,
    },
    /// Simultaneous approximation |β_k u − p_k − θ_k| < ε.
    Kronecker {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        betas: Vec<String>,
        /// Targets; drawn uniformly from [0, 1) with the run seed when omitted.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        thetas: Vec<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        min_u: f64,
        #[arg(long)]
        integer_u: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Integer relations among scalars.
    Relation {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<String>,
        #[arg(long)]
        max_coeff: Option<u64>,
    },
    /// Move Λ to a canonical position by translation, modulation and dilation.
    Normalize {
        #[arg(long)]
        lambda: PathBuf,
        /// Print the op pipeline alongside the normalized set.
        #[arg(long)]
        emit_ops: bool,
        /// Apply this pipeline to Λ instead of normalizing.
        #[arg(long, conflicts_with = "emit_ops", allow_hyphen_values = true)]
        apply_ops: Option<String>,
    },
    /// Phase-sum table B_n(m) for frequencies b and shift α.
    Bsum {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Sample a generator on the grid as signal CSV.
    Sample {
        #[arg(long)]
        generator: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("bad expression {source_text:?}: {msg}")]
    Expr { source_text: String, msg: String },
    #[error("cannot read {path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Signal(#[from] crate::signal::SignalError),
    #[error(transparent)]
    Meta(#[from] crate::metaplectic::MetaError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

/// One command's result: JSON for the default format, text for `--format text`.
struct Report {
    json: Value,
    text: String,
    code: i32,
    /// Raw bytes that bypass both formats (signal CSV).
    raw: Option<Vec<u8>>,
}

impl Report {
    fn new(json: Value, text: String) -> Report {
        Report { json, text, code: EXIT_OK, raw: None }
    }

    fn code(mut self, code: i32) -> Report {
        self.code = code;
        self
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_out = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let _ = if to_out { write!(out, "{e}") } else { write!(err, "{e}") };
            return if to_out { EXIT_OK } else { EXIT_ERROR };
        }
    };
    match execute(cli) {
        Ok((report, format)) => {
            let written = match (&report.raw, format) {
                (Some(raw), _) => out.write_all(raw),
                (None, Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json values serialize")),
                (None, Format::Text) => write!(out, "{}", report.text),
            };
            match written {
                Ok(()) => report.code,
                Err(e) => {
                    let _ = writeln!(err, "error: write failed: {e}");
                    EXIT_ERROR
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: Cli) -> Result<(Report, Format), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let format = cfg.format;
    let report = match cli.command {
        Command::Check { generator, lambda, numeric, ghat, tail, grid } => {
            apply_tail(&mut cfg, &tail)?;
            apply_grid(&mut cfg, &grid)?;
            cmd_check(&cfg, &generator, &lambda, numeric, ghat.as_deref())?
        }
        Command::Classify { generator, tail } => {
            apply_tail(&mut cfg, &tail)?;
            let e = parse_expr(&generator)?;
            let r = classify(&e, &cfg.tail);
            let text = format!(
                "is_le={} extended_hardy={} positive={:?} decreasing={:?} decay={:?} l2={:?}\n",
                r.is_le, r.is_extended_hardy, r.ultimately_positive, r.ultimately_decreasing_abs, r.decay_class, r.square_integrable
            );
            Report::new(to_json(&r), text)
        }
        Command::Gram { generator, signal, lambda, threshold, grid } => {
            apply_grid(&mut cfg, &grid)?;
            if let Some(t) = threshold {
                cfg.set("gram_threshold", &t.to_string())?;
                cfg.validate()?;
            }
            cmd_gram(&cfg, generator.as_deref(), signal.as_deref(), &lambda)?
        }
        Command::RatioLimit { generator, alpha, log_derivative, power_law, tail } => {
            apply_ratio_tail(&mut cfg, &tail)?;
            cmd_ratio_limit(&cfg, &generator, &alpha, log_derivative, power_law)?
        }
        Command::Germ { f, g, tail } => {
            apply_tail(&mut cfg, &tail)?;
            let r = germ_compare(&parse_expr(&f)?, &parse_expr(&g)?, &cfg.tail);
            let text = match r.relation {
                GermRelation::FSmaller => "f_smaller\n".to_string(),
                GermRelation::GSmaller => "g_smaller\n".to_string(),
                GermRelation::Comparable { limit } => format!("comparable limit={limit}\n"),
                GermRelation::Inconclusive => "inconclusive\n".to_string(),
            };
            Report::new(to_json(&r), text)
        }
        Command::Kronecker { betas, thetas, eps, min_u, integer_u, budget } => {
            cmd_kronecker(&cfg, &betas, thetas, eps, min_u, integer_u, budget)?
        }
        Command::Relation { values, max_coeff } => {
            let vals = parse_scalars(&values)?;
            if vals.is_empty() || vals.len() > 8 {
                return Err(CliError::Invalid(format!("relation takes 1 to 8 values, got {}", vals.len())));
            }
            let bound = max_coeff.unwrap_or(cfg.relation_bound);
            if bound == 0 {
                return Err(CliError::Invalid("--max-coeff must be positive".into()));
            }
            let r = q_independence(&vals, bound);
            let text = match &r.outcome {
                RelationOutcome::Relation { coeffs, .. } => format!("relation {coeffs:?} ({:?})\n", r.method),
                RelationOutcome::NoneUpTo { bound } => format!("no relation with |m| <= {bound} ({:?})\n", r.method),
            };
            Report::new(to_json(&r), text)
        }
        Command::Normalize { lambda, emit_ops, apply_ops } => {
            let l = read_lambda(&lambda)?;
            match apply_ops {
                Some(ops) => {
                    let out = apply_ops_to_lambda(&parse_ops(&ops)?, &l)?;
                    Report::new(to_json(&out), lambda_text(&out))
                }
                None => {
                    let (out, ops) = normalize(&l);
                    let pipeline = format_ops(&ops);
                    if emit_ops {
                        Report::new(json!({ "ops": pipeline, "lambda": out }), format!("{pipeline}\n"))
                    } else {
                        Report::new(to_json(&out), lambda_text(&out))
                    }
                }
            }
        }
        Command::Bsum { b, alpha } => {
            if !(2..=20).contains(&b.len()) {
                return Err(CliError::Invalid(format!("bsum needs 2 to 20 frequencies, got {}", b.len())));
            }
            let t = phase_sums(&b, alpha);
            let mut text = String::new();
            for (n, row) in t.rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
                let _ = writeln!(text, "B_{}: {}", n + 1, cells.join("  "));
            }
            Report::new(to_json(&t), text)
        }
        Command::Sample { generator, out, grid } => {
            apply_grid(&mut cfg, &grid)?;
            let e = parse_expr(&generator)?;
            let rep = sample(&e, cfg.grid()?)?;
            let mut csv = Vec::new();
            write_csv(&rep.signal, &mut csv)?;
            let summary = json!({ "filled": rep.filled, "mass_outside": rep.mass_outside, "grid": rep.signal.grid() });
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv)?;
                    let text = format!("wrote {} ({} filled samples)\n", path.display(), rep.filled.len());
                    Report::new(summary, text)
                }
                None => Report { raw: Some(csv), ..Report::new(summary, String::new()) },
            }
        }
    };
    Ok((report, format))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_expr(src: &str) -> Result<Expr, CliError> {
    parse(src).map_err(|e| CliError::Expr { source_text: src.to_string(), msg: e.to_string() })
}

fn parse_scalars(items: &[String]) -> Result<Vec<ExactScalar>, CliError> {
    items
        .iter()
        .map(|s| s.trim().parse::<ExactScalar>().map_err(|e| CliError::Invalid(format!("bad scalar {s:?}: {e}"))))
        .collect()
}

fn read_lambda(path: &Path) -> Result<LambdaSet, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
}

fn lambda_text(l: &LambdaSet) -> String {
    l.points().iter().map(|p| format!("{p}\n")).collect()
}

fn apply_tail(cfg: &mut RunConfig, t: &TailArgs) -> Result<(), CliError> {
    if let Some(v) = t.tail_start {
        cfg.tail.start = v;
    }
    if let Some(v) = t.tail_end {
        cfg.tail.end = v;
    }
    if let Some(v) = t.tail_points {
        cfg.tail.points = v;
    }
    Ok(cfg.validate()?)
}

/// Ratio-limit commands read the tail flags into the ratio window.
fn apply_ratio_tail(cfg: &mut RunConfig, t: &TailArgs) -> Result<(), CliError> {
    if let Some(v) = t.tail_start {
        cfg.ratio_tail.start = v;
    }
    if let Some(v) = t.tail_end {
        cfg.ratio_tail.end = v;
    }
    if let Some(v) = t.tail_points {
        cfg.ratio_tail.points = v;
    }
    Ok(cfg.validate()?)
}

fn apply_grid(cfg: &mut RunConfig, g: &GridArgs) -> Result<(), CliError> {
    if let Some(v) = g.grid_half_width {
        cfg.grid_half_width = v;
    }
    if let Some(v) = g.grid_points {
        cfg.grid_points = v;
    }
    Ok(cfg.validate()?)
}

fn cmd_check(cfg: &RunConfig, generator: &str, lambda: &Path, numeric: bool, ghat: Option<&str>) -> Result<Report, CliError> {
    let g = parse_expr(generator)?;
    let l = read_lambda(lambda)?;
    let mut rcfg = cfg.router();
    rcfg.ghat = ghat.map(parse_expr).transpose()?;
    let result = route(&g, &l, &rcfg);
    let mut json = to_json(&result);
    let mut text = String::new();
    let code = match &result {
        RouteResult::Certified(c) => {
            let _ = writeln!(text, "certified by {} ({:?})", c.rule, c.confidence);
            for p in &c.predicates {
                let _ = writeln!(text, "  {}: {:?}", p.name, p.outcome);
            }
            if numeric {
                let report = corroborate(c, &g, &l, cfg.grid()?)?;
                let _ = writeln!(text, "grid check: {:?}, sigma_min = {:e}", report.verdict, report.sigma_min);
                json["corroboration"] = to_json(&report);
            }
            EXIT_OK
        }
        RouteResult::NoRule(n) => {
            let _ = writeln!(text, "no rule applies");
            for f in &n.failures {
                let last = f.predicates.last().expect("failed rules record a predicate");
                let _ = writeln!(text, "  {}: {} {:?}", f.rule, last.name, last.outcome);
            }
            EXIT_NEGATIVE
        }
    };
    Ok(Report::new(json, text).code(code))
}

fn cmd_gram(cfg: &RunConfig, generator: Option<&str>, signal: Option<&Path>, lambda: &Path) -> Result<Report, CliError> {
    let l = read_lambda(lambda)?;
    let (g, meta): (Signal, Value) = match (generator, signal) {
        (Some(src), _) => {
            let rep = sample(&parse_expr(src)?, cfg.grid()?)?;
            let meta = json!({ "filled": rep.filled, "mass_outside": rep.mass_outside });
            (rep.signal, meta)
        }
        (None, Some(path)) => {
            let f = std::fs::File::open(path).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })?;
            (read_csv(std::io::BufReader::new(f))?, json!({ "source": path.display().to_string() }))
        }
        (None, None) => return Err(CliError::Invalid("need --generator or --signal".into())),
    };
    let atoms = build_system(&g, &l)?;
    let norm2 = g.l2_norm().powi(2);
    if norm2 == 0.0 {
        return Err(CliError::Invalid("generator vanishes on the grid".into()));
    }
    let report = gram_report_for_atoms(&atoms, cfg.gram_threshold * norm2);
    let text = format!(
        "verdict={:?} sigma_min={:e} threshold={:e} atoms={}\n",
        report.verdict, report.sigma_min, report.threshold_used, report.atoms
    );
    let mut json = to_json(&report);
    json["sampling"] = meta;
    Ok(Report::new(json, text))
}

fn cmd_ratio_limit(cfg: &RunConfig, generator: &str, alphas: &[f64], log_derivative: bool, power_law: bool) -> Result<Report, CliError> {
    let e = parse_expr(generator)?;
    if let Some(a) = alphas.iter().find(|a| !a.is_finite()) {
        return Err(CliError::Invalid(format!("alpha must be finite, got {a}")));
    }
    let estimates: Vec<_> = alphas.iter().map(|&a| ratio_limit(&e, a, &cfg.ratio_tail)).collect();
    let mut text = String::new();
    for est in &estimates {
        let status = match est.status {
            RatioStatus::Finite { value } => format!("finite {:.9}{:+.9}i", value.re, value.im),
            other => format!("{other:?}").to_lowercase(),
        };
        let _ = writeln!(text, "alpha={} {} residual={:e}", est.alpha, status, est.residual);
    }
    let mut json = json!({ "estimates": estimates });
    if log_derivative {
        let r = log_derivative_limit(&e, &cfg.ratio_tail);
        let _ = writeln!(
            text,
            "log-derivative: {}",
            match r.limit {
                LogDerivativeLimit::Finite { l } => format!("finite {l}"),
                LogDerivativeLimit::MinusInfinity => "minus_infinity".into(),
                LogDerivativeLimit::Inconclusive => "inconclusive".into(),
            }
        );
        json["log_derivative"] = to_json(&r);
    }
    if power_law {
        match power_law_check(&e, alphas, &cfg.ratio_tail) {
            Ok(p) => {
                let _ = writeln!(text, "power law: a={} max_deviation={:e}", p.a, p.max_deviation);
                json["power_law"] = json!({ "a": p.a, "max_deviation": p.max_deviation });
            }
            Err(err) => {
                let _ = writeln!(text, "power law: {err}");
                json["power_law"] = json!({ "error": err.to_string() });
            }
        }
    }
    Ok(Report::new(json, text))
}

fn cmd_kronecker(
    cfg: &RunConfig,
    betas: &[String],
    thetas: Vec<f64>,
    eps: f64,
    min_u: f64,
    integer_u: bool,
    budget: Option<u64>,
) -> Result<Report, CliError> {
    let betas = parse_scalars(betas)?;
    let thetas = if thetas.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..betas.len()).map(|_| rng.random::<f64>()).collect()
    } else {
        thetas
    };
    let mut opts = KroneckerOptions { integer_u, ..KroneckerOptions::default() };
    if let Some(b) = budget {
        opts.budget = b;
    }
    let shown: Vec<String> = betas.iter().map(ToString::to_string).collect();
    match kronecker_solve(&betas, &thetas, min_u, eps, opts) {
        Ok(sol) => {
            let text = format!(
                "u={} p={:?} max_residual={:e} max_phase_error={:e}\n",
                sol.u,
                sol.p,
                sol.residuals.iter().copied().fold(0.0, f64::max),
                sol.phase_errors.iter().copied().fold(0.0, f64::max)
            );
            Ok(Report::new(json!({ "betas": shown, "thetas": thetas, "eps": eps, "solution": sol }), text))
        }
        Err(KroneckerError::Invalid(msg)) => Err(CliError::Invalid(msg)),
        Err(e) => {
            let json = json!({ "betas": shown, "thetas": thetas, "eps": eps, "error": e.to_string() });
            Ok(Report::new(json, format!("{e}\n")).code(EXIT_NEGATIVE))
        }
    }
}
