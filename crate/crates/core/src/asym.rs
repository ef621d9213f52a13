//! Tail asymptotics: ratio limits `lim g(x+α)/g(x)`, their algebra, the
//! modulus power law, the logarithmic-derivative route and germ comparison.
//!
//! Ratios are formed in the log domain so generators that underflow on the
//! tail (`e^{-x²}` at `x = 10⁹`) still give meaningful quotients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{evaluate, evaluate_log, log_derivative, Expr, LogValue, TailConfig};

/// Default residual tolerance for convergence decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RatioStatus {
    Finite { value: Complex64 },
    Zero,
    Divergent,
    NoLimit,
    Inconclusive,
}

/// Two tail samples with ratio values far apart, repeated in each block of
/// the last quarter: the witness for `no_limit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationWitness {
    pub low: Vec<(f64, f64)>,
    pub high: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioLimitEstimate {
    pub alpha: f64,
    #[serde(flatten)]
    pub status: RatioStatus,
    pub tail_window: (f64, f64),
    /// Max deviation from the reported value over the last quarter of the
    /// window; for `zero` the deviation from 0.
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<OscillationWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RatioLimitEstimate {
    /// The limit as a number when it is finite or zero.
    pub fn value(&self) -> Option<Complex64> {
        match self.status {
            RatioStatus::Finite { value } => Some(value),
            RatioStatus::Zero => Some(Complex64::new(0.0, 0.0)),
            _ => None,
        }
    }

    fn inconclusive(alpha: f64, cfg: &TailConfig, tolerance: f64, note: String) -> Self {
        RatioLimitEstimate {
            alpha,
            status: RatioStatus::Inconclusive,
            tail_window: (cfg.start, cfg.end),
            residual: f64::INFINITY,
            tolerance,
            witness: None,
            notes: vec![note],
        }
    }
}

pub fn ratio_limit(e: &Expr, alpha: f64, cfg: &TailConfig) -> RatioLimitEstimate {
    ratio_limit_with_tolerance(e, alpha, cfg, DEFAULT_TOLERANCE)
}

/// Samples `g(x+α)/g(x)` on the geometric tail and classifies it:
/// zero and divergent need the last quarter beyond the tolerance band and
/// moving away from 1 by at least one order of `e`; finite needs a
/// last-quarter residual within tolerance; no_limit needs a spread above
/// `10·tol` in every eighth-of-window block without shrinking.
pub fn ratio_limit_with_tolerance(e: &Expr, alpha: f64, cfg: &TailConfig, tolerance: f64) -> RatioLimitEstimate {
    if let Err(msg) = cfg.validate() {
        return RatioLimitEstimate::inconclusive(alpha, cfg, tolerance, msg);
    }
    let xs = cfg.samples();
    let mut ratios: Vec<(f64, LogValue)> = Vec::with_capacity(xs.len());
    let mut zeros = 0usize;
    for &x in &xs {
        let (num, den) = match (evaluate_log(e, x + alpha), evaluate_log(e, x)) {
            (Ok(n), Ok(d)) => (n, d),
            (Err(u), _) | (_, Err(u)) => {
                return RatioLimitEstimate::inconclusive(alpha, cfg, tolerance, format!("undefined on the tail: {u}"));
            }
        };
        match num.div(den) {
            Some(r) => ratios.push((x, r)),
            None => zeros += 1,
        }
    }
    let quarter_start = xs.len() - xs.len() / 4;
    let tail: Vec<(f64, LogValue)> = ratios.iter().copied().filter(|(x, _)| *x >= xs[quarter_start]).collect();
    if tail.len() < 16 {
        return RatioLimitEstimate::inconclusive(alpha, cfg, tolerance, format!("g vanishes at {zeros} tail samples"));
    }
    let mut est = RatioLimitEstimate {
        alpha,
        status: RatioStatus::Inconclusive,
        tail_window: (cfg.start, cfg.end),
        residual: f64::INFINITY,
        tolerance,
        witness: None,
        notes: Vec::new(),
    };
    if zeros > 0 {
        est.notes.push(format!("{zeros} tail samples with g(x) = 0 skipped"));
    }

    let first_ln = tail[0].1.ln_abs;
    let last = tail[tail.len() - 1].1;
    let max_ln = tail.iter().map(|(_, r)| r.ln_abs).fold(f64::NEG_INFINITY, f64::max);
    let min_ln = tail.iter().map(|(_, r)| r.ln_abs).fold(f64::INFINITY, f64::min);

    if max_ln < tolerance.ln() && last.ln_abs <= first_ln - 1.0 {
        est.status = RatioStatus::Zero;
        est.residual = max_ln.exp();
        return est;
    }
    if min_ln > -tolerance.ln() && last.ln_abs >= first_ln + 1.0 {
        est.status = RatioStatus::Divergent;
        return est;
    }

    let value = last.to_f64();
    let residual = tail.iter().map(|(_, r)| (r.to_f64() - value).abs()).fold(0.0, f64::max);
    est.residual = residual;
    if residual <= tolerance {
        est.status = RatioStatus::Finite { value: Complex64::new(value, 0.0) };
        return est;
    }
    if let Some(w) = oscillation_witness(&tail, tolerance) {
        est.status = RatioStatus::NoLimit;
        est.witness = Some(w);
        return est;
    }
    est.notes.push(format!("last-quarter residual {residual:.3e} exceeds tolerance {tolerance:.1e}"));
    est
}

fn oscillation_witness(tail: &[(f64, LogValue)], tolerance: f64) -> Option<OscillationWitness> {
    const BLOCKS: usize = 4;
    let size = tail.len() / BLOCKS;
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut spreads = Vec::new();
    for b in 0..BLOCKS {
        let block = &tail[b * size..(b + 1) * size];
        let vals = block.iter().map(|&(x, r)| (x, r.to_f64())).filter(|(_, v)| v.is_finite());
        let lo = vals.clone().min_by(|a, b| a.1.total_cmp(&b.1))?;
        let hi = vals.max_by(|a, b| a.1.total_cmp(&b.1))?;
        spreads.push(hi.1 - lo.1);
        low.push(lo);
        high.push(hi);
    }
    let persistent = spreads.iter().all(|&s| s > 10.0 * tolerance) && spreads[BLOCKS - 1] >= 0.25 * spreads[0];
    persistent.then_some(OscillationWitness { low, high })
}

/// Closed-form rules relating ratio limits of transformed generators.
#[derive(Debug, Clone, Copy)]
pub enum RatioOp<'a> {
    /// `l_{T_a g} = l_g`.
    Translate(f64),
    /// `l_{M_β g}(α) = e^{2πiβα} l_g(α)`.
    Modulate(f64),
    /// `l_{D_r g}(α) = l_g(rα)`, re-queried on the generator.
    Dilate { r: f64, generator: &'a Expr, cfg: &'a TailConfig },
    /// `l_{fg}(α) = l_f(α) l_g(α)`, both at the same α.
    Product(&'a RatioLimitEstimate),
    /// `l_g(α+β) = l_g(α) l_g(β)`, the argument carrying `β`.
    Additivity(&'a RatioLimitEstimate),
}

pub fn ratio_limit_algebra(base: &RatioLimitEstimate, op: RatioOp<'_>) -> RatioLimitEstimate {
    let unusable = |est: &RatioLimitEstimate, why: &str| {
        let mut out = est.clone();
        out.status = RatioStatus::Inconclusive;
        out.witness = None;
        out.notes.push(why.to_string());
        out
    };
    let Some(v) = base.value() else {
        return unusable(base, "input ratio limit is not finite or zero");
    };
    let mut out = base.clone();
    match op {
        RatioOp::Translate(_) => out,
        RatioOp::Modulate(beta) => {
            if let RatioStatus::Finite { value } = base.status {
                out.status = RatioStatus::Finite { value: value * Complex64::from_polar(1.0, 2.0 * PI * beta * base.alpha) };
            }
            out
        }
        RatioOp::Dilate { r, generator, cfg } => {
            if r == 0.0 {
                return unusable(base, "dilation by zero");
            }
            let g = if r > 0.0 { generator.clone() } else { generator.reflect() };
            let mut q = ratio_limit_with_tolerance(&g, r.abs() * base.alpha, cfg, base.tolerance);
            q.alpha = base.alpha;
            q
        }
        RatioOp::Product(other) | RatioOp::Additivity(other) => {
            let Some(w) = other.value() else {
                return unusable(base, "second ratio limit is not finite or zero");
            };
            if let RatioOp::Product(_) = op {
                if other.alpha != base.alpha {
                    return unusable(base, "product needs both limits at the same alpha");
                }
            } else {
                out.alpha = base.alpha + other.alpha;
            }
            let p = v * w;
            out.residual = v.norm() * other.residual + w.norm() * base.residual + base.residual * other.residual;
            out.status = if matches!(base.status, RatioStatus::Zero) || matches!(other.status, RatioStatus::Zero) {
                RatioStatus::Zero
            } else {
                RatioStatus::Finite { value: p }
            };
            out
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AsymError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("ratio limit at alpha = {alpha} is {status}")]
    Inconclusive { alpha: f64, status: &'static str },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLaw {
    /// `a = |l(1)|`, clamped into `[0, 1]`.
    pub a: f64,
    pub max_deviation: f64,
    pub estimates: Vec<RatioLimitEstimate>,
}

/// Measures `|l(α)|` against `a^α` with `a = |l(1)|`.
pub fn power_law_check(e: &Expr, alphas: &[f64], cfg: &TailConfig) -> Result<PowerLaw, AsymError> {
    let usable = |est: RatioLimitEstimate| -> Result<RatioLimitEstimate, AsymError> {
        match est.status {
            RatioStatus::Finite { .. } | RatioStatus::Zero => Ok(est),
            RatioStatus::NoLimit => Err(AsymError::HypothesisViolated(format!("no ratio limit at alpha = {}", est.alpha))),
            RatioStatus::Divergent => Err(AsymError::Inconclusive { alpha: est.alpha, status: "divergent" }),
            RatioStatus::Inconclusive => Err(AsymError::Inconclusive { alpha: est.alpha, status: "inconclusive" }),
        }
    };
    if let Some(bad) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(AsymError::HypothesisViolated(format!("alphas must be positive, got {bad}")));
    }
    let estimates = alphas.iter().map(|&alpha| usable(ratio_limit(e, alpha, cfg))).collect::<Result<Vec<_>, _>>()?;
    let one = usable(ratio_limit(e, 1.0, cfg))?;
    let a = one.value().expect("usable estimates have values").norm();
    if a > 1.0 + one.tolerance {
        return Err(AsymError::HypothesisViolated(format!("|l(1)| = {a} exceeds 1, g is not square-integrable")));
    }
    let a = a.min(1.0);
    let max_deviation = estimates
        .iter()
        .map(|est| (est.value().expect("usable estimates have values").norm() - a.powf(est.alpha)).abs())
        .fold(0.0, f64::max);
    Ok(PowerLaw { a, max_deviation, estimates })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogDerivativeLimit {
    Finite { l: f64 },
    MinusInfinity,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDerivativeReport {
    pub limit: LogDerivativeLimit,
    pub tail_window: (f64, f64),
    pub residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LogDerivativeReport {
    /// The ratio limit implied by the log-derivative limit, `e^{lα}`, or 0
    /// for `−∞` and `α > 0`.
    pub fn predicted_ratio(&self, alpha: f64) -> Option<f64> {
        match self.limit {
            LogDerivativeLimit::Finite { l } => Some((l * alpha).exp()),
            LogDerivativeLimit::MinusInfinity if alpha > 0.0 => Some(0.0),
            _ => None,
        }
    }
}

pub fn log_derivative_limit(e: &Expr, cfg: &TailConfig) -> LogDerivativeReport {
    log_derivative_limit_with_tolerance(e, cfg, DEFAULT_TOLERANCE)
}

/// `g'/g` on the tail: finite when the last quarter stays within
/// `tol·max(1, |l|)` of its final value; `−∞` when it is negative, at least
/// halves across the last quarter and ends below `−1/tol`.
pub fn log_derivative_limit_with_tolerance(e: &Expr, cfg: &TailConfig, tolerance: f64) -> LogDerivativeReport {
    let mut report = LogDerivativeReport {
        limit: LogDerivativeLimit::Inconclusive,
        tail_window: (cfg.start, cfg.end),
        residual: f64::INFINITY,
        notes: Vec::new(),
    };
    if let Err(msg) = cfg.validate() {
        report.notes.push(msg);
        return report;
    }
    let d = log_derivative(e);
    let xs = cfg.samples();
    let mut tail = Vec::with_capacity(xs.len() / 4 + 1);
    for &x in &xs[xs.len() - xs.len() / 4..] {
        match evaluate(&d, x) {
            Ok(v) if v.is_finite() => tail.push(v),
            Ok(_) => {
                report.notes.push(format!("g'/g is not finite at x = {x}"));
                return report;
            }
            Err(u) => {
                report.notes.push(format!("undefined on the tail: {u}"));
                return report;
            }
        }
    }
    let last = *tail.last().expect("tails have at least 16 samples");
    let first = tail[0];
    let residual = tail.iter().map(|v| (v - last).abs()).fold(0.0, f64::max);
    if residual <= tolerance * last.abs().max(1.0) {
        report.limit = LogDerivativeLimit::Finite { l: last };
        report.residual = residual;
    } else if tail.iter().all(|&v| v < 0.0) && last <= 2.0 * first && last <= -1.0 / tolerance {
        report.limit = LogDerivativeLimit::MinusInfinity;
        report.residual = last;
    } else {
        report.residual = residual;
        report.notes.push(format!("g'/g has last-quarter spread {residual:.3e}"));
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum GermRelation {
    FSmaller,
    GSmaller,
    Comparable { limit: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GermOrder {
    #[serde(flatten)]
    pub relation: GermRelation,
    pub window: (f64, f64),
    /// `(window start, max ln|f/g| over the window)` per doubling window.
    pub evidence: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Threshold on `|f/g|` at the far end for `f_smaller`.
pub const GERM_SMALL: f64 = 1e-3;

/// Orders the germs of `f` and `g` on doubling windows of the tail.
///
/// `f_smaller` needs `|f/g| < 10⁻³` in the last window and window maxima that
/// never grow across the later half of the windows; `g_smaller` mirrors it.
pub fn germ_compare(f: &Expr, g: &Expr, cfg: &TailConfig) -> GermOrder {
    let mut out = GermOrder { relation: GermRelation::Inconclusive, window: (cfg.start, cfg.end), evidence: Vec::new(), notes: Vec::new() };
    if let Err(msg) = cfg.validate() {
        out.notes.push(msg);
        return out;
    }
    let xs = cfg.samples();
    let mut ratios = Vec::with_capacity(xs.len());
    let mut g_sign = 0i8;
    for &x in &xs {
        let (fv, gv) = match (evaluate_log(f, x), evaluate_log(g, x)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(u), _) | (_, Err(u)) => {
                out.notes.push(format!("undefined on the tail: {u}"));
                return out;
            }
        };
        if gv.sign == 0 || (g_sign != 0 && gv.sign != g_sign) {
            out.notes.push(format!("g vanishes or changes sign near x = {x}"));
            return out;
        }
        g_sign = gv.sign;
        ratios.push((x, fv.div(gv).expect("g is nonzero")));
    }

    let mut windows: Vec<(f64, f64, f64)> = Vec::new();
    let mut lo = cfg.start;
    let mut idx = 0;
    while idx < ratios.len() {
        let hi = 2.0 * lo;
        let mut max_ln = f64::NEG_INFINITY;
        let mut min_ln = f64::INFINITY;
        while idx < ratios.len() && ratios[idx].0 < hi {
            max_ln = max_ln.max(ratios[idx].1.ln_abs);
            min_ln = min_ln.min(ratios[idx].1.ln_abs);
            idx += 1;
        }
        if idx == ratios.len() - 1 {
            // The exact endpoint joins the last window.
            max_ln = max_ln.max(ratios[idx].1.ln_abs);
            min_ln = min_ln.min(ratios[idx].1.ln_abs);
            idx += 1;
        }
        if max_ln > f64::NEG_INFINITY || min_ln < f64::INFINITY {
            windows.push((lo, max_ln, min_ln));
        }
        lo = hi;
    }
    out.evidence = windows.iter().map(|&(x, m, _)| (x, m)).collect();
    if windows.len() < 4 {
        out.notes.push("fewer than four doubling windows".to_string());
        return out;
    }
    let later = &windows[windows.len() / 2..];
    let shrinking = later.windows(2).all(|w| w[1].1 <= w[0].1);
    let growing = later.windows(2).all(|w| w[1].2 >= w[0].2);
    let (_, last_max, last_min) = windows[windows.len() - 1];
    if last_max < GERM_SMALL.ln() && shrinking {
        out.relation = GermRelation::FSmaller;
        return out;
    }
    if -last_min < GERM_SMALL.ln() && growing {
        out.relation = GermRelation::GSmaller;
        return out;
    }
    let quarter = &ratios[ratios.len() - ratios.len() / 4..];
    let limit = quarter[quarter.len() - 1].1.to_f64();
    let residual = quarter.iter().map(|(_, r)| (r.to_f64() - limit).abs()).fold(0.0, f64::max);
    if limit != 0.0 && residual <= DEFAULT_TOLERANCE * limit.abs().max(1.0) {
        out.relation = GermRelation::Comparable { limit };
    } else {
        out.notes.push(format!("f/g has last-quarter spread {residual:.3e}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn rl(src: &str, alpha: f64) -> RatioLimitEstimate {
        ratio_limit(&parse(src).unwrap(), alpha, &TailConfig::asymptotic())
    }

    fn finite(est: &RatioLimitEstimate) -> f64 {
        match est.status {
            RatioStatus::Finite { value } => {
                assert_eq!(value.im, 0.0);
                value.re
            }
            other => panic!("expected finite, got {other:?} ({:?})", est.notes),
        }
    }

    #[test]
    fn ratio_limit_fixtures() {
        assert!((finite(&rl("1/(1+x^2)", 5.0)) - 1.0).abs() < 1e-3);
        assert!((finite(&rl("exp(-abs(x))", 1.0)) - (-1f64).exp()).abs() < 1e-3);
        assert!((finite(&rl("exp(-abs(x)^(1/2))", 2.0)) - 1.0).abs() < 1e-3);
        assert_eq!(rl("exp(-x^2)", 1.0).status, RatioStatus::Zero);
        let osc = rl("sin(2*pi*x)", 2f64.sqrt());
        assert_eq!(osc.status, RatioStatus::NoLimit);
        let w = osc.witness.unwrap();
        assert!(w.low.iter().zip(&w.high).all(|(l, h)| h.1 - l.1 > 10.0 * DEFAULT_TOLERANCE));
        assert_eq!(rl("exp(x^2)", 1.0).status, RatioStatus::Divergent);
        assert_eq!(rl("log(x - 2000)", 1.0).status, RatioStatus::Inconclusive);
    }

    #[test]
    fn small_but_constant_ratio_is_finite_not_zero() {
        let v = finite(&rl("exp(-x)", 10.0));
        assert!((v - (-10f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn algebra_rules() {
        let base = rl("exp(-x)", 1.0);
        let m = ratio_limit_algebra(&base, RatioOp::Modulate(0.25));
        let v = m.value().unwrap();
        assert!((v - Complex64::new(0.0, (-1f64).exp())).norm() < 1e-3);
        assert_eq!(ratio_limit_algebra(&base, RatioOp::Translate(7.0)).status, base.status);
        let two = rl("exp(-x)", 2.0);
        let three = ratio_limit_algebra(&base, RatioOp::Additivity(&two));
        assert_eq!(three.alpha, 3.0);
        assert!((three.value().unwrap().re - (-3f64).exp()).abs() < 1e-3);
        let g = parse("exp(-x)").unwrap();
        let cfg = TailConfig::asymptotic();
        let d = ratio_limit_algebra(&base, RatioOp::Dilate { r: 2.0, generator: &g, cfg: &cfg });
        assert!((d.value().unwrap().re - (-2f64).exp()).abs() < 1e-3);
        let osc = rl("sin(2*pi*x)", 2f64.sqrt());
        assert_eq!(ratio_limit_algebra(&osc, RatioOp::Translate(1.0)).status, RatioStatus::Inconclusive);
        let z = rl("exp(-x^2)", 1.0);
        assert_eq!(ratio_limit_algebra(&base, RatioOp::Product(&z)).status, RatioStatus::Zero);
    }

    #[test]
    fn power_law() {
        let cfg = TailConfig::asymptotic();
        let p = power_law_check(&parse("exp(-x)").unwrap(), &[0.5, 1.0, 2.0, 3.0], &cfg).unwrap();
        assert!((p.a - (-1f64).exp()).abs() < 1e-9);
        assert!(p.max_deviation < 1e-4);
        let p = power_law_check(&parse("exp(-x^2)").unwrap(), &[0.5, 1.0, 2.0], &cfg).unwrap();
        assert_eq!(p.a, 0.0);
        assert!(matches!(
            power_law_check(&parse("sin(2*pi*x)").unwrap(), &[2f64.sqrt()], &cfg),
            Err(AsymError::HypothesisViolated(_))
        ));
        assert!(power_law_check(&parse("exp(x)").unwrap(), &[1.0], &cfg).is_err());
    }

    #[test]
    fn log_derivative_route() {
        let cfg = TailConfig::asymptotic();
        let r = log_derivative_limit(&parse("exp(-x)").unwrap(), &cfg);
        assert_eq!(r.limit, LogDerivativeLimit::Finite { l: -1.0 });
        assert!((r.predicted_ratio(1.0).unwrap() - finite(&rl("exp(-x)", 1.0))).abs() < 1e-4);
        let r = log_derivative_limit(&parse("1/(1+x^2)").unwrap(), &cfg);
        assert!(matches!(r.limit, LogDerivativeLimit::Finite { l } if l.abs() < 1e-6));
        let r = log_derivative_limit(&parse("exp(-x^2)").unwrap(), &cfg);
        assert_eq!(r.limit, LogDerivativeLimit::MinusInfinity);
        assert_eq!(r.predicted_ratio(1.0), Some(0.0));
        let r = log_derivative_limit(&parse("2 + sin(x)").unwrap(), &cfg);
        assert_eq!(r.limit, LogDerivativeLimit::Inconclusive);
    }

    #[test]
    fn germ_orders() {
        let cfg = TailConfig::default();
        let x = parse("x").unwrap();
        let x2 = parse("x^2").unwrap();
        assert_eq!(germ_compare(&x, &x2, &cfg).relation, GermRelation::FSmaller);
        assert_eq!(germ_compare(&x2, &x, &cfg).relation, GermRelation::GSmaller);
        let e = parse("exp(-x)").unwrap();
        assert_eq!(germ_compare(&e, &e, &cfg).relation, GermRelation::Comparable { limit: 1.0 });
        let far = TailConfig { start: 1e3, end: 1e100, points: 8192 };
        let r = germ_compare(&parse("log(x)").unwrap(), &parse("x^(1/10)").unwrap(), &far);
        assert_eq!(r.relation, GermRelation::FSmaller);
        let near = TailConfig { start: 1e3, end: 1e12, points: 4096 };
        let r = germ_compare(&parse("log(x)").unwrap(), &parse("x^(1/10)").unwrap(), &near);
        assert_eq!(r.relation, GermRelation::Inconclusive);
        assert_eq!(germ_compare(&x, &parse("sin(x)").unwrap(), &cfg).relation, GermRelation::Inconclusive);
    }
}
