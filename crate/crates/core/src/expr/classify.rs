//! Syntactic and tail-sampled classification of generators.
//!
//! Every "ultimately" claim is relative to the configured window
//! `[start, end]`; reports carry the window start as the witness tail.

use serde::{Deserialize, Serialize};

use super::{evaluate, evaluate_log, Expr};

/// Geometric sampling window on the positive half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig { start: 50.0, end: 1e6, points: 4096 }
    }
}

impl TailConfig {
    /// Wider and denser window used by ratio-limit estimation.
    pub fn asymptotic() -> Self {
        TailConfig { start: 1e3, end: 1e9, points: 8192 }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.start > 0.0) {
            return Err(format!("tail start must be positive, got {}", self.start));
        }
        if !(self.end.is_finite() && self.end >= 2.0 * self.start) {
            return Err(format!("tail end must be at least twice the start, got [{}, {}]", self.start, self.end));
        }
        if self.points < 64 {
            return Err(format!("tail needs at least 64 points, got {}", self.points));
        }
        Ok(())
    }

    /// Geometrically spaced sample abscissae, `start` and `end` included.
    pub fn samples(&self) -> Vec<f64> {
        let ratio = (self.end / self.start).ln();
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.end
                } else {
                    self.start * (ratio * i as f64 / last).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }

    fn and(self, other: TriState) -> TriState {
        match (self, other) {
            (TriState::No, _) | (_, TriState::No) => TriState::No,
            (TriState::Yes, TriState::Yes) => TriState::Yes,
            _ => TriState::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DecayClass {
    SuperExponential,
    Exponential { rate: f64 },
    Subexponential,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub is_le: bool,
    pub is_extended_hardy: bool,
    /// Points in `[-start, start]` where some node stops being analytic.
    pub singular_points: Vec<f64>,
    /// Scan samples in `[-start, start]` where the generator is undefined.
    pub undefined_samples: usize,
    pub ultimately_positive: TriState,
    pub positive_witness: Option<f64>,
    pub ultimately_decreasing_abs: TriState,
    pub decreasing_witness: Option<f64>,
    pub decay_class: DecayClass,
    /// Decay of `x ↦ g(-x)` on the same window.
    pub decay_class_reflected: DecayClass,
    pub square_integrable: TriState,
    pub tail: TailConfig,
    pub notes: Vec<String>,
}

const SCAN_POINTS: usize = 20_001;

pub fn classify(e: &Expr, cfg: &TailConfig) -> ClassReport {
    let xs = cfg.samples();
    let mut notes = Vec::new();

    let is_le = is_le_tree(e, &xs);
    let is_extended_hardy = is_le || is_hardy_tree(e, &xs);

    let (singular_points, undefined_samples) = scan_singularities(e, cfg.start);
    if undefined_samples > 0 {
        notes.push(format!("{undefined_samples} scan samples undefined on [-{0}, {0}]", cfg.start));
    }

    let logs: Vec<_> = xs.iter().map(|&x| evaluate_log(e, x)).collect();
    let ultimately_positive = positive_state(&logs);
    let ultimately_decreasing_abs = decreasing_state(&logs);

    let decay_class = decay_of(&xs, &logs);
    let reflected = e.reflect();
    let logs_neg: Vec<_> = xs.iter().map(|&x| evaluate_log(&reflected, x)).collect();
    let decay_class_reflected = decay_of(&xs, &logs_neg);

    let local = if undefined_samples == 0 { TriState::Yes } else { TriState::Unknown };
    let square_integrable = tail_l2(&xs, &logs, decay_class)
        .and(tail_l2(&xs, &logs_neg, decay_class_reflected))
        .and(local);
    if square_integrable == TriState::Unknown {
        notes.push("square integrability not settled on this window".into());
    }

    ClassReport {
        is_le,
        is_extended_hardy,
        singular_points,
        undefined_samples,
        positive_witness: ultimately_positive.is_yes().then_some(cfg.start),
        ultimately_positive,
        decreasing_witness: ultimately_decreasing_abs.is_yes().then_some(cfg.start),
        ultimately_decreasing_abs,
        decay_class,
        decay_class_reflected,
        square_integrable,
        tail: *cfg,
        notes,
    }
}

/// LE syntax, with `abs(u)` admitted when `u` keeps one strict sign on the
/// tail (so `abs(u)` and `±u` share a germ).
fn is_le_tree(e: &Expr, xs: &[f64]) -> bool {
    match e {
        Expr::Sin(_) | Expr::Cos(_) => false,
        Expr::Abs(u) => is_le_tree(u, xs) && constant_sign(u, xs),
        _ => e.children().into_iter().all(|c| is_le_tree(c, xs)),
    }
}

/// As [`is_le_tree`] but also admits `sin`/`cos` of tail-bounded LE arguments.
fn is_hardy_tree(e: &Expr, xs: &[f64]) -> bool {
    match e {
        Expr::Sin(u) | Expr::Cos(u) => is_le_tree(u, xs) && bounded_on_tail(u, xs),
        Expr::Abs(u) => is_hardy_tree(u, xs) && constant_sign(u, xs),
        _ => e.children().into_iter().all(|c| is_hardy_tree(c, xs)),
    }
}

fn constant_sign(u: &Expr, xs: &[f64]) -> bool {
    let mut sign = 0i8;
    for &x in xs {
        match evaluate_log(u, x) {
            Ok(v) if v.sign != 0 && (sign == 0 || sign == v.sign) => sign = v.sign,
            _ => return false,
        }
    }
    true
}

/// Bounded means the running supremum has stopped growing: the supremum over
/// the last quarter exceeds that of the third quarter by at most 10⁻³ relative.
fn bounded_on_tail(u: &Expr, xs: &[f64]) -> bool {
    let mut mags = Vec::with_capacity(xs.len());
    for &x in xs {
        match evaluate(u, x) {
            Ok(v) if v.is_finite() => mags.push(v.abs()),
            _ => return false,
        }
    }
    let q = mags.len() / 4;
    let sup = |s: &[f64]| s.iter().cloned().fold(0.0, f64::max);
    let third = sup(&mags[2 * q..3 * q]);
    let fourth = sup(&mags[3 * q..]);
    fourth - third <= 1e-3 * (1.0 + fourth)
}

/// Arguments whose zeros break analyticity of the enclosing node.
fn singular_arguments(e: &Expr) -> Vec<&Expr> {
    let mut out = Vec::new();
    e.visit(&mut |node| match node {
        Expr::Abs(u) | Expr::Log(u) | Expr::Root(_, u) => out.push(&**u),
        Expr::Div(_, d) => out.push(&**d),
        Expr::Pow(u, r) if !(r.is_integer() && *r.numer() >= 0) => out.push(&**u),
        _ => {}
    });
    out
}

fn scan_singularities(e: &Expr, half_width: f64) -> (Vec<f64>, usize) {
    let step = 2.0 * half_width / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|j| -half_width + j as f64 * step).collect();
    let mut points: Vec<f64> = Vec::new();
    for u in singular_arguments(e) {
        if u.is_constant() {
            continue;
        }
        let vals: Vec<Option<f64>> = grid.iter().map(|&x| evaluate(u, x).ok()).collect();
        for j in 0..grid.len() {
            match vals[j] {
                Some(v) if v == 0.0 => points.push(grid[j]),
                Some(v) => {
                    if let Some(Some(w)) = vals.get(j + 1) {
                        if *w != 0.0 && v.signum() != w.signum() {
                            if let Some(z) = bisect(u, grid[j], grid[j + 1]) {
                                points.push(z);
                            }
                        }
                    }
                }
                None => {}
            }
        }
    }
    points.sort_by(|a, b| a.total_cmp(b));
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    let undefined = grid
        .iter()
        .filter(|&&x| {
            evaluate(e, x).is_err() && points.iter().all(|p| (x - p).abs() > 1e-9 * (1.0 + p.abs()))
        })
        .count();
    (points, undefined)
}

/// Sign-change root of `u` in `[a, b]`; `None` when the change is a pole
/// jump rather than a zero (|u| does not shrink).
fn bisect(u: &Expr, mut a: f64, mut b: f64) -> Option<f64> {
    let fa0 = evaluate(u, a).ok()?;
    let mut fa = fa0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = evaluate(u, m).ok()?;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let m = 0.5 * (a + b);
    let fm = evaluate(u, m).ok()?;
    (fm.abs() <= 1e-6 * (1.0 + fa0.abs())).then_some(m)
}

type LogSamples = [Result<super::LogValue, super::Undefined>];

/// Yes only if every sample is strictly positive; a non-positive sample in
/// the back half gives No, one confined to the front half gives Unknown.
fn positive_state(logs: &LogSamples) -> TriState {
    let half = logs.len() / 2;
    let mut state = TriState::Yes;
    for (i, v) in logs.iter().enumerate() {
        match v {
            Ok(v) if v.sign > 0 => {}
            Ok(_) if i >= half => return TriState::No,
            _ => state = TriState::Unknown,
        }
    }
    state
}

fn decreasing_state(logs: &LogSamples) -> TriState {
    let half = logs.len() / 2;
    let mut state = TriState::Yes;
    for i in 1..logs.len() {
        match (&logs[i - 1], &logs[i]) {
            (Ok(a), Ok(b)) if a.sign != 0 && b.sign != 0 => {
                if b.ln_abs > a.ln_abs + 1e-13 * (1.0 + a.ln_abs.abs()) {
                    if i >= half {
                        return TriState::No;
                    }
                    state = TriState::Unknown;
                }
            }
            (Ok(a), Ok(b)) if a.sign == 0 && b.sign == 0 => {}
            (Ok(a), Ok(b)) if a.sign == 0 && b.sign != 0 && i >= half => return TriState::No,
            _ => state = TriState::Unknown,
        }
    }
    state
}

fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Finite `(x, ln|g(x)|)` pairs grouped into doubling windows.
fn doubling_windows(xs: &[f64], logs: &LogSamples) -> Vec<Vec<(f64, f64)>> {
    let x0 = xs[0];
    let mut windows: Vec<Vec<(f64, f64)>> = Vec::new();
    for (&x, v) in xs.iter().zip(logs) {
        let k = (x / x0).log2().floor() as usize;
        if windows.len() <= k {
            windows.resize(k + 1, Vec::new());
        }
        if let Ok(v) = v {
            if v.sign != 0 && v.ln_abs.is_finite() {
                windows[k].push((x, v.ln_abs));
            }
        }
    }
    // The final window is usually partial; drop it when it is thin.
    if windows.len() > 2 && windows.last().map_or(0, Vec::len) < windows[windows.len() - 2].len() / 2 {
        windows.pop();
    }
    windows.retain(|w| w.len() >= 4);
    windows
}

/// Least-squares slope of `ln|g|` on the first and last doubling windows.
fn decay_of(xs: &[f64], logs: &LogSamples) -> DecayClass {
    let windows = doubling_windows(xs, logs);
    if windows.len() < 2 {
        return DecayClass::None;
    }
    let first = &windows[0];
    let last = &windows[windows.len() - 1];
    let mean = |w: &[(f64, f64)]| w.iter().map(|p| p.1).sum::<f64>() / w.len() as f64;
    let decreased = mean(last) < mean(first) - 1.0;
    let (Some(s0), Some(s1)) = (slope(first), slope(last)) else {
        return DecayClass::None;
    };
    if s0 < 0.0 && s1 < 0.0 {
        let r = s1 / s0;
        if r > 1.5 {
            return DecayClass::SuperExponential;
        }
        if r >= 1.0 / 1.5 {
            return DecayClass::Exponential { rate: -s1 };
        }
    }
    if decreased {
        DecayClass::Subexponential
    } else {
        DecayClass::None
    }
}

/// Square integrability of one tail given its decay class. Sub-exponential
/// tails are judged by the log-log slope on the last window against -1/2.
fn tail_l2(xs: &[f64], logs: &LogSamples, class: DecayClass) -> TriState {
    if logs.iter().any(|v| v.is_err()) {
        return TriState::Unknown;
    }
    match class {
        DecayClass::SuperExponential | DecayClass::Exponential { .. } => TriState::Yes,
        DecayClass::None => TriState::No,
        DecayClass::Subexponential => {
            let windows = doubling_windows(xs, logs);
            let Some(last) = windows.last() else { return TriState::Unknown };
            let loglog: Vec<(f64, f64)> = last.iter().map(|&(x, y)| (x.ln(), y)).collect();
            match slope(&loglog) {
                Some(p) if p < -0.55 => TriState::Yes,
                Some(p) if p > -0.45 => TriState::No,
                _ => TriState::Unknown,
            }
        }
    }
}
