//! Decides which known independence result covers a generator and a point
//! set, and records every machine-checked hypothesis as a predicate.
//!
//! Rules run in a fixed order and the first rule whose predicates all pass
//! wins. Within a rule, evaluation stops at the first predicate that does
//! not pass, so failure reports are short and routing stays cheap.

use std::cell::{OnceCell, RefCell};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asym::{log_derivative_limit, ratio_limit, LogDerivativeLimit, RatioLimitEstimate, RatioStatus};
use crate::dioph::{difference_condition, lattice_membership, q_independence, DifferenceCondition, LatticeMembership, RelationMethod};
use crate::expr::{as_polynomial, classify, evaluate, evaluate_log, ClassReport, DecayClass, Expr, TailConfig, TriState};
use crate::gram::{gram_report, GramReport, LambdaSet, Verdict};
use crate::signal::{sample, Grid, SignalError};

/// Variant names double as the identifiers in certificate output.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1_support,
    R2_hermite,
    R3_three_points,
    /// Never emitted: the perturbation results need an unspecified `ε`.
    R4_R5_perturbation,
    R6_lattice,
    T2_4_hardy_LE,
    /// Never emitted: `lim h/f = 0` over a Hardy field is not decidable here.
    T2_7_perturbed_hardy,
    T2_9_finite_singularities,
    T3_9a_ratio_zero,
    T3_9b_ratio_diffcond,
    C3_10_five_points,
    T4_2_superexp,
    T5_2_positive_qindep,
    T5_6_four_point_positive,
}

/// Evaluation order: exact and cheap first, then numerical rules whose
/// hypotheses are narrower than the broad Hardy-field rules.
pub const RULE_ORDER: [RuleId; 12] = [
    RuleId::R3_three_points,
    RuleId::R6_lattice,
    RuleId::R2_hermite,
    RuleId::R1_support,
    RuleId::T4_2_superexp,
    RuleId::T5_2_positive_qindep,
    RuleId::T3_9a_ratio_zero,
    RuleId::T3_9b_ratio_diffcond,
    RuleId::C3_10_five_points,
    RuleId::T5_6_four_point_positive,
    RuleId::T2_4_hardy_LE,
    RuleId::T2_9_finite_singularities,
];

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RULE_ORDER
            .iter()
            .chain(&[RuleId::R4_R5_perturbation, RuleId::T2_7_perturbed_hardy])
            .find(|r| r.to_string() == s)
            .copied()
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Exact,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Predicate {
    pub name: String,
    pub outcome: Outcome,
    pub method: Confidence,
    pub evidence: Value,
}

impl Predicate {
    fn new(name: &str, outcome: Outcome, method: Confidence, evidence: Value) -> Predicate {
        Predicate { name: name.to_string(), outcome, method, evidence }
    }

    fn from_bool(name: &str, ok: bool, method: Confidence, evidence: Value) -> Predicate {
        Predicate::new(name, if ok { Outcome::Pass } else { Outcome::Fail }, method, evidence)
    }

    fn from_tri(name: &str, t: TriState, evidence: Value) -> Predicate {
        let outcome = match t {
            TriState::Yes => Outcome::Pass,
            TriState::No => Outcome::Fail,
            TriState::Unknown => Outcome::Inconclusive,
        };
        Predicate::new(name, outcome, Confidence::Numerical, evidence)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub rule: RuleId,
    pub predicates: Vec<Predicate>,
    pub confidence: Confidence,
    pub narrative: String,
    pub citations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleFailure {
    pub rule: RuleId,
    pub predicates: Vec<Predicate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoRule {
    pub rule: Option<RuleId>,
    pub failures: Vec<RuleFailure>,
    pub narrative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RouteResult {
    Certified(Certificate),
    NoRule(NoRule),
}

impl RouteResult {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            RouteResult::Certified(c) => Some(c),
            RouteResult::NoRule(_) => None,
        }
    }
}

/// How the exponential-decay rule reads its decay hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayHypothesis {
    /// `e^{tx} g ∈ L¹` for all `t > 0`, read off the decay class.
    #[default]
    WeightedL1,
    /// `e^{tx} g(x) → 0` for all `t > 0`, checked at sampled weights.
    WeightedLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouterConfig {
    /// Window for classification (positivity, monotonicity, decay).
    pub tail: TailConfig,
    /// Window for ratio-limit estimation.
    pub ratio_tail: TailConfig,
    /// Positive shifts at which a ratio limit must exist.
    pub ratio_alphas: Vec<f64>,
    /// Shifts of either sign used where limits are needed on all of R.
    pub full_line_alphas: Vec<f64>,
    /// Fourier transform of the generator, when known in closed form.
    pub ghat: Option<Expr>,
    pub relation_bound: u64,
    pub decay_hypothesis: DecayHypothesis,
    /// Accept a bounded logarithmic derivative in place of `|g|` decreasing.
    pub bounded_ratio_variant: bool,
}

impl Default for RouterConfig {
    fn default() -> Self {
        RouterConfig {
            tail: TailConfig::default(),
            ratio_tail: TailConfig::asymptotic(),
            ratio_alphas: vec![0.5, 1.0, 2.0, 3.0],
            full_line_alphas: vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0],
            ghat: None,
            relation_bound: 1000,
            decay_hypothesis: DecayHypothesis::WeightedL1,
            bounded_ratio_variant: false,
        }
    }
}

struct Ctx<'a> {
    g: &'a Expr,
    lambda: &'a LambdaSet,
    cfg: &'a RouterConfig,
    class: OnceCell<ClassReport>,
    class_reflected: OnceCell<ClassReport>,
    ratios: RefCell<Vec<(bool, f64, RatioLimitEstimate)>>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Expr, lambda: &'a LambdaSet, cfg: &'a RouterConfig) -> Self {
        Ctx { g, lambda, cfg, class: OnceCell::new(), class_reflected: OnceCell::new(), ratios: RefCell::new(Vec::new()) }
    }

    fn class(&self) -> &ClassReport {
        self.class.get_or_init(|| classify(self.g, &self.cfg.tail))
    }

    fn class_reflected(&self) -> &ClassReport {
        self.class_reflected.get_or_init(|| classify(&self.g.reflect(), &self.cfg.tail))
    }

    /// Ratio limit of `g` (or of the supplied transform) at `alpha`, memoized.
    fn ratio(&self, of_transform: bool, alpha: f64) -> Option<RatioLimitEstimate> {
        if let Some((_, _, est)) = self.ratios.borrow().iter().find(|(t, a, _)| *t == of_transform && *a == alpha) {
            return Some(est.clone());
        }
        let e = if of_transform { self.cfg.ghat.as_ref()? } else { self.g };
        let est = ratio_limit(e, alpha, &self.cfg.ratio_tail);
        self.ratios.borrow_mut().push((of_transform, alpha, est.clone()));
        Some(est)
    }
}

/// Routes `(g, Λ)` through the rules in [`RULE_ORDER`].
pub fn route(g: &Expr, lambda: &LambdaSet, cfg: &RouterConfig) -> RouteResult {
    let ctx = Ctx::new(g, lambda, cfg);
    let mut failures = Vec::new();
    for rule in RULE_ORDER {
        let predicates = check_rule(rule, &ctx);
        if predicates.iter().all(|p| p.outcome == Outcome::Pass) {
            return RouteResult::Certified(certify(rule, predicates, lambda));
        }
        failures.push(RuleFailure { rule, predicates });
    }
    RouteResult::NoRule(NoRule {
        rule: None,
        failures,
        narrative: "no rule applies: no result's hypotheses could all be machine-verified for this generator and point set"
            .to_string(),
    })
}

/// Re-evaluates the predicates of `rule` on `(g, Λ)`.
pub fn replay(rule: RuleId, g: &Expr, lambda: &LambdaSet, cfg: &RouterConfig) -> Vec<Predicate> {
    check_rule(rule, &Ctx::new(g, lambda, cfg))
}

/// True when replaying the certificate reproduces its predicates, all passing.
pub fn replays(cert: &Certificate, g: &Expr, lambda: &LambdaSet, cfg: &RouterConfig) -> bool {
    let again = replay(cert.rule, g, lambda, cfg);
    again == cert.predicates && again.iter().all(|p| p.outcome == Outcome::Pass)
}

/// Numerical cross-check of a certificate on a grid.
///
/// A `dependent` verdict contradicts a certified conclusion, so it is flagged
/// loudly as a discretization artifact rather than silently returned.
pub fn corroborate(cert: &Certificate, g: &Expr, lambda: &LambdaSet, grid: Grid) -> Result<GramReport, SignalError> {
    let sampled = sample(g, grid)?;
    let mut report = gram_report(&sampled.signal, lambda, None)?;
    if report.verdict == Verdict::Dependent {
        let msg = format!(
            "DIAGNOSTIC: {} certifies independence but the grid test says dependent; this is almost surely a grid artifact (T = {}, n = {})",
            cert.rule, grid.half_width, grid.count
        );
        log::warn!("{msg}");
        report.notes.push(msg);
    }
    Ok(report)
}

fn certify(rule: RuleId, predicates: Vec<Predicate>, lambda: &LambdaSet) -> Certificate {
    let confidence = if predicates.iter().all(|p| p.method == Confidence::Exact) { Confidence::Exact } else { Confidence::Numerical };
    let (statement, citation) = describe(rule);
    let mut narrative = format!(
        "The Gabor system of g over these {} points is linearly independent: {statement}",
        lambda.len()
    );
    if rule == RuleId::C3_10_five_points {
        narrative.push_str(" Ratio limits were only checked on the sampled shifts recorded as evidence, not at every real shift.");
    }
    narrative.push_str(
        " The conclusion is also stable under sufficiently small L2 perturbations of g and small moves of the points; that margin is existential and is not certified here.",
    );
    Certificate { rule, predicates, confidence, narrative, citations: vec![citation.to_string()] }
}

fn describe(rule: RuleId) -> (&'static str, &'static str) {
    match rule {
        RuleId::R1_support => ("g vanishes on a half-line.", "classical result for half-line supported generators"),
        RuleId::R2_hermite => ("g is a nonzero polynomial times a Gaussian, for any number of points.", "classical result for polynomial-Gaussian generators"),
        RuleId::R3_three_points => ("any system of at most three time-frequency shifts of a nonzero L2 function is independent.", "classical result for at most three points"),
        RuleId::R4_R5_perturbation => ("independence persists under small perturbations.", "classical perturbation results"),
        RuleId::R6_lattice => ("the points lie in a translate of a full-rank lattice, for any nonzero L2 generator.", "Linnell's lattice theorem"),
        RuleId::T2_4_hardy_LE => ("g is a square-integrable logarithmico-exponential function (or bounded-argument trigonometric extension), whose germs form a translation-closed Hardy field.", "Hardy-field theorem for ultimately analytic generators"),
        RuleId::T2_7_perturbed_hardy => ("g is a Hardy-field function plus a relatively negligible perturbation.", "perturbed Hardy-field theorem"),
        RuleId::T2_9_finite_singularities => ("g is square-integrable and analytic off a finite nonempty set of points where it fails to be smooth.", "finite-singularity theorem"),
        RuleId::T3_9a_ratio_zero => ("g has ratio limits and l(1) = 0, for arbitrary points.", "ratio-limit theorem, vanishing case"),
        RuleId::T3_9b_ratio_diffcond => ("g has ratio limits with l(1) != 0 and some frequency occurs exactly once among the points.", "ratio-limit theorem, difference-condition case"),
        RuleId::C3_10_five_points => ("at most five points and both g and its Fourier transform have ratio limits.", "five-point ratio-limit corollary"),
        RuleId::T4_2_superexp => ("g decays faster than every exponential on the right tail and |g| is ultimately decreasing (or a unique leftmost time shift exists).", "super-exponential decay theorem"),
        RuleId::T5_2_positive_qindep => ("g is ultimately positive and the frequency differences are linearly independent over Q.", "positive-generator theorem with Q-independent frequencies"),
        RuleId::T5_6_four_point_positive => ("four points, with g(x) and g(-x) ultimately positive and ultimately decreasing.", "four-point theorem for positive decreasing generators"),
    }
}

fn check_rule(rule: RuleId, ctx: &Ctx<'_>) -> Vec<Predicate> {
    let steps: Vec<fn(&Ctx<'_>) -> Predicate> = match rule {
        RuleId::R3_three_points => vec![|c| card_at_most(c, 3)],
        RuleId::R6_lattice => vec![lambda_in_lattice],
        RuleId::R2_hermite => vec![hermite_form],
        RuleId::R1_support => vec![generator_nonzero, supported_on_half_line, square_integrable],
        RuleId::T4_2_superexp => vec![generator_nonzero, square_integrable, super_exponential_decay, decreasing_or_leftmost],
        RuleId::T5_2_positive_qindep => vec![beta_differences_q_independent, generator_nonzero, square_integrable, ultimately_positive],
        RuleId::T3_9a_ratio_zero => vec![generator_nonzero, square_integrable, ratio_limits_exist, ratio_limit_at_one_zero],
        RuleId::T3_9b_ratio_diffcond => {
            vec![beta_difference_condition, generator_nonzero, square_integrable, ratio_limits_exist, ratio_limit_at_one_nonzero]
        }
        RuleId::C3_10_five_points => {
            vec![|c| card_at_most(c, 5), generator_nonzero, square_integrable, ratio_limits_full_line, transform_ratio_limits_full_line]
        }
        RuleId::T5_6_four_point_positive => vec![
            |c| card_exactly(c, 4),
            generator_nonzero,
            square_integrable,
            ultimately_positive,
            abs_ultimately_decreasing,
            reflected_ultimately_positive,
            reflected_ultimately_decreasing,
        ],
        RuleId::T2_4_hardy_LE => vec![le_or_bounded_trig, generator_nonzero, square_integrable],
        RuleId::T2_9_finite_singularities => vec![generator_nonzero, square_integrable, nonsmooth_finite_singular_set],
        RuleId::R4_R5_perturbation | RuleId::T2_7_perturbed_hardy => {
            return vec![Predicate::new(
                "report_only",
                Outcome::Inconclusive,
                Confidence::Exact,
                json!("existential perturbation margins are not machine-checkable"),
            )]
        }
    };
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let p = step(ctx);
        let pass = p.outcome == Outcome::Pass;
        out.push(p);
        if !pass {
            break;
        }
    }
    out
}

fn exactness(exact: bool) -> Confidence {
    if exact {
        Confidence::Exact
    } else {
        Confidence::Numerical
    }
}

fn card_at_most(ctx: &Ctx<'_>, limit: usize) -> Predicate {
    let n = ctx.lambda.len();
    Predicate::from_bool(&format!("card_at_most_{limit}"), n <= limit, Confidence::Exact, json!({ "card": n }))
}

fn card_exactly(ctx: &Ctx<'_>, want: usize) -> Predicate {
    let n = ctx.lambda.len();
    Predicate::from_bool(&format!("card_exactly_{want}"), n == want, Confidence::Exact, json!({ "card": n }))
}

fn lambda_in_lattice(ctx: &Ctx<'_>) -> Predicate {
    let m = lattice_membership(ctx.lambda);
    let outcome = match m {
        LatticeMembership::InLattice { .. } => Outcome::Pass,
        LatticeMembership::NotInLattice { .. } => Outcome::Fail,
        LatticeMembership::Inconclusive { .. } => Outcome::Inconclusive,
    };
    let method = exactness(!matches!(m, LatticeMembership::Inconclusive { .. }));
    Predicate::new("lambda_in_lattice_translate", outcome, method, serde_json::to_value(&m).expect("serializable"))
}

/// `g = p(x) e^{q(x)}` with `p` a nonzero polynomial and `q` quadratic with
/// negative leading coefficient. Translation and dilation carry such `g` to
/// `p̃(x) e^{-x²}`, and both act on arbitrary point sets.
fn hermite_form(ctx: &Ctx<'_>) -> Predicate {
    let mut poly = vec![1.0];
    let mut exponent = vec![0.0];
    let ok = hermite_factors(ctx.g, &mut poly, &mut exponent);
    let exponent_ok = exponent.len() == 3 && exponent[2] < 0.0;
    let poly_ok = poly.iter().any(|c| *c != 0.0);
    Predicate::from_bool(
        "polynomial_times_gaussian",
        ok && exponent_ok && poly_ok,
        Confidence::Exact,
        if ok { json!({ "polynomial": poly, "exponent": exponent }) } else { json!("not a product of a polynomial and exp(quadratic)") },
    )
}

fn hermite_factors(e: &Expr, poly: &mut Vec<f64>, exponent: &mut Vec<f64>) -> bool {
    match e {
        Expr::Mul(a, b) => hermite_factors(a, poly, exponent) && hermite_factors(b, poly, exponent),
        Expr::Neg(a) => {
            poly.iter_mut().for_each(|c| *c = -*c);
            hermite_factors(a, poly, exponent)
        }
        Expr::Div(a, b) => match as_polynomial(b) {
            Some(q) if q.degree() == Some(0) => {
                let c = q.leading();
                poly.iter_mut().for_each(|v| *v /= c);
                hermite_factors(a, poly, exponent)
            }
            _ => false,
        },
        Expr::Exp(a) => match as_polynomial(a) {
            Some(q) if q.0.len() <= 3 => {
                add_into(exponent, &q.0);
                true
            }
            _ => false,
        },
        other => match as_polynomial(other) {
            Some(q) => {
                *poly = mul_poly(poly, &q.0);
                true
            }
            None => false,
        },
    }
}

fn add_into(acc: &mut Vec<f64>, q: &[f64]) {
    if acc.len() < q.len() {
        acc.resize(q.len(), 0.0);
    }
    for (a, b) in acc.iter_mut().zip(q) {
        *a += b;
    }
    while acc.len() > 1 && *acc.last().unwrap() == 0.0 {
        acc.pop();
    }
}

fn mul_poly(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Nonzero at some point of a coarse scan or of the tail.
fn generator_nonzero(ctx: &Ctx<'_>) -> Predicate {
    let scan = (0..=2000).map(|i| -10.0 + 0.01 * i as f64);
    let witness = scan.chain(ctx.cfg.tail.samples()).find(|&x| matches!(evaluate(ctx.g, x), Ok(v) if v != 0.0));
    Predicate::from_bool("generator_nonzero", witness.is_some(), Confidence::Numerical, json!({ "witness_x": witness }))
}

fn square_integrable(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    let half_line = half_line_side(ctx);
    // A side on which g vanishes identically contributes nothing.
    let (state, note) = match half_line {
        Some("left") => (tail_state(c.decay_class, c.square_integrable), "left side vanishes"),
        Some("right") => (tail_state(c.decay_class_reflected, c.square_integrable), "right side vanishes"),
        _ => (c.square_integrable, "both tails"),
    };
    Predicate::from_tri(
        "square_integrable",
        state,
        json!({
            "decay_class": c.decay_class,
            "decay_class_reflected": c.decay_class_reflected,
            "tail": [c.tail.start, c.tail.end],
            "scope": note,
        }),
    )
}

fn tail_state(class: DecayClass, combined: TriState) -> TriState {
    match class {
        DecayClass::SuperExponential | DecayClass::Exponential { .. } => TriState::Yes,
        _ => combined,
    }
}

/// `Some("left")` when `g` is exactly zero on every negative tail sample,
/// `Some("right")` symmetrically.
fn half_line_side(ctx: &Ctx<'_>) -> Option<&'static str> {
    let xs = ctx.cfg.tail.samples();
    let zero_at = |sign: f64| xs.iter().all(|&x| matches!(evaluate_log(ctx.g, sign * x), Ok(v) if v.is_zero()));
    if zero_at(-1.0) {
        Some("left")
    } else if zero_at(1.0) {
        Some("right")
    } else {
        None
    }
}

fn supported_on_half_line(ctx: &Ctx<'_>) -> Predicate {
    let side = half_line_side(ctx);
    Predicate::from_bool(
        "supported_on_half_line",
        side.is_some(),
        Confidence::Numerical,
        json!({ "vanishing_side": side, "tail": [ctx.cfg.tail.start, ctx.cfg.tail.end] }),
    )
}

fn super_exponential_decay(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    match ctx.cfg.decay_hypothesis {
        DecayHypothesis::WeightedL1 => Predicate::from_bool(
            "exponentially_weighted_integrable",
            c.decay_class == DecayClass::SuperExponential,
            Confidence::Numerical,
            json!({ "decay_class": c.decay_class }),
        ),
        DecayHypothesis::WeightedLimit => {
            // ln|g(x)| + t·x must head to -∞ for each sampled weight t.
            let xs = ctx.cfg.tail.samples();
            let (mid, end) = (xs[xs.len() / 2], xs[xs.len() - 1]);
            let lg = |x: f64| evaluate_log(ctx.g, x).map(|v| v.ln_abs).unwrap_or(f64::NAN);
            let weights = [1.0, 10.0, 100.0];
            let ok = weights.iter().all(|t| {
                let (a, b) = (lg(mid) + t * mid, lg(end) + t * end);
                b < a && b < -50.0
            });
            Predicate::from_bool(
                "exponentially_weighted_limit_zero",
                ok,
                Confidence::Numerical,
                json!({ "weights": weights, "ln_abs_g_end": lg(end) }),
            )
        }
    }
}

fn decreasing_or_leftmost(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    if c.ultimately_decreasing_abs == TriState::Yes {
        return Predicate::new(
            "abs_ultimately_decreasing_or_unique_leftmost",
            Outcome::Pass,
            Confidence::Numerical,
            json!({ "via": "abs_ultimately_decreasing", "witness_tail": c.decreasing_witness }),
        );
    }
    if ctx.cfg.bounded_ratio_variant {
        let r = log_derivative_limit(ctx.g, &ctx.cfg.ratio_tail);
        if let LogDerivativeLimit::Finite { l } = r.limit {
            return Predicate::new(
                "abs_ultimately_decreasing_or_unique_leftmost",
                Outcome::Pass,
                Confidence::Numerical,
                json!({ "via": "bounded_log_derivative", "limit": l }),
            );
        }
    }
    let pts = ctx.lambda.points();
    let leftmost = (0..pts.len()).find(|&k| {
        pts.iter().enumerate().all(|(j, q)| j == k || q.alpha.numeric_cmp(&pts[k].alpha) == std::cmp::Ordering::Greater)
    });
    let gaps_exact = pts.iter().all(|p| p.alpha.is_exact());
    match leftmost {
        Some(k) => Predicate::new(
            "abs_ultimately_decreasing_or_unique_leftmost",
            Outcome::Pass,
            exactness(gaps_exact),
            json!({ "via": "unique_leftmost_time_shift", "k0": k + 1 }),
        ),
        None => Predicate::from_tri(
            "abs_ultimately_decreasing_or_unique_leftmost",
            if c.ultimately_decreasing_abs == TriState::No { TriState::No } else { TriState::Unknown },
            json!({ "abs_ultimately_decreasing": c.ultimately_decreasing_abs, "unique_leftmost": false }),
        ),
    }
}

fn ultimately_positive(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    Predicate::from_tri("ultimately_positive", c.ultimately_positive, json!({ "witness_tail": c.positive_witness }))
}

fn abs_ultimately_decreasing(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    Predicate::from_tri("ultimately_decreasing", c.ultimately_decreasing_abs, json!({ "witness_tail": c.decreasing_witness }))
}

fn reflected_ultimately_positive(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class_reflected();
    Predicate::from_tri("reflected_ultimately_positive", c.ultimately_positive, json!({ "witness_tail": c.positive_witness }))
}

fn reflected_ultimately_decreasing(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class_reflected();
    Predicate::from_tri("reflected_ultimately_decreasing", c.ultimately_decreasing_abs, json!({ "witness_tail": c.decreasing_witness }))
}

/// The differences `β_k − β_1` are Q-independent. After moving the first
/// point to the origin these are the frequencies the positivity argument
/// needs; the Z-span of the differences does not depend on the base point.
fn beta_differences_q_independent(ctx: &Ctx<'_>) -> Predicate {
    let pts = ctx.lambda.points();
    let name = "beta_differences_q_independent";
    if pts.len() == 1 {
        return Predicate::new(name, Outcome::Pass, Confidence::Exact, json!({ "differences": [] }));
    }
    if pts.len() > 9 {
        return Predicate::new(name, Outcome::Inconclusive, Confidence::Numerical, json!("more than 8 differences"));
    }
    let diffs: Vec<_> = pts[1..].iter().map(|p| p.beta.sub(&pts[0].beta)).collect();
    let report = q_independence(&diffs, ctx.cfg.relation_bound);
    let exact = report.method == RelationMethod::Exact;
    let outcome = if report.proves_independence() {
        Outcome::Pass
    } else if report.relation().is_some() {
        Outcome::Fail
    } else {
        Outcome::Inconclusive
    };
    let shown: Vec<String> = diffs.iter().map(ToString::to_string).collect();
    Predicate::new(name, outcome, exactness(exact), json!({ "differences": shown, "report": report }))
}

fn beta_difference_condition(ctx: &Ctx<'_>) -> Predicate {
    let d = difference_condition(ctx.lambda);
    let exact = ctx.lambda.points().iter().all(|p| p.beta.is_exact());
    Predicate::from_bool(
        "difference_condition_second_variable",
        matches!(d, DifferenceCondition::Holds { .. }),
        exactness(exact),
        serde_json::to_value(d).expect("serializable"),
    )
}

fn ratio_evidence(est: &RatioLimitEstimate) -> Value {
    json!({ "alpha": est.alpha, "status": est.status, "residual": est.residual, "window": est.tail_window })
}

fn ratio_limits_exist(ctx: &Ctx<'_>) -> Predicate {
    let mut evidence = Vec::new();
    let mut outcome = Outcome::Pass;
    for &a in &ctx.cfg.ratio_alphas {
        let est = ctx.ratio(false, a).expect("generator ratios always exist");
        evidence.push(ratio_evidence(&est));
        match est.status {
            RatioStatus::Finite { .. } | RatioStatus::Zero => {}
            RatioStatus::NoLimit | RatioStatus::Divergent => outcome = Outcome::Fail,
            RatioStatus::Inconclusive => {
                if outcome == Outcome::Pass {
                    outcome = Outcome::Inconclusive;
                }
            }
        }
    }
    Predicate::new("ratio_limits_exist", outcome, Confidence::Numerical, Value::Array(evidence))
}

fn ratio_limit_at_one(ctx: &Ctx<'_>, want_zero: bool) -> Predicate {
    let est = ctx.ratio(false, 1.0).expect("generator ratios always exist");
    let outcome = match (est.status, want_zero) {
        (RatioStatus::Zero, true) => Outcome::Pass,
        (RatioStatus::Finite { value }, false) if value.norm() > est.tolerance => Outcome::Pass,
        (RatioStatus::Zero | RatioStatus::Finite { .. }, _) => Outcome::Fail,
        _ => Outcome::Inconclusive,
    };
    let name = if want_zero { "ratio_limit_at_1_is_zero" } else { "ratio_limit_at_1_is_nonzero" };
    Predicate::new(name, outcome, Confidence::Numerical, ratio_evidence(&est))
}

fn ratio_limit_at_one_zero(ctx: &Ctx<'_>) -> Predicate {
    ratio_limit_at_one(ctx, true)
}

fn ratio_limit_at_one_nonzero(ctx: &Ctx<'_>) -> Predicate {
    ratio_limit_at_one(ctx, false)
}

/// Limits in `C ∪ {∞}` at every sampled shift of either sign.
fn full_line(ctx: &Ctx<'_>, of_transform: bool, name: &str) -> Predicate {
    let mut evidence = Vec::new();
    let mut outcome = Outcome::Pass;
    for &a in &ctx.cfg.full_line_alphas {
        let Some(est) = ctx.ratio(of_transform, a) else {
            return Predicate::new(name, Outcome::Inconclusive, Confidence::Numerical, json!("no closed form for the Fourier transform was supplied"));
        };
        evidence.push(ratio_evidence(&est));
        match est.status {
            RatioStatus::Finite { .. } | RatioStatus::Zero | RatioStatus::Divergent => {}
            RatioStatus::NoLimit => outcome = Outcome::Fail,
            RatioStatus::Inconclusive => {
                if outcome == Outcome::Pass {
                    outcome = Outcome::Inconclusive;
                }
            }
        }
    }
    Predicate::new(name, outcome, Confidence::Numerical, json!({ "sampled_shifts_only": true, "estimates": evidence }))
}

fn ratio_limits_full_line(ctx: &Ctx<'_>) -> Predicate {
    full_line(ctx, false, "ratio_limits_on_sampled_shifts")
}

fn transform_ratio_limits_full_line(ctx: &Ctx<'_>) -> Predicate {
    full_line(ctx, true, "transform_ratio_limits_on_sampled_shifts")
}

fn le_or_bounded_trig(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    let mut has_abs = false;
    ctx.g.visit(&mut |n| has_abs |= matches!(n, Expr::Abs(_)));
    if c.is_le {
        return Predicate::new("logarithmico_exponential", Outcome::Pass, exactness(!has_abs), json!({ "class": "le" }));
    }
    Predicate::from_bool(
        "logarithmico_exponential",
        c.is_extended_hardy,
        Confidence::Numerical,
        json!({ "class": if c.is_extended_hardy { "le_with_bounded_trig" } else { "neither" } }),
    )
}

/// Nonempty singular set, each point showing a derivative jump or a blow-up
/// within `10⁻⁶` relative distance.
fn nonsmooth_finite_singular_set(ctx: &Ctx<'_>) -> Predicate {
    let c = ctx.class();
    let d = crate::expr::differentiate(ctx.g);
    let kinks: Vec<(f64, bool)> = c
        .singular_points
        .iter()
        .map(|&s| {
            let h = 1e-6 * s.abs().max(1.0);
            let at = |x: f64| evaluate(&d, x).ok().filter(|v| v.is_finite());
            let kink = match (evaluate(ctx.g, s), at(s - h), at(s + h)) {
                (Err(_), _, _) | (_, None, _) | (_, _, None) => true,
                (Ok(_), Some(l), Some(r)) => (l - r).abs() > 1e-3 * (1.0 + l.abs() + r.abs()),
            };
            (s, kink)
        })
        .collect();
    let verified: Vec<f64> = kinks.iter().filter(|k| k.1).map(|k| k.0).collect();
    Predicate::from_bool(
        "finite_nonempty_nonsmooth_set",
        !verified.is_empty(),
        Confidence::Numerical,
        json!({ "nonsmooth_points": verified, "scanned": [-c.tail.start, c.tail.start] }),
    )
}
