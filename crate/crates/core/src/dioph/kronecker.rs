use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use super::{q_independence, ExactScalar, RelationMethod};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KroneckerSolution {
    pub u: f64,
    pub p: Vec<i64>,
    /// `|β_k u − p_k − θ_k|`, each `< ε`.
    pub residuals: Vec<f64>,
    /// `|e^{2πiβ_k u} − e^{2πiθ_k}|`, each `< 4πε`.
    pub phase_errors: Vec<f64>,
    pub candidates_scanned: u64,
    pub integer_u: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KroneckerError {
    #[error("betas are Q-linearly dependent: relation {relation:?}")]
    Dependent { relation: Vec<i64> },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("search budget of {budget} candidates exhausted; best max residual {best_residual:e} at u = {best_u}")]
    BudgetExhausted { budget: u64, best_u: f64, best_residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KroneckerOptions {
    /// Restrict `u` to integers; then `{1, β_1, …}` must be Q-independent.
    pub integer_u: bool,
    /// Upper bound on candidate windows (real mode) or integers (integer mode).
    pub budget: u64,
}

impl Default for KroneckerOptions {
    fn default() -> Self {
        KroneckerOptions { integer_u: false, budget: 50_000_000 }
    }
}

/// Finds `u > min_u` and integers `p_k` with `|β_k u − p_k − θ_k| < ε` for all k.
///
/// Real mode walks the windows where the largest `|β_a|` is within `ε` of
/// its target, in increasing `u`, and intersects them with the allowed
/// intervals of the other betas. The returned `u` is the midpoint of the
/// first nonempty intersection. Integer mode scans `u = ⌊min_u⌋ + 1, …`.
pub fn kronecker_solve(
    betas: &[ExactScalar],
    thetas: &[f64],
    min_u: f64,
    eps: f64,
    opts: KroneckerOptions,
) -> Result<KroneckerSolution, KroneckerError> {
    let n = betas.len();
    if n == 0 || n > 8 {
        return Err(KroneckerError::Invalid(format!("need 1 to 8 betas, got {n}")));
    }
    if thetas.len() != n {
        return Err(KroneckerError::Invalid(format!("{n} betas but {} thetas", thetas.len())));
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(KroneckerError::Invalid(format!("eps must lie in (0, 1/4), got {eps}")));
    }
    if !min_u.is_finite() || thetas.iter().any(|t| !t.is_finite()) {
        return Err(KroneckerError::Invalid("min_u and thetas must be finite".into()));
    }
    let mut check: Vec<ExactScalar> = betas.to_vec();
    if opts.integer_u {
        check.insert(0, ExactScalar::integer(1));
        if check.len() > 8 {
            return Err(KroneckerError::Invalid("integer mode supports at most 7 betas".into()));
        }
    }
    let report = q_independence(&check, 1_000_000);
    if let Some(rel) = report.relation() {
        // Float relations at double precision are still relations for the
        // search: a true dependency makes the target unreachable.
        if report.method == RelationMethod::Exact || rel.iter().all(|c| c.unsigned_abs() <= 1000) {
            return Err(KroneckerError::Dependent { relation: rel.to_vec() });
        }
    }
    let b: Vec<f64> = betas.iter().map(ExactScalar::to_f64).collect();
    let th: Vec<f64> = thetas.to_vec();
    if opts.integer_u {
        solve_integer(&b, &th, min_u, eps, opts.budget)
    } else {
        solve_real(&b, &th, min_u, eps, opts.budget)
    }
}

fn verify(b: &[f64], th: &[f64], u: f64, eps: f64) -> Option<(Vec<i64>, Vec<f64>, Vec<f64>)> {
    let mut p = Vec::with_capacity(b.len());
    let mut res = Vec::with_capacity(b.len());
    let mut phase = Vec::with_capacity(b.len());
    for (bk, tk) in b.iter().zip(th) {
        let pk = (bk * u - tk).round();
        let r = (bk * u - pk - tk).abs();
        let arg = 2.0 * PI * (bk * u - tk);
        // |e^{iφ} − 1| = 2|sin(φ/2)|, evaluated on the reduced angle.
        let e = 2.0 * (0.5 * (arg - 2.0 * PI * pk)).sin().abs();
        if r >= eps || e >= 4.0 * PI * eps {
            return None;
        }
        p.push(pk as i64);
        res.push(r);
        phase.push(e);
    }
    Some((p, res, phase))
}

fn max_residual(b: &[f64], th: &[f64], u: f64) -> f64 {
    b.iter()
        .zip(th)
        .map(|(bk, tk)| {
            let x = bk * u - tk;
            (x - x.round()).abs()
        })
        .fold(0.0, f64::max)
}

fn solve_real(b: &[f64], th: &[f64], min_u: f64, eps: f64, budget: u64) -> Result<KroneckerSolution, KroneckerError> {
    let a = (0..b.len()).max_by(|&i, &j| b[i].abs().total_cmp(&b[j].abs())).unwrap();
    let ba = b[a];
    if ba == 0.0 {
        return Err(KroneckerError::Dependent { relation: vec![1] });
    }
    let (ba_abs, sa) = (ba.abs(), ba.signum());
    // With u = (p + θ_a)/β_a exact hits of β_a; iterate over the integer
    // s·p so that windows come in increasing u.
    let theta_a = sa * th[a];
    let mut q = ((min_u * ba_abs - theta_a - eps).floor()) as i64;
    let mut best = (f64::NAN, f64::INFINITY);
    for step in 0..budget {
        let center = (q as f64 + theta_a) / ba_abs;
        let half = eps / ba_abs;
        let mut lo = center - half;
        let mut hi = center + half;
        lo = lo.max(min_u);
        let mut feasible = lo < hi;
        for k in 0..b.len() {
            if !feasible || k == a || b[k] == 0.0 {
                continue;
            }
            let (bk, tk) = (b[k], th[k]);
            let mid = 0.5 * (lo + hi);
            let pk = (bk * mid - tk).round();
            let (mut l, mut h) = ((pk + tk - eps) / bk, (pk + tk + eps) / bk);
            if l > h {
                std::mem::swap(&mut l, &mut h);
            }
            lo = lo.max(l);
            hi = hi.min(h);
            feasible = lo < hi;
        }
        if feasible {
            let u = 0.5 * (lo + hi);
            if u > min_u {
                if let Some((p, residuals, phase_errors)) = verify(b, th, u, eps) {
                    return Ok(KroneckerSolution {
                        u,
                        p,
                        residuals,
                        phase_errors,
                        candidates_scanned: step + 1,
                        integer_u: false,
                    });
                }
            }
        }
        let r = max_residual(b, th, center.max(min_u));
        if r < best.1 {
            best = (center.max(min_u), r);
        }
        q += 1;
    }
    Err(KroneckerError::BudgetExhausted { budget, best_u: best.0, best_residual: best.1 })
}

fn solve_integer(b: &[f64], th: &[f64], min_u: f64, eps: f64, budget: u64) -> Result<KroneckerSolution, KroneckerError> {
    let start = min_u.floor() + 1.0;
    let mut best = (f64::NAN, f64::INFINITY);
    for step in 0..budget {
        let u = start + step as f64;
        if let Some((p, residuals, phase_errors)) = verify(b, th, u, eps) {
            return Ok(KroneckerSolution { u, p, residuals, phase_errors, candidates_scanned: step + 1, integer_u: true });
        }
        let r = max_residual(b, th, u);
        if r < best.1 {
            best = (u, r);
        }
    }
    Err(KroneckerError::BudgetExhausted { budget, best_u: best.0, best_residual: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> ExactScalar {
        t.parse().unwrap()
    }

    #[test]
    fn single_integer_beta_is_solved_exactly() {
        let sol = kronecker_solve(&[s("1")], &[0.25], 10.0, 1e-4, KroneckerOptions::default()).unwrap();
        assert_eq!(sol.u, 10.25);
        assert_eq!(sol.p, vec![10]);
        assert_eq!(sol.residuals, vec![0.0]);
    }

    #[test]
    fn dependent_betas_are_rejected() {
        let err = kronecker_solve(&[s("sqrt(2)"), s("sqrt(8)")], &[0.1, 0.2], 0.0, 1e-2, KroneckerOptions::default());
        assert_eq!(err, Err(KroneckerError::Dependent { relation: vec![2, -1] }));
        let err = kronecker_solve(&[s("1/2")], &[0.1], 0.0, 1e-2, KroneckerOptions { integer_u: true, ..Default::default() });
        assert!(matches!(err, Err(KroneckerError::Dependent { .. })));
    }

    #[test]
    fn negative_betas_and_bounds() {
        let sol = kronecker_solve(&[s("-sqrt(3)"), s("sqrt(5)")], &[0.7, 0.1], 50.0, 1e-2, KroneckerOptions::default()).unwrap();
        assert!(sol.u > 50.0);
        assert!(sol.residuals.iter().all(|r| *r < 1e-2));
        assert!(sol.phase_errors.iter().all(|e| *e < 4.0 * PI * 1e-2));
    }

    #[test]
    fn integer_mode() {
        let sol = kronecker_solve(&[s("sqrt(2)")], &[0.5], 0.0, 1e-3, KroneckerOptions { integer_u: true, ..Default::default() }).unwrap();
        assert_eq!(sol.u.fract(), 0.0);
        assert!(sol.residuals[0] < 1e-3);
    }

    #[test]
    fn budget_is_reported_not_faked() {
        let betas: Vec<_> = ["sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(7)", "sqrt(11)"].iter().map(|t| s(t)).collect();
        let err = kronecker_solve(&betas, &[0.5; 5], 0.0, 1e-4, KroneckerOptions { budget: 1000, ..Default::default() });
        assert!(matches!(err, Err(KroneckerError::BudgetExhausted { budget: 1000, .. })));
    }
}
