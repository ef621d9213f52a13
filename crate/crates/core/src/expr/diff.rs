use thiserror::Error;

use super::{evaluate, exponent_is_one, exponent_is_zero, Expr, Exponent, Undefined};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiffError {
    /// An `abs` argument vanishes at the query point.
    #[error("not differentiable at x = {x}: abs argument vanishes")]
    NonDifferentiable { x: f64 },
    #[error(transparent)]
    Undefined(#[from] Undefined),
}

/// Symbolic derivative with respect to `x`.
///
/// Zero and unit factors are folded as the tree is built, nothing more.
/// `abs(u)` differentiates to `u' * u / abs(u)`, which is undefined exactly
/// where `u` vanishes.
pub fn differentiate(e: &Expr) -> Expr {
    if e.is_constant() {
        return zero();
    }
    match e {
        Expr::Const(_) | Expr::Pi => zero(),
        Expr::X => one(),
        Expr::Add(a, b) => add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => add(
            mul(differentiate(a), (**b).clone()),
            mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => {
            let da = differentiate(a);
            let db = differentiate(b);
            if is_zero(&db) {
                return div(da, (**b).clone());
            }
            div(
                sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                Expr::pow((**b).clone(), 2, 1),
            )
        }
        Expr::Neg(a) => neg(differentiate(a)),
        Expr::Pow(a, r) => {
            if exponent_is_zero(r) {
                return zero();
            }
            let r1 = r - Exponent::from_integer(1);
            let base = if exponent_is_zero(&r1) {
                one()
            } else if exponent_is_one(&r1) {
                (**a).clone()
            } else {
                Expr::Pow(a.clone(), r1)
            };
            mul(mul(rational_const(r), base), differentiate(a))
        }
        Expr::Exp(a) => mul(e.clone(), differentiate(a)),
        Expr::Log(a) => div(differentiate(a), (**a).clone()),
        Expr::Root(n, a) => {
            let denom = if *n == 2 {
                mul(Expr::Const(2.0), e.clone())
            } else {
                mul(Expr::Const(f64::from(*n)), Expr::pow(e.clone(), i64::from(*n) - 1, 1))
            };
            div(differentiate(a), denom)
        }
        Expr::Abs(a) => mul(differentiate(a), div((**a).clone(), e.clone())),
        Expr::Sin(a) => mul(Expr::cos((**a).clone()), differentiate(a)),
        Expr::Cos(a) => neg(mul(Expr::sin((**a).clone()), differentiate(a))),
    }
}

/// Symbolic `e'/e`, expanded through products, quotients, powers, roots,
/// `abs` and `exp` so that `exp(u)` contributes `u'` with no cancellation of
/// huge logarithms.
pub fn log_derivative(e: &Expr) -> Expr {
    if e.is_constant() {
        return zero();
    }
    match e {
        Expr::Exp(a) => differentiate(a),
        Expr::Mul(a, b) => add(log_derivative(a), log_derivative(b)),
        Expr::Div(a, b) => sub(log_derivative(a), log_derivative(b)),
        Expr::Neg(a) | Expr::Abs(a) => log_derivative(a),
        Expr::Pow(a, r) => mul(rational_const(r), log_derivative(a)),
        Expr::Root(n, a) => div(log_derivative(a), Expr::Const(f64::from(*n))),
        _ => div(differentiate(e), e.clone()),
    }
}

/// `e'(x)`, reporting vanishing `abs` arguments as non-differentiable points.
pub fn derivative_at(e: &Expr, x: f64) -> Result<f64, DiffError> {
    let mut kink = false;
    let mut err = None;
    e.visit(&mut |node| {
        if let Expr::Abs(u) = node {
            match evaluate(u, x) {
                Ok(v) if v == 0.0 => kink = true,
                Ok(_) => {}
                Err(u) => err = Some(u),
            }
        }
    });
    if kink {
        return Err(DiffError::NonDifferentiable { x });
    }
    if let Some(u) = err {
        return Err(u.into());
    }
    Ok(evaluate(&differentiate(e), x)?)
}

fn zero() -> Expr {
    Expr::Const(0.0)
}

fn one() -> Expr {
    Expr::Const(1.0)
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 1.0)
}

fn rational_const(r: &Exponent) -> Expr {
    if r.is_integer() {
        Expr::constant(*r.numer() as f64)
    } else {
        let q = Expr::div(Expr::Const(r.numer().unsigned_abs() as f64), Expr::Const(*r.denom() as f64));
        if *r.numer() < 0 {
            Expr::neg(q)
        } else {
            q
        }
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (is_zero(&a), is_zero(&b)) {
        (true, _) => b,
        (_, true) => a,
        _ => Expr::add(a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (is_zero(&a), is_zero(&b)) {
        (_, true) => a,
        (true, _) => neg(b),
        _ => Expr::sub(a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        zero()
    } else if is_one(&a) {
        b
    } else if is_one(&b) {
        a
    } else {
        Expr::mul(a, b)
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        zero()
    } else if is_one(&b) {
        a
    } else {
        Expr::div(a, b)
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) if c == 0.0 => a,
        Expr::Neg(inner) => *inner,
        _ => Expr::neg(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn central(e: &Expr, x: f64, h: f64) -> f64 {
        (evaluate(e, x + h).unwrap() - evaluate(e, x - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn gaussian_derivative_shape() {
        let d = differentiate(&parse("exp(-x^2)").unwrap());
        assert_eq!(d.to_string(), "exp(-x^2) * -(2 * x)");
        for x in [-1.5f64, 0.0, 0.7] {
            let want = -2.0 * x * (-x * x).exp();
            assert!((evaluate(&d, x).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn log_derivative_is_reciprocal() {
        assert_eq!(differentiate(&parse("log(x)").unwrap()), parse("1/x").unwrap());
    }

    #[test]
    fn nested_le_quotient_matches_finite_difference() {
        let e = parse("sqrt(log(x))/log(log(x))").unwrap();
        let d = evaluate(&differentiate(&e), 100.0).unwrap();
        let fd = central(&e, 100.0, 1e-4);
        assert!(((d - fd) / d).abs() < 1e-6, "{d} vs {fd}");
    }

    #[test]
    fn roots_and_rational_powers() {
        for s in ["root[3](x^2 + 1)", "x^(-3/2)", "sqrt(x)*x^(1/3)", "abs(x - 3)^(1/2)"] {
            let e = parse(s).unwrap();
            for x in [1.3, 5.0, 9.25] {
                let d = derivative_at(&e, x).unwrap();
                let fd = central(&e, x, 1e-5);
                assert!((d - fd).abs() < 1e-6 * (1.0 + d.abs()), "{s} at {x}: {d} vs {fd}");
            }
        }
    }

    #[test]
    fn abs_kink_is_flagged() {
        let e = parse("exp(-abs(x))").unwrap();
        assert_eq!(derivative_at(&e, 0.0), Err(DiffError::NonDifferentiable { x: 0.0 }));
        assert!((derivative_at(&e, -1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
    }
}
