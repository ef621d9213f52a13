use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use super::{Expr, Exponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndefinedReason {
    LogOfNonPositive,
    DivisionByZero,
    EvenRootOfNegative,
    NotANumber,
}

impl fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UndefinedReason::LogOfNonPositive => "log of a non-positive value",
            UndefinedReason::DivisionByZero => "division by zero",
            UndefinedReason::EvenRootOfNegative => "even root of a negative value",
            UndefinedReason::NotANumber => "result is not a number",
        })
    }
}

/// A sub-expression left its real domain.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("undefined at x = {x}: {reason}")]
pub struct Undefined {
    pub x: f64,
    pub reason: UndefinedReason,
}

/// Evaluates `e` at `x` in ordinary double precision.
///
/// Infinities produced by overflow are passed through; NaN results and
/// domain violations are reported as [`Undefined`].
pub fn evaluate(e: &Expr, x: f64) -> Result<f64, Undefined> {
    let v = eval_f64(e, x)?;
    if v.is_nan() {
        return Err(Undefined { x, reason: UndefinedReason::NotANumber });
    }
    Ok(v)
}

fn eval_f64(e: &Expr, x: f64) -> Result<f64, Undefined> {
    let undef = |reason| Undefined { x, reason };
    Ok(match e {
        Expr::Const(c) => *c,
        Expr::Pi => std::f64::consts::PI,
        Expr::X => x,
        Expr::Add(a, b) => eval_f64(a, x)? + eval_f64(b, x)?,
        Expr::Sub(a, b) => eval_f64(a, x)? - eval_f64(b, x)?,
        Expr::Mul(a, b) => eval_f64(a, x)? * eval_f64(b, x)?,
        Expr::Div(a, b) => {
            let num = eval_f64(a, x)?;
            let den = eval_f64(b, x)?;
            if den == 0.0 {
                return Err(undef(UndefinedReason::DivisionByZero));
            }
            num / den
        }
        Expr::Neg(a) => -eval_f64(a, x)?,
        Expr::Pow(a, r) => pow_f64(eval_f64(a, x)?, r).map_err(undef)?,
        Expr::Exp(a) => eval_f64(a, x)?.exp(),
        Expr::Log(a) => {
            let u = eval_f64(a, x)?;
            if u.is_nan() || u <= 0.0 {
                return Err(undef(UndefinedReason::LogOfNonPositive));
            }
            u.ln()
        }
        Expr::Root(n, a) => root_f64(eval_f64(a, x)?, *n).map_err(undef)?,
        Expr::Abs(a) => eval_f64(a, x)?.abs(),
        Expr::Sin(a) => eval_f64(a, x)?.sin(),
        Expr::Cos(a) => eval_f64(a, x)?.cos(),
    })
}

fn pow_f64(u: f64, r: &Exponent) -> Result<f64, UndefinedReason> {
    let (p, q) = (*r.numer(), *r.denom());
    if u == 0.0 {
        return match p.cmp(&0) {
            std::cmp::Ordering::Less => Err(UndefinedReason::DivisionByZero),
            std::cmp::Ordering::Equal => Ok(1.0),
            std::cmp::Ordering::Greater => Ok(0.0),
        };
    }
    if q == 1 {
        if let Ok(k) = i32::try_from(p) {
            return Ok(u.powi(k));
        }
        return Ok(u.powf(p as f64));
    }
    if u < 0.0 && q.is_even() {
        return Err(UndefinedReason::EvenRootOfNegative);
    }
    let mag = u.abs().powf(p as f64 / q as f64);
    Ok(if u < 0.0 && p.is_odd() { -mag } else { mag })
}

fn root_f64(u: f64, n: u32) -> Result<f64, UndefinedReason> {
    if u < 0.0 && n % 2 == 0 {
        return Err(UndefinedReason::EvenRootOfNegative);
    }
    Ok(match n {
        2 => u.sqrt(),
        3 => u.cbrt(),
        _ => u.signum() * u.abs().powf(1.0 / n as f64),
    })
}

/// A real number stored as sign and natural log of its magnitude.
///
/// Products, quotients and exponentials are exact in this representation,
/// so ratios like `g(x + a) / g(x)` stay accurate far beyond the point where
/// `g` itself underflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    /// -1, 0 or +1.
    pub sign: i8,
    /// `ln |v|`; `-inf` when `sign == 0`.
    pub ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { sign: 0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: LogValue = LogValue { sign: 1, ln_abs: 0.0 };

    pub fn from_f64(v: f64) -> LogValue {
        if v == 0.0 {
            LogValue::ZERO
        } else {
            LogValue { sign: if v > 0.0 { 1 } else { -1 }, ln_abs: v.abs().ln() }
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn neg(self) -> LogValue {
        LogValue { sign: -self.sign, ..self }
    }

    pub fn abs(self) -> LogValue {
        LogValue { sign: self.sign.abs(), ..self }
    }

    pub fn mul(self, o: LogValue) -> LogValue {
        if self.sign == 0 || o.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue { sign: self.sign * o.sign, ln_abs: self.ln_abs + o.ln_abs }
    }

    pub fn div(self, o: LogValue) -> Option<LogValue> {
        if o.sign == 0 {
            return None;
        }
        if self.sign == 0 {
            return Some(LogValue::ZERO);
        }
        Some(LogValue { sign: self.sign * o.sign, ln_abs: self.ln_abs - o.ln_abs })
    }

    pub fn add(self, o: LogValue) -> LogValue {
        if self.sign == 0 {
            return o;
        }
        if o.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= o.ln_abs { (self, o) } else { (o, self) };
        if big.ln_abs == f64::INFINITY {
            if small.ln_abs == f64::INFINITY && small.sign != big.sign {
                return LogValue { sign: 1, ln_abs: f64::NAN };
            }
            return big;
        }
        let d = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogValue { sign: big.sign, ln_abs: big.ln_abs + d.ln_1p() }
        } else if d == 1.0 {
            LogValue::ZERO
        } else {
            LogValue { sign: big.sign, ln_abs: big.ln_abs + (-d).ln_1p() }
        }
    }

    fn pow(self, r: &Exponent) -> Result<LogValue, UndefinedReason> {
        let (p, q) = (*r.numer(), *r.denom());
        if self.sign == 0 {
            return pow_f64(0.0, r).map(LogValue::from_f64);
        }
        if p == 0 {
            return Ok(LogValue::ONE);
        }
        if self.sign < 0 && q.is_even() {
            return Err(UndefinedReason::EvenRootOfNegative);
        }
        let sign = if self.sign < 0 && p.is_odd() { -1 } else { 1 };
        Ok(LogValue { sign, ln_abs: self.ln_abs * (p as f64 / q as f64) })
    }
}

/// Evaluates `e` at `x` in sign/log-magnitude form.
///
/// Each node is computed both in plain `f64` and in log form; the plain value
/// is kept whenever it is a normal float, so the result is bit-identical to
/// [`evaluate`] wherever that one neither overflows nor underflows.
pub fn evaluate_log(e: &Expr, x: f64) -> Result<LogValue, Undefined> {
    let v = eval_dual(e, x)?.lv;
    if v.ln_abs.is_nan() {
        return Err(Undefined { x, reason: UndefinedReason::NotANumber });
    }
    Ok(v)
}

#[derive(Clone, Copy)]
struct Dual {
    lv: LogValue,
    plain: f64,
}

impl Dual {
    fn exact(v: f64) -> Dual {
        Dual { lv: LogValue::from_f64(v), plain: v }
    }

    /// Prefers the plain value unless it lost range.
    fn pick(plain: f64, lv: LogValue) -> Dual {
        let trusted = plain.is_finite() && (plain.abs() >= f64::MIN_POSITIVE || (plain == 0.0 && lv.sign == 0));
        if trusted {
            Dual::exact(plain)
        } else {
            Dual { lv, plain }
        }
    }
}

fn eval_dual(e: &Expr, x: f64) -> Result<Dual, Undefined> {
    let undef = |reason| Undefined { x, reason };
    Ok(match e {
        Expr::Const(c) => Dual::exact(*c),
        Expr::Pi => Dual::exact(std::f64::consts::PI),
        Expr::X => Dual::exact(x),
        Expr::Add(a, b) => {
            let (a, b) = (eval_dual(a, x)?, eval_dual(b, x)?);
            Dual::pick(a.plain + b.plain, a.lv.add(b.lv))
        }
        Expr::Sub(a, b) => {
            let (a, b) = (eval_dual(a, x)?, eval_dual(b, x)?);
            Dual::pick(a.plain - b.plain, a.lv.add(b.lv.neg()))
        }
        Expr::Mul(a, b) => {
            let (a, b) = (eval_dual(a, x)?, eval_dual(b, x)?);
            Dual::pick(a.plain * b.plain, a.lv.mul(b.lv))
        }
        Expr::Div(a, b) => {
            let (a, b) = (eval_dual(a, x)?, eval_dual(b, x)?);
            let lv = a.lv.div(b.lv).ok_or(undef(UndefinedReason::DivisionByZero))?;
            Dual::pick(a.plain / b.plain, lv)
        }
        Expr::Neg(a) => {
            let a = eval_dual(a, x)?;
            Dual { lv: a.lv.neg(), plain: -a.plain }
        }
        Expr::Pow(a, r) => {
            let a = eval_dual(a, x)?;
            let lv = a.lv.pow(r).map_err(undef)?;
            let plain = if a.plain.is_finite() && (a.plain != 0.0 || a.lv.sign == 0) {
                pow_f64(a.plain, r).map_err(undef)?
            } else {
                f64::NAN
            };
            Dual::pick(plain, lv)
        }
        Expr::Exp(a) => {
            let a = eval_dual(a, x)?;
            let u = if a.plain.is_finite() && (a.plain != 0.0 || a.lv.sign == 0) { a.plain } else { a.lv.to_f64() };
            if u.is_nan() {
                return Err(undef(UndefinedReason::NotANumber));
            }
            let lv = if u == f64::NEG_INFINITY { LogValue::ZERO } else { LogValue { sign: 1, ln_abs: u } };
            Dual::pick(u.exp(), lv)
        }
        Expr::Log(a) => {
            let a = eval_dual(a, x)?;
            if a.lv.sign <= 0 {
                return Err(undef(UndefinedReason::LogOfNonPositive));
            }
            Dual::exact(a.lv.ln_abs)
        }
        Expr::Root(n, a) => {
            let a = eval_dual(a, x)?;
            if a.lv.sign < 0 && n % 2 == 0 {
                return Err(undef(UndefinedReason::EvenRootOfNegative));
            }
            let lv = if a.lv.sign == 0 {
                LogValue::ZERO
            } else {
                LogValue { sign: a.lv.sign, ln_abs: a.lv.ln_abs / f64::from(*n) }
            };
            Dual::pick(root_f64(a.plain, *n).unwrap_or(f64::NAN), lv)
        }
        Expr::Abs(a) => {
            let a = eval_dual(a, x)?;
            Dual { lv: a.lv.abs(), plain: a.plain.abs() }
        }
        Expr::Sin(a) => Dual::exact(trig_arg(eval_dual(a, x)?).sin()),
        Expr::Cos(a) => Dual::exact(trig_arg(eval_dual(a, x)?).cos()),
    })
}

fn trig_arg(a: Dual) -> f64 {
    if a.plain.is_finite() && (a.plain != 0.0 || a.lv.sign == 0) {
        a.plain
    } else {
        a.lv.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn ev(s: &str, x: f64) -> Result<f64, Undefined> {
        evaluate(&parse(s).unwrap(), x)
    }

    #[test]
    fn gaussian_at_origin() {
        assert_eq!(ev("exp(-x^2)", 0.0).unwrap(), 1.0);
    }

    #[test]
    fn domain_violations_are_values_not_panics() {
        assert_eq!(ev("log(x)", -1.0).unwrap_err().reason, UndefinedReason::LogOfNonPositive);
        assert_eq!(ev("1/x", 0.0).unwrap_err().reason, UndefinedReason::DivisionByZero);
        assert_eq!(ev("sqrt(x)", -4.0).unwrap_err().reason, UndefinedReason::EvenRootOfNegative);
        assert_eq!(ev("x^(1/2)", -4.0).unwrap_err().reason, UndefinedReason::EvenRootOfNegative);
        assert_eq!(ev("x^-1", 0.0).unwrap_err().reason, UndefinedReason::DivisionByZero);
        assert_eq!(ev("exp(x) - exp(x)", 1000.0).unwrap_err().reason, UndefinedReason::NotANumber);
    }

    #[test]
    fn odd_roots_of_negatives() {
        assert!((ev("root[3](x)", -8.0).unwrap() + 2.0).abs() < 1e-15);
        assert!((ev("x^(1/3)", -8.0).unwrap() + 2.0).abs() < 1e-15);
        assert!((ev("x^(2/3)", -8.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn log_domain_agrees_where_f64_is_representable() {
        for s in ["exp(-x^2) * (1 + x)", "1/(1 + x^2)", "sqrt(log(x)) - x^(1/3)", "sin(x/(1 + x^2))*exp(-sqrt(abs(x)))"] {
            let e = parse(s).unwrap();
            for x in [1.3, 1.7, 4.0, 11.5] {
                let plain = evaluate(&e, x).unwrap();
                let logv = evaluate_log(&e, x).unwrap().to_f64();
                assert!((plain - logv).abs() <= 1e-12 * (1.0 + plain.abs()), "{s} at {x}");
            }
        }
    }

    #[test]
    fn log_domain_survives_underflow() {
        let e = parse("exp(-x^2)").unwrap();
        assert_eq!(evaluate(&e, 1e3).unwrap(), 0.0);
        let v = evaluate_log(&e, 1e3).unwrap();
        assert_eq!(v.sign, 1);
        assert_eq!(v.ln_abs, -1e6);
        let cancel = evaluate_log(&parse("x + abs(x)").unwrap(), -3.0).unwrap();
        assert!(cancel.is_zero());
    }
}
