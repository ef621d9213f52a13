use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest radicand accepted by the scalar reader; keeps squarefree
/// factorization by trial division instant.
pub const MAX_RADICAND: u64 = 1 << 40;

/// Finite Q-linear combination `Σ c_d √d` over squarefree `d ≥ 1`.
///
/// Canonical: no zero coefficients, keys squarefree, so structural
/// equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SurdSum {
    terms: BTreeMap<u64, BigRational>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn rational(q: BigRational) -> Self {
        SurdSum::surd(q, 1)
    }

    pub fn integer(n: i64) -> Self {
        SurdSum::rational(BigRational::from_integer(n.into()))
    }

    /// `c·√n` for any positive `n`; square factors are pulled out.
    pub fn surd(c: BigRational, n: u64) -> Self {
        assert!(n >= 1, "radicand must be positive");
        let (outside, core) = squarefree_split(n);
        let mut terms = BTreeMap::new();
        let c = c * BigRational::from_integer(outside.into());
        if !c.is_zero() {
            terms.insert(core, c);
        }
        SurdSum { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// `(c, d)` when the sum is a single term.
    pub fn as_single_surd(&self) -> Option<(BigRational, u64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(d, c)| (c.clone(), *d))
        } else {
            None
        }
    }

    pub fn coefficient(&self, d: u64) -> BigRational {
        self.terms.get(&d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| ratio_to_f64(c) * (*d as f64).sqrt())
            .sum()
    }

    pub fn neg(&self) -> Self {
        SurdSum { terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            let e = terms.entry(*d).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(d);
            }
        }
        SurdSum { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return SurdSum::zero();
        }
        SurdSum { terms: self.terms.iter().map(|(d, c)| (*d, c * q)).collect() }
    }

    /// Exact product; `√a·√b = g·√(ab/g²)` with `g = gcd(a, b)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = SurdSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let g = a.gcd(b);
                let core = (a / g) * (b / g);
                let c = ca * cb * BigRational::from_integer(g.into());
                acc = acc.add(&SurdSum { terms: BTreeMap::from([(core, c)]) });
            }
        }
        acc
    }

    /// Exact quotient when the divisor is a single term, `None` otherwise.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let (c, d) = other.as_single_surd()?;
        // 1/(c√d) = √d / (c·d)
        let inv = SurdSum::surd(BigRational::one() / (c * BigRational::from_integer(d.into())), d);
        Some(self.mul(&inv))
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *d == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{mag}*sqrt({d})")?;
            }
        }
        Ok(())
    }
}

/// A coordinate that is exact when it can be, float when it must be.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactScalar {
    Exact(SurdSum),
    /// `degraded` marks values produced by arithmetic that left the exact
    /// domain, as opposed to floats supplied by the caller.
    Float { value: f64, degraded: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    Rational,
    Surd,
    SurdSum,
    Float,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Exact(SurdSum::zero())
    }

    pub fn integer(n: i64) -> Self {
        ExactScalar::Exact(SurdSum::integer(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ExactScalar::Exact(SurdSum::rational(BigRational::new(p.into(), q.into())))
    }

    /// `c·√d`.
    pub fn surd(c: i64, d: u64) -> Self {
        ExactScalar::Exact(SurdSum::surd(BigRational::from_integer(c.into()), d))
    }

    pub fn float(v: f64) -> Self {
        ExactScalar::Float { value: v, degraded: false }
    }

    fn degraded(v: f64) -> Self {
        ExactScalar::Float { value: v, degraded: true }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            ExactScalar::Float { .. } => ScalarKind::Float,
            ExactScalar::Exact(s) if s.as_rational().is_some() => ScalarKind::Rational,
            ExactScalar::Exact(s) if s.as_single_surd().is_some() => ScalarKind::Surd,
            ExactScalar::Exact(_) => ScalarKind::SurdSum,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExactScalar::Exact(_))
    }

    pub fn is_degraded(&self) -> bool {
        matches!(self, ExactScalar::Float { degraded: true, .. })
    }

    pub fn as_exact(&self) -> Option<&SurdSum> {
        match self {
            ExactScalar::Exact(s) => Some(s),
            ExactScalar::Float { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Exact(s) => s.to_f64(),
            ExactScalar::Float { value, .. } => *value,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Exact(s) => s.is_zero(),
            ExactScalar::Float { value, .. } => *value == 0.0,
        }
    }

    fn combine(
        &self,
        other: &Self,
        exact: impl FnOnce(&SurdSum, &SurdSum) -> Option<SurdSum>,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Self {
        if let (ExactScalar::Exact(a), ExactScalar::Exact(b)) = (self, other) {
            if let Some(s) = exact(a, b) {
                return ExactScalar::Exact(s);
            }
            return ExactScalar::degraded(float(a.to_f64(), b.to_f64()));
        }
        let v = float(self.to_f64(), other.to_f64());
        let degraded = self.is_degraded() || other.is_degraded() || self.is_exact() != other.is_exact();
        ExactScalar::Float { value: v, degraded }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| Some(a.add(b)), |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| Some(a.sub(b)), |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| Some(a.mul(b)), |a, b| a * b)
    }

    /// Division; stays exact when the divisor is a single surd term.
    pub fn div(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.div(b), |a, b| a / b)
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactScalar::Exact(s) => ExactScalar::Exact(s.neg()),
            ExactScalar::Float { value, degraded } => ExactScalar::Float { value: -value, degraded: *degraded },
        }
    }

    /// Equality: structural for two exact values, `tol`-relative otherwise.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (ExactScalar::Exact(a), ExactScalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
            }
        }
    }

    /// Total order by numeric value, exact ties broken structurally.
    pub fn numeric_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactScalar::Exact(a), ExactScalar::Exact(b)) if a == b => Ordering::Equal,
            (ExactScalar::Exact(a), ExactScalar::Exact(b)) => {
                let d = a.sub(b);
                if let Some(q) = d.as_rational() {
                    return q.cmp(&BigRational::zero());
                }
                d.to_f64().total_cmp(&0.0).then_with(|| a.cmp(b))
            }
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::integer(n)
    }
}

impl From<SurdSum> for ExactScalar {
    fn from(s: SurdSum) -> Self {
        ExactScalar::Exact(s)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Exact(s) => write!(f, "{s}"),
            // Debug formatting always shows a '.' or exponent, which the
            // reader uses to recognize floats.
            ExactScalar::Float { value, .. } => write!(f, "{value:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar {text:?}: {reason}")]
pub struct ScalarParseError {
    pub text: String,
    pub reason: String,
}

impl FromStr for ExactScalar {
    type Err = ScalarParseError;

    /// Reads `p/q`, `c*sqrt(d)`, `sqrt(d)`, integers and decimal floats, and
    /// signed sums of these such as `1 - 1/2*sqrt(3)`. Any decimal term makes
    /// the whole value a float.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ScalarParseError { text: text.to_string(), reason: reason.to_string() };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        let mut exact = SurdSum::zero();
        let mut float_sum = 0.0;
        let mut saw_float = false;
        for (negative, term) in split_terms(&compact).map_err(|r| err(&r))? {
            match parse_term(term).map_err(|r| err(&r))? {
                Term::Exact(s) => exact = exact.add(&if negative { s.neg() } else { s }),
                Term::Float(v) => {
                    saw_float = true;
                    float_sum += if negative { -v } else { v };
                }
            }
        }
        if saw_float {
            let v = float_sum + exact.to_f64();
            if !v.is_finite() {
                return Err(err("not finite"));
            }
            Ok(ExactScalar::float(v))
        } else {
            Ok(ExactScalar::Exact(exact))
        }
    }
}

enum Term {
    Exact(SurdSum),
    Float(f64),
}

/// Splits on top-level `+`/`-`, leaving exponent signs (`1e-3`) alone.
/// Only the first term may carry a leading sign.
fn split_terms(s: &str) -> Result<Vec<(bool, &str)>, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut negative = false;
    let mut start = 0;
    let mut depth = 0i32;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && !is_exponent_sign(bytes, i) => {
                if i == start {
                    if i != 0 {
                        return Err("dangling sign".into());
                    }
                    negative = c == b'-';
                } else {
                    out.push((negative, &s[start..i]));
                    negative = c == b'-';
                }
                start = i + 1;
            }
            _ => {}
        }
    }
    if start >= s.len() {
        return Err("missing term".into());
    }
    out.push((negative, &s[start..]));
    Ok(out)
}

fn is_exponent_sign(bytes: &[u8], i: usize) -> bool {
    i >= 2 && matches!(bytes[i - 1], b'e' | b'E') && (bytes[i - 2].is_ascii_digit() || bytes[i - 2] == b'.')
}

fn parse_term(t: &str) -> Result<Term, String> {
    if let Some(idx) = t.find("sqrt(") {
        let coeff = &t[..idx];
        let rest = &t[idx + 5..];
        let radicand = rest.strip_suffix(')').ok_or("unclosed sqrt")?;
        let d: u64 = radicand.parse().map_err(|_| format!("radicand {radicand:?} is not a positive integer"))?;
        if d == 0 || d > MAX_RADICAND {
            return Err(format!("radicand must be in 1..={MAX_RADICAND}"));
        }
        let c = match coeff {
            "" => BigRational::one(),
            _ => {
                let c = coeff.strip_suffix('*').ok_or("expected '*' before sqrt")?;
                match parse_number(c)? {
                    Term::Exact(s) => s.as_rational().expect("numbers are rational"),
                    Term::Float(v) => return Ok(Term::Float(v * (d as f64).sqrt())),
                }
            }
        };
        return Ok(Term::Exact(SurdSum::surd(c, d)));
    }
    parse_number(t)
}

fn parse_number(t: &str) -> Result<Term, String> {
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| format!("bad numerator {p:?}"))?;
        let q: BigInt = q.parse().map_err(|_| format!("bad denominator {q:?}"))?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(Term::Exact(SurdSum::rational(BigRational::new(p, q))));
    }
    if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
        let n: BigInt = t.parse().map_err(|_| format!("bad integer {t:?}"))?;
        return Ok(Term::Exact(SurdSum::rational(BigRational::from_integer(n))));
    }
    let v: f64 = t.parse().map_err(|_| format!("bad number {t:?}"))?;
    if !v.is_finite() {
        return Err("not finite".into());
    }
    Ok(Term::Float(v))
}

/// `n = outside² · core` with `core` squarefree.
fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        outside *= p.pow(k / 2);
        if k % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outside, core * n)
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Very large parts: shift both down before dividing.
            let bits = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> bits).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> bits).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExactScalar::Float { value, .. } => s.serialize_f64(*value),
            ExactScalar::Exact(e) => match e.as_rational() {
                Some(q) if q.is_integer() => match q.numer().to_i64() {
                    Some(n) => s.serialize_i64(n),
                    None => s.serialize_str(&e.to_string()),
                },
                _ => s.serialize_str(&e.to_string()),
            },
        }
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(ExactScalar::integer(n)),
            Raw::Num(v) if v.is_finite() => Ok(ExactScalar::float(v)),
            Raw::Num(v) => Err(serde::de::Error::custom(format!("non-finite scalar {v}"))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> ExactScalar {
        t.parse().unwrap()
    }

    #[test]
    fn reader_covers_the_scalar_grammar() {
        assert_eq!(s("1/2"), ExactScalar::ratio(1, 2));
        assert_eq!(s("-3"), ExactScalar::integer(-3));
        assert_eq!(s("sqrt(8)"), ExactScalar::surd(2, 2));
        assert_eq!(s("2*sqrt(2)").kind(), ScalarKind::Surd);
        assert_eq!(s("1/2*sqrt(12)"), ExactScalar::surd(1, 3));
        assert_eq!(s("sqrt(4)"), ExactScalar::integer(2));
        assert_eq!(s("1 + sqrt(2)").kind(), ScalarKind::SurdSum);
        assert_eq!(s("0.25"), ExactScalar::float(0.25));
        assert_eq!(s("1e-3"), ExactScalar::float(1e-3));
        assert_eq!(s("-2.5e-3 + 1"), ExactScalar::float(1.0 - 2.5e-3));
        for bad in ["", "1/0", "sqrt(-2)", "sqrt(0)", "2sqrt(3)", "abc", "1 +", "nan"] {
            assert!(bad.parse::<ExactScalar>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for t in ["0", "7", "-1/3", "sqrt(2)", "-5/2*sqrt(7)", "1 - sqrt(2) + 3*sqrt(5)", "0.1", "-1e-300", "3.0"] {
            let v = s(t);
            assert_eq!(s(&v.to_string()), v, "{t}");
        }
    }

    #[test]
    fn exact_arithmetic_is_closed_on_surd_sums() {
        let r2 = ExactScalar::surd(1, 2);
        let r3 = ExactScalar::surd(1, 3);
        assert_eq!(r2.mul(&r2), ExactScalar::integer(2));
        assert_eq!(r2.mul(&r3), ExactScalar::surd(1, 6));
        assert_eq!(ExactScalar::surd(1, 6).div(&r2), r3);
        let q = ExactScalar::integer(1).div(&ExactScalar::integer(1).add(&r2));
        assert!(q.is_degraded());
        assert!((q.to_f64() - 1.0 / (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert!(!ExactScalar::float(1.0).is_degraded());
        assert!(ExactScalar::float(1.0).add(&r2).is_degraded());
    }

    #[test]
    fn ordering_and_equality() {
        assert_eq!(s("sqrt(2)").numeric_cmp(&s("7/5")), Ordering::Greater);
        assert_eq!(s("-sqrt(3)").numeric_cmp(&s("-sqrt(2)")), Ordering::Less);
        assert!(s("sqrt(2)").same_as(&s("1.4142135623730951"), 1e-12));
        assert!(!s("sqrt(2)").same_as(&s("99/70"), 1e-12));
    }

    #[test]
    fn json_forms() {
        let v: Vec<ExactScalar> = serde_json::from_str(r#"[1, -2, 0.5, "1/3", "2*sqrt(2)"]"#).unwrap();
        assert_eq!(v[0], ExactScalar::integer(1));
        assert_eq!(v[2], ExactScalar::float(0.5));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1,-2,0.5,"1/3","2*sqrt(2)"]"#);
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(97), (1, 97));
        assert_eq!(squarefree_split(1 << 40), (1 << 20, 1));
    }
}
