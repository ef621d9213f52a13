//! Symbolic generator expressions.
//!
//! The grammar covers the logarithmico-exponential operations (field
//! operations, `exp`, `log`, n-th roots, rational powers) plus `abs`, `sin`
//! and `cos` atoms. Expressions are real-valued functions of a single real
//! variable `x`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := base ('^' rational)?
//! base   := number | 'x' | 'pi' | '(' expr ')' | func '(' expr ')'
//! func   := exp | log | sqrt | root[n] | abs | sin | cos
//! rational := ['-'] number | '(' ['-'] number ['/' number] ')'
//! ```

mod classify;
mod diff;
mod eval;
mod parse;

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub use classify::{classify, ClassReport, DecayClass, TailConfig, TriState};
pub use diff::{derivative_at, differentiate, log_derivative, DiffError};
pub use eval::{evaluate, evaluate_log, LogValue, Undefined, UndefinedReason};
pub use parse::{parse, ParseError, ParseErrorKind};

/// Exact rational exponent of a power node.
pub type Exponent = Ratio<i64>;

/// Abstract syntax tree of a generator expression.
///
/// Constants are always finite and nonnegative; negative literals are
/// represented as `Neg(Const(..))`, matching what the parser produces.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Pi,
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Root(u32, Box<Expr>),
    Abs(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    /// Builds a constant node, routing negative values through `Neg`.
    pub fn constant(c: f64) -> Expr {
        assert!(c.is_finite(), "expression constants must be finite");
        if c < 0.0 {
            Expr::Neg(Box::new(Expr::Const(-c)))
        } else {
            Expr::Const(c)
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, p: i64, q: i64) -> Expr {
        Expr::Pow(Box::new(a), Exponent::new(p, q))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    pub fn log(a: Expr) -> Expr {
        Expr::Log(Box::new(a))
    }

    pub fn root(n: u32, a: Expr) -> Expr {
        assert!(n >= 2, "root index must be at least 2");
        Expr::Root(n, Box::new(a))
    }

    pub fn abs(a: Expr) -> Expr {
        Expr::Abs(Box::new(a))
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }

    /// Direct children, in left-to-right order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::Pi | Expr::X => Vec::new(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                vec![a, b]
            }
            Expr::Neg(a)
            | Expr::Pow(a, _)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Root(_, a)
            | Expr::Abs(a)
            | Expr::Sin(a)
            | Expr::Cos(a) => vec![a],
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Replaces every occurrence of `x` by `with`.
    pub fn substitute(&self, with: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(with));
        match self {
            Expr::X => with.clone(),
            Expr::Const(_) | Expr::Pi => self.clone(),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Pow(a, r) => Expr::Pow(sub(a), *r),
            Expr::Exp(a) => Expr::Exp(sub(a)),
            Expr::Log(a) => Expr::Log(sub(a)),
            Expr::Root(n, a) => Expr::Root(*n, sub(a)),
            Expr::Abs(a) => Expr::Abs(sub(a)),
            Expr::Sin(a) => Expr::Sin(sub(a)),
            Expr::Cos(a) => Expr::Cos(sub(a)),
        }
    }

    /// The mirrored generator `x ↦ g(-x)`.
    pub fn reflect(&self) -> Expr {
        self.substitute(&Expr::neg(Expr::X))
    }

    /// `x ↦ g(x + a)`.
    pub fn shifted(&self, a: f64) -> Expr {
        if a == 0.0 {
            return self.clone();
        }
        let arg = if a > 0.0 {
            Expr::add(Expr::X, Expr::Const(a))
        } else {
            Expr::sub(Expr::X, Expr::Const(-a))
        };
        self.substitute(&arg)
    }

    /// True when the tree contains no occurrence of `x`.
    pub fn is_constant(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Expr::X));
        !found
    }

    pub fn contains_trig(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Expr::Sin(_) | Expr::Cos(_)));
        found
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn is_literal_zero(&self) -> bool {
        match self {
            Expr::Const(c) => *c == 0.0,
            Expr::Neg(a) => a.is_literal_zero(),
            _ => false,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

pub(crate) fn format_exponent(r: &Exponent) -> String {
    if r.is_integer() && !r.is_negative() {
        format!("{}", r.numer())
    } else if r.is_integer() {
        format!("({})", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Pi => f.write_str("pi"),
            Expr::X => f.write_str("x"),
            // Right operands need a strictly higher level so that printing
            // then parsing reproduces the same (left-associated) tree.
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" * ")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" / ")?;
                write_child(f, b, 3)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3)
            }
            Expr::Pow(a, r) => {
                write_child(f, a, 5)?;
                write!(f, "^{}", format_exponent(r))
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Root(2, a) => write!(f, "sqrt({a})"),
            Expr::Root(n, a) => write!(f, "root[{n}]({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Dense real polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    fn constant(c: f64) -> Self {
        Polynomial(vec![c])
    }

    fn trimmed(mut self) -> Self {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0.0 {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }

    pub fn leading(&self) -> f64 {
        *self.0.last().unwrap_or(&0.0)
    }

    fn add(&self, other: &Self, sign: f64) -> Self {
        let n = self.0.len().max(other.0.len());
        let c = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0.0) + sign * other.0.get(i).copied().unwrap_or(0.0))
            .collect();
        Polynomial(c).trimmed()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut c = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial(c).trimmed()
    }
}

/// Expands `e` as a polynomial in `x` when it is built only from constants,
/// `x`, `+ - *`, negation, division by constants and nonnegative integer
/// powers.
pub fn as_polynomial(e: &Expr) -> Option<Polynomial> {
    match e {
        Expr::Const(c) => Some(Polynomial::constant(*c)),
        Expr::Pi => Some(Polynomial::constant(std::f64::consts::PI)),
        Expr::X => Some(Polynomial(vec![0.0, 1.0])),
        Expr::Add(a, b) => Some(as_polynomial(a)?.add(&as_polynomial(b)?, 1.0)),
        Expr::Sub(a, b) => Some(as_polynomial(a)?.add(&as_polynomial(b)?, -1.0)),
        Expr::Mul(a, b) => Some(as_polynomial(a)?.mul(&as_polynomial(b)?)),
        Expr::Div(a, b) => {
            let d = as_polynomial(b)?;
            if d.degree() != Some(0) {
                return None;
            }
            let inv = 1.0 / d.0[0];
            Some(as_polynomial(a)?.mul(&Polynomial::constant(inv)))
        }
        Expr::Neg(a) => Some(as_polynomial(a)?.mul(&Polynomial::constant(-1.0))),
        Expr::Pow(a, r) if r.is_integer() && !r.is_negative() => {
            let base = as_polynomial(a)?;
            let mut acc = Polynomial::constant(1.0);
            for _ in 0..*r.numer() {
                acc = acc.mul(&base);
            }
            Some(acc)
        }
        _ => None,
    }
}

pub(crate) fn exponent_is_one(r: &Exponent) -> bool {
    r.is_one()
}

pub(crate) fn exponent_is_zero(r: &Exponent) -> bool {
    r.is_zero()
}
