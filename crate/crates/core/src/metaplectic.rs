//! Fourier, dilation, translation and modulation acting simultaneously on
//! point sets (by a det-1 affine map) and on signals (by the matching unitary).
//!
//! Unimodular phase factors of the unitaries are dropped: they rescale atoms
//! by modulus-1 constants and cannot move any singular value.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dioph::{ExactScalar, SurdSum};
use crate::gram::{LambdaError, LambdaSet, TFPoint};
use crate::signal::{dft, tf_shift, Interpolator, Signal, SignalError};

#[derive(Debug, Clone, PartialEq)]
pub enum SymplecticOp {
    Fourier,
    /// `D_r g(x) = |r|^{1/2} g(rx)`, point map `(α, β) ↦ (α/r, rβ)`.
    Dilation(ExactScalar),
    Translate(ExactScalar),
    Modulate(ExactScalar),
}

#[derive(Debug, Error)]
pub enum MetaError {
    #[error("dilation factor {0} outside the supported range 1/4 <= |r| <= 4")]
    DilationOutOfRange(f64),
    #[error("dilation factor must be nonzero")]
    ZeroDilation,
    #[error("bad op {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

/// `p ↦ A p + t`, exact on exact inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineMap {
    pub matrix: [[ExactScalar; 2]; 2],
    pub offset: [ExactScalar; 2],
}

impl AffineMap {
    pub fn identity() -> AffineMap {
        let (o, z) = (ExactScalar::integer(1), ExactScalar::zero());
        AffineMap { matrix: [[o.clone(), z.clone()], [z.clone(), o]], offset: [z.clone(), z] }
    }

    pub fn det(&self) -> ExactScalar {
        let m = &self.matrix;
        m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
    }

    pub fn apply(&self, p: &TFPoint) -> TFPoint {
        let m = &self.matrix;
        let a = m[0][0].mul(&p.alpha).add(&m[0][1].mul(&p.beta)).add(&self.offset[0]);
        let b = m[1][0].mul(&p.alpha).add(&m[1][1].mul(&p.beta)).add(&self.offset[1]);
        TFPoint { alpha: a, beta: b }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &AffineMap) -> AffineMap {
        let (a, b) = (&self.matrix, &first.matrix);
        let entry = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        let shifted = self.apply(&TFPoint { alpha: first.offset[0].clone(), beta: first.offset[1].clone() });
        AffineMap {
            matrix: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
            offset: [shifted.alpha, shifted.beta],
        }
    }
}

impl SymplecticOp {
    pub fn affine(&self) -> AffineMap {
        let (o, z) = (ExactScalar::integer(1), ExactScalar::zero());
        match self {
            SymplecticOp::Fourier => AffineMap {
                matrix: [[z.clone(), o.clone()], [o.neg(), z.clone()]],
                offset: [z.clone(), z],
            },
            SymplecticOp::Dilation(r) => AffineMap {
                matrix: [[o.div(r), z.clone()], [z.clone(), r.clone()]],
                offset: [z.clone(), z],
            },
            SymplecticOp::Translate(a) => AffineMap { offset: [a.clone(), z], ..AffineMap::identity() },
            SymplecticOp::Modulate(b) => AffineMap { offset: [z, b.clone()], ..AffineMap::identity() },
        }
    }

    pub fn matrix(&self) -> [[ExactScalar; 2]; 2] {
        self.affine().matrix
    }
}

impl fmt::Display for SymplecticOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymplecticOp::Fourier => f.write_str("fourier"),
            SymplecticOp::Dilation(r) => write!(f, "dilate:{r}"),
            SymplecticOp::Translate(a) => write!(f, "translate:{a}"),
            SymplecticOp::Modulate(b) => write!(f, "modulate:{b}"),
        }
    }
}

impl Serialize for SymplecticOp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SymplecticOp {
    type Err = MetaError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| MetaError::Parse { text: text.to_string(), reason };
        let t = text.trim();
        if t == "fourier" {
            return Ok(SymplecticOp::Fourier);
        }
        let (name, arg) = t.split_once(':').ok_or_else(|| err("expected fourier, dilate:r, translate:a or modulate:b".into()))?;
        let v: ExactScalar = arg.parse().map_err(|e| err(format!("{e}")))?;
        match name.trim() {
            "dilate" => {
                if v.is_zero() {
                    return Err(MetaError::ZeroDilation);
                }
                Ok(SymplecticOp::Dilation(v))
            }
            "translate" => Ok(SymplecticOp::Translate(v)),
            "modulate" => Ok(SymplecticOp::Modulate(v)),
            other => Err(err(format!("unknown op {other:?}"))),
        }
    }
}

/// Parses a comma-separated pipeline such as `translate:-3,modulate:1/2,fourier`.
pub fn parse_ops(text: &str) -> Result<Vec<SymplecticOp>, MetaError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(text).into_iter().map(str::parse).collect()
}

/// Commas inside parentheses (none today, but `sqrt(..)` arguments could
/// grow them) do not split.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

pub fn format_ops(ops: &[SymplecticOp]) -> String {
    ops.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn compose(ops: &[SymplecticOp]) -> AffineMap {
    ops.iter().fold(AffineMap::identity(), |acc, op| op.affine().after(&acc))
}

pub fn apply_to_lambda(op: &SymplecticOp, lambda: &LambdaSet) -> Result<LambdaSet, MetaError> {
    apply_map(&op.affine(), lambda)
}

pub fn apply_ops_to_lambda(ops: &[SymplecticOp], lambda: &LambdaSet) -> Result<LambdaSet, MetaError> {
    ops.iter().try_fold(lambda.clone(), |l, op| apply_to_lambda(op, &l))
}

fn apply_map(map: &AffineMap, lambda: &LambdaSet) -> Result<LambdaSet, MetaError> {
    Ok(LambdaSet::new(lambda.points().iter().map(|p| map.apply(p)).collect())?)
}

pub fn apply_to_signal(op: &SymplecticOp, g: &Signal) -> Result<Signal, MetaError> {
    match op {
        SymplecticOp::Fourier => Ok(dft(g)),
        SymplecticOp::Translate(a) => Ok(tf_shift(g, a.to_f64(), 0.0)?),
        SymplecticOp::Modulate(b) => Ok(tf_shift(g, 0.0, b.to_f64())?),
        SymplecticOp::Dilation(r) => {
            let r = r.to_f64();
            if r == 0.0 {
                return Err(MetaError::ZeroDilation);
            }
            if !(0.25..=4.0).contains(&r.abs()) {
                return Err(MetaError::DilationOutOfRange(r));
            }
            let grid = g.grid();
            let interp = Interpolator::new(g);
            let scale = r.abs().sqrt();
            let samples: Vec<Complex64> = grid.points().map(|x| interp.at(r * x) * scale).collect();
            Ok(Signal::new(grid, samples))
        }
    }
}

pub fn apply_ops_to_signal(ops: &[SymplecticOp], g: &Signal) -> Result<Signal, MetaError> {
    ops.iter().try_fold(g.clone(), |s, op| apply_to_signal(op, &s))
}

/// Moves the lexicographically smallest point to the origin and, when all
/// first coordinates are exact multiples of a common spacing `d`, dilates
/// by `r = d` so the spacing becomes 1.
pub fn normalize(lambda: &LambdaSet) -> (LambdaSet, Vec<SymplecticOp>) {
    let pts = lambda.points();
    let origin = pts
        .iter()
        .min_by(|p, q| p.alpha.numeric_cmp(&q.alpha).then_with(|| p.beta.numeric_cmp(&q.beta)))
        .expect("lambda sets are nonempty");
    let mut ops = Vec::new();
    if !origin.alpha.is_zero() {
        ops.push(SymplecticOp::Translate(origin.alpha.neg()));
    }
    if !origin.beta.is_zero() {
        ops.push(SymplecticOp::Modulate(origin.beta.neg()));
    }
    let shifted = apply_ops_to_lambda(&ops, lambda).expect("translations keep points distinct");
    if let Some(d) = common_spacing(&shifted) {
        if d != ExactScalar::integer(1) {
            ops.push(SymplecticOp::Dilation(d));
        }
    }
    let out = apply_ops_to_lambda(&ops, lambda).expect("invertible maps keep points distinct");
    (out, ops)
}

/// Positive `d` with every `α_k ∈ dZ`, when all `α_k` are exact rational
/// multiples of one of them.
fn common_spacing(lambda: &LambdaSet) -> Option<ExactScalar> {
    let alphas: Vec<&SurdSum> = lambda.points().iter().map(|p| p.alpha.as_exact()).collect::<Option<_>>()?;
    let w = alphas.iter().find(|a| !a.is_zero())?;
    let mut ratios: Vec<BigRational> = Vec::new();
    for a in &alphas {
        ratios.push(a.div(w)?.as_rational()?);
    }
    let num = ratios.iter().fold(num_bigint::BigInt::zero(), |g, q| g.gcd(q.numer()));
    let den = ratios.iter().fold(num_bigint::BigInt::from(1), |l, q| l.lcm(q.denom()));
    let step = BigRational::new(num, den);
    let d = w.scale(&step);
    let d = if d.to_f64() < 0.0 { d.neg() } else { d };
    debug_assert!(!step.is_negative());
    Some(ExactScalar::Exact(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::signal::{sample, Grid};

    fn s(t: &str) -> ExactScalar {
        t.parse().unwrap()
    }

    #[test]
    fn matrices_have_unit_determinant() {
        for op in parse_ops("fourier,dilate:3,dilate:-1/2,dilate:sqrt(2),translate:1,modulate:-2/3").unwrap() {
            assert_eq!(op.affine().det(), ExactScalar::integer(1), "{op}");
        }
    }

    #[test]
    fn point_maps() {
        let one = LambdaSet::from_integers(&[(1, 0)]).unwrap();
        let f = apply_to_lambda(&SymplecticOp::Fourier, &one).unwrap();
        assert_eq!(f.points()[0], TFPoint::new(0, -1));
        let l = LambdaSet::from_integers(&[(2, 3)]).unwrap();
        let d = apply_to_lambda(&SymplecticOp::Dilation(s("2")), &l).unwrap();
        assert_eq!(d.points()[0], TFPoint::new(1, 6));
    }

    #[test]
    fn composition_is_exact() {
        let ops = parse_ops("translate:1/3,fourier,dilate:sqrt(2),modulate:-1,dilate:3/2").unwrap();
        let l = LambdaSet::new(vec![TFPoint::new(s("1/2"), s("sqrt(3)")), TFPoint::new(s("-2"), s("1"))]).unwrap();
        let stepwise = apply_ops_to_lambda(&ops, &l).unwrap();
        let composed = apply_map(&compose(&ops), &l).unwrap();
        assert_eq!(stepwise, composed);
        assert!(stepwise.is_exact());
        assert_eq!(compose(&ops).det(), ExactScalar::integer(1));
    }

    #[test]
    fn op_syntax_round_trips() {
        let text = "fourier,dilate:1/2,translate:-3,modulate:2*sqrt(2)";
        assert_eq!(format_ops(&parse_ops(text).unwrap()), text);
        assert!(parse_ops("shear:1").is_err());
        assert!(matches!(parse_ops("dilate:0"), Err(MetaError::ZeroDilation)));
    }

    #[test]
    fn normalize_examples() {
        let (l, ops) = normalize(&LambdaSet::from_integers(&[(3, 5)]).unwrap());
        assert_eq!(l, LambdaSet::from_integers(&[(0, 0)]).unwrap());
        assert_eq!(format_ops(&ops), "translate:-3,modulate:-5");

        let (l, ops) = normalize(&LambdaSet::from_integers(&[(0, 0), (2, 0), (4, 0)]).unwrap());
        assert_eq!(l, LambdaSet::from_integers(&[(0, 0), (1, 0), (2, 0)]).unwrap());
        assert_eq!(format_ops(&ops), "dilate:2");

        let (l, _) = normalize(&LambdaSet::from_integers(&[(1, 1), (1, 2), (2, 1)]).unwrap());
        assert_eq!(l, LambdaSet::from_integers(&[(0, 0), (0, 1), (1, 0)]).unwrap());

        let surd = LambdaSet::new(vec![TFPoint::new(s("sqrt(2)"), s("0")), TFPoint::new(s("3*sqrt(2)"), s("1"))]).unwrap();
        let (l, ops) = normalize(&surd);
        assert_eq!(format_ops(&ops), "translate:-sqrt(2),dilate:2*sqrt(2)");
        assert_eq!(l.points()[1], TFPoint::new(s("1"), s("2*sqrt(2)")));
    }

    #[test]
    fn dilation_resamples_pointwise() {
        let g = sample(&parse("exp(-x^2)").unwrap(), Grid::new(8.0, 512).unwrap()).unwrap().signal;
        let d = apply_to_signal(&SymplecticOp::Dilation(s("2")), &g).unwrap();
        for (x, v) in g.grid().points().zip(d.samples()) {
            let want = 2f64.sqrt() * (-4.0 * x * x).exp();
            assert!((v - Complex64::new(want, 0.0)).norm() < 1e-6, "{x}");
        }
        assert_eq!(apply_to_signal(&SymplecticOp::Dilation(s("1")), &g).unwrap().samples().len(), 512);
        assert!(matches!(apply_to_signal(&SymplecticOp::Dilation(s("5")), &g), Err(MetaError::DilationOutOfRange(_))));
    }
}
