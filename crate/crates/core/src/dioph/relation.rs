use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ExactScalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RelationOutcome {
    /// `Σ coeffs_k · v_k = 0` with `coeffs` not all zero.
    Relation { coeffs: Vec<i64>, residual: f64 },
    /// No integer relation with every `|m_k| ≤ bound` was found.
    NoneUpTo { bound: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationMethod {
    /// Rational linear algebra on the surd coordinates; a decision.
    Exact,
    /// Lattice reduction on doubles; only ever evidence.
    Lll,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub outcome: RelationOutcome,
    pub method: RelationMethod,
    pub note: String,
}

impl RelationReport {
    /// True only for an exact proof of Q-linear independence.
    pub fn proves_independence(&self) -> bool {
        self.method == RelationMethod::Exact && matches!(self.outcome, RelationOutcome::NoneUpTo { .. })
    }

    pub fn relation(&self) -> Option<&[i64]> {
        match &self.outcome {
            RelationOutcome::Relation { coeffs, .. } => Some(coeffs),
            RelationOutcome::NoneUpTo { .. } => None,
        }
    }
}

/// Integer relation search among `values`.
///
/// All-exact inputs are decided exactly: each value becomes a rational vector
/// over the `√d` basis and a primitive kernel vector is extracted. Otherwise
/// an LLL search over doubles looks for relations with `|m_k| ≤ bound`.
pub fn q_independence(values: &[ExactScalar], bound: u64) -> RelationReport {
    assert!((1..=8).contains(&values.len()), "q_independence takes 1 to 8 values");
    assert!(bound >= 1, "coefficient bound must be positive");
    if values.iter().all(ExactScalar::is_exact) {
        let exact: Vec<_> = values.iter().map(|v| v.as_exact().unwrap().clone()).collect();
        return exact_relation(&exact, bound);
    }
    float_relation(&values.iter().map(ExactScalar::to_f64).collect::<Vec<_>>(), bound)
}

fn exact_relation(values: &[super::SurdSum], bound: u64) -> RelationReport {
    let basis: Vec<u64> = values
        .iter()
        .flat_map(|v| v.terms().map(|(d, _)| d))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // Columns are the values; a kernel vector is a relation.
    let matrix: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&d| values.iter().map(|v| v.coefficient(d)).collect())
        .collect();
    match kernel_vector(matrix, values.len()) {
        Some(m) => {
            let coeffs: Option<Vec<i64>> = m.iter().map(|c| c.to_i64()).collect();
            let note = format!("exact over the basis {{{}}}", basis_text(&basis));
            match coeffs {
                Some(coeffs) => RelationReport {
                    outcome: RelationOutcome::Relation { coeffs, residual: 0.0 },
                    method: RelationMethod::Exact,
                    note,
                },
                None => RelationReport {
                    outcome: RelationOutcome::NoneUpTo { bound },
                    method: RelationMethod::Exact,
                    note: format!("{note}; a relation exists but its coefficients overflow i64"),
                },
            }
        }
        None => RelationReport {
            outcome: RelationOutcome::NoneUpTo { bound },
            method: RelationMethod::Exact,
            note: format!("exact: linearly independent over Q (basis {{{}}})", basis_text(&basis)),
        },
    }
}

fn basis_text(basis: &[u64]) -> String {
    basis
        .iter()
        .map(|d| if *d == 1 { "1".to_string() } else { format!("sqrt({d})") })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Primitive integer kernel vector of a rational `rows × cols` matrix, sign
/// normalized so the first nonzero entry is positive.
fn kernel_vector(mut a: Vec<Vec<BigRational>>, cols: usize) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = BigRational::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![BigRational::zero(); cols];
    x[free] = BigRational::one();
    for (i, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -a[i][free].clone();
    }
    let lcm = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let mut ints: Vec<BigInt> = x.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    for v in ints.iter_mut() {
        *v = &*v / &g;
    }
    if ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        for v in ints.iter_mut() {
            *v = -&*v;
        }
    }
    Some(ints)
}

/// Relation is accepted when the residual is within the rounding floor of
/// evaluating `Σ m_k v_k` in double precision.
fn float_tolerance(values: &[f64], m: &[i64]) -> f64 {
    let mass: f64 = values.iter().zip(m).map(|(v, c)| v.abs() * (*c as f64).abs()).sum();
    16.0 * f64::EPSILON * mass.max(f64::MIN_POSITIVE)
}

fn float_relation(values: &[f64], bound: u64) -> RelationReport {
    let n = values.len();
    if let Some(k) = values.iter().position(|v| *v == 0.0) {
        let mut coeffs = vec![0; n];
        coeffs[k] = 1;
        return RelationReport {
            outcome: RelationOutcome::Relation { coeffs, residual: 0.0 },
            method: RelationMethod::Lll,
            note: "a value is zero".into(),
        };
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut best: Option<(Vec<i64>, f64)> = None;
    for weight in [1e4, 1e7, 1e10, 1e13, 1e15] {
        let basis: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n + 1];
                row[i] = 1.0;
                row[n] = weight * values[i] / scale;
                row
            })
            .collect();
        for row in lll(basis, 0.99) {
            let m: Vec<i64> = row[..n].iter().map(|c| c.round() as i64).collect();
            if m.iter().all(|c| *c == 0) || m.iter().any(|c| c.unsigned_abs() > bound) {
                continue;
            }
            let residual = values.iter().zip(&m).map(|(v, c)| v * *c as f64).sum::<f64>().abs();
            if residual <= float_tolerance(values, &m) {
                let size: u64 = m.iter().map(|c| c.unsigned_abs()).max().unwrap();
                let better = best.as_ref().is_none_or(|(b, _)| size < b.iter().map(|c| c.unsigned_abs()).max().unwrap());
                if better {
                    best = Some((normalize_sign(m), residual));
                }
            }
        }
    }
    match best {
        Some((coeffs, residual)) => RelationReport {
            outcome: RelationOutcome::Relation { coeffs, residual },
            method: RelationMethod::Lll,
            note: "relation holds to double precision; floats cannot certify it".into(),
        },
        None => RelationReport {
            outcome: RelationOutcome::NoneUpTo { bound },
            method: RelationMethod::Lll,
            note: "no relation found; not a proof of independence".into(),
        },
    }
}

fn normalize_sign(mut m: Vec<i64>) -> Vec<i64> {
    if m.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
        for c in m.iter_mut() {
            *c = -*c;
        }
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Textbook LLL on the rows of `b`, Gram-Schmidt recomputed after each swap.
fn lll(mut b: Vec<Vec<f64>>, delta: f64) -> Vec<Vec<f64>> {
    let n = b.len();
    let gs = |b: &[Vec<f64>]| {
        let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                let denom = dot(&bstar[j], &bstar[j]);
                mu[i][j] = if denom > 0.0 { dot(&b[i], &bstar[j]) / denom } else { 0.0 };
                for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                    *vk -= mu[i][j] * bk;
                }
            }
            bstar.push(v);
        }
        (bstar, mu)
    };
    let (mut bstar, mut mu) = gs(&b);
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                for l in 0..=j {
                    mu[k][l] -= q * if l == j { 1.0 } else { mu[j][l] };
                }
            }
        }
        let lhs = dot(&bstar[k], &bstar[k]);
        let rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * dot(&bstar[k - 1], &bstar[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (bstar, mu) = gs(&b);
            k = (k - 1).max(1);
        }
    }
    b
}
