use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{ExactScalar, SurdSum};
use crate::gram::{LambdaSet, TFPoint, FLOAT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LatticeMembership {
    /// Every point lies in `offset + A(Z²)`; `basis` is `A` row-major.
    InLattice { basis: [[ExactScalar; 2]; 2], offset: TFPoint },
    NotInLattice { reason: String },
    Inconclusive { reason: String },
}

impl LatticeMembership {
    pub fn is_in_lattice(&self) -> bool {
        matches!(self, LatticeMembership::InLattice { .. })
    }
}

type Vec2 = (SurdSum, SurdSum);

/// Decides whether `Λ` sits in a translate of a full-rank lattice.
///
/// The differences `p_k − p_0` generate a subgroup of R² which is discrete
/// exactly when its rank over Q (on surd coordinates) equals the dimension
/// of its real span. A Z-basis then comes from the Hermite normal form of
/// the rational coordinates.
pub fn lattice_membership(lambda: &LambdaSet) -> LatticeMembership {
    let pts = lambda.points();
    let exact: Vec<&TFPoint> = pts.iter().filter(|p| p.is_exact()).collect();
    if exact.len() < pts.len() {
        let note = "float coordinates cannot be placed on a lattice exactly";
        if exact.len() >= 2 {
            if let Err(reason) = discrete_basis(&exact) {
                return LatticeMembership::NotInLattice { reason: format!("exact points alone: {reason}") };
            }
        }
        return LatticeMembership::Inconclusive { reason: note.into() };
    }
    match discrete_basis(&exact) {
        Ok((g1, g2)) => {
            let e = |s: &SurdSum| ExactScalar::Exact(s.clone());
            LatticeMembership::InLattice {
                basis: [[e(&g1.0), e(&g2.0)], [e(&g1.1), e(&g2.1)]],
                offset: pts[0].clone(),
            }
        }
        Err(reason) => LatticeMembership::NotInLattice { reason },
    }
}

/// Columns of `A` for the subgroup generated by the exact differences.
fn discrete_basis(pts: &[&TFPoint]) -> Result<(Vec2, Vec2), String> {
    let base = exact_pair(pts[0]);
    let diffs: Vec<Vec2> = pts[1..]
        .iter()
        .map(|p| {
            let q = exact_pair(p);
            (q.0.sub(&base.0), q.1.sub(&base.1))
        })
        .filter(|v| !(v.0.is_zero() && v.1.is_zero()))
        .collect();
    let real_rank = real_rank(&diffs);
    let a_basis: Vec<u64> = collect_basis(diffs.iter().map(|v| &v.0));
    let b_basis: Vec<u64> = collect_basis(diffs.iter().map(|v| &v.1));
    let coords: Vec<Vec<BigRational>> = diffs
        .iter()
        .map(|v| {
            a_basis
                .iter()
                .map(|d| v.0.coefficient(*d))
                .chain(b_basis.iter().map(|d| v.1.coefficient(*d)))
                .collect()
        })
        .collect();
    let pivots = independent_subset(&coords);
    if pivots.len() != real_rank {
        return Err(format!(
            "differences have rank {} over Q but span a {real_rank}-dimensional real space",
            pivots.len()
        ));
    }
    if real_rank == 0 {
        return Ok(((SurdSum::integer(1), SurdSum::zero()), (SurdSum::zero(), SurdSum::integer(1))));
    }
    // Rational coordinates of every difference in the pivot basis, cleared
    // to integers by a common denominator.
    let w: Vec<&Vec<BigRational>> = pivots.iter().map(|&i| &coords[i]).collect();
    let c: Vec<Vec<BigRational>> = coords.iter().map(|v| solve_in_span(&w, v)).collect();
    let den = c.iter().flatten().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<Vec<BigInt>> = c
        .iter()
        .map(|row| row.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let h = hermite_basis(ints, real_rank);
    let inv_den = BigRational::new(BigInt::one(), den);
    let combine = |row: &[BigInt]| -> Vec2 {
        let mut acc = (SurdSum::zero(), SurdSum::zero());
        for (coef, &pi) in row.iter().zip(&pivots) {
            let f = BigRational::from_integer(coef.clone()) * &inv_den;
            acc.0 = acc.0.add(&diffs[pi].0.scale(&f));
            acc.1 = acc.1.add(&diffs[pi].1.scale(&f));
        }
        acc
    };
    let g1 = combine(&h[0]);
    let g2 = if real_rank == 2 { combine(&h[1]) } else { (g1.1.neg(), g1.0.clone()) };
    Ok((g1, g2))
}

fn exact_pair(p: &TFPoint) -> Vec2 {
    (p.alpha.as_exact().unwrap().clone(), p.beta.as_exact().unwrap().clone())
}

fn collect_basis<'a>(values: impl Iterator<Item = &'a SurdSum>) -> Vec<u64> {
    values.flat_map(|v| v.terms().map(|(d, _)| d)).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Rank of the real span, decided exactly through 2×2 minors.
fn real_rank(v: &[Vec2]) -> usize {
    if v.is_empty() {
        return 0;
    }
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let minor = v[i].0.mul(&v[j].1).sub(&v[j].0.mul(&v[i].1));
            if !minor.is_zero() {
                return 2;
            }
        }
    }
    1
}

/// Indices of a maximal Q-independent subset, greedy in input order.
fn independent_subset(rows: &[Vec<BigRational>]) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut picked = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (col, e) in &echelon {
            if !v[*col].is_zero() {
                let f = v[*col].clone() / e[*col].clone();
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((col, v));
            picked.push(i);
        }
    }
    picked
}

/// Coefficients of `v` in terms of the independent vectors `w`.
fn solve_in_span(w: &[&Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    let r = w.len();
    let dim = v.len();
    // Augmented system with one row per coordinate.
    let mut m: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| w.iter().map(|col| col[i].clone()).chain(std::iter::once(v[i].clone())).collect())
        .collect();
    let mut row = 0;
    let mut pivot_of = vec![0usize; r];
    for c in 0..r {
        let p = (row..dim).find(|&i| !m[i][c].is_zero()).expect("w is independent");
        m.swap(row, p);
        let inv = BigRational::one() / m[row][c].clone();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..dim {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=r {
                    let t = &m[row][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_of[c] = row;
        row += 1;
    }
    (0..r).map(|c| m[pivot_of[c]][r].clone()).collect()
}

/// Row-style Hermite basis of the Z-span of `rows` (each of length `rank`).
fn hermite_basis(mut rows: Vec<Vec<BigInt>>, rank: usize) -> Vec<Vec<BigInt>> {
    let mut basis = Vec::new();
    for col in 0..rank {
        // Euclid on column `col` until one row carries the gcd.
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let p = nz[0];
            let pivot = rows[p].clone();
            for &i in &nz[1..] {
                let q = rows[i][col].div_floor(&pivot[col]);
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(p) = rows.iter().position(|r| !r[col].is_zero()) {
            let mut r = rows.swap_remove(p);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -&*x);
            }
            basis.push(r);
        }
    }
    basis
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DifferenceCondition {
    /// 1-based index of the first point whose β differs from all others.
    Holds { k0: usize },
    Fails,
}

pub fn difference_condition(lambda: &LambdaSet) -> DifferenceCondition {
    let pts = lambda.points();
    for (k, p) in pts.iter().enumerate() {
        let unique = pts.iter().enumerate().all(|(j, q)| j == k || !q.beta.same_as(&p.beta, FLOAT_TOL));
        if unique {
            return DifferenceCondition::Holds { k0: k + 1 };
        }
    }
    DifferenceCondition::Fails
}
