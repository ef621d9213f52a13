//! Finite Gabor systems on a grid and the Gram-matrix rank test.
//!
//! Verdicts are numerical evidence about the discretized system, never a
//! proof about the continuous one; reports carry their grid for that reason.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dioph::ExactScalar;
use crate::signal::{tf_shift, Grid, Signal, SignalError};

pub const MAX_POINTS: usize = 64;
/// Distinctness tolerance for float coordinates.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TFPoint {
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
}

impl TFPoint {
    pub fn new(alpha: impl Into<ExactScalar>, beta: impl Into<ExactScalar>) -> TFPoint {
        TFPoint { alpha: alpha.into(), beta: beta.into() }
    }

    pub fn floats(alpha: f64, beta: f64) -> TFPoint {
        TFPoint { alpha: ExactScalar::float(alpha), beta: ExactScalar::float(beta) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.alpha.to_f64(), self.beta.to_f64())
    }

    pub fn is_exact(&self) -> bool {
        self.alpha.is_exact() && self.beta.is_exact()
    }

    pub fn same_as(&self, other: &TFPoint) -> bool {
        self.alpha.same_as(&other.alpha, FLOAT_TOL) && self.beta.same_as(&other.beta, FLOAT_TOL)
    }
}

impl fmt::Display for TFPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("point set is empty")]
    Empty,
    #[error("{0} points exceed the limit of {MAX_POINTS}")]
    TooMany(usize),
    #[error("points {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),
}

/// Distinct time-frequency points, `1 ≤ N ≤ 64`, in caller order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLambda")]
pub struct LambdaSet {
    points: Vec<TFPoint>,
}

#[derive(Deserialize)]
struct RawLambda {
    points: Vec<TFPoint>,
}

impl TryFrom<RawLambda> for LambdaSet {
    type Error = LambdaError;

    fn try_from(raw: RawLambda) -> Result<Self, Self::Error> {
        LambdaSet::new(raw.points)
    }
}

impl LambdaSet {
    pub fn new(points: Vec<TFPoint>) -> Result<LambdaSet, LambdaError> {
        if points.is_empty() {
            return Err(LambdaError::Empty);
        }
        if points.len() > MAX_POINTS {
            return Err(LambdaError::TooMany(points.len()));
        }
        for (i, p) in points.iter().enumerate() {
            let (a, b) = p.to_f64();
            if !a.is_finite() || !b.is_finite() {
                return Err(LambdaError::NonFinite(i));
            }
            if let Some(j) = points[..i].iter().position(|q| q.same_as(p)) {
                return Err(LambdaError::Duplicate(j, i));
            }
        }
        Ok(LambdaSet { points })
    }

    pub fn from_f64(pairs: &[(f64, f64)]) -> Result<LambdaSet, LambdaError> {
        LambdaSet::new(pairs.iter().map(|&(a, b)| TFPoint::floats(a, b)).collect())
    }

    /// Integer coordinates, kept exact.
    pub fn from_integers(pairs: &[(i64, i64)]) -> Result<LambdaSet, LambdaError> {
        LambdaSet::new(pairs.iter().map(|&(a, b)| TFPoint::new(a, b)).collect())
    }

    pub fn points(&self) -> &[TFPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.points.iter().all(TFPoint::is_exact)
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(TFPoint::to_f64).collect()
    }

    /// Sub-collection by index; `None` if indices repeat or are out of range.
    pub fn subset(&self, idx: &[usize]) -> Option<LambdaSet> {
        let pts: Option<Vec<_>> = idx.iter().map(|&i| self.points.get(i).cloned()).collect();
        LambdaSet::new(pts?).ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lambda sets serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Independent,
    Dependent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    /// Row-major, `matrix[j][k] = ⟨atom_j, atom_k⟩`, entries as `[re, im]`.
    pub matrix: Vec<Vec<Complex64>>,
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub verdict: Verdict,
    pub threshold_used: f64,
    pub grid: Grid,
    pub atoms: usize,
    pub notes: Vec<String>,
}

impl GramReport {
    /// `sigma_min / sigma_max`, the scale-free conditioning of the system.
    pub fn relative_sigma_min(&self) -> f64 {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top > 0.0 {
            self.sigma_min / top
        } else {
            0.0
        }
    }
}

/// Default threshold factor: independence needs `σ_min > 10⁻⁸ ‖g‖²`.
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 1e-8;

/// `[M_{β_k} T_{α_k} g]_k` in the order of `lambda`.
pub fn build_system(g: &Signal, lambda: &LambdaSet) -> Result<Vec<Signal>, SignalError> {
    lambda
        .points()
        .iter()
        .map(|p| {
            let (a, b) = p.to_f64();
            tf_shift(g, a, b)
        })
        .collect()
}

/// Gram report for the Gabor system of `(g, Λ)`.
///
/// `threshold` defaults to `10⁻⁸·‖g‖²`.
pub fn gram_report(g: &Signal, lambda: &LambdaSet, threshold: Option<f64>) -> Result<GramReport, SignalError> {
    let atoms = build_system(g, lambda)?;
    let norm2 = g.l2_norm() * g.l2_norm();
    Ok(gram_report_for_atoms(&atoms, threshold.unwrap_or(DEFAULT_RELATIVE_THRESHOLD * norm2)))
}

/// Gram report for arbitrary atoms on a common grid (no limit on their count).
pub fn gram_report_for_atoms(atoms: &[Signal], threshold: f64) -> GramReport {
    assert!(!atoms.is_empty(), "need at least one atom");
    assert!(threshold > 0.0, "threshold must be positive");
    let grid = atoms[0].grid();
    let n = atoms.len();
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in j..n {
            let v = atoms[j].inner(&atoms[k]);
            matrix[j][k] = v;
            matrix[k][j] = v.conj();
        }
        // Diagonal entries of a Gram matrix are real.
        matrix[j][j].im = 0.0;
    }
    let m = DMatrix::from_fn(n, n, |j, k| matrix[j][k]);
    let mut singular_values: Vec<f64> = m.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let sigma_min = *singular_values.last().unwrap();
    let mut notes = vec!["numerical evidence on a truncated grid, not a proof".to_string()];
    let verdict = if n > grid.count {
        notes.push(format!("pigeonhole: {n} atoms in a {}-dimensional sample space", grid.count));
        Verdict::Dependent
    } else if sigma_min > threshold {
        Verdict::Independent
    } else if sigma_min < threshold / 100.0 {
        Verdict::Dependent
    } else {
        Verdict::Inconclusive
    };
    GramReport { matrix, singular_values, sigma_min, verdict, threshold_used: threshold, grid, atoms: n, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::signal::sample;

    fn gaussian(t: f64, n: usize) -> Signal {
        sample(&parse("exp(-x^2)").unwrap(), Grid::new(t, n).unwrap()).unwrap().signal
    }

    #[test]
    fn lambda_validation_and_json() {
        assert_eq!(LambdaSet::new(vec![]), Err(LambdaError::Empty));
        assert_eq!(LambdaSet::from_integers(&[(0, 0), (1, 0), (0, 0)]), Err(LambdaError::Duplicate(0, 2)));
        assert!(LambdaSet::from_f64(&[(0.0, 0.0), (1e-13, 0.0)]).is_err());
        let l: LambdaSet =
            serde_json::from_str(r#"{"points": [{"alpha": 0, "beta": "sqrt(2)"}, {"alpha": "1/2", "beta": 0.25}]}"#).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.points()[0].beta, ExactScalar::surd(1, 2));
        let back: LambdaSet = serde_json::from_str(&l.to_json()).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<LambdaSet>(r#"{"points": []}"#).is_err());
        let many: Vec<(i64, i64)> = (0..65).map(|k| (k, 0)).collect();
        assert_eq!(LambdaSet::from_integers(&many), Err(LambdaError::TooMany(65)));
    }

    #[test]
    fn single_atom_gram_is_the_squared_norm() {
        let g = gaussian(8.0, 512);
        let r = gram_report(&g, &LambdaSet::from_integers(&[(0, 0)]).unwrap(), None).unwrap();
        assert!((r.sigma_min - g.l2_norm().powi(2)).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Independent);
    }

    #[test]
    fn two_spikes() {
        let grid = Grid::new(4.0, 8).unwrap();
        let mut v = vec![0.0; 8];
        v[4] = 1.0;
        let g = Signal::from_real(grid, &v);
        let atoms = build_system(&g, &LambdaSet::from_integers(&[(0, 0), (1, 0)]).unwrap()).unwrap();
        assert_eq!(atoms[0], g);
        assert_eq!(atoms[1].samples()[5].re, 1.0);
    }

    #[test]
    fn hermitian_and_verdict_bands() {
        let g = gaussian(8.0, 256);
        let l = LambdaSet::from_f64(&[(0.0, 0.0), (0.5, 0.25), (1.5, -0.5)]).unwrap();
        let r = gram_report(&g, &l, None).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((r.matrix[j][k] - r.matrix[k][j].conj()).norm() < 1e-12);
            }
        }
        assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let hi = gram_report(&g, &l, Some(r.sigma_min * 2.0)).unwrap();
        assert_eq!(hi.verdict, Verdict::Inconclusive);
        let higher = gram_report(&g, &l, Some(r.sigma_min * 1000.0)).unwrap();
        assert_eq!(higher.verdict, Verdict::Dependent);
    }
}
