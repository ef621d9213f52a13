use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

/// Elementary symmetric sums of the phases `e^{2πi b_t α}` over suffixes of `b`.
///
/// `rows[n-1][m]` holds `B_n(m)`: the sum over all `(n−m)`-element subsets
/// of the last `n` indices of the product of their phases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSumTable {
    pub b: Vec<f64>,
    pub alpha: f64,
    pub rows: Vec<Vec<Complex64>>,
}

impl PhaseSumTable {
    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// `B_n(m)`, 1 ≤ n ≤ M, 0 ≤ m < n.
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.rows[n - 1][m]
    }
}

/// Fills the table with the suffix recurrence, `O(M²)`.
///
/// Adding index `M−n` to the suffix either takes its phase (same `m`, one more
/// chosen element) or skips it (`m` grows by one).
pub fn phase_sums(b: &[f64], alpha: f64) -> PhaseSumTable {
    let big_m = b.len();
    assert!((2..=20).contains(&big_m), "phase sums need 2 ≤ M ≤ 20");
    let phase = |t: usize| Complex64::from_polar(1.0, 2.0 * PI * b[t - 1] * alpha);
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(big_m);
    rows.push(vec![phase(big_m)]);
    for n in 1..big_m {
        let e = phase(big_m - n);
        let prev = &rows[n - 1];
        let mut next = Vec::with_capacity(n + 1);
        next.push(e * prev[0]);
        for m in 1..n {
            next.push(e * prev[m] + prev[m - 1]);
        }
        next.push(prev[n - 1] + e);
        rows.push(next);
    }
    PhaseSumTable { b: b.to_vec(), alpha, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_phases() {
        let (b1, b2, a) = (0.3, -1.1, 0.7);
        let t = phase_sums(&[b1, b2], a);
        let e = |b: f64| Complex64::from_polar(1.0, 2.0 * PI * b * a);
        assert!((t.get(1, 0) - e(b2)).norm() < 1e-15);
        assert!((t.get(2, 1) - (e(b1) + e(b2))).norm() < 1e-15);
        assert!((t.get(2, 0) - e(b1 + b2)).norm() < 1e-14);
    }

    #[test]
    fn zero_alpha_counts_subsets() {
        let t = phase_sums(&[0.5; 6], 0.0);
        assert_eq!(t.get(6, 2), Complex64::new(15.0, 0.0));
        assert_eq!(t.get(4, 0), Complex64::new(1.0, 0.0));
    }
}
