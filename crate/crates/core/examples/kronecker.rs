//! Simultaneous approximation with Q-independent frequencies.
use gabor_hrt_lab::dioph::{kronecker_solve, ExactScalar, KroneckerOptions};

fn main() {
    let betas: Vec<ExactScalar> = ["sqrt(2)", "sqrt(3)"].iter().map(|s| s.parse().unwrap()).collect();
    for (eps, integer_u) in [(1e-2, false), (1e-3, false), (1e-2, true)] {
        let opts = KroneckerOptions { integer_u, ..KroneckerOptions::default() };
        match kronecker_solve(&betas, &[0.25, 0.25], 100.0, eps, opts) {
            Ok(s) => println!("ε={eps:e} integer_u={integer_u}: u={:.6} p={:?} residuals {:?}", s.u, s.p, s.residuals),
            Err(e) => println!("ε={eps:e}: {e}"),
        }
    }
    let dependent: Vec<ExactScalar> = ["sqrt(2)", "sqrt(8)"].iter().map(|s| s.parse().unwrap()).collect();
    println!("{:?}", kronecker_solve(&dependent, &[0.1, 0.4], 0.0, 1e-2, KroneckerOptions::default()).err());
}
