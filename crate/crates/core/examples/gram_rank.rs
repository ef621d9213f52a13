//! Numerical rank test of a Gabor system, plus the pigeonhole regime.
use gabor_hrt_lab::expr::parse;
use gabor_hrt_lab::gram::{gram_report, gram_report_for_atoms, LambdaSet};
use gabor_hrt_lab::signal::{sample, tf_shift, Grid};

fn main() {
    let grid = Grid::new(8.0, 1024).unwrap();
    let g = sample(&parse("exp(-x^2)").unwrap(), grid).unwrap().signal;
    let square = LambdaSet::from_integers(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
    let r = gram_report(&g, &square, None).unwrap();
    println!("unit square: verdict {:?}, sigma_min {:.6e}, threshold {:.3e}", r.verdict, r.sigma_min, r.threshold_used);

    let small = Grid::new(4.0, 16).unwrap();
    let g = sample(&parse("exp(-x^2)").unwrap(), small).unwrap().signal;
    let atoms: Vec<_> = (0..17).map(|k| tf_shift(&g, k as f64 * 0.1, 0.0).unwrap()).collect();
    let r = gram_report_for_atoms(&atoms, 1e-8);
    println!("17 atoms on 16 samples: verdict {:?}, notes {:?}", r.verdict, r.notes);
}
