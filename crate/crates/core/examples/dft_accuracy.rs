//! The centered DFT as a quadrature for the continuous Fourier transform.
use std::f64::consts::PI;

use gabor_hrt_lab::expr::parse;
use gabor_hrt_lab::signal::{dft, sample, Grid};

fn main() {
    for (t, n) in [(4.0, 128), (8.0, 1024), (16.0, 4096)] {
        let grid = Grid::new(t, n).unwrap();
        let g = sample(&parse("exp(-pi*x^2)").unwrap(), grid).unwrap().signal;
        let ghat = dft(&g);
        let dual = ghat.grid();
        let sup = (0..dual.count)
            .filter(|&j| dual.point(j).abs() <= 4.0)
            .map(|j| (ghat.samples()[j].re - (-PI * dual.point(j).powi(2)).exp()).abs().max(ghat.samples()[j].im.abs()))
            .fold(0.0, f64::max);
        println!("T={t} n={n}: dual spacing {:.4}, sup error {sup:.2e}, norms {:.12} / {:.12}", dual.spacing(), g.l2_norm(), ghat.l2_norm());
    }
}
