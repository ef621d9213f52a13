//! Normalizes a point set and checks that Gram conditioning is unchanged.
use gabor_hrt_lab::expr::parse;
use gabor_hrt_lab::gram::{gram_report, LambdaSet, TFPoint};
use gabor_hrt_lab::metaplectic::{apply_ops_to_lambda, apply_ops_to_signal, format_ops, normalize, parse_ops};
use gabor_hrt_lab::signal::{sample, Grid};

fn main() {
    let s = |t: &str| t.parse::<gabor_hrt_lab::dioph::ExactScalar>().unwrap();
    let l = LambdaSet::new(vec![
        TFPoint::new(s("sqrt(2)"), s("1/2")),
        TFPoint::new(s("sqrt(2) + 2"), s("1/2")),
        TFPoint::new(s("sqrt(2)"), s("3/2")),
    ])
    .unwrap();
    let (n, ops) = normalize(&l);
    println!("ops: {}", format_ops(&ops));
    println!("normalized: {}", n.to_json());

    let grid = Grid::new(8.0, 1024).unwrap();
    let g = sample(&parse("exp(-pi*x^2)").unwrap(), grid).unwrap().signal;
    let pipeline = parse_ops("fourier,dilate:2,modulate:1").unwrap();
    let before = gram_report(&g, &n, None).unwrap();
    let g2 = apply_ops_to_signal(&pipeline, &g).unwrap();
    let n2 = apply_ops_to_lambda(&pipeline, &n).unwrap();
    let after = gram_report(&g2, &n2, Some(before.threshold_used)).unwrap();
    println!("sigma_min before {:.9e}, after {:.9e}", before.sigma_min, after.sigma_min);
}
