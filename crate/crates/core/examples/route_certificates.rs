//! Routes generator and point-set pairs to certificates, then cross-checks numerically.
use gabor_hrt_lab::expr::parse;
use gabor_hrt_lab::gram::{LambdaSet, TFPoint};
use gabor_hrt_lab::router::{corroborate, replays, route, RouteResult, RouterConfig};
use gabor_hrt_lab::signal::Grid;

fn lam(pts: &[(&str, &str)]) -> LambdaSet {
    LambdaSet::new(pts.iter().map(|(a, b)| TFPoint::new(a.parse::<gabor_hrt_lab::dioph::ExactScalar>().unwrap(), b.parse::<gabor_hrt_lab::dioph::ExactScalar>().unwrap())).collect()).unwrap()
}

fn main() {
    let cfg = RouterConfig::default();
    let grid = Grid::new(8.0, 1024).unwrap();
    let cases = [
        ("exp(-x^2)", lam(&[("0", "0"), ("sqrt(2)", "1"), ("sqrt(3)", "1/2"), ("1", "sqrt(5)")])),
        ("1/(1+x^2)", lam(&[("0", "0"), ("1", "0"), ("sqrt(2)", "1"), ("2", "2")])),
        ("exp(-sqrt(abs(x)))", lam(&[("0", "0"), ("1/2", "1"), ("sqrt(3)", "sqrt(2)"), ("-1", "sqrt(3)")])),
        ("sin(2*pi*x)", lam(&[("0", "0"), ("sqrt(2)", "1/2"), ("1/3", "sqrt(3)"), ("2", "-1"), ("1", "1"), ("-1", "sqrt(5)")])),
    ];
    for (src, l) in cases {
        let g = parse(src).unwrap();
        match route(&g, &l, &cfg) {
            RouteResult::Certified(c) => {
                let gram = corroborate(&c, &g, &l, grid).unwrap();
                println!("{src}: {} ({:?}), replays {}, grid verdict {:?}", c.rule, c.confidence, replays(&c, &g, &l, &cfg), gram.verdict);
                println!("  {}", c.narrative);
            }
            RouteResult::NoRule(n) => println!("{src}: no rule ({} rules tried)", n.failures.len()),
        }
    }
}
