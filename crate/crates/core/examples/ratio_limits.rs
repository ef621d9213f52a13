//! Ratio limits g(x+α)/g(x) and the logarithmic-derivative shortcut.
use gabor_hrt_lab::asym::{log_derivative_limit, power_law_check, ratio_limit};
use gabor_hrt_lab::expr::{parse, TailConfig};

fn main() {
    let tail = TailConfig::asymptotic();
    for src in ["1/(1+x^2)", "exp(-abs(x))", "exp(-x^2)", "exp(-sqrt(abs(x)))", "sin(2*pi*x)"] {
        let e = parse(src).unwrap();
        for alpha in [1.0, 2f64.sqrt()] {
            let est = ratio_limit(&e, alpha, &tail);
            println!("{src:>20}  α={alpha:.4}  {:?}  residual {:.2e}", est.status, est.residual);
        }
        let ld = log_derivative_limit(&e, &tail);
        println!("{src:>20}  log-derivative {:?}", ld.limit);
    }
    let law = power_law_check(&parse("exp(-x)").unwrap(), &[0.5, 1.0, 2.0, 3.0], &tail).unwrap();
    println!("exp(-x): |l(α)| = a^α with a = {:.9}", law.a);
}
