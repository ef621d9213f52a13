//! Structural and tail classification of generators, with symbolic derivatives.
use gabor_hrt_lab::expr::{classify, differentiate, parse, TailConfig};

fn main() {
    let tail = TailConfig::default();
    for src in ["exp(-x^2)", "1/(1+x^2)", "exp(-abs(x))", "x*exp(-x)*sin(x)", "exp(sqrt(log(x))/log(log(x)))"] {
        let e = parse(src).unwrap();
        let r = classify(&e, &tail);
        println!("{src}: LE {} decay {:?} positive {:?} L² {:?}", r.is_le, r.decay_class, r.ultimately_positive, r.square_integrable);
        println!("  d/dx = {}", differentiate(&e));
    }
}
