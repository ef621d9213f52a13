//! Integer relations, lattice membership and the difference condition.
use gabor_hrt_lab::dioph::{difference_condition, lattice_membership, q_independence, ExactScalar};
use gabor_hrt_lab::gram::{LambdaSet, TFPoint};

fn scalars(items: &[&str]) -> Vec<ExactScalar> {
    items.iter().map(|s| s.parse().unwrap()).collect()
}

fn main() {
    for vals in [&["1/2", "1/3"][..], &["sqrt(2)", "sqrt(8)"], &["1", "sqrt(2)", "sqrt(3)"], &["1.4142135623730951", "1"]] {
        let r = q_independence(&scalars(vals), 1000);
        println!("{vals:?}: {:?} via {:?} ({})", r.outcome, r.method, r.note);
    }
    let s = |a: &str, b: &str| TFPoint::new(a.parse::<ExactScalar>().unwrap(), b.parse::<ExactScalar>().unwrap());
    let sets = [
        LambdaSet::new(vec![s("0", "0"), s("1", "0"), s("0", "sqrt(2)"), s("1", "sqrt(2)")]).unwrap(),
        LambdaSet::new(vec![s("0", "0"), s("1", "0"), s("sqrt(2)", "0"), s("0", "1")]).unwrap(),
    ];
    for l in &sets {
        println!("{}: {:?}, difference condition {:?}", l.to_json(), lattice_membership(l), difference_condition(l));
    }
}
