//! Reference values computed once with 40-digit arbitrary-precision
//! arithmetic (mpmath) and frozen here. Literals keep all reference digits.
#![allow(clippy::excessive_precision)]

use gabor_hrt_lab::expr::{derivative_at, evaluate, evaluate_log, parse};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn iterated_log_generator() {
    let e = parse("exp(sqrt(log(x))/log(log(x)))").unwrap();
    let cases = [
        (1e6, 4.118723618945756362225608957830246428579, 5.028732326034104524342308924575594152347e-8),
        (1e12, 4.873419228944897806111101312098458551663, 5.550492054314184562094559100499184963269e-14),
    ];
    for (x, value, slope) in cases {
        assert!(rel(evaluate(&e, x).unwrap(), value) < 1e-13, "value at {x}");
        assert!(rel(derivative_at(&e, x).unwrap(), slope) < 1e-10, "slope at {x}");
    }
}

#[test]
fn oscillating_products() {
    let e = parse("log(1 + x^2) * exp(-x/3) * cos(pi*x)").unwrap();
    assert!(rel(evaluate(&e, 2.3).unwrap(), 0.5021484404082463391274832520508310898904) < 1e-13);
    assert!(rel(derivative_at(&e, 2.3).unwrap(), -2.138993596238411919431401060794145366373) < 1e-10);
    let e = parse("x^(1/3) * sin(x^2) / (2 + cos(x))").unwrap();
    assert!(rel(evaluate(&e, 1.7).unwrap(), 0.1587862711960260592959592400945001794855) < 1e-13);
    assert!(rel(derivative_at(&e, 1.7).unwrap(), -1.985067555663018709039639807423238450671) < 1e-10);
}

#[test]
fn log_domain_survives_underflow() {
    // exp(-x^4) underflows a double long before x = 50.
    let e = parse("exp(-x^4) * x^3").unwrap();
    assert_eq!(evaluate(&e, 50.0).unwrap(), 0.0);
    let v = evaluate_log(&e, 50.0).unwrap();
    assert_eq!(v.sign, 1);
    assert!(rel(v.ln_abs, -6249988.263930983715561824143747636268344) < 1e-14);
}
