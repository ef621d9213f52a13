use std::f64::consts::PI;

use gabor_hrt_lab::dioph::{kronecker_solve, lattice_membership, phase_sums, q_independence, ExactScalar, KroneckerOptions, LatticeMembership};
use gabor_hrt_lab::expr::{derivative_at, evaluate, parse, Expr};
use gabor_hrt_lab::gram::{LambdaSet, TFPoint};
use gabor_hrt_lab::metaplectic::{apply_ops_to_lambda, compose, format_ops, normalize, parse_ops, SymplecticOp};
use gabor_hrt_lab::router::{route, RouterConfig, RuleId};
use gabor_hrt_lab::signal::{dft, idft, sample, tf_shift, Grid};
use num_complex::Complex64;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![Just(Expr::X), Just(Expr::Pi), (1u32..50).prop_map(|k| Expr::Const(k as f64 / 4.0))]
}

/// Arbitrary trees over the full grammar.
fn any_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), -3i64..4, 1i64..4).prop_map(|(a, p, q)| Expr::pow(a, p, q)),
            inner.clone().prop_map(Expr::exp),
            inner.clone().prop_map(Expr::log),
            (2u32..4, inner.clone()).prop_map(|(n, a)| Expr::root(n, a)),
            inner.clone().prop_map(Expr::abs),
            inner.clone().prop_map(Expr::sin),
            inner.prop_map(Expr::cos),
        ]
    })
}

/// Smooth trees whose values stay moderate, for finite-difference checks.
fn smooth_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            inner.clone().prop_map(|a| Expr::exp(Expr::sin(a))),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.prop_map(|a| Expr::div(Expr::Const(1.0), Expr::add(Expr::Const(2.0), Expr::cos(a)))),
        ]
    })
}

fn ops() -> impl Strategy<Value = Vec<SymplecticOp>> {
    let op = prop_oneof![
        Just("fourier".to_string()),
        (1i64..5, 1i64..4).prop_map(|(p, q)| format!("dilate:{p}/{q}")),
        (-3i64..4).prop_map(|a| format!("translate:{a}*sqrt(2)")),
        (-3i64..4, 1i64..3).prop_map(|(b, q)| format!("modulate:{b}/{q}")),
    ];
    proptest::collection::vec(op, 0..5).prop_map(|v| v.iter().map(|s| s.parse().unwrap()).collect())
}

fn exact_lambda() -> impl Strategy<Value = LambdaSet> {
    let coord = prop_oneof![(-6i64..7).prop_map(ExactScalar::integer), (-4i64..5, 2u64..4).prop_map(|(c, d)| ExactScalar::surd(c, d))];
    proptest::collection::vec((coord.clone(), coord), 1..7).prop_filter_map("distinct points", |pts| {
        LambdaSet::new(pts.into_iter().map(|(a, b)| TFPoint::new(a, b)).collect()).ok()
    })
}

fn subset_sum(b: &[f64], alpha: f64, n: usize, m: usize) -> Complex64 {
    let suffix = &b[b.len() - n..];
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == n - m)
        .map(|mask| {
            let s: f64 = (0..n).filter(|t| mask >> t & 1 == 1).map(|t| suffix[t]).sum();
            Complex64::from_polar(1.0, 2.0 * PI * s * alpha)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(e in any_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn derivative_matches_finite_difference(e in smooth_expr(), x in -3.0f64..3.0) {
        let d = derivative_at(&e, x).unwrap();
        let h = 1e-3;
        let f = |t: f64| evaluate(&e, t).unwrap();
        let fd = (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
        prop_assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "{e} at {x}: {d} vs {fd}");
    }

    #[test]
    fn phase_sums_match_enumeration(b in proptest::collection::vec(-4.0f64..4.0, 2..11), alpha in -3.0f64..3.0) {
        let t = phase_sums(&b, alpha);
        for n in 1..=b.len() {
            for m in 0..n {
                prop_assert!((t.get(n, m) - subset_sum(&b, alpha, n, m)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn composed_map_equals_stepwise_application(ops in ops(), l in exact_lambda()) {
        let map = compose(&ops);
        prop_assert!(map.det().same_as(&ExactScalar::integer(1), 0.0));
        let stepwise = apply_ops_to_lambda(&ops, &l).unwrap();
        for (p, q) in l.points().iter().zip(stepwise.points()) {
            prop_assert!(map.apply(p).same_as(q));
        }
        prop_assert_eq!(parse_ops(&format_ops(&ops)).unwrap(), ops);
    }

    #[test]
    fn normalization_replays_and_fixes_origin(l in exact_lambda()) {
        let (n, ops) = normalize(&l);
        prop_assert_eq!(apply_ops_to_lambda(&ops, &l).unwrap(), n.clone());
        prop_assert!(n.points().iter().any(|p| p.alpha.is_zero() && p.beta.is_zero()));
    }

    #[test]
    fn lambda_json_round_trips(l in exact_lambda()) {
        let back: LambdaSet = serde_json::from_str(&l.to_json()).unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn exact_relations_are_found(p in 1i64..9, q in 1i64..9, a in -5i64..6, b in -5i64..6, d in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(a != 0 || b != 0);
        let x = ExactScalar::ratio(p, q);
        let y = ExactScalar::surd(1, d);
        let z = x.mul(&ExactScalar::integer(a)).add(&y.mul(&ExactScalar::integer(b)));
        let r = q_independence(&[x, y, z], 100);
        match r.outcome {
            gabor_hrt_lab::dioph::RelationOutcome::Relation { residual, .. } => prop_assert_eq!(residual, 0.0),
            other => prop_assert!(false, "no relation: {other:?}"),
        }
    }

    #[test]
    fn lattice_points_have_integer_coordinates(
        a in 1i64..4, c in -2i64..3, dd in prop::sample::select(vec![1u64, 2, 3]), t in -3i64..4,
        coeffs in proptest::collection::vec((-3i64..4, -3i64..4), 2..7),
    ) {
        // Rows of A: (a, c) and (0, sqrt(dd)); points are t + A m.
        let s = ExactScalar::surd(1, dd);
        let pts: Vec<TFPoint> = coeffs.iter().map(|&(m1, m2)| {
            TFPoint::new(ExactScalar::integer(t + a * m1 + c * m2), s.mul(&ExactScalar::integer(m2)))
        }).collect();
        prop_assume!(LambdaSet::new(pts.clone()).is_ok());
        let l = LambdaSet::new(pts).unwrap();
        if let LatticeMembership::InLattice { basis, offset } = lattice_membership(&l) {
            let m = basis.map(|row| row.map(|v| v.to_f64()));
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            prop_assert!(det.abs() > 1e-12);
            let (t0, t1) = offset.to_f64();
            for p in l.points() {
                let (x, y) = p.to_f64();
                let (dx, dy) = (x - t0, y - t1);
                let u = (m[1][1] * dx - m[0][1] * dy) / det;
                let v = (-m[1][0] * dx + m[0][0] * dy) / det;
                prop_assert!((u - u.round()).abs() < 1e-9 && (v - v.round()).abs() < 1e-9, "{u} {v}");
            }
        } else {
            prop_assert!(false, "expected a lattice");
        }
    }

    #[test]
    fn kronecker_solutions_meet_both_bounds(theta in 0.0f64..1.0, d in prop::sample::select(vec![2u64, 3, 5, 6, 7]), min_u in 0.0f64..50.0) {
        let eps = 1e-2;
        let beta = (d as f64).sqrt();
        let sol = kronecker_solve(&[ExactScalar::surd(1, d)], &[theta], min_u, eps, KroneckerOptions::default()).unwrap();
        prop_assert!(sol.u > min_u);
        prop_assert!((beta * sol.u - sol.p[0] as f64 - theta).abs() < eps);
        let phase = (Complex64::from_polar(1.0, 2.0 * PI * beta * sol.u) - Complex64::from_polar(1.0, 2.0 * PI * theta)).norm();
        prop_assert!(phase < 4.0 * PI * eps);
    }

    #[test]
    fn three_point_subsets_route_to_r3(l in exact_lambda(), src in prop::sample::select(vec!["sin(x)", "exp(-x^2)", "1/(1+x^2)", "x"])) {
        let g = parse(src).unwrap();
        let cfg = RouterConfig::default();
        let idx: Vec<usize> = (0..l.len().min(3)).collect();
        let sub = l.subset(&idx).unwrap();
        let cert = route(&g, &sub, &cfg);
        prop_assert_eq!(cert.certificate().map(|c| c.rule), Some(RuleId::R3_three_points));
        prop_assert_eq!(serde_json::to_string(&cert).unwrap(), serde_json::to_string(&route(&g, &sub, &cfg)).unwrap());
    }

    #[test]
    fn shifts_preserve_norm_and_dft_inverts(alpha in -2.0f64..2.0, beta in -4.0f64..4.0) {
        let grid = Grid::new(8.0, 256).unwrap();
        let g = sample(&parse("exp(-pi*x^2)").unwrap(), grid).unwrap().signal;
        let s = tf_shift(&g, alpha, beta).unwrap();
        prop_assert!((s.l2_norm() - g.l2_norm()).abs() <= 1e-9 * g.l2_norm());
        let back = idft(&dft(&s));
        let err = back.samples().iter().zip(s.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }
}
