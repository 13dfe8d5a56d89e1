use std::f64::consts::PI;

use proptest::prelude::*;

use virateich::diffeo::{act_on_hill, compose, invert, schwarzian, DiffeoLift, HillPotential};
use virateich::groupoid::{omega_g_left, GroupoidPoint, GroupoidTangent};
use virateich::hill::{ds_normalize, gauge_transform, hill_from_asu, BoundaryConnection, GaugeMap};
use virateich::spectral::PeriodicFn;
use virateich::trumpet::{omega_n, TrumpetPoint, TrumpetTangent};

const N: usize = 128;

fn coeffs(modes: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), modes)
}

fn trig(n: usize, c0: f64, cs: &[(f64, f64)], amp: f64) -> PeriodicFn {
    PeriodicFn::from_fn(n, 0, |x| {
        c0 + cs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let m = (i + 1) as f64;
                let t = 2.0 * PI * m * x;
                amp * (a * t.sin() + b * t.cos()) / (m * m)
            })
            .sum::<f64>()
    })
    .unwrap()
}

fn smooth() -> impl Strategy<Value = PeriodicFn> {
    (-1.0..1.0f64, coeffs(5)).prop_map(|(c0, cs)| trig(N, c0, &cs, 1.0))
}

/// Lift with `‖φ′‖∞ ≤ slope`.
fn diffeo(slope: f64) -> impl Strategy<Value = DiffeoLift> {
    (0.0..1.0f64, coeffs(4), 0.1..1.0f64).prop_map(move |(shift, cs, frac)| {
        let bound: f64 = cs.iter().enumerate().map(|(i, (a, b))| 2.0 * PI * (a.abs() + b.abs()) / (i + 1) as f64).sum();
        let amp = slope * frac / bound.max(1e-3);
        DiffeoLift::new(trig(N, shift, &cs, amp), 0).unwrap()
    })
}

fn positive_connection() -> impl Strategy<Value = BoundaryConnection> {
    (smooth(), smooth(), smooth()).prop_map(|(a, s, u)| BoundaryConnection::new(a.scale(0.3).map(f64::exp), s.scale(0.5), u).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_is_linear(f in smooth(), g in smooth(), c in -3.0..3.0f64) {
        let lhs = (&f + &g.scale(c)).derivative(1);
        let rhs = &f.derivative(1) + &g.derivative(1).scale(c);
        prop_assert!(lhs.dist(&rhs) < 1e-10);
    }

    #[test]
    fn derivative_integrates_to_zero(f in smooth(), order in 1u32..4) {
        prop_assert!(f.derivative(order).integral().abs() < 1e-10);
    }

    #[test]
    fn interpolant_reproduces_samples(f in smooth()) {
        let back = f.interpolate(&f.grid());
        for (a, b) in back.iter().zip(f.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval(f in smooth()) {
        let c = f.fourier(N / 2 - 1).unwrap();
        let energy: f64 = (-(c.cutoff() as i64)..=c.cutoff() as i64).map(|m| c.get(m).norm_sqr()).sum();
        let mean_square = f.map(|v| v * v).integral();
        prop_assert!((energy - mean_square).abs() < 1e-12 * (1.0 + mean_square));
    }

    #[test]
    fn compose_is_associative(f in diffeo(0.5), g in diffeo(0.5), h in diffeo(0.5)) {
        let lhs = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let rhs = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert!(lhs.dist(&rhs) < 1e-10);
    }

    #[test]
    fn inverse_is_two_sided(f in diffeo(0.5)) {
        let g = invert(&f).unwrap();
        let id = DiffeoLift::identity(N).unwrap();
        prop_assert!(compose(&f, &g).unwrap().dist(&id) < 1e-8);
        prop_assert!(compose(&g, &f).unwrap().dist(&id) < 1e-8);
    }

    #[test]
    fn schwarzian_ignores_post_rotation(f in diffeo(0.5), t in -1.0..1.0f64) {
        let rotated = compose(&DiffeoLift::rotation(N, t).unwrap(), &f).unwrap();
        let s = schwarzian(&f);
        prop_assert!(schwarzian(&rotated).dist(&s) < 1e-7 * (1.0 + s.max_abs()));
    }

    #[test]
    fn hill_action_is_a_right_action(f in diffeo(0.4), g in diffeo(0.4), t in smooth()) {
        let t = HillPotential::new(t);
        let lhs = act_on_hill(&g, &act_on_hill(&f, &t));
        let rhs = act_on_hill(&compose(&f, &g).unwrap(), &t);
        prop_assert!(lhs.dist(&rhs) < 1e-8 * (1.0 + rhs.as_fn().max_abs()));
    }

    #[test]
    fn gauge_action_composes(c in positive_connection(), d in positive_connection(), e in positive_connection()) {
        let (h1, _) = ds_normalize(&d).unwrap();
        let (h2, _) = ds_normalize(&e).unwrap();
        let lhs = gauge_transform(&h1.mul(&h2), &c).unwrap();
        let rhs = gauge_transform(&h1, &gauge_transform(&h2, &c).unwrap()).unwrap();
        prop_assert!(lhs.dist(&rhs) < 1e-9);
    }

    #[test]
    fn constant_diagonal_gauge_rescales(c in positive_connection(), lambda in 0.3..3.0f64) {
        let moved = gauge_transform(&GaugeMap::diagonal(N, lambda).unwrap(), &c).unwrap();
        prop_assert!(moved.a().dist(&c.a().scale(lambda * lambda)) < 1e-12 * (1.0 + c.a().max_abs()));
        prop_assert!(moved.u().dist(&c.u().scale(1.0 / (lambda * lambda))) < 1e-12 * (1.0 + c.u().max_abs()));
        prop_assert!(moved.s().dist(c.s()) < 1e-12);
    }

    #[test]
    fn ds_normal_form_agrees_with_formula(c in positive_connection()) {
        let (h, t) = ds_normalize(&c).unwrap();
        prop_assert!(t.dist(&hill_from_asu(&c).unwrap()) < 1e-8);
        let normal = gauge_transform(&h, &c).unwrap();
        prop_assert!(normal.a().map(|v| v - 1.0).max_abs() < 1e-9);
        prop_assert!(normal.s().max_abs() < 1e-9);
    }

    #[test]
    fn trumpet_form_is_antisymmetric(
        ell in 0.3..3.0f64, f in diffeo(0.5),
        dv in -1.0..1.0f64, v in smooth(), dw in -1.0..1.0f64, w in smooth(),
    ) {
        let p = TrumpetPoint::new(ell, f).unwrap();
        let v = TrumpetTangent::new(dv, v.scale(0.2));
        let w = TrumpetTangent::new(dw, w.scale(0.2));
        let a = omega_n(&p, &v, &w);
        prop_assert!((a + omega_n(&p, &w, &v)).abs() < 1e-10 * (1.0 + a.abs()));
        prop_assert!(omega_n(&p, &v, &v).abs() < 1e-10);
    }

    #[test]
    fn groupoid_left_form_is_antisymmetric(
        t in smooth(), f in diffeo(0.5), a in smooth(), b in smooth(), c in smooth(), d in smooth(),
    ) {
        let p = GroupoidPoint::new(HillPotential::new(t), f).unwrap();
        let v = GroupoidTangent::new(a, b.scale(0.1));
        let w = GroupoidTangent::new(c, d.scale(0.1));
        let x = omega_g_left(&p, &v, &w);
        prop_assert!((x + omega_g_left(&p, &w, &v)).abs() < 1e-10 * (1.0 + x.abs()));
    }

    #[test]
    fn json_roundtrip(f in diffeo(0.5), c in positive_connection()) {
        let back: DiffeoLift = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
        let back: BoundaryConnection = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}
