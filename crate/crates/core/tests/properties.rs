//! Property tests for the load-space algebra, spectral analysis, tariffs
//! and calibration.

mod common;

use loadspace::calibrate::coordinate_count;
use loadspace::scenarios::builtin_plans;
use loadspace::{
    analyze, calibrate, dynamism_payment, payment_gradient, pricing_from_cost, spot_payment,
    classic_payment, supply_cost, AnalyticCurve, CalibrationOptions, Coord, CostCharacteristic,
    CostObservation, Harmonic, Interval, LoadCurve, Polarity, SampledCurve, Spectrum, SpotPlan,
};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn interval_strategy() -> impl Strategy<Value = Interval> {
    prop_oneof![
        3 => Just(Interval::unit()),
        1 => (-5.0..5.0f64, 0.5..10.0f64).prop_map(|(t1, len)| Interval::new(t1, t1 + len).unwrap()),
    ]
}

fn curve_on(interval: Interval) -> impl Strategy<Value = AnalyticCurve> {
    (
        -50.0..100.0f64,
        prop::collection::btree_map(1u32..=40, (-30.0..30.0f64, -30.0..30.0f64), 0..=10),
    )
        .prop_map(move |(dc, terms)| {
            let harmonics = terms.into_iter().map(|(n, (a, b))| Harmonic::new(n, a, b)).collect();
            AnalyticCurve::new(interval, dc, harmonics).unwrap()
        })
}

fn curve() -> impl Strategy<Value = AnalyticCurve> {
    curve_on(Interval::unit())
}

fn curve_pair() -> impl Strategy<Value = (AnalyticCurve, AnalyticCurve)> {
    interval_strategy().prop_flat_map(|i| (curve_on(i), curve_on(i)))
}

fn curve_triple() -> impl Strategy<Value = (AnalyticCurve, AnalyticCurve, AnalyticCurve)> {
    interval_strategy().prop_flat_map(|i| (curve_on(i), curve_on(i), curve_on(i)))
}

fn grid(interval: Interval, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { interval.t2() } else { interval.t1() + interval.length() * i as f64 / (n - 1) as f64 })
        .collect()
}

fn assert_pointwise(lhs: &LoadCurve, rhs: &LoadCurve) -> Result<(), TestCaseError> {
    for t in grid(lhs.interval(), 1000) {
        let (x, y) = (lhs.evaluate(t).unwrap(), rhs.evaluate(t).unwrap());
        prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "t={t}: {x} vs {y}");
    }
    Ok(())
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vector_space_axioms((a, b, c) in curve_triple(), s in -5.0..5.0f64, r in -5.0..5.0f64) {
        let (a, b, c): (LoadCurve, LoadCurve, LoadCurve) = (a.into(), b.into(), c.into());
        let zero: LoadCurve = AnalyticCurve::zero(a.interval()).into();
        assert_pointwise(&a.add(&b).unwrap(), &b.add(&a).unwrap())?;
        assert_pointwise(&a.add(&b).unwrap().add(&c).unwrap(), &a.add(&b.add(&c).unwrap()).unwrap())?;
        assert_pointwise(&a.add(&zero).unwrap(), &a)?;
        assert_pointwise(&a.add(&a.scale(-1.0)).unwrap(), &zero)?;
        assert_pointwise(&a.add(&b).unwrap().scale(s), &a.scale(s).add(&b.scale(s)).unwrap())?;
        assert_pointwise(&a.scale(s + r), &a.scale(s).add(&a.scale(r)).unwrap())?;
        assert_pointwise(&a.scale(s * r), &a.scale(r).scale(s))?;
        prop_assert_eq!(a.scale(1.0), a);
    }

    #[test]
    fn inner_product_axioms((a, b, c) in curve_triple(), s in -5.0..5.0f64) {
        let (a, b, c): (LoadCurve, LoadCurve, LoadCurve) = (a.into(), b.into(), c.into());
        let ab = a.inner_product(&b).unwrap();
        prop_assert!(rel_close(ab, b.inner_product(&a).unwrap(), 1e-9));
        let lhs = a.add(&b).unwrap().inner_product(&c).unwrap();
        let rhs = a.inner_product(&c).unwrap() + b.inner_product(&c).unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-9));
        prop_assert!(rel_close(a.scale(s).inner_product(&b).unwrap(), s * ab, 1e-9));
        prop_assert!(a.inner_product(&a).unwrap() >= 0.0);
        // Cauchy-Schwarz.
        prop_assert!(ab.abs() <= a.norm() * b.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn sampled_inner_product_axioms((a, b, c) in curve_triple(), s in -5.0..5.0f64) {
        let n = 401;
        let (a, b, c): (LoadCurve, LoadCurve, LoadCurve) =
            (a.sample(n).unwrap().into(), b.sample(n).unwrap().into(), c.sample(n).unwrap().into());
        let ab = a.inner_product(&b).unwrap();
        prop_assert!(rel_close(ab, b.inner_product(&a).unwrap(), 1e-6));
        let lhs = a.add(&b).unwrap().inner_product(&c).unwrap();
        let rhs = a.inner_product(&c).unwrap() + b.inner_product(&c).unwrap();
        prop_assert!(rel_close(lhs, rhs, 1e-6));
        prop_assert!(rel_close(a.scale(s).inner_product(&b).unwrap(), s * ab, 1e-6));
        prop_assert!(a.inner_product(&a).unwrap() >= 0.0);
        prop_assert!(ab.abs() <= a.norm() * b.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn norm_zero_only_for_zero_curve(c in curve()) {
        let c: LoadCurve = c.into();
        let nonzero = c.evaluate(0.0).unwrap() != 0.0 || c.norm() > 0.0;
        prop_assert!(nonzero);
        prop_assert_eq!(c.scale(0.0).norm(), 0.0);
        prop_assert_eq!(c.distance(&c).unwrap(), 0.0);
    }

    #[test]
    fn distance_is_symmetric((a, b) in curve_pair()) {
        let (a, b): (LoadCurve, LoadCurve) = (a.into(), b.into());
        prop_assert!(rel_close(a.distance(&b).unwrap(), b.distance(&a).unwrap(), 1e-12));
    }

    #[test]
    fn spectrum_round_trip(c in curve_on(Interval::new(-1.0, 2.0).unwrap())) {
        let lc: LoadCurve = c.clone().into();
        let s = analyze(&lc, 40).unwrap();
        let back = analyze(&LoadCurve::from(s.synthesize()), 40).unwrap();
        prop_assert_eq!(&back, &s);
        assert_pointwise(&s.synthesize().into(), &lc)?;
    }

    #[test]
    fn parseval_on_analytic_curves(c in interval_strategy().prop_flat_map(curve_on)) {
        let lc: LoadCurve = c.into();
        let s = analyze(&lc, 40).unwrap();
        let norm2 = lc.norm().powi(2);
        prop_assert!((s.parseval_energy() - norm2).abs() <= 1e-9 * norm2.max(1e-300));
        prop_assert!((s.to_mu_vector().norm_squared() - norm2).abs() <= 1e-9 * norm2.max(1e-300));
    }

    #[test]
    fn analysis_is_linear((a, b) in curve_pair(), s in -4.0..4.0f64) {
        let (la, lb): (LoadCurve, LoadCurve) = (a.into(), b.into());
        let sa = analyze(&la, 40).unwrap();
        let sb = analyze(&lb, 40).unwrap();
        let sum = analyze(&la.add(&lb).unwrap(), 40).unwrap();
        let expected = sa.add(&sb).unwrap();
        prop_assert!((sum.a0() - expected.a0()).abs() < 1e-9);
        for n in 1..=40 {
            let (x, y) = (sum.coefficient(n), expected.coefficient(n));
            prop_assert!((x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9);
        }
        let scaled = analyze(&la.scale(s), 40).unwrap();
        for n in 1..=40 {
            let (x, y) = (scaled.coefficient(n), sa.coefficient(n));
            prop_assert!((x.0 - s * y.0).abs() < 1e-9 && (x.1 - s * y.1).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_depends_only_on_a0(c in interval_strategy().prop_flat_map(curve_on)) {
        let lc: LoadCurve = c.clone().into();
        let s = analyze(&lc, 40).unwrap();
        prop_assert!(rel_close(lc.energy(), s.energy(), 1e-12));
        // Each harmonic basis function accumulates zero energy.
        for h in c.harmonics() {
            let alone: LoadCurve = AnalyticCurve::new(c.interval(), 0.0, vec![*h]).unwrap().into();
            prop_assert_eq!(alone.energy(), 0.0);
            let sampled: LoadCurve = alone.sample(2001).unwrap().into();
            prop_assert!(sampled.energy().abs() < 1e-9 * (1.0 + h.cos_amp.abs() + h.sin_amp.abs()));
        }
    }

    #[test]
    fn dynamism_payment_is_linear_under_fixed_supply((a, b) in curve_pair()) {
        let (plan1, plan2) = builtin_plans();
        let interval = a.interval();
        let sa = analyze(&a.into(), 40).unwrap();
        let sb = analyze(&b.into(), 40).unwrap();
        // Supply with every coefficient nonzero fixes every sign.
        let supply_terms = (1..=40).map(|n| Harmonic::new(n, 1.0 + f64::from(n), -2.0)).collect();
        let supply = analyze(&AnalyticCurve::new(interval, 3.0, supply_terms).unwrap().into(), 40).unwrap();
        for plan in [plan1, plan2] {
            let pol = Polarity::Supply(&supply);
            let lhs = dynamism_payment(&plan, &sa.add(&sb).unwrap(), pol).unwrap().total;
            let rhs = dynamism_payment(&plan, &sa, pol).unwrap().total + dynamism_payment(&plan, &sb, pol).unwrap().total;
            prop_assert!(rel_close(lhs, rhs, 1e-9));
        }
    }

    #[test]
    fn bill_total_is_sum_of_parts(c in curve()) {
        let (plan1, _) = builtin_plans();
        let bill = dynamism_payment(&plan1, &analyze(&c.into(), 40).unwrap(), Polarity::OwnLoad).unwrap();
        prop_assert_eq!(bill.total, bill.non_dynamic + bill.dynamic);
        // Sign matching makes every dynamic line item a non-negative charge.
        for item in &bill.line_items {
            prop_assert!(item.amount >= 0.0 || item.component == "energy");
        }
    }

    #[test]
    fn uniform_spot_equals_classic(c in curve(), cycles in 1usize..300, price in 0.1..100.0f64) {
        let lc: LoadCurve = c.into();
        let plan = SpotPlan::uniform(lc.interval(), cycles, price).unwrap();
        let spot = spot_payment(&plan, &lc).unwrap();
        let classic = classic_payment(price, &lc);
        prop_assert!((spot - classic).abs() <= 1e-9 * classic.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn calibration_recovers_noiseless_iota(seed in any::<u64>(), n_max in 1u32..=8, extra in 0usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = coordinate_count(n_max);
        let truth: Vec<f64> = (0..k)
            .map(|_| rng.gen_range(0.5..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let cc = CostCharacteristic::new(Interval::unit(), n_max, truth.clone()).unwrap();
        let obs: Vec<CostObservation> = (0..k + extra)
            .map(|_| {
                let load = common::dense_curve(&mut rng, n_max);
                let cost = supply_cost(&cc, &analyze(&load, n_max).unwrap().to_mu_vector()).unwrap();
                CostObservation::new(load, cost)
            })
            .collect();
        let fit = calibrate(&obs, n_max, &CalibrationOptions::default()).unwrap();
        for (got, want) in fit.characteristic.iota().iter().zip(&truth) {
            prop_assert!((got - want).abs() <= 1e-6 * want.abs());
        }
    }

    #[test]
    fn calibration_residual_is_orthogonal_to_design(seed in any::<u64>(), n_max in 1u32..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = coordinate_count(n_max);
        let obs: Vec<CostObservation> = (0..2 * k + 3)
            .map(|_| CostObservation::new(common::dense_curve(&mut rng, n_max), rng.gen_range(0.0..1000.0)))
            .collect();
        let fit = calibrate(&obs, n_max, &CalibrationOptions::default()).unwrap();
        let x = loadspace::calibrate::design_matrix(&obs, n_max).unwrap();
        let r = DVector::from_vec(fit.residuals.clone());
        let xtr = x.transpose() * &r;
        let y_norm: f64 = obs.iter().map(|o| o.observed_cost.powi(2)).sum::<f64>().sqrt();
        prop_assert!(xtr.amax() <= 1e-8 * x.norm() * y_norm);
    }

    #[test]
    fn cost_pricing_gradient_alignment(seed in any::<u64>(), n_max in 1u32..=10, a in 0.01..10.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let iota: Vec<f64> = (0..coordinate_count(n_max)).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let cc = CostCharacteristic::new(Interval::unit(), n_max, iota).unwrap();
        let pricing = pricing_from_cost(&cc, a).unwrap();
        let orders: Vec<u32> = (1..=n_max).collect();
        let g = pricing.dynamism_gradient(&orders).unwrap();
        for (c, i) in cc.entries() {
            prop_assert_eq!(g.get(c), Some(a * i));
        }
        // Payment equals a times supply cost.
        let load = common::dense_curve(&mut rng, n_max);
        let mu = analyze(&load, n_max).unwrap().to_mu_vector();
        let pay = pricing.payment(&mu).unwrap();
        prop_assert!(rel_close(pay, a * supply_cost(&cc, &mu).unwrap(), 1e-12));
    }
}

#[test]
fn quadrature_converges_at_second_order_on_smooth_integrands() {
    // exp(t) is not periodic on [0, 1], so the trapezoid error is O(h²).
    let interval = Interval::unit();
    let exact = (std::f64::consts::E.powi(2) - 1.0) / 2.0;
    let mut errors = Vec::new();
    for n in [65, 129, 257, 513, 1025] {
        let c: LoadCurve = SampledCurve::from_fn(interval, n, f64::exp).unwrap().into();
        errors.push((c.inner_product(&c).unwrap() - exact).abs());
    }
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }
}

#[test]
fn sampled_inner_product_is_exact_for_resolved_trig_polynomials() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let a = common::random_curve(&mut rng, 10, 30);
        let b = common::random_curve(&mut rng, 10, 30);
        let exact = LoadCurve::from(a.clone()).inner_product(&b.clone().into()).unwrap();
        // Product bandwidth is at most 60; 61 panels resolve it.
        for n in [62, 124, 248] {
            let sa: LoadCurve = a.sample(n).unwrap().into();
            let sb: LoadCurve = b.sample(n).unwrap().into();
            let got = sa.inner_product(&sb).unwrap();
            assert!((got - exact).abs() <= 1e-9 * exact.abs().max(1.0), "n={n}: {got} vs {exact}");
        }
    }
}

#[test]
fn incentive_step_reduces_payment() {
    let (l1, _) = loadspace::scenarios::builtin_loads();
    let (plan1, _) = builtin_plans();
    let s = analyze(&l1.into(), 100).unwrap();
    let orders = [5, 20, 100];
    // Every tested coordinate has a nonzero supply coefficient, so the
    // signs stay fixed while the load moves. Sin(100) is the unique maximum.
    let supply_curve = AnalyticCurve::new(
        Interval::unit(),
        50.0,
        vec![Harmonic::new(5, 1.0, 20.0), Harmonic::new(20, 10.0, -1.0), Harmonic::new(100, -1.0, 5.0)],
    )
    .unwrap();
    let supply = analyze(&supply_curve.into(), 100).unwrap();
    let pol = Polarity::Supply(&supply);
    let base = dynamism_payment(&plan1, &s, pol).unwrap().total;
    let direction = loadspace::incentive_direction(&plan1, &s, &orders, pol).unwrap();
    let mut moved: Spectrum = s.clone();
    for (c, d) in direction.entries() {
        moved = moved.with_raw(*c, s.raw(*c) + d).unwrap();
    }
    let after = dynamism_payment(&plan1, &moved, pol).unwrap().total;
    assert!(after < base, "{after} !< {base}");

    // The cheapest unit move is along the largest gradient entry.
    let gradient = payment_gradient(&plan1, &s, &orders, pol).unwrap();
    let mut best: Option<(Coord, f64)> = None;
    for (c, _) in gradient.entries() {
        let step = s.with_raw(*c, s.raw(*c) - 1.0).unwrap();
        let pay = dynamism_payment(&plan1, &step, pol).unwrap().total;
        if best.is_none_or(|(_, p)| pay < p) {
            best = Some((*c, pay));
        }
    }
    assert_eq!(gradient.argmax(), Some(Coord::Sin(100)));
    assert_eq!(best.map(|b| b.0), gradient.argmax());
}
