//! Test-only oracles and generators, independent of the library's
//! quadrature and analysis code paths.
#![allow(dead_code)]

use std::f64::consts::PI;

use loadspace::{AnalyticCurve, Harmonic, Interval, LoadCurve};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Composite trapezoid over a closure with `n` panels.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// Direct evaluation of a trigonometric polynomial from its parameters.
pub fn trig_eval(t0: f64, dc: f64, terms: &[(u32, f64, f64)], t: f64) -> f64 {
    dc + terms
        .iter()
        .map(|&(n, a, b)| {
            let w = 2.0 * PI * f64::from(n) / t0;
            a * (w * t).cos() + b * (w * t).sin()
        })
        .sum::<f64>()
}

pub fn l1_fn(t: f64) -> f64 {
    50.0 + 20.0 * (10.0 * PI * t).sin() + 10.0 * (40.0 * PI * t).cos() + 5.0 * (200.0 * PI * t).sin()
}

pub fn l2_fn(t: f64) -> f64 {
    40.0 + 5.0 * (10.0 * PI * t).sin() + 10.0 * (40.0 * PI * t).cos() + 20.0 * (200.0 * PI * t).sin()
}

/// Random analytic curve on `[0, 1]` with at most `max_terms` harmonics of
/// order at most `max_order`.
pub fn random_curve(rng: &mut StdRng, max_terms: usize, max_order: u32) -> AnalyticCurve {
    let mut orders: Vec<u32> = (1..=max_order).collect();
    orders.shuffle(rng);
    let count = rng.gen_range(1..=max_terms);
    let harmonics = orders[..count]
        .iter()
        .map(|&n| Harmonic::new(n, rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0)))
        .collect();
    AnalyticCurve::new(Interval::unit(), rng.gen_range(-50.0..100.0), harmonics).unwrap()
}

/// Curve exciting every coordinate up to `n_max` with random amplitudes.
pub fn dense_curve(rng: &mut StdRng, n_max: u32) -> LoadCurve {
    let harmonics = (1..=n_max)
        .map(|n| Harmonic::new(n, rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)))
        .collect();
    AnalyticCurve::new(Interval::unit(), rng.gen_range(20.0..80.0), harmonics)
        .unwrap()
        .into()
}

pub fn max_order(c: &AnalyticCurve) -> u32 {
    c.harmonics().iter().map(|h| h.order).max().unwrap_or(1)
}
