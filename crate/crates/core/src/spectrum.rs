//! Fourier spectra and dynamism coordinates of load curves.
//!
//! A [`Spectrum`] holds the classical coefficients of
//! `l(t) = a0/2 + Σ [a_n cos(2πn f0 t) + b_n sin(2πn f0 t)]`, with `t`
//! measured on the absolute time axis. A [`DynamismVector`] holds the same
//! information on the unit-norm basis
//! `{1/√T0, √(2/T0)·cos(2πn f0 t), √(2/T0)·sin(2πn f0 t)}`, on which
//! Parseval's identity `‖l‖² = Σ μ_k²` holds for any `T0`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;

use crate::curve::{grid_times, AnalyticCurve, Harmonic, Interval, LoadCurve, SampledCurve};
use crate::error::{Error, Result};

/// A coordinate of the dynamism space. Flat index: `Zero` is 0, the cosine
/// of order `n` is `2n - 1` and the sine of order `n` is `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "component", content = "order", rename_all = "lowercase")]
pub enum Coord {
    Zero,
    Cos(u32),
    Sin(u32),
}

impl Coord {
    pub fn index(&self) -> usize {
        match *self {
            Coord::Zero => 0,
            Coord::Cos(n) => 2 * n as usize - 1,
            Coord::Sin(n) => 2 * n as usize,
        }
    }

    pub fn from_index(k: usize) -> Coord {
        match k {
            0 => Coord::Zero,
            k if k % 2 == 1 => Coord::Cos(k.div_ceil(2) as u32),
            k => Coord::Sin((k / 2) as u32),
        }
    }

    /// Harmonic order, 0 for the zero-frequency coordinate.
    pub fn order(&self) -> u32 {
        match *self {
            Coord::Zero => 0,
            Coord::Cos(n) | Coord::Sin(n) => n,
        }
    }

    pub fn frequency(&self, interval: &Interval) -> f64 {
        f64::from(self.order()) * interval.fundamental()
    }

    pub fn label(&self) -> &'static str {
        match self {
            Coord::Zero => "energy",
            Coord::Cos(_) => "cos",
            Coord::Sin(_) => "sin",
        }
    }

    /// All `1 + 2·n_max` coordinates in index order.
    pub fn all(n_max: u32) -> impl Iterator<Item = Coord> {
        (0..=2 * n_max as usize).map(Coord::from_index)
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

/// Cosine and sine coefficients of one harmonic order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    pub order: u32,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    interval: Interval,
    a0: f64,
    /// Sorted by order; orders distinct and in `1..=n_max`.
    harmonics: Vec<Coefficients>,
    n_max: u32,
}

impl Spectrum {
    pub fn new(
        interval: Interval,
        a0: f64,
        mut harmonics: Vec<Coefficients>,
        n_max: u32,
    ) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::ZeroNmax);
        }
        if !a0.is_finite() {
            return Err(Error::NonFinite(0));
        }
        harmonics.sort_by_key(|h| h.order);
        for (i, h) in harmonics.iter().enumerate() {
            if h.order == 0 {
                return Err(Error::ZeroOrder);
            }
            if h.order > n_max {
                return Err(Error::OrderAboveNmax {
                    order: h.order,
                    n_max,
                });
            }
            if !(h.a.is_finite() && h.b.is_finite()) {
                return Err(Error::NonFinite(i + 1));
            }
            if i > 0 && harmonics[i - 1].order == h.order {
                return Err(Error::DuplicateOrder(h.order));
            }
        }
        Ok(Self {
            interval,
            a0,
            harmonics,
            n_max,
        })
    }

    pub fn zero(interval: Interval, n_max: u32) -> Result<Self> {
        Self::new(interval, 0.0, Vec::new(), n_max)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn harmonics(&self) -> &[Coefficients] {
        &self.harmonics
    }

    /// `(a_n, b_n)`, zero for orders absent from the spectrum.
    pub fn coefficient(&self, order: u32) -> (f64, f64) {
        self.harmonics
            .binary_search_by_key(&order, |h| h.order)
            .map(|i| (self.harmonics[i].a, self.harmonics[i].b))
            .unwrap_or((0.0, 0.0))
    }

    /// Raw coefficient on a coordinate: `a0`, `a_n` or `b_n`.
    pub fn raw(&self, coord: Coord) -> f64 {
        match coord {
            Coord::Zero => self.a0,
            Coord::Cos(n) => self.coefficient(n).0,
            Coord::Sin(n) => self.coefficient(n).1,
        }
    }

    /// Returns a copy with one raw coefficient replaced.
    pub fn with_raw(&self, coord: Coord, value: f64) -> Result<Spectrum> {
        let mut out = self.clone();
        match coord {
            Coord::Zero => out.a0 = value,
            Coord::Cos(n) | Coord::Sin(n) => {
                let idx = match out.harmonics.binary_search_by_key(&n, |h| h.order) {
                    Ok(i) => i,
                    Err(i) => {
                        if n == 0 || n > out.n_max {
                            return Err(Error::OrderAboveNmax {
                                order: n,
                                n_max: out.n_max,
                            });
                        }
                        out.harmonics.insert(i, Coefficients { order: n, a: 0.0, b: 0.0 });
                        i
                    }
                };
                match coord {
                    Coord::Cos(_) => out.harmonics[idx].a = value,
                    _ => out.harmonics[idx].b = value,
                }
            }
        }
        Ok(out)
    }

    /// `(T0/2)·a0`, the energy of the represented curve.
    pub fn energy(&self) -> f64 {
        0.5 * self.interval.length() * self.a0
    }

    pub fn synthesize(&self) -> AnalyticCurve {
        let harmonics = self
            .harmonics
            .iter()
            .map(|h| Harmonic::new(h.order, h.a, h.b))
            .collect();
        AnalyticCurve::new(self.interval, 0.5 * self.a0, harmonics)
            .expect("spectrum orders are validated on construction")
    }

    pub fn to_mu_vector(&self) -> DynamismVector {
        let t0 = self.interval.length();
        let harmonic_scale = (0.5 * t0).sqrt();
        let mut mu = Vec::with_capacity(1 + 2 * self.harmonics.len());
        mu.push((Coord::Zero, 0.5 * self.a0 * t0.sqrt()));
        for h in &self.harmonics {
            mu.push((Coord::Cos(h.order), h.a * harmonic_scale));
            mu.push((Coord::Sin(h.order), h.b * harmonic_scale));
        }
        DynamismVector {
            interval: self.interval,
            mu,
        }
    }

    /// `T0·a0²/4 + (T0/2)·Σ(a_n² + b_n²)`, the squared norm of the series.
    pub fn parseval_energy(&self) -> f64 {
        let t0 = self.interval.length();
        let harmonic: f64 = self.harmonics.iter().map(|h| h.a * h.a + h.b * h.b).sum();
        0.25 * t0 * self.a0 * self.a0 + 0.5 * t0 * harmonic
    }

    /// Coefficient-wise sum; the result keeps the larger `n_max`.
    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.interval.check_same(&other.interval)?;
        let n_max = self.n_max.max(other.n_max);
        let mut orders: Vec<u32> = self
            .harmonics
            .iter()
            .chain(&other.harmonics)
            .map(|h| h.order)
            .collect();
        orders.sort_unstable();
        orders.dedup();
        let harmonics = orders
            .into_iter()
            .map(|n| {
                let (a1, b1) = self.coefficient(n);
                let (a2, b2) = other.coefficient(n);
                Coefficients { order: n, a: a1 + a2, b: b1 + b2 }
            })
            .collect();
        Spectrum::new(self.interval, self.a0 + other.a0, harmonics, n_max)
    }

    pub fn scale(&self, factor: f64) -> Spectrum {
        Spectrum {
            interval: self.interval,
            a0: factor * self.a0,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Coefficients { order: h.order, a: factor * h.a, b: factor * h.b })
                .collect(),
            n_max: self.n_max,
        }
    }
}

/// Coordinates `μ_k = (l, φ_k)` on the unit-norm trigonometric basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamismVector {
    interval: Interval,
    /// Sorted by coordinate index.
    mu: Vec<(Coord, f64)>,
}

impl DynamismVector {
    pub fn new(interval: Interval, mut mu: Vec<(Coord, f64)>) -> Result<Self> {
        mu.sort_by_key(|(c, _)| *c);
        for (i, w) in mu.windows(2).enumerate() {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {:?} given twice (entry {})",
                    w[1].0,
                    i + 1
                )));
            }
        }
        if let Some(i) = mu.iter().position(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { interval, mu })
    }

    /// From a dense slice indexed by [`Coord::index`].
    pub fn from_dense(interval: Interval, values: &[f64]) -> Result<Self> {
        let mu = values
            .iter()
            .enumerate()
            .map(|(k, &v)| (Coord::from_index(k), v))
            .collect();
        Self::new(interval, mu)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn entries(&self) -> &[(Coord, f64)] {
        &self.mu
    }

    pub fn get(&self, coord: Coord) -> f64 {
        self.mu
            .binary_search_by_key(&coord, |(c, _)| *c)
            .map(|i| self.mu[i].1)
            .unwrap_or(0.0)
    }

    /// Dense vector of the first `len` coordinates.
    pub fn dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (c, v) in &self.mu {
            if let Some(slot) = out.get_mut(c.index()) {
                *slot = *v;
            }
        }
        out
    }

    pub fn norm_squared(&self) -> f64 {
        self.mu.iter().map(|(_, v)| v * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Harmonics whose coefficients are both at most
    /// `drop_threshold · norm(c)` in magnitude are omitted.
    pub drop_threshold: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { drop_threshold: 1e-12 }
    }
}

/// Fourier coefficients of `c` up to order `n_max`.
pub fn analyze(c: &LoadCurve, n_max: u32) -> Result<Spectrum> {
    analyze_with(c, n_max, &AnalysisOptions::default())
}

pub fn analyze_with(c: &LoadCurve, n_max: u32, opts: &AnalysisOptions) -> Result<Spectrum> {
    if n_max == 0 {
        return Err(Error::ZeroNmax);
    }
    let (a0, raw) = match c {
        LoadCurve::Analytic(curve) => analytic_coefficients(curve, n_max),
        LoadCurve::Sampled(curve) => sampled_coefficients(curve, n_max)?,
    };
    let threshold = opts.drop_threshold * c.norm();
    let harmonics = raw
        .into_iter()
        .filter(|h| h.a.abs().max(h.b.abs()) > threshold)
        .collect();
    Spectrum::new(c.interval(), a0, harmonics, n_max)
}

fn analytic_coefficients(curve: &AnalyticCurve, n_max: u32) -> (f64, Vec<Coefficients>) {
    let harmonics = curve
        .harmonics()
        .iter()
        .filter(|h| h.order <= n_max)
        .map(|h| Coefficients { order: h.order, a: h.cos_amp, b: h.sin_amp })
        .collect();
    (2.0 * curve.dc(), harmonics)
}

/// Smallest sample count that resolves order `n_max`.
pub fn required_samples(n_max: u32) -> usize {
    2 * n_max as usize + 2
}

fn sampled_coefficients(curve: &SampledCurve, n_max: u32) -> Result<(f64, Vec<Coefficients>)> {
    let required = required_samples(n_max);
    if curve.len() < required {
        return Err(Error::InsufficientSamples {
            samples: curve.len(),
            n_max,
            required,
        });
    }
    let interval = curve.interval();
    let t0 = interval.length();
    let h = curve.step();
    let last = curve.len() - 1;
    // Trapezoid weights folded into the samples once.
    let weighted: Vec<f64> = curve
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| if i == 0 || i == last { 0.5 * h * v } else { h * v })
        .collect();
    let phases: Vec<f64> = grid_times(&interval, curve.len())
        .map(|t| 2.0 * PI * t / t0)
        .collect();
    let scale = 2.0 / t0;
    let a0 = scale * weighted.iter().sum::<f64>();
    let harmonics = (1..=n_max)
        .map(|n| {
            let order = f64::from(n);
            let (mut a, mut b) = (0.0, 0.0);
            for (w, phase) in weighted.iter().zip(&phases) {
                let (s, c) = (order * phase).sin_cos();
                a += w * c;
                b += w * s;
            }
            Coefficients { order: n, a: scale * a, b: scale * b }
        })
        .collect();
    Ok((a0, harmonics))
}

/// L2 distance between a curve and the series of its spectrum.
pub fn truncation_error(c: &LoadCurve, s: &Spectrum) -> Result<f64> {
    c.interval().check_same(&s.interval())?;
    c.distance(&s.synthesize().into())
}
