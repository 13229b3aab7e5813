//! Load functions on a closed interval and the L2 operations on them.
//!
//! Two representations exist. An [`AnalyticCurve`] is a trigonometric
//! polynomial whose harmonics are integer multiples of `f0 = 1/T0`, so every
//! harmonic completes whole periods on the interval and all integrals have
//! closed forms. A [`SampledCurve`] holds values on a uniform grid that
//! includes both endpoints; it is integrated with the composite trapezoid
//! rule and evaluated between nodes by linear interpolation.
//!
//! Binary operations on a mixed pair resample onto the sampled grid (the
//! finer one when both are sampled). Negative values are allowed: the
//! algebra needs additive inverses.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// The time interval `[t1, t2]` with `t1 < t2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    t1: f64,
    t2: f64,
}

impl Interval {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1.is_finite() && t2.is_finite()) || t1 >= t2 {
            return Err(Error::InvalidInterval { t1, t2 });
        }
        Ok(Self { t1, t2 })
    }

    /// `[0, 1]`, the interval used by every worked example.
    pub fn unit() -> Self {
        Self { t1: 0.0, t2: 1.0 }
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Period length `T0 = t2 - t1`.
    pub fn length(&self) -> f64 {
        self.t2 - self.t1
    }

    /// Fundamental frequency `f0 = 1/T0`.
    pub fn fundamental(&self) -> f64 {
        1.0 / self.length()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t1 && t <= self.t2
    }

    pub(crate) fn check_contains(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfInterval {
                t,
                t1: self.t1,
                t2: self.t2,
            })
        }
    }

    pub(crate) fn check_same(&self, other: &Interval) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::IncompatibleIntervals)
        }
    }

    /// Endpoints of `count` equal cycles partitioning the interval.
    /// The last boundary is `t2` exactly.
    pub fn partition(&self, count: usize) -> Vec<f64> {
        let dt = self.length() / count as f64;
        (0..=count)
            .map(|k| {
                if k == count {
                    self.t2
                } else {
                    self.t1 + k as f64 * dt
                }
            })
            .collect()
    }
}

/// One harmonic term `cos_amp·cos(2πn f0 t) + sin_amp·sin(2πn f0 t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Harmonic {
    pub order: u32,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

impl Harmonic {
    pub fn new(order: u32, cos_amp: f64, sin_amp: f64) -> Self {
        Self {
            order,
            cos_amp,
            sin_amp,
        }
    }

    pub fn cos(order: u32, amp: f64) -> Self {
        Self::new(order, amp, 0.0)
    }

    pub fn sin(order: u32, amp: f64) -> Self {
        Self::new(order, 0.0, amp)
    }

    fn angular(&self, interval: &Interval) -> f64 {
        2.0 * PI * f64::from(self.order) / interval.length()
    }

    fn value(&self, interval: &Interval, t: f64) -> f64 {
        let (s, c) = (self.angular(interval) * t).sin_cos();
        self.cos_amp * c + self.sin_amp * s
    }

    fn integral(&self, interval: &Interval, a: f64, b: f64) -> f64 {
        let w = self.angular(interval);
        let (sa, ca) = (w * a).sin_cos();
        let (sb, cb) = (w * b).sin_cos();
        (self.cos_amp * (sb - sa) + self.sin_amp * (ca - cb)) / w
    }
}

/// A trigonometric polynomial harmonically aligned with the interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticCurve {
    interval: Interval,
    constant: f64,
    /// Sorted by order, orders distinct and >= 1.
    harmonics: Vec<Harmonic>,
}

impl AnalyticCurve {
    pub fn new(interval: Interval, constant: f64, mut harmonics: Vec<Harmonic>) -> Result<Self> {
        if !constant.is_finite() {
            return Err(Error::NonFinite(0));
        }
        harmonics.sort_by_key(|h| h.order);
        for (i, h) in harmonics.iter().enumerate() {
            if h.order == 0 {
                return Err(Error::ZeroOrder);
            }
            if !(h.cos_amp.is_finite() && h.sin_amp.is_finite()) {
                return Err(Error::NonFinite(i + 1));
            }
            if i > 0 && harmonics[i - 1].order == h.order {
                return Err(Error::DuplicateOrder(h.order));
            }
        }
        Ok(Self {
            interval,
            constant,
            harmonics,
        })
    }

    pub fn constant(interval: Interval, level: f64) -> Self {
        Self {
            interval,
            constant: level,
            harmonics: Vec::new(),
        }
    }

    pub fn zero(interval: Interval) -> Self {
        Self::constant(interval, 0.0)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// The DC level.
    pub fn dc(&self) -> f64 {
        self.constant
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    pub fn harmonic(&self, order: u32) -> Option<&Harmonic> {
        self.harmonics
            .binary_search_by_key(&order, |h| h.order)
            .ok()
            .map(|i| &self.harmonics[i])
    }

    /// Closed-form value; does not check that `t` lies in the interval.
    pub(crate) fn value(&self, t: f64) -> f64 {
        self.constant
            + self
                .harmonics
                .iter()
                .map(|h| h.value(&self.interval, t))
                .sum::<f64>()
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.interval.check_contains(t)?;
        Ok(self.value(t))
    }

    /// Samples the curve on the uniform `samples`-point grid.
    pub fn sample(&self, samples: usize) -> Result<SampledCurve> {
        if samples < 2 {
            return Err(Error::TooFewSamples(samples));
        }
        let values = grid_times(&self.interval, samples)
            .map(|t| self.value(t))
            .collect();
        SampledCurve::new(self.interval, values)
    }

    fn add(&self, other: &AnalyticCurve) -> AnalyticCurve {
        let mut merged: Vec<Harmonic> = Vec::with_capacity(self.harmonics.len() + other.harmonics.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.harmonics, &other.harmonics);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.order == y.order => {
                    i += 1;
                    j += 1;
                    Harmonic::new(x.order, x.cos_amp + y.cos_amp, x.sin_amp + y.sin_amp)
                }
                (Some(x), Some(y)) if x.order < y.order => {
                    i += 1;
                    *x
                }
                (Some(_), Some(y)) => {
                    j += 1;
                    *y
                }
                (Some(x), None) => {
                    i += 1;
                    *x
                }
                (None, Some(y)) => {
                    j += 1;
                    *y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        AnalyticCurve {
            interval: self.interval,
            constant: self.constant + other.constant,
            harmonics: merged,
        }
    }

    fn scale(&self, a: f64) -> AnalyticCurve {
        AnalyticCurve {
            interval: self.interval,
            constant: a * self.constant,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Harmonic::new(h.order, a * h.cos_amp, a * h.sin_amp))
                .collect(),
        }
    }

    /// Harmonics of distinct orders are orthogonal and each has squared
    /// norm `T0/2` per unit amplitude.
    fn inner_product(&self, other: &AnalyticCurve) -> f64 {
        let t0 = self.interval.length();
        let mut acc = 0.0;
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.harmonics, &other.harmonics);
        while i < a.len() && j < b.len() {
            match a[i].order.cmp(&b[j].order) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].cos_amp * b[j].cos_amp + a[i].sin_amp * b[j].sin_amp;
                    i += 1;
                    j += 1;
                }
            }
        }
        t0 * self.constant * other.constant + 0.5 * t0 * acc
    }

    fn integral_between(&self, a: f64, b: f64) -> f64 {
        self.constant * (b - a)
            + self
                .harmonics
                .iter()
                .map(|h| h.integral(&self.interval, a, b))
                .sum::<f64>()
    }
}

/// Values on the uniform grid `t_i = t1 + i·Δ`, `Δ = T0/(N-1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCurve {
    interval: Interval,
    values: Vec<f64>,
}

impl SampledCurve {
    pub fn new(interval: Interval, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewSamples(values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { interval, values })
    }

    pub fn from_fn(interval: Interval, samples: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if samples < 2 {
            return Err(Error::TooFewSamples(samples));
        }
        Self::new(interval, grid_times(&interval, samples).map(f).collect())
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid spacing Δ.
    pub fn step(&self) -> f64 {
        self.interval.length() / (self.values.len() - 1) as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        grid_times(&self.interval, self.values.len())
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.interval.check_contains(t)?;
        Ok(self.value(t))
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let h = self.step();
        let last = self.values.len() - 2;
        let i = (((t - self.interval.t1) / h).floor().max(0.0) as usize).min(last);
        let node = self.interval.t1 + i as f64 * h;
        (i, t - node)
    }

    fn value(&self, t: f64) -> f64 {
        let (i, dx) = self.locate(t);
        if dx == 0.0 {
            return self.values[i];
        }
        let frac = dx / self.step();
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    pub fn resample(&self, samples: usize) -> Result<SampledCurve> {
        if samples == self.values.len() {
            return Ok(self.clone());
        }
        if samples < 2 {
            return Err(Error::TooFewSamples(samples));
        }
        let values = grid_times(&self.interval, samples)
            .map(|t| self.value(t))
            .collect();
        SampledCurve::new(self.interval, values)
    }

    /// Cumulative trapezoid integral at every node.
    fn prefix_integrals(&self) -> Vec<f64> {
        let h = self.step();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.values.len());
        out.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }

    /// Integral of the linear interpolant from `t1` to `t`, given the
    /// node prefix sums.
    fn primitive(&self, prefix: &[f64], t: f64) -> f64 {
        let (i, dx) = self.locate(t);
        if dx == 0.0 {
            return prefix[i];
        }
        prefix[i] + 0.5 * dx * (self.values[i] + self.value(t))
    }
}

/// A load function: closed-form trigonometric polynomial or sampled series.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LoadCurve {
    Analytic(AnalyticCurve),
    Sampled(SampledCurve),
}

impl From<AnalyticCurve> for LoadCurve {
    fn from(c: AnalyticCurve) -> Self {
        LoadCurve::Analytic(c)
    }
}

impl From<SampledCurve> for LoadCurve {
    fn from(c: SampledCurve) -> Self {
        LoadCurve::Sampled(c)
    }
}

impl LoadCurve {
    pub fn interval(&self) -> Interval {
        match self {
            LoadCurve::Analytic(c) => c.interval,
            LoadCurve::Sampled(c) => c.interval,
        }
    }

    /// Number of grid samples, `None` for analytic curves.
    pub fn sample_count(&self) -> Option<usize> {
        match self {
            LoadCurve::Analytic(_) => None,
            LoadCurve::Sampled(c) => Some(c.len()),
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match self {
            LoadCurve::Analytic(c) => c.evaluate(t),
            LoadCurve::Sampled(c) => c.evaluate(t),
        }
    }

    /// Renders the curve on a uniform grid of `samples` points.
    pub fn sample(&self, samples: usize) -> Result<SampledCurve> {
        match self {
            LoadCurve::Analytic(c) => c.sample(samples),
            LoadCurve::Sampled(c) => c.resample(samples),
        }
    }

    /// Both operands on one grid, or `None` when both are analytic.
    fn on_common_grid(&self, other: &LoadCurve) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
        self.interval().check_same(&other.interval())?;
        let samples = match (self.sample_count(), other.sample_count()) {
            (None, None) => return Ok(None),
            (Some(n), None) | (None, Some(n)) => n,
            (Some(n), Some(m)) => n.max(m),
        };
        let lhs = self.sample(samples)?.values;
        let rhs = other.sample(samples)?.values;
        Ok(Some((lhs, rhs)))
    }

    pub fn add(&self, other: &LoadCurve) -> Result<LoadCurve> {
        if let (LoadCurve::Analytic(a), LoadCurve::Analytic(b)) = (self, other) {
            a.interval.check_same(&b.interval)?;
            return Ok(a.add(b).into());
        }
        let (lhs, rhs) = self.on_common_grid(other)?.expect("one operand is sampled");
        let values = lhs.iter().zip(&rhs).map(|(x, y)| x + y).collect();
        Ok(SampledCurve::new(self.interval(), values)?.into())
    }

    pub fn scale(&self, a: f64) -> LoadCurve {
        match self {
            LoadCurve::Analytic(c) => c.scale(a).into(),
            LoadCurve::Sampled(c) => SampledCurve {
                interval: c.interval,
                values: c.values.iter().map(|v| a * v).collect(),
            }
            .into(),
        }
    }

    pub fn sub(&self, other: &LoadCurve) -> Result<LoadCurve> {
        self.add(&other.scale(-1.0))
    }

    /// `∫ c1(t)·c2(t) dt` over the shared interval.
    pub fn inner_product(&self, other: &LoadCurve) -> Result<f64> {
        if let (LoadCurve::Analytic(a), LoadCurve::Analytic(b)) = (self, other) {
            a.interval.check_same(&b.interval)?;
            return Ok(a.inner_product(b));
        }
        let (lhs, rhs) = self.on_common_grid(other)?.expect("one operand is sampled");
        let h = self.interval().length() / (lhs.len() - 1) as f64;
        let products: Vec<f64> = lhs.iter().zip(&rhs).map(|(x, y)| x * y).collect();
        Ok(trapezoid(&products, h))
    }

    pub fn norm(&self) -> f64 {
        self.inner_product(self)
            .expect("a curve shares its own interval")
            .max(0.0)
            .sqrt()
    }

    pub fn distance(&self, other: &LoadCurve) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// `∫ l(t) dt` over the whole interval.
    pub fn energy(&self) -> f64 {
        match self {
            LoadCurve::Analytic(c) => c.interval.length() * c.constant,
            LoadCurve::Sampled(c) => trapezoid(&c.values, c.step()),
        }
    }

    pub fn average_power(&self) -> f64 {
        self.energy() / self.interval().length()
    }

    /// `∫_a^b l(t) dt` for `t1 <= a <= b <= t2`. Sampled curves integrate
    /// their linear interpolant exactly, which is the trapezoid rule when
    /// `a` and `b` are grid nodes.
    pub fn integral_between(&self, a: f64, b: f64) -> Result<f64> {
        let interval = self.interval();
        interval.check_contains(a)?;
        interval.check_contains(b)?;
        if a > b {
            return Err(Error::InvalidInterval { t1: a, t2: b });
        }
        Ok(match self {
            LoadCurve::Analytic(c) => c.integral_between(a, b),
            LoadCurve::Sampled(c) => {
                let prefix = c.prefix_integrals();
                c.primitive(&prefix, b) - c.primitive(&prefix, a)
            }
        })
    }

    /// Integrals over `count` equal cycles partitioning the interval.
    /// Adjacent cycles share their boundary, so the results sum to the
    /// whole-interval integral.
    pub fn cycle_integrals(&self, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::InvalidParameter("cycle count must be positive".into()));
        }
        let bounds = self.interval().partition(count);
        Ok(match self {
            LoadCurve::Analytic(c) => bounds
                .windows(2)
                .map(|w| c.integral_between(w[0], w[1]))
                .collect(),
            LoadCurve::Sampled(c) => {
                let prefix = c.prefix_integrals();
                let primitive: Vec<f64> = bounds.iter().map(|&t| c.primitive(&prefix, t)).collect();
                primitive.windows(2).map(|w| w[1] - w[0]).collect()
            }
        })
    }
}

/// Uniform grid including both endpoints; the last node is `t2` exactly.
pub(crate) fn grid_times(interval: &Interval, samples: usize) -> impl Iterator<Item = f64> {
    let (t1, t2) = (interval.t1, interval.t2);
    let h = (t2 - t1) / (samples - 1) as f64;
    (0..samples).map(move |i| if i + 1 == samples { t2 } else { t1 + i as f64 * h })
}

/// Composite trapezoid rule on a uniform grid with spacing `h`.
pub(crate) fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => h * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}
