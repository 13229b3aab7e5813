//! Classic, spot and dynamism tariffs.
//!
//! The dynamism tariff charges `α0·(T0/2)·a0` for energy and
//! `T0·Σ(α_n a_n + β_n b_n)` for fluctuation, where `|α_n| = α(n f0)` and
//! `|β_n| = β(n f0)` come from price-frequency functions and their signs
//! follow the supply-side coefficients, so each charge is non-negative when
//! supply and load agree in polarity.

use serde::Serialize;

use crate::curve::{Interval, LoadCurve};
use crate::error::{Error, Result};
use crate::spectrum::{Coord, DynamismVector, Spectrum};

/// Unit price as a function of frequency: `base` below `cutoff`,
/// `base + slope·log10(f - log_offset)` from `cutoff` upwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriceFrequencyFunction {
    base: f64,
    cutoff: f64,
    slope: f64,
    log_offset: f64,
}

impl PriceFrequencyFunction {
    pub fn new(base: f64, cutoff: f64, slope: f64, log_offset: f64) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidPriceFunction(msg));
        if ![base, cutoff, slope, log_offset].iter().all(|v| v.is_finite()) {
            return invalid("parameters must be finite".into());
        }
        if base <= 0.0 {
            return invalid(format!("base must be positive, got {base}"));
        }
        if cutoff <= 0.0 {
            return invalid(format!("cutoff must be positive, got {cutoff}"));
        }
        if cutoff <= log_offset {
            return invalid(format!(
                "cutoff {cutoff} must exceed log_offset {log_offset}"
            ));
        }
        Ok(Self {
            base,
            cutoff,
            slope,
            log_offset,
        })
    }

    /// A frequency-independent price.
    pub fn flat(base: f64) -> Result<Self> {
        Self::new(base, 1.0, 0.0, 0.0)
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn log_offset(&self) -> f64 {
        self.log_offset
    }

    /// Absolute unit price at frequency `f`.
    pub fn value(&self, f: f64) -> Result<f64> {
        if f.is_nan() || f < 0.0 {
            return Err(Error::NegativeFrequency(f));
        }
        if f < self.cutoff {
            return Ok(self.base);
        }
        let arg = f - self.log_offset;
        if arg <= 0.0 {
            return Err(Error::LogDomain(arg));
        }
        Ok(self.base + self.slope * arg.log10())
    }
}

pub fn price_frequency_value(pff: &PriceFrequencyFunction, f: f64) -> Result<f64> {
    pff.value(f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpotPlan {
    interval: Interval,
    unit_prices: Vec<f64>,
}

impl SpotPlan {
    /// One price per cycle; the cycles split `interval` into equal parts.
    pub fn new(interval: Interval, unit_prices: Vec<f64>) -> Result<Self> {
        if unit_prices.is_empty() {
            return Err(Error::InvalidTariff("spot plan needs at least one cycle".into()));
        }
        if let Some(p) = unit_prices.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidTariff(format!("spot prices must be positive, got {p}")));
        }
        Ok(Self {
            interval,
            unit_prices,
        })
    }

    /// `count` cycles all priced at `price`.
    pub fn uniform(interval: Interval, count: usize, price: f64) -> Result<Self> {
        Self::new(interval, vec![price; count])
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn cycle_count(&self) -> usize {
        self.unit_prices.len()
    }

    pub fn unit_prices(&self) -> &[f64] {
        &self.unit_prices
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamismPlan {
    alpha0: f64,
    alpha: PriceFrequencyFunction,
    beta: PriceFrequencyFunction,
}

impl DynamismPlan {
    pub fn new(alpha0: f64, alpha: PriceFrequencyFunction, beta: PriceFrequencyFunction) -> Result<Self> {
        if !(alpha0.is_finite() && alpha0 > 0.0) {
            return Err(Error::InvalidTariff(format!("alpha0 must be positive, got {alpha0}")));
        }
        Ok(Self { alpha0, alpha, beta })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha(&self) -> &PriceFrequencyFunction {
        &self.alpha
    }

    pub fn beta(&self) -> &PriceFrequencyFunction {
        &self.beta
    }

    /// Absolute price of a harmonic coordinate; `alpha0` for `Coord::Zero`.
    pub fn magnitude(&self, coord: Coord, interval: &Interval) -> Result<f64> {
        let f = coord.frequency(interval);
        match coord {
            Coord::Zero => Ok(self.alpha0),
            Coord::Cos(_) => self.alpha.value(f),
            Coord::Sin(_) => self.beta.value(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TariffPlan {
    Flat { unit_price: f64 },
    Spot(SpotPlan),
    Dynamism(DynamismPlan),
}

impl TariffPlan {
    pub fn flat(unit_price: f64) -> Result<Self> {
        if !(unit_price.is_finite() && unit_price > 0.0) {
            return Err(Error::InvalidTariff(format!(
                "unit price must be positive, got {unit_price}"
            )));
        }
        Ok(TariffPlan::Flat { unit_price })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TariffPlan::Flat { .. } => "flat",
            TariffPlan::Spot(_) => "spot",
            TariffPlan::Dynamism(_) => "dynamism",
        }
    }

    /// Bills `curve` under any plan kind. Dynamism plans analyze the curve
    /// up to `n_max` and take polarity from `supply` (or the load itself).
    pub fn bill(&self, curve: &LoadCurve, n_max: u32, supply: Option<&Spectrum>) -> Result<Bill> {
        match self {
            TariffPlan::Flat { unit_price } => {
                let energy = curve.energy();
                let amount = classic_payment(*unit_price, curve);
                Ok(Bill::from_items(
                    amount,
                    vec![LineItem::energy(energy, *unit_price, amount)],
                    Vec::new(),
                ))
            }
            TariffPlan::Spot(plan) => {
                let parts = cycle_energies(plan, curve)?;
                let items: Vec<LineItem> = parts
                    .iter()
                    .zip(plan.unit_prices())
                    .enumerate()
                    .map(|(k, (e, p))| LineItem {
                        component: "cycle".into(),
                        order: k as u32 + 1,
                        frequency: 0.0,
                        coefficient: *e,
                        unit_price: *p,
                        amount: p * e,
                    })
                    .collect();
                let amount = items.iter().map(|i| i.amount).sum();
                Ok(Bill::from_items(amount, items, Vec::new()))
            }
            TariffPlan::Dynamism(plan) => {
                let spectrum = crate::spectrum::analyze(curve, n_max)?;
                let polarity = match supply {
                    Some(s) => Polarity::Supply(s),
                    None => Polarity::OwnLoad,
                };
                dynamism_payment(plan, &spectrum, polarity)
            }
        }
    }
}

/// Where the signs of the harmonic prices come from.
#[derive(Debug, Clone, Copy)]
pub enum Polarity<'a> {
    /// Supply curve equals the load curve (one source, one subscriber).
    OwnLoad,
    /// Signs follow this supply spectrum; where its coefficient is zero the
    /// load coefficient decides.
    Supply(&'a Spectrum),
    /// Every harmonic price is taken positive.
    Absolute,
}

impl Polarity<'_> {
    fn sign(&self, coord: Coord, load: &Spectrum) -> f64 {
        let load_coef = load.raw(coord);
        let supply_coef = match self {
            Polarity::OwnLoad => load_coef,
            Polarity::Supply(s) => s.raw(coord),
            Polarity::Absolute => return 1.0,
        };
        if supply_coef != 0.0 {
            supply_coef.signum()
        } else if load_coef != 0.0 {
            load_coef.signum()
        } else {
            1.0
        }
    }

    fn check(&self, interval: &Interval) -> Result<()> {
        match self {
            Polarity::Supply(s) => s.interval().check_same(interval),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineItem {
    /// `energy`, `cos`, `sin` or `cycle`.
    pub component: String,
    /// Harmonic order (0 for energy) or 1-based cycle number.
    pub order: u32,
    pub frequency: f64,
    pub coefficient: f64,
    /// Signed unit price applied to `coefficient`.
    pub unit_price: f64,
    pub amount: f64,
}

impl LineItem {
    fn energy(energy: f64, unit_price: f64, amount: f64) -> Self {
        Self {
            component: "energy".into(),
            order: 0,
            frequency: 0.0,
            coefficient: energy,
            unit_price,
            amount,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bill {
    pub non_dynamic: f64,
    pub dynamic: f64,
    pub total: f64,
    pub line_items: Vec<LineItem>,
}

impl Bill {
    fn from_items(non_dynamic: f64, mut items: Vec<LineItem>, dynamic_items: Vec<LineItem>) -> Self {
        let dynamic = dynamic_items.iter().fold(0.0, |acc, i| acc + i.amount);
        items.extend(dynamic_items);
        Bill {
            non_dynamic,
            dynamic,
            total: non_dynamic + dynamic,
            line_items: items,
        }
    }
}

/// `unit_price · ∫ l(t) dt`.
pub fn classic_payment(unit_price: f64, c: &LoadCurve) -> f64 {
    unit_price * c.energy()
}

/// Unit price recovering a gross supply cost over the gross energy.
pub fn unit_price_from_gross(gross_cost: f64, gross_energy: f64) -> Result<f64> {
    if gross_energy.is_nan() || gross_energy <= 0.0 {
        return Err(Error::NonPositiveEnergy(gross_energy));
    }
    Ok(gross_cost / gross_energy)
}

fn cycle_energies(plan: &SpotPlan, c: &LoadCurve) -> Result<Vec<f64>> {
    if plan.interval != c.interval() {
        return Err(Error::InvalidTariff(
            "spot cycles do not partition the curve's interval".into(),
        ));
    }
    c.cycle_integrals(plan.cycle_count())
}

/// `Σ_k p_k · ∫_{cycle k} l(t) dt`.
pub fn spot_payment(plan: &SpotPlan, c: &LoadCurve) -> Result<f64> {
    Ok(cycle_energies(plan, c)?
        .iter()
        .zip(&plan.unit_prices)
        .map(|(e, p)| p * e)
        .sum())
}

pub fn dynamism_payment(plan: &DynamismPlan, s: &Spectrum, polarity: Polarity) -> Result<Bill> {
    let interval = s.interval();
    polarity.check(&interval)?;
    let t0 = interval.length();
    let non_dynamic = plan.alpha0 * 0.5 * t0 * s.a0();
    let energy = LineItem::energy(s.energy(), plan.alpha0, non_dynamic);

    let mut items = Vec::with_capacity(2 * s.harmonics().len());
    for h in s.harmonics() {
        for (coord, coefficient) in [(Coord::Cos(h.order), h.a), (Coord::Sin(h.order), h.b)] {
            if coefficient == 0.0 {
                continue;
            }
            let price = polarity.sign(coord, s) * plan.magnitude(coord, &interval)?;
            items.push(LineItem {
                component: coord.label().into(),
                order: h.order,
                frequency: coord.frequency(&interval),
                coefficient,
                unit_price: price,
                amount: t0 * price * coefficient,
            });
        }
    }
    Ok(Bill::from_items(non_dynamic, vec![energy], items))
}

/// Partial derivatives of a payment with respect to a set of coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gradient {
    entries: Vec<(Coord, f64)>,
}

impl Gradient {
    pub fn new(mut entries: Vec<(Coord, f64)>) -> Self {
        entries.sort_by_key(|(c, _)| *c);
        entries.dedup_by_key(|(c, _)| *c);
        Self { entries }
    }

    pub fn entries(&self) -> &[(Coord, f64)] {
        &self.entries
    }

    pub fn get(&self, coord: Coord) -> Option<f64> {
        self.entries
            .binary_search_by_key(&coord, |(c, _)| *c)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn negated(&self) -> Gradient {
        Gradient {
            entries: self.entries.iter().map(|(c, v)| (*c, -v)).collect(),
        }
    }

    /// Coordinate with the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> Option<Coord> {
        self.entries
            .iter()
            .fold(None, |best: Option<(Coord, f64)>, &(c, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((c, v)),
            })
            .map(|(c, _)| c)
    }

    /// Coordinate with the smallest entry; ties go to the lowest index.
    pub fn argmin(&self) -> Option<Coord> {
        self.negated().argmax()
    }

    /// Converts a gradient over raw coefficients `(a0, a_n, b_n)` into one
    /// over unit-norm dynamism coordinates.
    pub fn to_mu_basis(&self, interval: &Interval) -> Gradient {
        let t0 = interval.length();
        let entries = self
            .entries
            .iter()
            .map(|&(c, g)| match c {
                Coord::Zero => (c, g * 2.0 / t0.sqrt()),
                _ => (c, g / (0.5 * t0).sqrt()),
            })
            .collect();
        Gradient { entries }
    }
}

fn harmonic_coords(orders: &[u32]) -> Result<Vec<Coord>> {
    let mut coords = vec![Coord::Zero];
    for &n in orders {
        if n == 0 {
            return Err(Error::ZeroOrder);
        }
        coords.push(Coord::Cos(n));
        coords.push(Coord::Sin(n));
    }
    Ok(coords)
}

/// `T0·(α0/2, α_n, β_n, …)` over the energy coordinate and the cosine and
/// sine coordinates of `orders`, evaluated at the load `at` with the sign
/// convention of `polarity` held fixed.
pub fn payment_gradient(
    plan: &DynamismPlan,
    at: &Spectrum,
    orders: &[u32],
    polarity: Polarity,
) -> Result<Gradient> {
    let interval = at.interval();
    polarity.check(&interval)?;
    let t0 = interval.length();
    let entries = harmonic_coords(orders)?
        .into_iter()
        .map(|c| {
            let rate = match c {
                Coord::Zero => 0.5 * plan.alpha0,
                _ => polarity.sign(c, at) * plan.magnitude(c, &interval)?,
            };
            Ok((c, t0 * rate))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Gradient::new(entries))
}

/// Direction of fastest payment decrease: the negated payment gradient.
pub fn incentive_direction(
    plan: &DynamismPlan,
    at: &Spectrum,
    orders: &[u32],
    polarity: Polarity,
) -> Result<Gradient> {
    Ok(payment_gradient(plan, at, orders, polarity)?.negated())
}

/// Pricing given directly as rates `λ_k` on unit-norm dynamism
/// coordinates, with payment `Σ λ_k μ_k`. Rates carry their own signs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoordinatePricing {
    interval: Interval,
    rates: Vec<(Coord, f64)>,
}

impl CoordinatePricing {
    pub fn new(interval: Interval, rates: Vec<(Coord, f64)>) -> Result<Self> {
        if let Some(i) = rates.iter().position(|(_, r)| !r.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut rates = rates;
        rates.sort_by_key(|(c, _)| *c);
        if rates.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("duplicate rate coordinate".into()));
        }
        Ok(Self { interval, rates })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn rates(&self) -> &[(Coord, f64)] {
        &self.rates
    }

    /// `λ_k`, zero outside the support.
    pub fn rate(&self, coord: Coord) -> f64 {
        self.rates
            .binary_search_by_key(&coord, |(c, _)| *c)
            .map(|i| self.rates[i].1)
            .unwrap_or(0.0)
    }

    /// Equivalent price on the raw coefficient: `α0 = λ0/√T0` for the
    /// energy coordinate, `λ_k/√(2·T0)` for a harmonic one.
    pub fn coefficient_rate(&self, coord: Coord) -> f64 {
        let t0 = self.interval.length();
        match coord {
            Coord::Zero => self.rate(coord) / t0.sqrt(),
            _ => self.rate(coord) / (2.0 * t0).sqrt(),
        }
    }

    pub fn payment(&self, mu: &DynamismVector) -> Result<f64> {
        self.interval.check_same(&mu.interval())?;
        Ok(self.rates.iter().map(|(c, r)| r * mu.get(*c)).sum())
    }

    pub fn bill(&self, s: &Spectrum) -> Result<Bill> {
        self.interval.check_same(&s.interval())?;
        let mu = s.to_mu_vector();
        let non_dynamic = self.rate(Coord::Zero) * mu.get(Coord::Zero);
        let energy = LineItem::energy(s.energy(), self.coefficient_rate(Coord::Zero), non_dynamic);
        let items = mu
            .entries()
            .iter()
            .filter(|(c, v)| *c != Coord::Zero && *v != 0.0)
            .map(|&(c, v)| LineItem {
                component: c.label().into(),
                order: c.order(),
                frequency: c.frequency(&self.interval),
                coefficient: s.raw(c),
                unit_price: self.coefficient_rate(c),
                amount: self.rate(c) * v,
            })
            .collect();
        Ok(Bill::from_items(non_dynamic, vec![energy], items))
    }

    /// `∂ρ/∂μ_k = λ_k` over the energy coordinate and `orders`.
    pub fn dynamism_gradient(&self, orders: &[u32]) -> Result<Gradient> {
        Ok(Gradient::new(
            harmonic_coords(orders)?
                .into_iter()
                .map(|c| (c, self.rate(c)))
                .collect(),
        ))
    }

    /// Gradient over raw coefficients, `T0·(α0/2, α_n, β_n, …)`.
    pub fn coefficient_gradient(&self, orders: &[u32]) -> Result<Gradient> {
        let t0 = self.interval.length();
        Ok(Gradient::new(
            harmonic_coords(orders)?
                .into_iter()
                .map(|c| {
                    let scale = if c == Coord::Zero { 0.5 * t0 } else { t0 };
                    (c, scale * self.coefficient_rate(c))
                })
                .collect(),
        ))
    }
}
