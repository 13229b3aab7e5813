//! Reproducible worked examples: the two reference loads, the two
//! reference plans, their four bills, and three equal-energy loads that
//! an integral tariff cannot tell apart.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curve::{AnalyticCurve, Harmonic, Interval, LoadCurve};
use crate::spectrum::analyze;
use crate::tariff::{classic_payment, dynamism_payment, Bill, DynamismPlan, Polarity, PriceFrequencyFunction};

/// Highest harmonic order present in the reference loads.
pub const REFERENCE_N_MAX: u32 = 100;

/// Reference bill values as `(label, non_dynamic, dynamic, total)`.
pub const TABLE1: [(&str, f64, f64, f64); 4] = [
    ("Load1Plan1", 1000.0, 769.031, 1769.031),
    ("Load2Plan1", 800.0, 859.031, 1659.031),
    ("Load1Plan2", 500.0, 1040.309, 1540.309),
    ("Load2Plan2", 400.0, 1940.309, 2340.309),
];

pub const TABLE1_TOLERANCE: f64 = 1e-3;

/// `l1 = 50 + 20 sin(10πt) + 10 cos(40πt) + 5 sin(200πt)` and
/// `l2 = 40 + 5 sin(10πt) + 10 cos(40πt) + 20 sin(200πt)` on `[0, 1]`.
pub fn builtin_loads() -> (AnalyticCurve, AnalyticCurve) {
    let load = |dc, s5, c20, s100| {
        AnalyticCurve::new(
            Interval::unit(),
            dc,
            vec![Harmonic::sin(5, s5), Harmonic::cos(20, c20), Harmonic::sin(100, s100)],
        )
        .expect("distinct positive orders")
    };
    (load(50.0, 20.0, 10.0, 5.0), load(40.0, 5.0, 10.0, 20.0))
}

/// Plan 1 (base 20, slope 3) and Plan 2 (base 10, slope 30), cutoff 10,
/// with `α = β` and `α0 = base`.
pub fn builtin_plans() -> (DynamismPlan, DynamismPlan) {
    builtin_plans_with_offset(0.0)
}

/// Reference plans with a chosen logarithm offset; 0 reproduces the
/// reference bills, 9 follows the `log10(f - 9)` form.
pub fn builtin_plans_with_offset(log_offset: f64) -> (DynamismPlan, DynamismPlan) {
    let plan = |base, slope| {
        let pff = PriceFrequencyFunction::new(base, 10.0, slope, log_offset).expect("valid reference plan");
        DynamismPlan::new(base, pff, pff).expect("positive alpha0")
    };
    (plan(20.0, 3.0), plan(10.0, 30.0))
}

/// Three loads on `[0, 1]` with identical energy and different dynamism:
/// flat, a slow sine and a fast cosine.
pub fn case1_loads() -> [AnalyticCurve; 3] {
    let unit = Interval::unit();
    [
        AnalyticCurve::constant(unit, 50.0),
        AnalyticCurve::new(unit, 50.0, vec![Harmonic::sin(1, 20.0)]).expect("valid"),
        AnalyticCurve::new(unit, 50.0, vec![Harmonic::cos(20, 20.0)]).expect("valid"),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Value quoted with the worked example.
    Reference,
    /// Computed independently of the code under test.
    Computed,
    /// Follows from an algebraic identity.
    Identity,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Reference => "reference",
            Source::Computed => "computed",
            Source::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|actual - expected| <= tolerance`.
    Within,
    /// `actual > expected`.
    GreaterThan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub description: String,
    pub source: Source,
    pub comparison: Comparison,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn within(description: impl Into<String>, source: Source, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self {
            description: description.into(),
            source,
            comparison: Comparison::Within,
            expected,
            actual,
            tolerance,
            passed: (actual - expected).abs() <= tolerance,
        }
    }

    pub fn greater_than(description: impl Into<String>, source: Source, bound: f64, actual: f64) -> Self {
        Self {
            description: description.into(),
            source,
            comparison: Comparison::GreaterThan,
            expected: bound,
            actual,
            tolerance: 0.0,
            passed: actual > bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledBill {
    pub label: String,
    pub bill: Bill,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledAmount {
    pub label: String,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub bills: Vec<LabeledBill>,
    pub payments: Vec<LabeledAmount>,
    pub checks: Vec<Check>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Human-readable rendering, numbers at 6 significant digits.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.name);
        if !self.bills.is_empty() {
            let _ = writeln!(out, "{:<14} {:>12} {:>12} {:>12}", "bill", "non-dyn", "dyn", "total");
            for b in &self.bills {
                let _ = writeln!(
                    out,
                    "{:<14} {:>12} {:>12} {:>12}",
                    b.label,
                    format_significant(b.bill.non_dynamic, 6),
                    format_significant(b.bill.dynamic, 6),
                    format_significant(b.bill.total, 6)
                );
            }
        }
        for p in &self.payments {
            let _ = writeln!(out, "{:<40} {:>12}", p.label, format_significant(p.amount, 6));
        }
        for c in &self.checks {
            let relation = match c.comparison {
                Comparison::Within => format!(
                    "expected {} ± {}",
                    format_significant(c.expected, 6),
                    format_significant(c.tolerance, 2)
                ),
                Comparison::GreaterThan => format!("expected > {}", format_significant(c.expected, 6)),
            };
            let _ = writeln!(
                out,
                "[{}] {} ({}): actual {}, {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.description,
                c.source.as_str(),
                format_significant(c.actual, 6),
                relation
            );
        }
        out
    }
}

/// Formats `x` with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let mut exponent = x.abs().log10().floor() as i32;
    let rounded: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap_or(x);
    if rounded.abs() >= 10f64.powi(exponent + 1) {
        exponent += 1;
    }
    if exponent < -4 || exponent >= digits as i32 {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn reproduce_table1() -> ScenarioReport {
    let (l1, l2) = builtin_loads();
    let (p1, p2) = builtin_plans();
    let combos = [(&l1, &p1), (&l2, &p1), (&l1, &p2), (&l2, &p2)];
    let mut bills = Vec::new();
    let mut checks = Vec::new();
    for ((label, nd, dy, total), (load, plan)) in TABLE1.iter().zip(combos) {
        let spectrum = analyze(&LoadCurve::from(load.clone()), REFERENCE_N_MAX).expect("analytic load");
        let bill = dynamism_payment(plan, &spectrum, Polarity::OwnLoad).expect("reference plan covers all orders");
        for (part, expected, actual) in [
            ("non-dynamic", nd, bill.non_dynamic),
            ("dynamic", dy, bill.dynamic),
            ("total", total, bill.total),
        ] {
            checks.push(Check::within(
                format!("{label} {part}"),
                Source::Reference,
                *expected,
                actual,
                TABLE1_TOLERANCE,
            ));
        }
        bills.push(LabeledBill {
            label: label.to_string(),
            bill,
        });
    }
    ScenarioReport {
        name: "table1".into(),
        bills,
        payments: Vec::new(),
        checks,
    }
}

pub fn case1_demo() -> ScenarioReport {
    let loads: Vec<LoadCurve> = case1_loads().into_iter().map(LoadCurve::from).collect();
    let names = ["flat", "sin(2πt)", "cos(40πt)"];
    let (plan1, _) = builtin_plans();
    let unit_price = plan1.alpha0();

    let mut payments = Vec::new();
    let mut checks = Vec::new();
    let mut bills = Vec::new();

    let classic: Vec<f64> = loads.iter().map(|l| classic_payment(unit_price, l)).collect();
    for (name, p) in names.iter().zip(&classic) {
        payments.push(LabeledAmount {
            label: format!("classic payment, {name}"),
            amount: *p,
        });
    }
    for (name, p) in names.iter().zip(&classic).skip(1) {
        checks.push(Check::within(
            format!("classic payment of {name} equals flat load"),
            Source::Identity,
            classic[0],
            *p,
            0.0,
        ));
    }

    for i in 0..loads.len() {
        for j in i + 1..loads.len() {
            let d = loads[i].distance(&loads[j]).expect("shared interval");
            payments.push(LabeledAmount {
                label: format!("distance {} - {}", names[i], names[j]),
                amount: d,
            });
            checks.push(Check::greater_than(
                format!("distance {} - {} exceeds 1", names[i], names[j]),
                Source::Computed,
                1.0,
                d,
            ));
        }
    }

    let totals: Vec<f64> = loads
        .iter()
        .zip(names)
        .map(|(l, name)| {
            let s = analyze(l, REFERENCE_N_MAX).expect("analytic load");
            let bill = dynamism_payment(&plan1, &s, Polarity::OwnLoad).expect("plan covers orders");
            let total = bill.total;
            bills.push(LabeledBill {
                label: name.to_string(),
                bill,
            });
            total
        })
        .collect();
    for i in 0..totals.len() {
        for j in i + 1..totals.len() {
            checks.push(Check::greater_than(
                format!("dynamism totals of {} and {} differ by more than 1", names[i], names[j]),
                Source::Computed,
                1.0,
                (totals[i] - totals[j]).abs(),
            ));
        }
    }
    for w in 0..totals.len() - 1 {
        checks.push(Check::greater_than(
            format!("dynamism total rises from {} to {}", names[w], names[w + 1]),
            Source::Computed,
            0.0,
            totals[w + 1] - totals[w],
        ));
    }

    ScenarioReport {
        name: "case1".into(),
        bills,
        payments,
        checks,
    }
}
