use std::fmt::Write as _;
use std::path::Path;

use loadspace::scenarios::{case1_demo, format_significant, reproduce_table1, ScenarioReport};
use loadspace::{
    analyze, calibrate, Bill, CalibrationOptions, CostObservation, LoadCurve, Spectrum, TariffPlan,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::input::{default_nmax, load_plan, load_profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Table1,
    Case1,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    Curve,
    Spectrum,
    Pff,
}

fn sig(x: f64) -> String {
    format_significant(x, 6)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn nmax_for(curve: &LoadCurve, requested: Option<u32>) -> CliResult<u32> {
    match requested {
        Some(0) => Err(CliError::precondition("--nmax must be at least 1")),
        Some(n) => Ok(n),
        None => default_nmax(curve),
    }
}

#[derive(Serialize)]
struct HarmonicRow {
    order: u32,
    frequency: f64,
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct Decomposition {
    t1: f64,
    t2: f64,
    n_max: u32,
    a0: f64,
    harmonics: Vec<HarmonicRow>,
    parseval_energy: f64,
    norm_squared: f64,
    parseval_ratio: f64,
}

pub fn decompose(profile: &str, nmax: Option<u32>, format: Format) -> CliResult<String> {
    let curve = load_profile(profile, None)?;
    let n_max = nmax_for(&curve, nmax)?;
    let s = analyze(&curve, n_max)?;
    let interval = s.interval();
    let parseval_energy = s.parseval_energy();
    let norm_squared = curve.norm().powi(2);
    let parseval_ratio = if norm_squared == 0.0 && parseval_energy == 0.0 { 1.0 } else { parseval_energy / norm_squared };
    let d = Decomposition {
        t1: interval.t1(),
        t2: interval.t2(),
        n_max,
        a0: s.a0(),
        harmonics: s
            .harmonics()
            .iter()
            .map(|h| HarmonicRow { order: h.order, frequency: h.order as f64 * interval.fundamental(), a: h.a, b: h.b })
            .collect(),
        parseval_energy,
        norm_squared,
        parseval_ratio,
    };
    Ok(match format {
        Format::Json => json(&d),
        Format::Csv => {
            let rows = std::iter::once(vec!["0".into(), "0".into(), d.a0.to_string(), "0".into()]).chain(
                d.harmonics
                    .iter()
                    .map(|h| vec![h.order.to_string(), h.frequency.to_string(), h.a.to_string(), h.b.to_string()]),
            );
            csv_table(&["order", "frequency", "a", "b"], rows)
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "interval [{}, {}], n_max {}", sig(d.t1), sig(d.t2), d.n_max);
            let _ = writeln!(out, "a0 {}", sig(d.a0));
            let _ = writeln!(out, "{:>6} {:>12} {:>14} {:>14}", "order", "frequency", "a", "b");
            for h in &d.harmonics {
                let _ = writeln!(out, "{:>6} {:>12} {:>14} {:>14}", h.order, sig(h.frequency), sig(h.a), sig(h.b));
            }
            let _ = writeln!(out, "parseval ratio {}", sig(d.parseval_ratio));
            out
        }
    })
}

#[derive(Serialize)]
struct BillReport<'a> {
    plan: &'static str,
    n_max: Option<u32>,
    bill: &'a Bill,
}

fn bill_with(curve: &LoadCurve, plan: &TariffPlan, nmax: Option<u32>, supply: Option<&Spectrum>) -> CliResult<(Option<u32>, Bill)> {
    let n_max = match plan {
        TariffPlan::Dynamism(_) => Some(nmax_for(curve, nmax)?),
        _ => None,
    };
    let bill = plan.bill(curve, n_max.unwrap_or(1), supply)?;
    Ok((n_max, bill))
}

fn bill_table(out: &mut String, bill: &Bill) {
    let _ = writeln!(out, "non-dynamic {}", sig(bill.non_dynamic));
    let _ = writeln!(out, "dynamic     {}", sig(bill.dynamic));
    let _ = writeln!(out, "total       {}", sig(bill.total));
    let _ = writeln!(
        out,
        "{:<8} {:>6} {:>12} {:>14} {:>12} {:>14}",
        "item", "order", "frequency", "coefficient", "unit price", "amount"
    );
    for i in &bill.line_items {
        let _ = writeln!(
            out,
            "{:<8} {:>6} {:>12} {:>14} {:>12} {:>14}",
            i.component,
            i.order,
            sig(i.frequency),
            sig(i.coefficient),
            sig(i.unit_price),
            sig(i.amount)
        );
    }
}

pub fn bill(profile: &str, plan: &str, supply: Option<&str>, nmax: Option<u32>, format: Format) -> CliResult<String> {
    let curve = load_profile(profile, None)?;
    let plan = load_plan(plan)?;
    let supply_spectrum = match supply {
        Some(spec) => {
            let s = load_profile(spec, None)?;
            let n_max = nmax_for(&curve, nmax)?;
            Some(analyze(&s, n_max)?)
        }
        None => None,
    };
    let (n_max, bill) = bill_with(&curve, &plan, nmax, supply_spectrum.as_ref())?;
    Ok(match format {
        Format::Json => json(&BillReport { plan: plan.kind(), n_max, bill: &bill }),
        Format::Csv => {
            let items = bill.line_items.iter().map(|i| {
                vec![
                    i.component.clone(),
                    i.order.to_string(),
                    i.frequency.to_string(),
                    i.coefficient.to_string(),
                    i.unit_price.to_string(),
                    i.amount.to_string(),
                ]
            });
            let totals = [("non_dynamic", bill.non_dynamic), ("dynamic", bill.dynamic), ("total", bill.total)]
                .map(|(k, v)| vec![k.to_string(), String::new(), String::new(), String::new(), String::new(), v.to_string()]);
            csv_table(
                &["component", "order", "frequency", "coefficient", "unit_price", "amount"],
                items.chain(totals),
            )
        }
        Format::Table => {
            let mut out = format!("plan {}\n", plan.kind());
            bill_table(&mut out, &bill);
            out
        }
    })
}

#[derive(Serialize)]
struct Difference {
    non_dynamic: f64,
    dynamic: f64,
    total: f64,
}

#[derive(Serialize)]
struct Comparison<'a> {
    plan_a: BillReport<'a>,
    plan_b: BillReport<'a>,
    difference: Difference,
}

pub fn compare(profile: &str, plan_a: &str, plan_b: &str, nmax: Option<u32>, format: Format) -> CliResult<String> {
    let curve = load_profile(profile, None)?;
    let (pa, pb) = (load_plan(plan_a)?, load_plan(plan_b)?);
    let (na, ba) = bill_with(&curve, &pa, nmax, None)?;
    let (nb, bb) = bill_with(&curve, &pb, nmax, None)?;
    let rows = [
        ("non-dynamic", ba.non_dynamic, bb.non_dynamic),
        ("dynamic", ba.dynamic, bb.dynamic),
        ("total", ba.total, bb.total),
    ];
    Ok(match format {
        Format::Json => json(&Comparison {
            plan_a: BillReport { plan: pa.kind(), n_max: na, bill: &ba },
            plan_b: BillReport { plan: pb.kind(), n_max: nb, bill: &bb },
            difference: Difference {
                non_dynamic: bb.non_dynamic - ba.non_dynamic,
                dynamic: bb.dynamic - ba.dynamic,
                total: bb.total - ba.total,
            },
        }),
        Format::Csv => csv_table(
            &["quantity", "plan_a", "plan_b", "difference"],
            rows.iter().map(|(k, a, b)| vec![k.to_string(), a.to_string(), b.to_string(), (b - a).to_string()]),
        ),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<12} {:>14} {:>14} {:>14}", "", format!("A ({})", pa.kind()), format!("B ({})", pb.kind()), "B - A");
            for (k, a, b) in rows {
                let _ = writeln!(out, "{:<12} {:>14} {:>14} {:>14}", k, sig(a), sig(b), sig(b - a));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct IotaRow {
    component: &'static str,
    order: u32,
    iota: f64,
}

#[derive(Serialize)]
struct ResidualRow {
    profile: String,
    observed_cost: f64,
    residual: f64,
}

#[derive(Serialize)]
struct CalibrationReport {
    n_max: u32,
    rank: usize,
    rms_residual: f64,
    iota: Vec<IotaRow>,
    residuals: Vec<ResidualRow>,
}

pub fn calibrate_cmd(manifest: &Path, nmax: Option<u32>, ridge: f64, format: Format) -> CliResult<String> {
    let source = manifest.display().to_string();
    let file = std::fs::File::open(manifest).map_err(|e| CliError::input(format!("{source}: {e}")))?;
    let base = manifest.parent();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers().map_err(|e| CliError::input(format!("{source}: line 1: {e}")))?.clone();
    if headers.len() != 2 || &headers[0] != "profile" || &headers[1] != "cost" {
        return Err(CliError::input(format!("{source}: line 1: expected header `profile,cost`")));
    }
    let mut names = Vec::new();
    let mut observations = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            CliError::input(format!("{source}: line {line}: {e}"))
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let cost: f64 = match record[1].parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => return Err(CliError::input(format!("{source}: line {line}: invalid cost `{}`", &record[1]))),
        };
        let load = load_profile(&record[0], base)?;
        names.push(record[0].to_string());
        observations.push(CostObservation::new(load, cost));
    }
    if observations.is_empty() {
        return Err(CliError::input(format!("{source}: no observations")));
    }
    let n_max = match nmax {
        Some(_) => nmax_for(&observations[0].load, nmax)?,
        None => {
            let mut n = u32::MAX;
            for o in &observations {
                n = n.min(default_nmax(&o.load)?);
            }
            n
        }
    };
    if !(ridge.is_finite() && ridge >= 0.0) {
        return Err(CliError::input(format!("--ridge must be a nonnegative number, got {ridge}")));
    }
    let fit = calibrate(&observations, n_max, &CalibrationOptions { ridge, ..Default::default() })?;
    let report = CalibrationReport {
        n_max,
        rank: fit.rank,
        rms_residual: fit.rms_residual(),
        iota: fit
            .characteristic
            .entries()
            .map(|(c, v)| IotaRow { component: c.label(), order: c.order(), iota: v })
            .collect(),
        residuals: names
            .into_iter()
            .zip(&observations)
            .zip(&fit.residuals)
            .map(|((profile, o), r)| ResidualRow { profile, observed_cost: o.observed_cost, residual: *r })
            .collect(),
    };
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => csv_table(
            &["component", "order", "iota"],
            report.iota.iter().map(|r| vec![r.component.to_string(), r.order.to_string(), r.iota.to_string()]),
        ),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "n_max {}, rank {}, rms residual {}", report.n_max, report.rank, sig(report.rms_residual));
            let _ = writeln!(out, "{:<8} {:>6} {:>14}", "coord", "order", "iota");
            for r in &report.iota {
                let _ = writeln!(out, "{:<8} {:>6} {:>14}", r.component, r.order, sig(r.iota));
            }
            let _ = writeln!(out, "{:<30} {:>14} {:>14}", "profile", "cost", "residual");
            for r in &report.residuals {
                let _ = writeln!(out, "{:<30} {:>14} {:>14}", r.profile, sig(r.observed_cost), sig(r.residual));
            }
            out
        }
    })
}

pub fn distance(a: &str, b: &str, format: Format) -> CliResult<String> {
    let d = load_profile(a, None)?.distance(&load_profile(b, None)?)?;
    Ok(match format {
        Format::Json => json(&serde_json::json!({ "distance": d })),
        Format::Csv => csv_table(&["distance"], [vec![d.to_string()]]),
        Format::Table => format!("{}\n", sig(d)),
    })
}

/// Rendered reports and whether every check passed.
pub fn scenarios(which: Which, format: Format) -> CliResult<(String, bool)> {
    let reports: Vec<ScenarioReport> = match which {
        Which::Table1 => vec![reproduce_table1()],
        Which::Case1 => vec![case1_demo()],
        Which::All => vec![reproduce_table1(), case1_demo()],
    };
    let passed = reports.iter().all(ScenarioReport::passed);
    let text = match format {
        Format::Json => json(&reports),
        Format::Csv => csv_table(
            &["scenario", "check", "source", "expected", "actual", "tolerance", "passed"],
            reports.iter().flat_map(|r| {
                r.checks.iter().map(|c| {
                    vec![
                        r.name.clone(),
                        c.description.clone(),
                        c.source.as_str().to_string(),
                        c.expected.to_string(),
                        c.actual.to_string(),
                        c.tolerance.to_string(),
                        c.passed.to_string(),
                    ]
                })
            }),
        ),
        Format::Table => reports.iter().map(ScenarioReport::render_table).collect::<Vec<_>>().join("\n"),
    };
    Ok((text, passed))
}

pub struct PlotOptions {
    pub nmax: Option<u32>,
    pub points: usize,
    pub fmax: u32,
}

pub fn plotdata(input: &str, what: PlotKind, opts: &PlotOptions) -> CliResult<String> {
    match what {
        PlotKind::Curve => {
            let curve = load_profile(input, None)?;
            let rows: Vec<(f64, f64)> = match &curve {
                LoadCurve::Sampled(s) => s.times().zip(s.values().iter().copied()).collect(),
                LoadCurve::Analytic(_) => {
                    if opts.points < 2 {
                        return Err(CliError::precondition("--points must be at least 2"));
                    }
                    let s = curve.sample(opts.points)?;
                    s.times().zip(s.values().iter().copied()).collect()
                }
            };
            Ok(csv_table(&["t", "power"], rows.into_iter().map(|(t, p)| vec![t.to_string(), p.to_string()])))
        }
        PlotKind::Spectrum => {
            let curve = load_profile(input, None)?;
            let s = analyze(&curve, nmax_for(&curve, opts.nmax)?)?;
            let f0 = s.interval().fundamental();
            let rows = std::iter::once((0.0, s.a0() / 2.0))
                .chain(s.harmonics().iter().map(|h| (h.order as f64 * f0, h.a.hypot(h.b))));
            Ok(csv_table(&["frequency", "amplitude"], rows.map(|(f, a)| vec![f.to_string(), a.to_string()])))
        }
        PlotKind::Pff => {
            let plan = match load_plan(input)? {
                TariffPlan::Dynamism(p) => p,
                other => {
                    return Err(CliError::precondition(format!(
                        "price-frequency data needs a dynamism plan, got {}",
                        other.kind()
                    )))
                }
            };
            let mut rows = Vec::new();
            for f in 0..=opts.fmax {
                let f = f as f64;
                rows.push(vec![f.to_string(), plan.alpha().value(f)?.to_string(), plan.beta().value(f)?.to_string()]);
            }
            Ok(csv_table(&["frequency", "alpha", "beta"], rows))
        }
    }
}
