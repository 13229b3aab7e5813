//! Profile CSV and plan JSON ingestion, plus the builtin reference names.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use loadspace::scenarios::{builtin_loads, builtin_plans};
use loadspace::{DynamismPlan, Interval, LoadCurve, PriceFrequencyFunction, SampledCurve, SpotPlan, TariffPlan};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

const SPACING_TOLERANCE: f64 = 1e-9;
const DEFAULT_NMAX_CAP: u32 = 512;

/// Resolves `spec` against `base` unless it is absolute.
pub fn resolve(spec: &str, base: Option<&Path>) -> PathBuf {
    let path = PathBuf::from(spec);
    match base {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path,
    }
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Reads a load profile; `l1` and `l2` name the reference curves when no
/// such file exists.
pub fn load_profile(spec: &str, base: Option<&Path>) -> CliResult<LoadCurve> {
    let path = resolve(spec, base);
    if !path.exists() {
        let (l1, l2) = builtin_loads();
        match spec {
            "l1" => return Ok(l1.into()),
            "l2" => return Ok(l2.into()),
            _ => {}
        }
    }
    let file = open(&path)?;
    parse_profile(file, &path.display().to_string())
}

pub fn parse_profile<R: Read>(reader: R, source: &str) -> CliResult<LoadCurve> {
    let err = |line: u64, msg: String| CliError::input(format!("{source}: line {line}: {msg}"));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "power" {
        return Err(err(1, format!("expected header `t,power`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize, name: &str| -> CliResult<f64> {
            let raw = &record[i];
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(err(line, format!("invalid {name} value `{raw}`"))),
            }
        };
        times.push(field(0, "t")?);
        values.push(field(1, "power")?);
        lines.push(line);
    }

    if times.len() < 2 {
        return Err(err(lines.last().copied().unwrap_or(1), format!("need at least 2 rows, found {}", times.len())));
    }
    let n = times.len();
    let step = times[1] - times[0];
    for i in 1..n {
        let delta = times[i] - times[i - 1];
        if delta <= 0.0 {
            return Err(err(lines[i], "t must be strictly increasing".into()));
        }
        if (delta - step).abs() > SPACING_TOLERANCE * step {
            return Err(err(lines[i], format!("non-uniform spacing {delta} (expected {step})")));
        }
    }
    let interval = Interval::new(times[0], times[n - 1]).map_err(|e| CliError::input(format!("{source}: {e}")))?;
    let curve = SampledCurve::new(interval, values).map_err(|e| CliError::input(format!("{source}: {e}")))?;
    Ok(curve.into())
}

/// `min((N - 2) / 2, 512)` for sampled profiles, the highest harmonic for
/// analytic ones.
pub fn default_nmax(curve: &LoadCurve) -> CliResult<u32> {
    match curve {
        LoadCurve::Sampled(s) => {
            let n = ((s.len() - 2) / 2).min(DEFAULT_NMAX_CAP as usize) as u32;
            if n == 0 {
                return Err(CliError::precondition(format!(
                    "{} samples cannot resolve any harmonic; at least 4 are needed",
                    s.len()
                )));
            }
            Ok(n)
        }
        LoadCurve::Analytic(a) => Ok(a.harmonics().iter().map(|h| h.order).max().unwrap_or(1)),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PriceFunctionFile {
    base: f64,
    cutoff: f64,
    slope: f64,
    #[serde(default)]
    log_offset: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum PlanFile {
    Flat { unit_price: f64 },
    Spot { t1: f64, t2: f64, unit_prices: Vec<f64> },
    Dynamism { alpha0: f64, alpha: PriceFunctionFile, beta: PriceFunctionFile },
}

impl PlanFile {
    fn into_plan(self) -> loadspace::Result<TariffPlan> {
        let pff = |p: PriceFunctionFile| PriceFrequencyFunction::new(p.base, p.cutoff, p.slope, p.log_offset);
        Ok(match self {
            PlanFile::Flat { unit_price } => TariffPlan::flat(unit_price)?,
            PlanFile::Spot { t1, t2, unit_prices } => TariffPlan::Spot(SpotPlan::new(Interval::new(t1, t2)?, unit_prices)?),
            PlanFile::Dynamism { alpha0, alpha, beta } => {
                TariffPlan::Dynamism(DynamismPlan::new(alpha0, pff(alpha)?, pff(beta)?)?)
            }
        })
    }
}

/// Reads a plan; `plan1` and `plan2` name the reference plans when no such
/// file exists.
pub fn load_plan(spec: &str) -> CliResult<TariffPlan> {
    let path = PathBuf::from(spec);
    if !path.exists() {
        let (p1, p2) = builtin_plans();
        match spec {
            "plan1" => return Ok(TariffPlan::Dynamism(p1)),
            "plan2" => return Ok(TariffPlan::Dynamism(p2)),
            _ => {}
        }
    }
    let mut text = String::new();
    open(&path)?
        .read_to_string(&mut text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_plan(&text, &path.display().to_string())
}

pub fn parse_plan(text: &str, source: &str) -> CliResult<TariffPlan> {
    let file: PlanFile = serde_json::from_str(text).map_err(|e| CliError::input(format!("{source}: {e}")))?;
    file.into_plan().map_err(|e| CliError::input(format!("{source}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_uniform_profile() {
        let c = parse_profile("t,power\n0,1\n0.5,2\n1,3\n".as_bytes(), "x").unwrap();
        assert_eq!(c.sample_count(), Some(3));
        assert_eq!(c.interval(), Interval::unit());
    }

    #[test]
    fn rejects_bad_rows_with_line_numbers() {
        let e = parse_profile("t,power\n0,1\n".as_bytes(), "x").unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("line 2"), "{}", e.message);

        let e = parse_profile("t,power\n0,1\n0.5,abc\n1,3\n".as_bytes(), "x").unwrap_err();
        assert!(e.message.contains("line 3"), "{}", e.message);

        let e = parse_profile("t,power\n0,1\n0.4,2\n1,3\n".as_bytes(), "x").unwrap_err();
        assert!(e.message.contains("line 4") && e.message.contains("spacing"), "{}", e.message);

        let e = parse_profile("t,power\n0,1\n0,2\n".as_bytes(), "x").unwrap_err();
        assert!(e.message.contains("increasing"), "{}", e.message);

        let e = parse_profile("time,p\n0,1\n1,2\n".as_bytes(), "x").unwrap_err();
        assert!(e.message.contains("line 1"), "{}", e.message);
    }

    #[test]
    fn default_nmax_rule() {
        let values = |n: usize| SampledCurve::new(Interval::unit(), vec![1.0; n]).unwrap().into();
        assert_eq!(default_nmax(&values(10_001)).unwrap(), 512);
        assert_eq!(default_nmax(&values(202)).unwrap(), 100);
        assert_eq!(default_nmax(&values(3)).unwrap_err().code, 3);
        let (l1, _) = builtin_loads();
        assert_eq!(default_nmax(&l1.into()).unwrap(), 100);
    }

    #[test]
    fn parses_plans() {
        let p = parse_plan(r#"{"kind":"flat","unit_price":20}"#, "x").unwrap();
        assert_eq!(p, TariffPlan::Flat { unit_price: 20.0 });

        let p = parse_plan(
            r#"{"kind":"dynamism","alpha0":20,
                "alpha":{"base":20,"cutoff":10,"slope":3},
                "beta":{"base":20,"cutoff":10,"slope":3,"log_offset":0}}"#,
            "x",
        )
        .unwrap();
        assert_eq!(p, TariffPlan::Dynamism(builtin_plans().0));

        let p = parse_plan(r#"{"kind":"spot","t1":0,"t2":1,"unit_prices":[1,2]}"#, "x").unwrap();
        assert_eq!(p.kind(), "spot");

        for bad in [
            r#"{"kind":"flat","unit_price":-1}"#,
            r#"{"kind":"flat"}"#,
            r#"{"kind":"hourly","unit_price":1}"#,
            r#"{"kind":"flat","unit_price":1,"extra":2}"#,
            r#"{"kind":"spot","t1":1,"t2":0,"unit_prices":[1]}"#,
            "not json",
        ] {
            assert_eq!(parse_plan(bad, "x").unwrap_err().code, 2, "{bad}");
        }
    }
}
