//! Supply-cost characteristic `ι` and its least-squares calibration.
//!
//! Supply cost is modelled as linear in the dynamism coordinates,
//! `γ = Σ ι_k μ_k`. Given observed costs for several loads on the same
//! interval, `ι` is the least-squares solution of the linear system whose
//! rows are the loads' `μ` vectors.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::curve::{Interval, LoadCurve};
use crate::error::{Error, Result};
use crate::spectrum::{analyze, Coord, DynamismVector};
use crate::tariff::CoordinatePricing;

/// Number of dynamism coordinates up to order `n_max`.
pub fn coordinate_count(n_max: u32) -> usize {
    1 + 2 * n_max as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostCharacteristic {
    interval: Interval,
    n_max: u32,
    /// Dense, indexed by [`Coord::index`].
    iota: Vec<f64>,
}

impl CostCharacteristic {
    pub fn new(interval: Interval, n_max: u32, iota: Vec<f64>) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::ZeroNmax);
        }
        let expected = coordinate_count(n_max);
        if iota.len() != expected {
            return Err(Error::IndexingMismatch {
                expected,
                got: iota.len(),
            });
        }
        if let Some(i) = iota.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            interval,
            n_max,
            iota,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn iota(&self) -> &[f64] {
        &self.iota
    }

    pub fn get(&self, coord: Coord) -> f64 {
        self.iota.get(coord.index()).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Coord, f64)> + '_ {
        self.iota
            .iter()
            .enumerate()
            .map(|(k, v)| (Coord::from_index(k), *v))
    }
}

/// `γ = Σ ι_k μ_k` over the characteristic's support.
pub fn supply_cost(cc: &CostCharacteristic, mu: &DynamismVector) -> Result<f64> {
    cc.interval.check_same(&mu.interval())?;
    Ok(mu
        .entries()
        .iter()
        .filter_map(|(c, v)| cc.iota.get(c.index()).map(|i| i * v))
        .sum())
}

#[derive(Debug, Clone)]
pub struct CostObservation {
    pub load: LoadCurve,
    pub observed_cost: f64,
}

impl CostObservation {
    pub fn new(load: LoadCurve, observed_cost: f64) -> Self {
        Self {
            load,
            observed_cost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    /// Tikhonov weight; 0 is plain least squares.
    pub ridge: f64,
    /// Pivots of the column-pivoted triangular factor at most
    /// `rank_tolerance · max pivot` count as zero.
    pub rank_tolerance: f64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            ridge: 0.0,
            rank_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub characteristic: CostCharacteristic,
    /// `observed - predicted` per observation.
    pub residuals: Vec<f64>,
    /// Numerical rank of the design matrix.
    pub rank: usize,
}

impl Calibration {
    pub fn rms_residual(&self) -> f64 {
        if self.residuals.is_empty() {
            return 0.0;
        }
        (self.residuals.iter().map(|r| r * r).sum::<f64>() / self.residuals.len() as f64).sqrt()
    }
}

/// Rows of `μ` coordinates for each observed load.
pub fn design_matrix(observations: &[CostObservation], n_max: u32) -> Result<DMatrix<f64>> {
    let k = coordinate_count(n_max);
    let mut x = DMatrix::<f64>::zeros(observations.len(), k);
    let interval = observations.first().map(|o| o.load.interval());
    for (row, obs) in observations.iter().enumerate() {
        if Some(obs.load.interval()) != interval {
            return Err(Error::IncompatibleIntervals);
        }
        let mu = analyze(&obs.load, n_max)?.to_mu_vector().dense(k);
        for (col, v) in mu.into_iter().enumerate() {
            x[(row, col)] = v;
        }
    }
    Ok(x)
}

pub fn calibrate_iota(observations: &[CostObservation], n_max: u32) -> Result<CostCharacteristic> {
    Ok(calibrate(observations, n_max, &CalibrationOptions::default())?.characteristic)
}

pub fn calibrate(
    observations: &[CostObservation],
    n_max: u32,
    opts: &CalibrationOptions,
) -> Result<Calibration> {
    if n_max == 0 {
        return Err(Error::ZeroNmax);
    }
    if !(opts.ridge >= 0.0 && opts.ridge.is_finite()) {
        return Err(Error::InvalidParameter(format!("ridge must be >= 0, got {}", opts.ridge)));
    }
    let unknowns = coordinate_count(n_max);
    let m = observations.len();
    if m < unknowns && opts.ridge == 0.0 {
        return Err(Error::Underdetermined {
            observations: m,
            unknowns,
        });
    }
    if m == 0 {
        return Err(Error::Underdetermined {
            observations: 0,
            unknowns,
        });
    }
    if let Some(i) = observations.iter().position(|o| !o.observed_cost.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let interval = observations[0].load.interval();
    let x = design_matrix(observations, n_max)?;
    let y = DVector::from_iterator(m, observations.iter().map(|o| o.observed_cost));

    let (a, b) = if opts.ridge > 0.0 {
        let mut a = DMatrix::<f64>::zeros(m + unknowns, unknowns);
        a.rows_mut(0, m).copy_from(&x);
        let weight = opts.ridge.sqrt();
        for k in 0..unknowns {
            a[(m + k, k)] = weight;
        }
        let mut b = DVector::<f64>::zeros(m + unknowns);
        b.rows_mut(0, m).copy_from(&y);
        (a, b)
    } else {
        (x.clone(), y.clone())
    };

    let qr = a.col_piv_qr();
    let r = qr.r();
    let diag_max = r.diagonal().amax();
    let cut = opts.rank_tolerance * diag_max;
    let rank = if diag_max > 0.0 {
        r.diagonal().iter().filter(|d| d.abs() > cut).count()
    } else {
        0
    };
    if rank < unknowns {
        return Err(Error::DegenerateObservations { rank, unknowns });
    }
    let qtb = qr.q().transpose() * &b;
    let mut solution = r
        .solve_upper_triangular(&qtb)
        .ok_or(Error::DegenerateObservations { rank, unknowns })?;
    qr.p().inv_permute_rows(&mut solution);

    let residuals = (&y - &x * &solution).iter().copied().collect();
    Ok(Calibration {
        characteristic: CostCharacteristic::new(interval, n_max, solution.iter().copied().collect())?,
        residuals,
        rank,
    })
}

/// Pricing with `∇_μ ρ = a·ι`: rates `λ_k = a·ι_k` on the same coordinates.
pub fn pricing_from_cost(cc: &CostCharacteristic, a: f64) -> Result<CoordinatePricing> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::NonPositiveScale(a));
    }
    CoordinatePricing::new(cc.interval, cc.entries().map(|(c, i)| (c, a * i)).collect())
}
