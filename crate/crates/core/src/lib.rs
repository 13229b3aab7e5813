//! Electric load curves as elements of L2[t1, t2].
//!
//! A load is decomposed on the trigonometric basis into a zero-frequency
//! (energy) coordinate and harmonic (dynamism) coordinates. On top of that
//! decomposition the crate prices loads under classic integral tariffs,
//! time-of-use spot tariffs and dynamism tariffs whose unit prices depend on
//! frequency, and fits the supply-cost characteristic from observed costs.

pub mod calibrate;
pub mod curve;
pub mod error;
pub mod scenarios;
pub mod spectrum;
pub mod tariff;

pub use calibrate::{
    calibrate, calibrate_iota, pricing_from_cost, supply_cost, Calibration, CalibrationOptions,
    CostCharacteristic, CostObservation,
};
pub use curve::{AnalyticCurve, Harmonic, Interval, LoadCurve, SampledCurve};
pub use error::{Error, Result};
pub use spectrum::{
    analyze, analyze_with, truncation_error, AnalysisOptions, Coefficients, Coord, DynamismVector,
    Spectrum,
};
pub use tariff::{
    classic_payment, dynamism_payment, incentive_direction, payment_gradient,
    price_frequency_value, spot_payment, unit_price_from_gross, Bill, CoordinatePricing,
    DynamismPlan, Gradient, LineItem, Polarity, PriceFrequencyFunction, SpotPlan, TariffPlan,
};
