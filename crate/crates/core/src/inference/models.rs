//! Event-dummy, conditional and sentiment regressions built on [`ols_fit`].

use std::collections::BTreeSet;

use super::ols::{ols_fit, DesignMatrix, RegressionResult};
use crate::error::{Error, Result};
use crate::frame::{EventSpec, FramedPanel, Window};
use crate::market_model::{abnormal_returns, fit_market_model, CarSeries, MarketModelFit};

/// Row label of the event indicator.
pub const EVENT: &str = "Event";

/// Offsets `start..=end` as a flagged set.
pub fn flag_range(start: i64, end: i64) -> BTreeSet<i64> {
    (start..=end).collect()
}

/// Everything produced by an event-dummy regression.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRegression {
    pub fit: MarketModelFit,
    /// Offsets of the regression sample: estimation window then event window.
    pub offsets: Vec<i64>,
    /// Abnormal returns over `offsets`.
    pub abnormal: Vec<f64>,
    /// Abnormal returns over the event window with running sums.
    pub car: CarSeries,
    pub flagged: BTreeSet<i64>,
    pub regression: RegressionResult,
}

impl EventRegression {
    /// Event coefficient times the number of flagged days: the CAR over the
    /// flagged days implied by the mean daily effect.
    pub fn implied_car(&self) -> f64 {
        self.regression.coefficient(EVENT).unwrap_or(0.0) * self.flagged.len() as f64
    }

    /// Sum of realised abnormal returns on the flagged days.
    pub fn flagged_car(&self) -> f64 {
        self.flagged.iter().filter_map(|o| self.car.ar_at(*o)).sum()
    }
}

struct EventSample {
    fit: MarketModelFit,
    offsets: Vec<i64>,
    abnormal: Vec<f64>,
    car: CarSeries,
    dummy: Vec<f64>,
}

fn event_sample(
    framed: &FramedPanel,
    asset: &str,
    benchmark: &str,
    spec: &EventSpec,
    flagged: &BTreeSet<i64>,
) -> Result<EventSample> {
    let event = spec.event();
    if flagged.is_empty() {
        return Err(Error::DegenerateDummy("no flagged offsets, the dummy has zero variance".into()));
    }
    if let Some(bad) = flagged.iter().find(|o| !event.contains(**o)) {
        return Err(Error::InvalidWindow(format!("flagged offset {bad:+} lies outside event window {event}")));
    }

    let est = spec.estimation();
    let est_asset = framed.column_window(asset, est.start, est.end)?;
    let est_bench = framed.column_window(benchmark, est.start, est.end)?;
    let mut fit = fit_market_model(est_asset, est_bench)?;
    fit.estimation_window = Some(est);

    let evt_asset = framed.column_window(asset, event.start, event.end)?;
    let evt_bench = framed.column_window(benchmark, event.start, event.end)?;

    let mut abnormal = abnormal_returns(&fit, est_asset, est_bench)?;
    let event_ars = abnormal_returns(&fit, evt_asset, evt_bench)?;
    abnormal.extend_from_slice(&event_ars);

    let offsets: Vec<i64> = est.offsets().chain(event.offsets()).collect();
    let dummy = offsets.iter().map(|o| if flagged.contains(o) { 1.0 } else { 0.0 }).collect();
    Ok(EventSample { fit, offsets, abnormal, car: CarSeries::new(event, event_ars)?, dummy })
}

fn sample_columns(framed: &FramedPanel, spec: &EventSpec, name: &str) -> Result<Vec<f64>> {
    let est: Window = spec.estimation();
    let event = spec.event();
    let mut out = framed.column_window(name, est.start, est.end)?.to_vec();
    out.extend_from_slice(framed.column_window(name, event.start, event.end)?);
    Ok(out)
}

/// Abnormal returns over the estimation and event windows (from a market
/// model fitted on the estimation window) regressed on a constant and an
/// indicator equal to 1 on `flagged` offsets.
pub fn event_dummy_regression(
    framed: &FramedPanel,
    asset: &str,
    benchmark: &str,
    spec: &EventSpec,
    flagged: &BTreeSet<i64>,
) -> Result<EventRegression> {
    conditional_event_regression::<&str>(framed, asset, benchmark, spec, flagged, &[])
}

/// [`event_dummy_regression`] with additional control regressors taken from
/// columns of `framed`, in the order given.
pub fn conditional_event_regression<S: AsRef<str>>(
    framed: &FramedPanel,
    asset: &str,
    benchmark: &str,
    spec: &EventSpec,
    flagged: &BTreeSet<i64>,
    controls: &[S],
) -> Result<EventRegression> {
    let controls: Vec<&str> = controls.iter().map(AsRef::as_ref).collect();
    for c in &controls {
        framed.panel().column(c)?;
    }
    let sample = event_sample(framed, asset, benchmark, spec, flagged)?;
    let n = sample.abnormal.len();
    let mut regressors = vec![(EVENT.to_owned(), sample.dummy)];
    for c in controls {
        regressors.push((c.to_owned(), sample_columns(framed, spec, c)?));
    }
    if regressors[0].1.iter().all(|d| *d == 1.0) {
        return Err(Error::DegenerateDummy("every sample day is flagged".into()));
    }
    let design = DesignMatrix::with_intercept(n, regressors)?;
    let regression = ols_fit(&design, &sample.abnormal)?;
    Ok(EventRegression {
        fit: sample.fit,
        offsets: sample.offsets,
        abnormal: sample.abnormal,
        car: sample.car,
        flagged: flagged.clone(),
        regression,
    })
}

/// Stock returns regressed on a constant, one sentiment series and optional
/// controls. All vectors must already share the same dates.
pub fn sentiment_regression(
    stock_returns: &[f64],
    sentiment: (&str, &[f64]),
    controls: &[(&str, &[f64])],
) -> Result<RegressionResult> {
    let n = stock_returns.len();
    let mut regressors = vec![(sentiment.0.to_owned(), sentiment.1.to_vec())];
    for (name, values) in controls {
        regressors.push(((*name).to_owned(), values.to_vec()));
    }
    let design = DesignMatrix::with_intercept(n, regressors)?;
    ols_fit(&design, stock_returns)
}
