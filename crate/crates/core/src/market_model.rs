//! Single-index market model, abnormal returns and cumulative abnormal returns.

use crate::error::{Error, Result};
use crate::frame::Window;

/// Least-squares fit of asset returns on benchmark returns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketModelFit {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// SSR / (n - 2).
    pub residual_variance: f64,
    pub n_obs: usize,
    /// Offsets the fit was estimated on, when known.
    pub estimation_window: Option<Window>,
}

impl MarketModelFit {
    pub fn predict(&self, benchmark: f64) -> f64 {
        self.alpha_hat + self.beta_hat * benchmark
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// OLS of `asset_returns` on `(1, benchmark_returns)`.
///
/// Uses centred cross-products, so the result is deterministic for a given
/// input and exact on noiseless affine data up to rounding.
pub fn fit_market_model(asset_returns: &[f64], benchmark_returns: &[f64]) -> Result<MarketModelFit> {
    let n = asset_returns.len();
    if n != benchmark_returns.len() {
        return Err(Error::LengthMismatch { left: n, right: benchmark_returns.len() });
    }
    if n < 3 {
        return Err(Error::TooFewObservations { n, k: 2 });
    }
    if benchmark_returns.iter().all(|v| *v == benchmark_returns[0]) {
        return Err(Error::ZeroVarianceBenchmark);
    }
    let mx = mean(benchmark_returns);
    let my = mean(asset_returns);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in benchmark_returns.iter().zip(asset_returns) {
        let dx = x - mx;
        sxx += dx * dx;
        sxy += dx * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVarianceBenchmark);
    }
    let beta_hat = sxy / sxx;
    let alpha_hat = my - beta_hat * mx;
    let ssr: f64 = benchmark_returns
        .iter()
        .zip(asset_returns)
        .map(|(x, y)| {
            let e = y - alpha_hat - beta_hat * x;
            e * e
        })
        .sum();
    Ok(MarketModelFit {
        alpha_hat,
        beta_hat,
        residual_variance: ssr / (n - 2) as f64,
        n_obs: n,
        estimation_window: None,
    })
}

/// `R_t - alpha_hat - beta_hat * R_M,t`, elementwise.
pub fn abnormal_returns(fit: &MarketModelFit, asset_returns: &[f64], benchmark_returns: &[f64]) -> Result<Vec<f64>> {
    if asset_returns.len() != benchmark_returns.len() {
        return Err(Error::LengthMismatch { left: asset_returns.len(), right: benchmark_returns.len() });
    }
    Ok(asset_returns
        .iter()
        .zip(benchmark_returns)
        .map(|(r, m)| r - fit.alpha_hat - fit.beta_hat * m)
        .collect())
}

/// Sum of `ars[a..=b]` where `ars[0]` sits at offset `window.start`.
pub fn cumulative_abnormal_return(ars: &[f64], window: Window, a: i64, b: i64) -> Result<f64> {
    if ars.len() != window.len() {
        return Err(Error::LengthMismatch { left: ars.len(), right: window.len() });
    }
    if a > b || !window.contains(a) || !window.contains(b) {
        return Err(Error::OffsetOutOfWindow { start: a, end: b, lo: window.start, hi: window.end });
    }
    let lo = (a - window.start) as usize;
    let hi = (b - window.start) as usize;
    Ok(ars[lo..=hi].iter().sum())
}

/// Abnormal returns over an event window with their running sums.
#[derive(Debug, Clone, PartialEq)]
pub struct CarSeries {
    window: Window,
    abnormal: Vec<f64>,
    cumulative: Vec<f64>,
}

impl CarSeries {
    pub fn new(window: Window, abnormal: Vec<f64>) -> Result<Self> {
        if abnormal.len() != window.len() {
            return Err(Error::LengthMismatch { left: abnormal.len(), right: window.len() });
        }
        let cumulative = abnormal
            .iter()
            .scan(0.0, |acc, ar| {
                *acc += ar;
                Some(*acc)
            })
            .collect();
        Ok(Self { window, abnormal, cumulative })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn abnormal(&self) -> &[f64] {
        &self.abnormal
    }

    /// Running CAR from the window start through each offset.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn ar_at(&self, offset: i64) -> Option<f64> {
        self.window.contains(offset).then(|| self.abnormal[(offset - self.window.start) as usize])
    }

    pub fn car(&self, a: i64, b: i64) -> Result<f64> {
        cumulative_abnormal_return(&self.abnormal, self.window, a, b)
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}
