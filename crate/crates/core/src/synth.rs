//! Seeded synthetic panels with injected event effects, and an independent
//! extended-precision least-squares oracle.
//!
//! # Random stream
//!
//! Generators are xoshiro256** seeded through SplitMix64 (`seed_from_u64`).
//! Uniforms in `[0, 1)` take the top 53 bits of each output; normals use the
//! Marsaglia polar method, returning the first variate of each accepted pair
//! and caching the second for the next call. Draw order per day is:
//! benchmark, then each control in declaration order, then each asset's
//! noise in declaration order.

use std::collections::HashSet;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{EventSpec, Window, DEFAULT_ESTIMATION, DEFAULT_EVENT};
use crate::inference::DesignMatrix;
use crate::series::{AlignedPanel, Column};

/// Portable seeded generator; see the module docs for the exact conventions.
#[derive(Debug, Clone)]
pub struct SynthRng {
    inner: Xoshiro256StarStar,
    spare: Option<f64>,
}

impl SynthRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: Xoshiro256StarStar::seed_from_u64(seed), spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

fn default_assets() -> Vec<String> {
    vec!["asset".to_owned()]
}
fn default_benchmark() -> String {
    "benchmark".to_owned()
}
fn default_benchmark_mean() -> f64 {
    0.0005
}
fn default_sd() -> f64 {
    0.01
}
fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2016, 1, 4).unwrap()
}
fn default_estimation() -> Window {
    DEFAULT_ESTIMATION
}
fn default_event() -> Window {
    DEFAULT_EVENT
}
fn default_flagged() -> Vec<i64> {
    (1..=5).collect()
}

/// A control series drawn as i.i.d. normal returns and optionally loaded
/// into every asset's return.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSpec {
    pub name: String,
    #[serde(default)]
    pub loading: f64,
    #[serde(default = "default_sd")]
    pub sd: f64,
}

/// Parameters of one synthetic market.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthScenario {
    pub seed: u64,
    /// Number of return rows.
    pub n_days: usize,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub noise_sd: f64,
    #[serde(default = "default_benchmark_mean")]
    pub benchmark_mean: f64,
    #[serde(default = "default_sd")]
    pub benchmark_sd: f64,
    /// Offsets receiving `injected_effect`.
    #[serde(default = "default_flagged")]
    pub flagged: Vec<i64>,
    #[serde(default)]
    pub injected_effect: f64,
    #[serde(default = "default_assets")]
    pub assets: Vec<String>,
    #[serde(default = "default_benchmark")]
    pub benchmark: String,
    #[serde(default)]
    pub controls: Vec<ControlSpec>,
    #[serde(default = "default_estimation")]
    pub estimation: Window,
    #[serde(default = "default_event")]
    pub event: Window,
    /// Return row that becomes day 0; defaults to the row that puts the last
    /// event-window day on the final row.
    #[serde(default)]
    pub event_row: Option<usize>,
    /// First calendar date of the price file (the first return is dated on
    /// the next weekday).
    #[serde(default = "default_start_date")]
    pub start_date: NaiveDate,
}

impl SynthScenario {
    /// Minimal single-asset scenario with default windows.
    pub fn new(seed: u64, n_days: usize, alpha: f64, beta: f64) -> Self {
        Self {
            seed,
            n_days,
            alpha,
            beta,
            noise_sd: 0.0,
            benchmark_mean: default_benchmark_mean(),
            benchmark_sd: default_sd(),
            flagged: default_flagged(),
            injected_effect: 0.0,
            assets: default_assets(),
            benchmark: default_benchmark(),
            controls: Vec::new(),
            estimation: DEFAULT_ESTIMATION,
            event: DEFAULT_EVENT,
            event_row: None,
            start_date: default_start_date(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    fn zero_row(&self) -> Result<usize> {
        let rows_before = (-self.estimation.start).max(0) as usize;
        let rows_after = self.event.end.max(0) as usize;
        let needed = rows_before + rows_after + 1;
        if self.n_days < needed {
            return Err(Error::InvalidWindow(format!(
                "n_days = {} is too small, windows need at least {needed}",
                self.n_days
            )));
        }
        let row = self.event_row.unwrap_or(self.n_days - 1 - rows_after);
        if row < rows_before || row + rows_after >= self.n_days {
            return Err(Error::InvalidWindow(format!("event_row {row} leaves the windows outside the panel")));
        }
        Ok(row)
    }

    /// Checks parameters; returns the row of day 0.
    pub fn validate(&self) -> Result<usize> {
        EventSpec::new(self.start_date, self.estimation, self.event)?;
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::Config(format!("noise_sd must be finite and >= 0, got {}", self.noise_sd)));
        }
        if !(self.benchmark_sd > 0.0 && self.benchmark_sd.is_finite()) {
            return Err(Error::Config(format!("benchmark_sd must be > 0, got {}", self.benchmark_sd)));
        }
        if let Some(bad) = self.flagged.iter().find(|o| !self.event.contains(**o)) {
            return Err(Error::InvalidWindow(format!("flagged offset {bad:+} outside event window {}", self.event)));
        }
        if self.assets.is_empty() {
            return Err(Error::Config("scenario needs at least one asset".into()));
        }
        let mut names = HashSet::new();
        let all = std::iter::once(&self.benchmark)
            .chain(&self.assets)
            .chain(self.controls.iter().map(|c| &c.name));
        for name in all {
            if name == "date" || !names.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        self.zero_row()
    }
}

/// Next `n` weekdays strictly after `after`.
pub fn weekdays_after(after: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut day = after;
    while out.len() < n {
        day = day + Days::new(1);
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day);
        }
    }
    out
}

/// Generated returns panel plus the event it was built around.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthPanel {
    /// Log returns: the benchmark column, asset columns, then control columns.
    pub returns: AlignedPanel,
    pub spec: EventSpec,
    /// Calendar date preceding the first return, where price files start.
    pub base_date: NaiveDate,
}

impl SynthPanel {
    /// Price levels starting at 100 on `base_date`, compounding the returns.
    pub fn prices(&self) -> AlignedPanel {
        let mut dates = vec![self.base_date];
        dates.extend_from_slice(self.returns.dates());
        let columns = self
            .returns
            .columns()
            .iter()
            .map(|c| {
                let mut level = 100.0f64;
                let mut values = vec![level];
                let mut log_level = level.ln();
                for r in &c.values {
                    log_level += r;
                    level = log_level.exp();
                    values.push(level);
                }
                Column { name: c.name.clone(), values }
            })
            .collect();
        AlignedPanel::new(dates, columns).expect("price panel mirrors a valid returns panel")
    }
}

/// Draws a returns panel for `scenario`. Same scenario, same bits.
pub fn generate_panel(scenario: &SynthScenario) -> Result<SynthPanel> {
    let zero_row = scenario.validate()?;
    let n = scenario.n_days;
    let dates = weekdays_after(scenario.start_date, n);
    let mut rng = SynthRng::new(scenario.seed);

    let mut bench = Vec::with_capacity(n);
    let mut controls: Vec<Vec<f64>> = vec![Vec::with_capacity(n); scenario.controls.len()];
    let mut assets: Vec<Vec<f64>> = vec![Vec::with_capacity(n); scenario.assets.len()];
    for row in 0..n {
        let m = scenario.benchmark_mean + scenario.benchmark_sd * rng.normal();
        bench.push(m);
        let mut loaded = 0.0;
        for (spec, col) in scenario.controls.iter().zip(controls.iter_mut()) {
            let c = spec.sd * rng.normal();
            col.push(c);
            loaded += spec.loading * c;
        }
        let offset = row as i64 - zero_row as i64;
        let effect = if scenario.flagged.contains(&offset) { scenario.injected_effect } else { 0.0 };
        for col in assets.iter_mut() {
            let noise = scenario.noise_sd * rng.normal();
            col.push(scenario.alpha + scenario.beta * m + loaded + noise + effect);
        }
    }
    if bench.iter().all(|v| *v == bench[0]) {
        return Err(Error::ZeroVarianceBenchmark);
    }

    let mut columns = vec![Column { name: scenario.benchmark.clone(), values: bench }];
    columns.extend(scenario.assets.iter().zip(assets).map(|(name, values)| Column { name: name.clone(), values }));
    columns.extend(
        scenario.controls.iter().zip(controls).map(|(c, values)| Column { name: c.name.clone(), values }),
    );
    let event_date = dates[zero_row];
    Ok(SynthPanel {
        returns: AlignedPanel::new(dates, columns)?,
        spec: EventSpec::new(event_date, scenario.estimation, scenario.event)?,
        base_date: scenario.start_date,
    })
}

/// Double-double number: unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let e = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: e }
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let s = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Self::two_prod(self.hi, o.hi);
        let lo = p.lo + (self.hi * o.lo + self.lo * o.hi);
        Self::quick_two_sum(p.hi, lo)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.hi / o.hi;
        Self::quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    fn abs(self) -> f64 {
        self.hi.abs()
    }
}

/// Reference least-squares solver: normal equations accumulated in
/// double-double arithmetic, solved by Gaussian elimination with full
/// pivoting in the same precision.
///
/// Deliberately shares nothing with [`crate::inference::ols_fit`], which
/// uses Householder QR in plain `f64`.
pub fn oracle_ols(x: &DesignMatrix, y: &[f64]) -> Result<Vec<f64>> {
    let (n, k) = (x.n(), x.k());
    if y.len() != n {
        return Err(Error::LengthMismatch { left: n, right: y.len() });
    }
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }
    let cols = x.columns();
    let mut a = vec![vec![Dd::ZERO; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = (0..n).fold(Dd::ZERO, |acc, r| acc.add(Dd::two_prod(cols[i][r], cols[j][r])));
        }
        a[i][k] = (0..n).fold(Dd::ZERO, |acc, r| acc.add(Dd::two_prod(cols[i][r], y[r])));
    }

    // perm[c] = original variable index now stored in column c.
    let mut perm: Vec<usize> = (0..k).collect();
    for p in 0..k {
        let (mut br, mut bc, mut best) = (p, p, -1.0);
        for (r, row) in a.iter().enumerate().skip(p) {
            for (c, v) in row.iter().enumerate().take(k).skip(p) {
                if v.abs() > best {
                    (br, bc, best) = (r, c, v.abs());
                }
            }
        }
        if best == 0.0 {
            return Err(Error::Singular);
        }
        a.swap(p, br);
        if bc != p {
            for row in a.iter_mut() {
                row.swap(p, bc);
            }
            perm.swap(p, bc);
        }
        let pivot = a[p][p];
        for r in p + 1..k {
            let f = a[r][p].div(pivot);
            for c in p..=k {
                let delta = f.mul(a[p][c]);
                a[r][c] = a[r][c].sub(delta);
            }
        }
    }

    let mut sol = vec![Dd::ZERO; k];
    for p in (0..k).rev() {
        let mut s = a[p][k];
        for c in p + 1..k {
            s = s.sub(a[p][c].mul(sol[c]));
        }
        sol[p] = s.div(a[p][p]);
    }
    let mut out = vec![0.0; k];
    for (c, v) in sol.iter().enumerate() {
        out[perm[c]] = v.hi + v.lo;
    }
    Ok(out)
}
