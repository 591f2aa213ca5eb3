//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the solver or special-function paths it checks.
#![allow(dead_code)]

use chrono::{Datelike, Days, NaiveDate, Weekday};
use eventstudy::inference::DesignMatrix;
use eventstudy::synth::SynthRng;

pub fn weekdays(n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut day = NaiveDate::from_ymd_opt(2016, 1, 4).unwrap();
    while out.len() < n {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day);
        }
        day = day + Days::new(1);
    }
    out
}

/// Composite Simpson rule with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// ln Gamma(x) for x a positive multiple of 1/2, by the recurrence from
/// Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).
pub fn ln_gamma_half_int(x: f64) -> f64 {
    let twice = (2.0 * x).round() as u64;
    assert!(twice >= 1 && (2.0 * x - twice as f64).abs() < 1e-12);
    let (mut acc, mut z) = if twice.is_multiple_of(2) { (0.0, 1.0) } else { (0.5 * std::f64::consts::PI.ln(), 0.5) };
    while z < x - 1e-9 {
        acc += z.ln();
        z += 1.0;
    }
    acc
}

/// Two-sided Student-t tail by integrating the density over [0, |t|].
pub fn t_two_sided_by_quadrature(t: f64, dof: u64) -> f64 {
    let v = dof as f64;
    let ln_c = ln_gamma_half_int((v + 1.0) / 2.0) - ln_gamma_half_int(v / 2.0) - 0.5 * (v * std::f64::consts::PI).ln();
    let density = |x: f64| (ln_c - (v + 1.0) / 2.0 * (x * x / v).ln_1p()).exp();
    1.0 - 2.0 * simpson(density, 0.0, t.abs(), 20_000)
}

/// Two-sided standard-normal tail by integrating the density over [0, |z|].
pub fn normal_two_sided_by_quadrature(z: f64) -> f64 {
    let density = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    1.0 - 2.0 * simpson(density, 0.0, z.abs(), 20_000)
}

/// Dense inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let k = a.len();
    let mut inv: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for p in 0..k {
        let best = (p..k).max_by(|x, y| a[*x][p].abs().total_cmp(&a[*y][p].abs())).unwrap();
        a.swap(p, best);
        inv.swap(p, best);
        let d = a[p][p];
        for j in 0..k {
            a[p][j] /= d;
            inv[p][j] /= d;
        }
        for r in 0..k {
            if r != p {
                let f = a[r][p];
                for j in 0..k {
                    a[r][j] -= f * a[p][j];
                    inv[r][j] -= f * inv[p][j];
                }
            }
        }
    }
    inv
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..p).map(|j| (0..m).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

/// HC1 standard errors by literal matrix products on the row-major design.
pub fn brute_force_hc1(rows: &[Vec<f64>], e: &[f64]) -> Vec<f64> {
    let (n, k) = (rows.len(), rows[0].len());
    let xt: Vec<Vec<f64>> = (0..k).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let bread = invert(matmul(&xt, rows));
    let weighted: Vec<Vec<f64>> = rows.iter().zip(e).map(|(r, ei)| r.iter().map(|v| v * ei * ei).collect()).collect();
    let meat = matmul(&xt, &weighted);
    let cov = matmul(&matmul(&bread, &meat), &bread);
    let c = n as f64 / (n - k) as f64;
    (0..k).map(|j| (c * cov[j][j]).sqrt()).collect()
}

pub fn rows_of(x: &DesignMatrix) -> Vec<Vec<f64>> {
    (0..x.n()).map(|i| (0..x.k()).map(|j| x.get(i, j)).collect()).collect()
}

/// Random regression instance: intercept plus `k - 1` normal regressors,
/// coefficients bounded away from zero, small noise.
pub fn random_instance(seed: u64, n: usize, k: usize) -> (DesignMatrix, Vec<f64>, Vec<f64>) {
    let mut rng = SynthRng::new(seed);
    let mut regressors = Vec::new();
    for j in 1..k {
        let shift = rng.normal();
        let scale = 0.5 + 2.0 * rng.uniform();
        regressors.push((format!("x{j}"), (0..n).map(|_| shift + scale * rng.normal()).collect::<Vec<f64>>()));
    }
    let truth: Vec<f64> = (0..k)
        .map(|_| {
            let mag = 0.5 + 1.5 * rng.uniform();
            if rng.uniform() < 0.5 { -mag } else { mag }
        })
        .collect();
    let x = DesignMatrix::with_intercept(n, regressors).unwrap();
    let mut y = x.mul_vec(&truth);
    for v in y.iter_mut() {
        *v += 0.1 * rng.normal();
    }
    (x, y, truth)
}

pub const ASSETS: [&str; 5] = ["Brazil", "Russia", "India", "China", "South Africa"];
pub const CONTROLS: [&str; 4] = ["WTI", "GOLD", "Silver", "Bitcoin"];
pub const SENTIMENT: [&str; 3] = ["Google Trends", "Twitter", "polls"];

/// The fixed five-asset market behind the golden files.
pub fn golden_scenario() -> eventstudy::synth::SynthScenario {
    use eventstudy::synth::{ControlSpec, SynthScenario};
    let mut s = SynthScenario::new(2016, 240, 0.0004, 1.1);
    s.noise_sd = 0.012;
    s.injected_effect = -0.015;
    s.benchmark = "MSCI World".into();
    s.assets = ASSETS.iter().map(|a| a.to_string()).collect();
    s.controls = CONTROLS
        .iter()
        .zip([0.15, 0.05, -0.04, 0.02])
        .zip([0.02, 0.009, 0.015, 0.04])
        .map(|((name, loading), sd)| ControlSpec { name: name.to_string(), loading, sd })
        .collect();
    s
}

/// Writes a synthetic bundle into `dir` and returns the path of its study config.
pub fn write_bundle(dir: &std::path::Path, scenario: &eventstudy::synth::SynthScenario) -> std::path::PathBuf {
    eventstudy::study::run_synth(scenario, dir).unwrap();
    dir.join("study.toml")
}

/// Adds `sentiment.csv` (three positive level series over the bundle's
/// dates) and a `sentiment.toml` config using it; returns the config path.
pub fn write_sentiment_study(dir: &std::path::Path, seed: u64) -> std::path::PathBuf {
    use eventstudy::series::{parse_csv_series, AlignedPanel, Column};
    use eventstudy::study::{SeriesSource, StudyConfig, Transform};

    let study = dir.join("study.toml");
    let mut cfg = StudyConfig::load(&study).unwrap();
    let prices = std::fs::read_to_string(dir.join("prices.csv")).unwrap();
    let dates = parse_csv_series(&prices, ASSETS[0]).unwrap().series.dates().to_vec();
    let mut rng = SynthRng::new(seed);
    let columns = SENTIMENT
        .iter()
        .map(|name| {
            let mut log_level = 3.0;
            let values = dates
                .iter()
                .map(|_| {
                    log_level += 0.05 * rng.normal();
                    log_level.exp()
                })
                .collect();
            Column { name: name.to_string(), values }
        })
        .collect();
    std::fs::write(dir.join("sentiment.csv"), AlignedPanel::new(dates, columns).unwrap().to_csv()).unwrap();
    for name in SENTIMENT {
        cfg.series.push(SeriesSource {
            name: name.into(),
            file: "sentiment.csv".into(),
            column: None,
            transform: Transform::LogLevels,
        });
    }
    cfg.sentiment = SENTIMENT.iter().map(|s| s.to_string()).collect();
    let path = dir.join("sentiment.toml");
    std::fs::write(&path, cfg.to_toml()).unwrap();
    path
}

/// Every regular file under `dir`, with contents, sorted by name.
pub fn snapshot(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.map(|e| e.unwrap())
                .filter(|e| e.file_type().unwrap().is_file())
                .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
                .collect()
        })
        .unwrap_or_default();
    out.sort();
    out
}

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Event-study tables of the golden scenario in every format, as
/// `(file name, contents)`.
pub fn golden_tables() -> Vec<(String, String)> {
    use eventstudy::reporting::{render_table, Format};
    use eventstudy::study::{run_event_study, StudyConfig};

    let dir = tempfile::tempdir().unwrap();
    let cfg = StudyConfig::load(&write_bundle(dir.path(), &golden_scenario())).unwrap();
    let tables = run_event_study(&cfg).unwrap();
    let mut out = Vec::new();
    for format in [Format::Markdown, Format::Csv, Format::Structured] {
        for t in &tables {
            out.push((format!("{}.{}", t.stem, format.extension()), render_table(&t.table, format).unwrap()));
        }
    }
    out
}

/// Compares against the frozen files; with `EVENTSTUDY_BLESS` set, writes
/// them instead. Returns the names that differ.
pub fn check_goldens(files: &[(String, String)]) -> Vec<String> {
    let dir = golden_dir();
    if std::env::var_os("EVENTSTUDY_BLESS").is_some() {
        std::fs::create_dir_all(&dir).unwrap();
        for (name, text) in files {
            std::fs::write(dir.join(name), text).unwrap();
        }
    }
    files
        .iter()
        .filter(|(name, text)| std::fs::read_to_string(dir.join(name)).ok().as_deref() != Some(text.as_str()))
        .map(|(name, _)| name.clone())
        .collect()
}
