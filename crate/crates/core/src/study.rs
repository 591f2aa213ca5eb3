//! Study configuration and the end-to-end runners behind the command line.
//!
//! A study is a TOML file. Paths inside it are relative to the file's
//! directory. Every referenced file is read and every referenced column is
//! checked before any computation starts, and outputs are written only once
//! every table has rendered.
//!
//! ```toml
//! event_date = "2016-11-08"
//! benchmark = "benchmark"
//! assets = ["Brazil", "Russia"]
//! controls = ["WTI", "GOLD", "Silver", "Bitcoin"]
//! sentiment = ["Google Trends"]
//! format = "markdown"
//! out = "tables"
//!
//! [windows]
//! est_start = -115
//! est_end = -6
//! evt_start = -5
//! evt_end = 5
//!
//! [[series]]
//! name = "Brazil"
//! file = "prices.csv"
//! transform = "log_returns"
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{frame, EventSpec, Window, DEFAULT_ESTIMATION, DEFAULT_EVENT};
use crate::inference::{conditional_event_regression, event_dummy_regression, sentiment_regression, RegressionResult};
use crate::reporting::{render_table, Format, ResultTable};
use crate::series::{align, csv_header, parse_csv_series, DatedSeries};
use crate::synth::{generate_panel, SynthScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    #[default]
    LogReturns,
    LogLevels,
    None,
}

impl Transform {
    pub fn apply(&self, s: &DatedSeries) -> Result<DatedSeries> {
        match self {
            Transform::LogReturns => s.log_returns(),
            Transform::LogLevels => s.log_levels(),
            Transform::None => Ok(s.clone()),
        }
    }
}

/// One input series: a column of a CSV file plus its transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSource {
    /// Name used everywhere else in the config and as the table label.
    pub name: String,
    pub file: PathBuf,
    /// Column inside `file`; defaults to `name`.
    #[serde(default)]
    pub column: Option<String>,
    #[serde(default)]
    pub transform: Transform,
}

impl SeriesSource {
    pub fn column(&self) -> &str {
        self.column.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowOffsets {
    pub est_start: i64,
    pub est_end: i64,
    pub evt_start: i64,
    pub evt_end: i64,
}

impl Default for WindowOffsets {
    fn default() -> Self {
        Self {
            est_start: DEFAULT_ESTIMATION.start,
            est_end: DEFAULT_ESTIMATION.end,
            evt_start: DEFAULT_EVENT.start,
            evt_end: DEFAULT_EVENT.end,
        }
    }
}

/// A flagged sub-study: the event dummy is 1 on offsets `start..=end`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlaggedSet {
    pub label: String,
    pub start: i64,
    pub end: i64,
}

impl FlaggedSet {
    pub fn offsets(&self) -> BTreeSet<i64> {
        (self.start..=self.end).collect()
    }
}

/// The two default sub-studies: the event day and the five days after it.
pub fn default_flagged() -> Vec<FlaggedSet> {
    vec![
        FlaggedSet { label: "Event day [0 ; 0]".into(), start: 0, end: 0 },
        FlaggedSet { label: "Event window [+1; +5]".into(), start: 1, end: 5 },
    ]
}

fn default_benchmark() -> String {
    "benchmark".into()
}

fn default_format() -> String {
    "markdown".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default)]
    pub event_date: Option<NaiveDate>,
    #[serde(default = "default_benchmark")]
    pub benchmark: String,
    #[serde(default)]
    pub assets: Vec<String>,
    #[serde(default)]
    pub controls: Vec<String>,
    #[serde(default)]
    pub sentiment: Vec<String>,
    #[serde(default)]
    pub windows: WindowOffsets,
    #[serde(default = "default_flagged")]
    pub flagged: Vec<FlaggedSet>,
    #[serde(default)]
    pub snap_forward: bool,
    #[serde(default)]
    pub sample_start: Option<NaiveDate>,
    #[serde(default)]
    pub sample_end: Option<NaiveDate>,
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub series: Vec<SeriesSource>,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl StudyConfig {
    pub fn from_toml(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: StudyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, base)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn format(&self) -> Result<Format> {
        self.format.parse()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.base_dir.join(self.out.clone().unwrap_or_else(|| PathBuf::from("out")))
    }

    pub fn event_spec(&self) -> Result<EventSpec> {
        let date = self.event_date.ok_or_else(|| Error::Config("event_date is required".into()))?;
        let w = self.windows;
        EventSpec::new(date, Window::new(w.est_start, w.est_end), Window::new(w.evt_start, w.evt_end))
            .map_err(|e| Error::Config(e.to_string()))
    }

    fn source(&self, name: &str) -> Result<&SeriesSource> {
        self.series
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Config(format!("no [[series]] entry named '{name}'")))
    }
}

/// Config plus every referenced file, checked and loaded.
struct Loaded {
    series: HashMap<String, DatedSeries>,
}

impl Loaded {
    fn new(config: &StudyConfig, needed: &[&str]) -> Result<Self> {
        config.format()?;
        if let (Some(a), Some(b)) = (config.sample_start, config.sample_end) {
            if a > b {
                return Err(Error::Config(format!("sample_start {a} is after sample_end {b}")));
            }
        }
        let mut names = HashSet::new();
        for s in &config.series {
            if !names.insert(s.name.as_str()) {
                return Err(Error::Config(format!("duplicate series name '{}'", s.name)));
            }
        }
        let mut files: HashMap<PathBuf, String> = HashMap::new();
        for name in needed {
            let src = config.source(name)?;
            let path = config.base_dir.join(&src.file);
            if !files.contains_key(&path) {
                let text = fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                files.insert(path.clone(), text);
            }
            let header = csv_header(&files[&path]).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            if header.first().map(String::as_str) != Some("date") {
                return Err(Error::Config(format!("{}: first column must be 'date'", path.display())));
            }
            if !header.iter().skip(1).any(|h| h == src.column()) {
                return Err(Error::Config(format!(
                    "column '{}' (series '{}') not found in {}",
                    src.column(),
                    src.name,
                    path.display()
                )));
            }
        }

        let mut series = HashMap::new();
        for name in needed {
            if series.contains_key(*name) {
                continue;
            }
            let src = config.source(name)?;
            let text = &files[&config.base_dir.join(&src.file)];
            let raw = parse_csv_series(text, src.column())?.series.with_name(src.name.clone());
            let restricted = raw.restrict(config.sample_start, config.sample_end)?;
            series.insert((*name).to_owned(), src.transform.apply(&restricted)?);
        }
        Ok(Self { series })
    }

    fn get(&self, name: &str) -> &DatedSeries {
        &self.series[name]
    }

    fn aligned(&self, names: &[&str]) -> Result<crate::series::AlignedPanel> {
        let list: Vec<DatedSeries> = names.iter().map(|n| self.get(n).clone()).collect();
        Ok(align(&list)?.panel)
    }
}

/// A rendered-to-be table and the file stem it is written under.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTable {
    pub stem: String,
    pub table: ResultTable,
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_owned()
}

/// Market-model event study for every asset: an unconditional table and,
/// when controls are configured, a conditional one, each with one section
/// per flagged sub-study.
pub fn run_event_study(config: &StudyConfig) -> Result<Vec<NamedTable>> {
    let spec = config.event_spec()?;
    if config.assets.is_empty() {
        return Err(Error::Config("no assets configured".into()));
    }
    if config.flagged.is_empty() {
        return Err(Error::Config("no flagged sub-studies configured".into()));
    }
    let mut needed: Vec<&str> = vec![config.benchmark.as_str()];
    needed.extend(config.assets.iter().map(String::as_str));
    needed.extend(config.controls.iter().map(String::as_str));
    let loaded = Loaded::new(config, &needed)?;

    let panel = loaded.aligned(&needed)?;
    let framed = frame(panel, spec.event_date(), config.snap_forward)?;

    let mut unconditional = ResultTable::new("Event study: unconditional OLS regression results", config.assets.clone());
    let mut conditional = ResultTable::new("Event study: conditional OLS regression results", config.assets.clone());
    for set in &config.flagged {
        let flagged = set.offsets();
        let mut plain = Vec::new();
        let mut with_controls = Vec::new();
        for asset in &config.assets {
            plain.push(event_dummy_regression(&framed, asset, &config.benchmark, &spec, &flagged)?.regression);
            if !config.controls.is_empty() {
                with_controls.push(
                    conditional_event_regression(&framed, asset, &config.benchmark, &spec, &flagged, &config.controls)?
                        .regression,
                );
            }
        }
        unconditional.push_regressions(set.label.clone(), &plain.iter().collect::<Vec<_>>())?;
        if !config.controls.is_empty() {
            conditional.push_regressions(set.label.clone(), &with_controls.iter().collect::<Vec<_>>())?;
        }
    }

    let mut out = vec![NamedTable { stem: "event_unconditional".into(), table: unconditional }];
    if !config.controls.is_empty() {
        out.push(NamedTable { stem: "event_conditional".into(), table: conditional });
    }
    Ok(out)
}

/// Stock returns on each sentiment source, for every asset: one
/// unconditional table per source and, with controls, one conditional table.
pub fn run_sentiment_study(config: &StudyConfig) -> Result<Vec<NamedTable>> {
    if config.sentiment.is_empty() {
        return Err(Error::Config("no sentiment series configured".into()));
    }
    if config.assets.is_empty() {
        return Err(Error::Config("no assets configured".into()));
    }
    let mut needed: Vec<&str> = config.assets.iter().map(String::as_str).collect();
    needed.extend(config.sentiment.iter().map(String::as_str));
    needed.extend(config.controls.iter().map(String::as_str));
    let loaded = Loaded::new(config, &needed)?;

    let mut out = Vec::new();
    for source in &config.sentiment {
        let heading = format!("STR and {source}");
        let mut plain: Vec<RegressionResult> = Vec::new();
        let mut with_controls: Vec<RegressionResult> = Vec::new();
        for asset in &config.assets {
            let panel = loaded.aligned(&[asset, source])?;
            plain.push(sentiment_regression(panel.column(asset)?, (source, panel.column(source)?), &[])?);

            if !config.controls.is_empty() {
                let mut names: Vec<&str> = vec![asset, source];
                names.extend(config.controls.iter().map(String::as_str));
                let panel = loaded.aligned(&names)?;
                let controls = config
                    .controls
                    .iter()
                    .map(|c| Ok((c.as_str(), panel.column(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                with_controls.push(sentiment_regression(
                    panel.column(asset)?,
                    (source, panel.column(source)?),
                    &controls,
                )?);
            }
        }
        let mut table = ResultTable::new(
            format!("{heading}: unconditional OLS regression results"),
            config.assets.clone(),
        );
        table.push_regressions(heading.clone(), &plain.iter().collect::<Vec<_>>())?;
        out.push(NamedTable { stem: format!("sentiment_{}_unconditional", slug(source)), table });

        if !config.controls.is_empty() {
            let mut table =
                ResultTable::new(format!("{heading}: conditional OLS regression results"), config.assets.clone());
            table.push_regressions(heading, &with_controls.iter().collect::<Vec<_>>())?;
            out.push(NamedTable { stem: format!("sentiment_{}_conditional", slug(source)), table });
        }
    }
    Ok(out)
}

/// Renders every table in memory, then writes them all. Nothing is left in
/// `dir` if any step fails.
pub fn write_tables(dir: &Path, tables: &[NamedTable], format: Format) -> Result<Vec<PathBuf>> {
    let files = tables
        .iter()
        .map(|t| Ok((format!("{}.{}", t.stem, format.extension()), render_table(&t.table, format)?)))
        .collect::<Result<Vec<_>>>()?;
    write_all(dir, files)
}

/// Writes `(file name, contents)` pairs atomically as a group: each goes to
/// a temporary file first and all are renamed into place at the end.
pub fn write_all(dir: &Path, files: Vec<(String, String)>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (name, contents) in &files {
        let tmp = dir.join(format!(".{name}.tmp"));
        if let Err(e) = fs::write(&tmp, contents) {
            cleanup(&staged);
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        staged.push((tmp, dir.join(name)));
    }
    let mut done = Vec::new();
    for (tmp, path) in &staged {
        if let Err(e) = fs::rename(tmp, path) {
            cleanup(&staged);
            for p in &done {
                let _ = fs::remove_file(p);
            }
            return Err(e.into());
        }
        done.push(path.clone());
    }
    Ok(done)
}

/// Ground truth written next to a synthetic bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthTruth {
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub noise_sd: f64,
    pub injected_effect: f64,
    pub flagged: Vec<i64>,
    pub event_date: NaiveDate,
    pub assets: Vec<String>,
}

/// Files making up a synthetic bundle: `prices.csv`, `truth.toml` and a
/// ready-to-run `study.toml` pointing at the prices.
pub fn synth_bundle(scenario: &SynthScenario) -> Result<Vec<(String, String)>> {
    let panel = generate_panel(scenario)?;
    let prices = panel.prices();
    let truth = SynthTruth {
        seed: scenario.seed,
        alpha: scenario.alpha,
        beta: scenario.beta,
        noise_sd: scenario.noise_sd,
        injected_effect: scenario.injected_effect,
        flagged: scenario.flagged.clone(),
        event_date: panel.spec.event_date(),
        assets: scenario.assets.clone(),
    };
    let source = |name: &str| SeriesSource {
        name: name.to_owned(),
        file: PathBuf::from("prices.csv"),
        column: None,
        transform: Transform::LogReturns,
    };
    let mut series = vec![source(&scenario.benchmark)];
    series.extend(scenario.assets.iter().map(|a| source(a)));
    series.extend(scenario.controls.iter().map(|c| source(&c.name)));
    let study = StudyConfig {
        event_date: Some(panel.spec.event_date()),
        benchmark: scenario.benchmark.clone(),
        assets: scenario.assets.clone(),
        controls: scenario.controls.iter().map(|c| c.name.clone()).collect(),
        sentiment: Vec::new(),
        windows: WindowOffsets {
            est_start: scenario.estimation.start,
            est_end: scenario.estimation.end,
            evt_start: scenario.event.start,
            evt_end: scenario.event.end,
        },
        flagged: default_flagged(),
        snap_forward: false,
        sample_start: None,
        sample_end: None,
        format: default_format(),
        out: Some(PathBuf::from("tables")),
        series,
        base_dir: PathBuf::new(),
    };
    Ok(vec![
        ("prices.csv".into(), prices.to_csv()),
        ("truth.toml".into(), toml::to_string(&truth).expect("truth serializes")),
        ("study.toml".into(), study.to_toml()),
    ])
}

pub fn run_synth(scenario: &SynthScenario, out: &Path) -> Result<Vec<PathBuf>> {
    write_all(out, synth_bundle(scenario)?)
}
