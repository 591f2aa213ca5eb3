mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{golden_scenario, snapshot, write_bundle, write_sentiment_study, ASSETS};
use eventstudy::reporting::{parse_structured, Cell};
use eventstudy::study::{StudyConfig, SynthTruth};
use eventstudy::synth::SynthScenario;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eventstudy")).args(args).output().unwrap()
}

fn run_study(sub: &str, config: &Path, out: &Path, format: &str) -> Output {
    run(&[sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", format])
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn edit_config(path: &Path, f: impl FnOnce(&mut StudyConfig)) {
    let mut cfg = StudyConfig::load(path).unwrap();
    f(&mut cfg);
    fs::write(path, cfg.to_toml()).unwrap();
}

#[test]
fn event_study_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_bundle(dir.path(), &golden_scenario());
    let out = dir.path().join("out");
    let o = run_study("event-study", &cfg, &out, "markdown");
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let names: Vec<String> = snapshot(&out).into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, ["event_conditional.md", "event_unconditional.md"]);
}

#[test]
fn missing_benchmark_column_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_bundle(dir.path(), &golden_scenario());
    edit_config(&cfg, |c| {
        let bench = c.series.iter_mut().find(|s| s.name == c.benchmark).unwrap();
        bench.column = Some("S&P 500".into());
    });
    let out = dir.path().join("out");
    let o = run_study("event-study", &cfg, &out, "csv");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("S&P 500"), "{}", stderr(&o));
    assert!(snapshot(&out).is_empty());
}

#[test]
fn overlapping_windows_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_bundle(dir.path(), &golden_scenario());
    edit_config(&cfg, |c| c.windows.est_end = -5);
    let out = dir.path().join("out");
    let o = run_study("event-study", &cfg, &out, "markdown");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("overlap"), "{}", stderr(&o));
    assert!(!out.exists() || snapshot(&out).is_empty());
}

#[test]
fn numerical_failure_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_bundle(dir.path(), &golden_scenario());
    // a control that is a copy of another makes the conditional design rank deficient
    edit_config(&cfg, |c| {
        let mut copy = c.series.iter().find(|s| s.name == "WTI").unwrap().clone();
        copy.name = "WTI again".into();
        copy.column = Some("WTI".into());
        c.series.push(copy);
        c.controls.push("WTI again".into());
    });
    let out = dir.path().join("out");
    let o = run_study("event-study", &cfg, &out, "structured");
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("WTI"), "{}", stderr(&o));
    assert!(snapshot(&out).is_empty());
}

#[test]
fn three_sentiment_sources_give_six_tables() {
    let dir = tempfile::tempdir().unwrap();
    write_bundle(dir.path(), &golden_scenario());
    let cfg = write_sentiment_study(dir.path(), 99);
    let out = dir.path().join("out");
    let o = run_study("sentiment", &cfg, &out, "structured");
    assert!(o.status.success(), "{}", stderr(&o));
    let files = snapshot(&out);
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        [
            "sentiment_google_trends_conditional.json",
            "sentiment_google_trends_unconditional.json",
            "sentiment_polls_conditional.json",
            "sentiment_polls_unconditional.json",
            "sentiment_twitter_conditional.json",
            "sentiment_twitter_unconditional.json",
        ]
    );
    let t = parse_structured(std::str::from_utf8(&files[1].1).unwrap()).unwrap();
    assert_eq!(t.sections[0].heading, "STR and Google Trends");
    assert_eq!(t.columns, ASSETS);
    let labels: Vec<&str> = t.sections[0].rows.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["Constant", "Google Trends", "Adjusted R²"]);
    let t = parse_structured(std::str::from_utf8(&files[0].1).unwrap()).unwrap();
    assert_eq!(t.sections[0].rows.len(), 7);
}

#[test]
fn empty_sample_range_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    write_bundle(dir.path(), &golden_scenario());
    let cfg = write_sentiment_study(dir.path(), 99);
    edit_config(&cfg, |c| {
        c.sample_start = chrono::NaiveDate::from_ymd_opt(2030, 1, 1);
        c.sample_end = chrono::NaiveDate::from_ymd_opt(2030, 12, 31);
    });
    let out = dir.path().join("out");
    let o = run_study("sentiment", &cfg, &out, "markdown");
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).to_lowercase().contains("empty"), "{}", stderr(&o));
    assert!(snapshot(&out).is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write_bundle(dir.path(), &golden_scenario());
    let cfg = write_sentiment_study(dir.path(), 7);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(run_study("sentiment", &cfg, out, "csv").status.success());
    }
    assert_eq!(snapshot(&a), snapshot(&b));
    assert_eq!(snapshot(&a).len(), 6);
}

#[test]
fn unknown_format_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_bundle(dir.path(), &golden_scenario());
    let out = dir.path().join("out");
    let o = run_study("event-study", &cfg, &out, "latex");
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

fn synth(scenario: &SynthScenario, dir: &Path) -> Output {
    let path = dir.join("scenario.toml");
    fs::write(&path, scenario.to_toml()).unwrap();
    run(&["synth", "--config", path.to_str().unwrap(), "--out", dir.join("bundle").to_str().unwrap()])
}

#[test]
fn synth_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = SynthScenario::new(7, 160, 0.0005, 1.3);
    s.noise_sd = 0.01;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    fs::create_dir_all(&a).unwrap();
    fs::create_dir_all(&b).unwrap();
    assert!(synth(&s, &a).status.success());
    assert!(synth(&s, &b).status.success());
    let (sa, sb) = (snapshot(&a.join("bundle")), snapshot(&b.join("bundle")));
    assert_eq!(sa, sb);
    let names: Vec<&str> = sa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["prices.csv", "study.toml", "truth.toml"]);
}

#[test]
fn invalid_scenario_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = synth(&SynthScenario::new(7, 5, 0.0, 1.0), dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("n_days"), "{}", stderr(&o));
    assert!(snapshot(&dir.path().join("bundle")).is_empty());
}

#[test]
fn sidecar_effect_is_recovered_at_zero_noise() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = SynthScenario::new(3, 140, 0.0005, 1.3);
    s.injected_effect = -0.01;
    assert!(synth(&s, dir.path()).status.success());
    let bundle = dir.path().join("bundle");
    let truth: SynthTruth = toml::from_str(&fs::read_to_string(bundle.join("truth.toml")).unwrap()).unwrap();
    assert_eq!(truth.injected_effect, -0.01);

    let o = run(&["event-study", "--config", bundle.join("study.toml").to_str().unwrap(), "--format", "structured"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(bundle.join("tables/event_unconditional.json")).unwrap();
    let table = parse_structured(&text).unwrap();
    let window = table.sections.iter().find(|s| s.heading == "Event window [+1; +5]").unwrap();
    let event = window.rows.iter().find(|r| r.label == "Event").unwrap();
    let Cell::Estimate { coefficient, .. } = event.cells[0] else { panic!("estimate expected") };
    assert!((coefficient - truth.injected_effect).abs() < 1e-12, "{coefficient}");
}
