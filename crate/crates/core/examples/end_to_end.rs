//! The whole pipeline from files: synthesise a bundle, load its study
//! config, run the event study and write the tables.

use eventstudy::reporting::{render_table, Format};
use eventstudy::study::{run_event_study, run_synth, write_tables, StudyConfig};
use eventstudy::synth::{ControlSpec, SynthScenario};

fn main() -> eventstudy::Result<()> {
    let dir = std::env::temp_dir().join("eventstudy-end-to-end");
    let mut scenario = SynthScenario::new(42, 220, 0.0004, 1.2);
    scenario.noise_sd = 0.01;
    scenario.injected_effect = -0.015;
    scenario.assets = vec!["Brazil".into(), "India".into()];
    scenario.controls = ["WTI", "GOLD", "Silver", "Bitcoin"]
        .iter()
        .map(|n| ControlSpec { name: (*n).into(), loading: 0.05, sd: 0.02 })
        .collect();
    run_synth(&scenario, &dir)?;

    let config = StudyConfig::load(&dir.join("study.toml"))?;
    let tables = run_event_study(&config)?;
    for path in write_tables(&config.out_dir(), &tables, Format::Csv)? {
        println!("wrote {}", path.display());
    }
    println!();
    for t in &tables {
        println!("{}", render_table(&t.table, Format::Markdown)?);
    }
    Ok(())
}
