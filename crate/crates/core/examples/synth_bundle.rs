//! Write a synthetic price bundle with its ground truth and a ready-made
//! study config. Pass a directory, or a temporary one is used.

use std::path::PathBuf;

use eventstudy::study::run_synth;
use eventstudy::synth::SynthScenario;

const SCENARIO: &str = r#"
seed = 7
n_days = 250
alpha = 0.0005
beta = 1.3
noise_sd = 0.01
injected_effect = -0.01
assets = ["Brazil", "Russia", "India", "China", "South Africa"]
benchmark = "MSCI World"

[[controls]]
name = "WTI"
loading = 0.1
sd = 0.02

[[controls]]
name = "GOLD"
sd = 0.01
"#;

fn main() -> eventstudy::Result<()> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("eventstudy-synth"));
    let scenario = SynthScenario::from_toml(SCENARIO)?;
    for path in run_synth(&scenario, &out)? {
        println!("wrote {}", path.display());
    }
    println!("\n{}", std::fs::read_to_string(out.join("truth.toml"))?);
    Ok(())
}
