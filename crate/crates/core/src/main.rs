use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eventstudy::reporting::Format;
use eventstudy::study::{run_event_study, run_sentiment_study, run_synth, write_tables, StudyConfig};
use eventstudy::synth::SynthScenario;
use eventstudy::{Error, Result};

#[derive(Parser)]
#[command(name = "eventstudy", version, about = "Event studies and sentiment regressions from CSV snapshots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Market-model abnormal returns and event-dummy regressions
    EventStudy(StudyArgs),
    /// Stock returns regressed on sentiment series
    Sentiment(StudyArgs),
    /// Generate a synthetic price bundle with known truth
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    config: PathBuf,
    /// markdown, csv or structured; overrides the config
    #[arg(long)]
    format: Option<String>,
    /// Output directory; overrides the config
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    snap_forward: bool,
}

fn study(args: &StudyArgs, sentiment: bool) -> Result<()> {
    let mut config = StudyConfig::load(&args.config)?;
    if let Some(f) = &args.format {
        config.format = f.clone();
    }
    config.snap_forward |= args.snap_forward;
    let format: Format = config.format()?;
    let out = args.out.clone().unwrap_or_else(|| config.out_dir());
    let tables = if sentiment { run_sentiment_study(&config)? } else { run_event_study(&config)? };
    for path in write_tables(&out, &tables, format)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn synth(config: &Path, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
    let scenario = SynthScenario::from_toml(&text)?;
    for path in run_synth(&scenario, out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::EventStudy(args) => study(args, false),
        Command::Sentiment(args) => study(args, true),
        Command::Synth { config, out } => synth(config, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
