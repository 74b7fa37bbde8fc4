mod analyze;
mod error;
mod output;
mod regress;
mod replicate;
mod roughset;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vague_core::Execution;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "vague",
    version,
    about = "Vague-information toolkit for analyst reports"
)]
struct Cli {
    /// Repeat for more detail (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    /// Run every parallel section on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measure tone, text-only share and hedging share of a JSONL corpus.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic analyst panel with its latent audit trail.
    Simulate(SimArgs),
    /// Run regression specs from a TOML file against a CSV table.
    Regress(RegressArgs),
    /// Simulate, estimate the full suite and check every expected sign.
    Replicate(ReplicateArgs),
    /// Exhaustive rough-set checks on small state spaces.
    Roughset(RoughsetArgs),
    /// Print the default hedging lexicon.
    Lexicon(LexiconArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Labels {
    External,
    Naive,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// JSONL corpus, one report per line.
    #[arg(long)]
    input: PathBuf,
    /// Lexicon TSV replacing the default hedging list.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "external")]
    labels: Labels,
    #[arg(long, default_value = "analyze-out")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SimSettings {
    /// TOML config; keys not set fall back to defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config file and any `--set seed=...`.
    #[arg(long)]
    seed: Option<u64>,
    /// `key=value` override, repeatable (e.g. `regimes.busyness.factor=3`).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[command(flatten)]
    settings: SimSettings,
    #[arg(long, default_value = "simulate-out")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct RegressArgs {
    /// CSV with `analyst_id,firm_id,year` key columns.
    #[arg(long)]
    input: PathBuf,
    /// TOML file of `[[spec]]` blocks.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value = "regress-out")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ReplicateArgs {
    #[command(flatten)]
    settings: SimSettings,
    /// Panel CSV written by `simulate`; skips the simulation stage.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "replicate-out")]
    output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoughCheck {
    /// Some proper rough set is informative.
    Existence,
    /// No crisp set faithfully represents a proper rough set.
    Expression,
    /// Tone rules and the class of every rough set.
    ToneTable,
    /// Classify the rough sets listed in the input document.
    Classify,
}

#[derive(Debug, Args)]
struct RoughsetArgs {
    /// JSON document with `states` and optional `rough_sets`.
    #[arg(long, conflicts_with = "states")]
    input: Option<PathBuf>,
    /// Number of evenly spaced states centred on zero.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=64))]
    states: u8,
    #[arg(long, value_enum)]
    check: RoughCheck,
    /// Largest state space enumerated (work grows like 3^n).
    #[arg(long, default_value_t = vague_core::roughset::DEFAULT_ENUMERATION_CAP as u8,
          value_parser = clap::value_parser!(u8).range(1..=12))]
    cap: u8,
}

#[derive(Debug, Args)]
struct LexiconArgs {
    /// List every surface form a pattern expands to.
    #[arg(long)]
    expanded: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Analyze(a) => analyze::run(&a, exec),
        Command::Simulate(a) => simulate::run(&a, exec),
        Command::Regress(a) => regress::run(&a, exec),
        Command::Replicate(a) => replicate::run(&a, exec),
        Command::Roughset(a) => roughset::run(&a, exec),
        Command::Lexicon(a) => {
            print!("{}", analyze::lexicon_dump(a.expanded));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
