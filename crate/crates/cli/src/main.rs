use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "sofic", version, about = "Local G-spaces and sofic approximation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed; runs are reproducible from (config, seed).
    #[arg(long, global = true, default_value_t = sofic::rng::DEFAULT_SEED)]
    seed: u64,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Check Axioms 1-4 on sampled points.
    CheckAxioms,
    /// Measure the fraction of M[U] and compare with 1 - epsilon.
    Sofic,
    /// Run a sequence of spaces and windows.
    Sequence,
    /// Injectivity-radius profiles of a family.
    Injrad,
    /// Induce a local space from a discrete sofic map.
    Induce,
    /// Check the nonunimodular obstruction on a candidate family.
    Unimodular,
    /// Replay the branched double cover computation.
    BranchedDemo,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    if let Some(n) = cli.jobs {
        anyhow::ensure!(n > 0, "--jobs must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    if cli.command == Command::BranchedDemo {
        return Ok(commands::branched_demo());
    }
    let path = cli.config.as_ref().ok_or_else(|| anyhow::anyhow!("--config is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let seed = cli.seed;
    match cli.command {
        Command::CheckAxioms => commands::check_axioms(&text, seed),
        Command::Sofic => commands::sofic(&text, seed),
        Command::Sequence => commands::sequence(&text, seed),
        Command::Injrad => commands::injrad(&text, seed),
        Command::Induce => commands::induce(&text, seed),
        Command::Unimodular => commands::unimodular(&text, seed),
        Command::BranchedDemo => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("report serializes") + "\n",
        Format::Csv => outcome.csv.clone(),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => print!("{}", outcome.text.as_deref().unwrap_or(&body)),
    }
    eprintln!("{}", outcome.summary);
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
