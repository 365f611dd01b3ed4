use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sigspace::harness::{self, ExperimentConfig, PRESET_NAMES};

#[derive(Parser)]
#[command(
    name = "sigspace",
    version,
    about = "Sparse recovery benchmarks in redundant dictionaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the available preset names.
    ListPresets,
    /// Run an experiment and write its results as CSV.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// TOML file with ExperimentConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Report zero runtimes so the CSV is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, String> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(name), _) => harness::preset(name).map_err(|e| e.to_string())?,
        (None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            ExperimentConfig::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => return Err("either --preset or --config is required".into()),
    };
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if args.no_timing {
        cfg.record_timing = false;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<(), String> {
    let cfg = load(&args)?;
    let table = harness::run_experiment(&cfg, args.jobs).map_err(|e| e.to_string())?;
    match &args.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            harness::emit_csv(&table, BufWriter::new(f)).map_err(|e| e.to_string())?;
        }
        None => harness::emit_csv(&table, io::stdout().lock()).map_err(|e| e.to_string())?,
    }
    if let Some(path) = &args.svg {
        let f = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        harness::emit_svg(&table, BufWriter::new(f)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ListPresets => {
            let mut out = io::stdout().lock();
            PRESET_NAMES
                .iter()
                .try_for_each(|name| writeln!(out, "{name}"))
                .map_err(|e| e.to_string())
        }
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
