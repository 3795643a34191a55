use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use piq_lab_cli::{run, write_atomic, CliError, CommandKind, ExperimentConfig};

/// Runs one piq-lab experiment and writes a JSON report.
#[derive(Parser, Debug)]
#[command(name = "piq-lab", version)]
struct Args {
    command: CommandKind,
    /// TOML config (or a JSON config echoed from an earlier report).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; stdout when absent and the config names no output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; falls back to PIQ_LAB_JOBS.
    #[arg(long, env = "PIQ_LAB_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn main_inner(args: Args) -> Result<(), CliError> {
    if let Some(k) = args.jobs {
        if k == 0 {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let out = args.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    let report = run(args.command, cfg, args.seed, args.timing)?;
    let text = report.to_json();
    match out {
        Some(p) => write_atomic(&p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("piq-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
