use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracblow_cli::{load_config, run_experiment, CliError, CliResult};

/// Runs a fractional blow-up experiment described by a key-value spec file.
#[derive(Debug, Parser)]
#[command(name = "fracblow", version)]
struct Args {
    /// Experiment spec file.
    spec: PathBuf,
    /// Output directory (overrides `output_dir` in the spec).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for parallel rows.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomized check inputs; simulations never use it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(args: &Args) -> CliResult<()> {
    if let Some(k) = args.threads {
        if k == 0 {
            return Err(CliError::invalid("--threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::invalid("--threads", e.to_string()))?;
    }
    let mut spec = load_config(&args.spec)?;
    if let Some(out) = &args.out {
        spec.output_dir = out.clone();
    }
    log::info!("{} experiment, output in {}", spec.kind.name(), spec.output_dir.display());
    let report = run_experiment(&spec, args.seed)?;
    for line in &report.lines {
        println!("{line}");
    }
    println!("wrote {} files to {}", report.files.len(), spec.output_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.one_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
