use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ionspin_cli::{exit, exit_code, load_config, run_and_write, Experiment, Overrides};

#[derive(Parser)]
#[command(name = "ionspin", version, about = "Trapped-ion quantum spin simulator")]
struct Cli {
    /// Worker threads (falls back to IONSPIN_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Master seed, overriding the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Run directory, overriding the file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use exact probabilities.
    #[arg(long, conflicts_with = "shots")]
    exact: bool,
    /// Sample K projective measurements.
    #[arg(long, value_name = "K")]
    shots: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    Crystal(RunArgs),
    Couplings(RunArgs),
    Design(RunArgs),
    Evolve(RunArgs),
    Ramp(RunArgs),
    Spectroscopy(RunArgs),
    Quench(RunArgs),
    Mbl(RunArgs),
    Dtc(RunArgs),
    Dqpt(RunArgs),
    Otoc(RunArgs),
    Qaoa(RunArgs),
    Bench(RunArgs),
    /// Condense the run directories below DIR into DIR/summary.csv.
    Summary { dir: PathBuf },
}

fn threads(flag: Option<usize>) -> anyhow::Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("IONSPIN_THREADS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| ionspin_cli::ConfigError::new("IONSPIN_THREADS", "not a thread count"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads(cli.threads).and_then(|_| {
        let (experiment, args) = match cli.command {
            Command::Summary { dir } => {
                let table = ionspin_cli::export_summary(&dir)?;
                let path = dir.join("summary.csv");
                ionspin_cli::output::write_atomic(&path, table.to_csv().as_bytes())?;
                println!("{}", path.display());
                return Ok(());
            }
            Command::Crystal(a) => (Experiment::Crystal, a),
            Command::Couplings(a) => (Experiment::Couplings, a),
            Command::Design(a) => (Experiment::Design, a),
            Command::Evolve(a) => (Experiment::Evolve, a),
            Command::Ramp(a) => (Experiment::Ramp, a),
            Command::Spectroscopy(a) => (Experiment::Spectroscopy, a),
            Command::Quench(a) => (Experiment::Quench, a),
            Command::Mbl(a) => (Experiment::Mbl, a),
            Command::Dtc(a) => (Experiment::Dtc, a),
            Command::Dqpt(a) => (Experiment::Dqpt, a),
            Command::Otoc(a) => (Experiment::Otoc, a),
            Command::Qaoa(a) => (Experiment::Qaoa, a),
            Command::Bench(a) => (Experiment::Bench, a),
        };
        let shots = if args.exact { Some(None) } else { args.shots.map(Some) };
        let ov = Overrides { seed: args.seed, out: args.out, shots };
        let cfg = load_config(&args.config, experiment, &ov)?;
        let dir = run_and_write(&cfg)?;
        println!("{}", dir.display());
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
