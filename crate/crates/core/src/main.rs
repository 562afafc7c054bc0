use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wetbeam::cli::{
    format_solve, run_experiment, summary_lines, validate, write_csv, write_solve_csv, ExperimentKind, Outcome,
    Overrides, RawConfig,
};
use wetbeam::Error;

/// Max-min energy beamforming experiments for a multi-antenna power beacon.
#[derive(Parser)]
#[command(name = "wetbeam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worst-case energy versus Rician factor.
    SweepKappa(Common),
    /// Worst-case energy and LP iterations versus number of antennas.
    SweepAntennas(Common),
    /// Worst-case energy versus array rotation.
    SweepRotation(Common),
    /// Solve one deployment and print the design.
    Solve(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file (all keys optional).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Add closed-form bound rows (kappa sweep).
    #[arg(long)]
    bounds: bool,
}

fn run(kind: ExperimentKind, args: Common) -> Result<(), Error> {
    let raw = match &args.config {
        Some(path) => RawConfig::parse(&fs::read_to_string(path)?)?,
        None => RawConfig::default(),
    };
    let overrides = Overrides {
        seed: args.seed,
        trials: args.trials,
        output: args.out,
    };
    let cfg = validate(raw, kind, &overrides)?;
    if args.bounds && kind != ExperimentKind::Kappa {
        log::warn!("--bounds only applies to sweep-kappa; ignored");
    }
    log::info!("running {} experiment with seed {}", kind.as_str(), cfg.seed);

    match run_experiment(&cfg, args.bounds)? {
        Outcome::Sweep(result) => {
            match &cfg.output {
                Some(path) => {
                    write_csv(BufWriter::new(File::create(path)?), &result)?;
                    for line in summary_lines(&result) {
                        println!("{line}");
                    }
                }
                None => {
                    write_csv(io::stdout().lock(), &result)?;
                    for line in summary_lines(&result) {
                        eprintln!("{line}");
                    }
                }
            }
        }
        Outcome::Solve(solved) => {
            print!("{}", format_solve(&solved));
            if let Some(path) = &cfg.output {
                write_solve_csv(BufWriter::new(File::create(path)?), &solved)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::SweepKappa(a) => (ExperimentKind::Kappa, a),
        Command::SweepAntennas(a) => (ExperimentKind::Antennas, a),
        Command::SweepRotation(a) => (ExperimentKind::Rotation, a),
        Command::Solve(a) => (ExperimentKind::Solve, a),
    };
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Config { .. } | Error::ConfigSyntax(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
