use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nefluct_cli::run::timestamp_now;
use nefluct_cli::{run_text, write_outputs, Overrides, Subcommand};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Friction,
    Eh,
    Ness,
    Propel,
    Torque,
    Relax,
    Sweep,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Friction => Subcommand::Friction,
            Command::Eh => Subcommand::Eh,
            Command::Ness => Subcommand::Ness,
            Command::Propel => Subcommand::Propel,
            Command::Torque => Subcommand::Torque,
            Command::Relax => Subcommand::Relax,
            Command::Sweep => Subcommand::Sweep,
        }
    }
}

/// Run a nonequilibrium fluctuation scenario and write CSV curves.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    command: Command,
    /// Scenario file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Worker threads for sweeps and Monte Carlo.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Overrides `[quadrature] seed`.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Overrides `[quadrature] rel_tol`.
    #[arg(long, value_name = "REL")]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.config.display());
            return ExitCode::from(1);
        }
    };
    let overrides = Overrides { seed: cli.seed, rel_tol: cli.tol };
    let result = run_text(&text, cli.command.into(), overrides, timestamp_now())
        .and_then(|outs| write_outputs(&cli.out, &outs));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", cli.config.display());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
