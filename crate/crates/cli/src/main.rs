use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use heun_gamma_cli::{error_line, parse_config, run, CliError, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Solve,
    Verify,
    Terminate,
    Reductions,
    Special,
}

/// Incomplete-Gamma series solutions of the confluent Heun equations.
#[derive(Debug, Parser)]
#[command(name = "heun-gamma", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON job configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Truncation order (termination order for `terminate`).
    #[arg(long)]
    n: Option<usize>,
    /// Tolerance for `verify`.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cmd = match args.command {
        Cmd::Solve => Command::Solve,
        Cmd::Verify => Command::Verify,
        Cmd::Terminate => Command::Terminate,
        Cmd::Reductions => Command::Reductions,
        Cmd::Special => Command::Special,
    };
    let result = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {}", args.config.display(), e)))
        .and_then(|text| {
            let mut cfg = parse_config(&text)?;
            if let Some(n) = args.n {
                cfg.n = n;
            }
            if let Some(t) = args.tol {
                cfg.tol = t;
            }
            cfg.validate()?;
            run(cmd, &cfg, &args.out)
        });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(line) => {
                    eprintln!("{line}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(1)
        }
    }
}
