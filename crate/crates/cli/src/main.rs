use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hvh_cli::config::parse_real;
use hvh_cli::verify::{run_verify, Suite};
use hvh_cli::{parse_config, run_sweep, CliError, ConfigOverrides, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "hvh", version, about = "Entanglement of two spins coupled through a quantum or classical oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep purity and concurrence over ωt and write CSV (and SVG).
    Run(RunArgs),
    /// Run verification suites; exit status 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// key=value file with the same names as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// quantum, hybrid or both
    #[arg(long)]
    mode: Option<Mode>,
    /// Coupling g²/(mω³ħ); a comma list runs one sweep per value
    #[arg(long, value_parser = parse_real, value_delimiter = ',')]
    kappa: Option<Vec<f64>>,
    /// Spin splitting in units of ħω
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Initial position in units of √(ħ/mω)
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    q0: Option<f64>,
    /// Initial momentum in units of √(mωħ)
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    p0: Option<f64>,
    /// Width of the classical Gaussian in units of √(ħ/mω)
    #[arg(long, value_parser = parse_real)]
    sigma: Option<f64>,
    /// Final ωt, e.g. 8pi
    #[arg(long = "t-max", value_parser = parse_real)]
    t_max: Option<f64>,
    /// Number of ωt samples, endpoints included
    #[arg(long)]
    samples: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output SVG path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Add quadrature-oracle purity and concurrence columns
    #[arg(long)]
    oracle: bool,
    /// Quadrature nodes per axis for the oracle
    #[arg(long = "oracle-grid")]
    oracle_grid: Option<usize>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// algebra, oracle, pde, expectation or all
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Grid nodes per axis (oracle: 801, pde and expectation: 201)
    #[arg(long)]
    grid: Option<usize>,
    /// Main tolerance of each suite
    #[arg(long)]
    tol: Option<f64>,
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            parse_config(&text)?
        }
        None => ConfigOverrides::default(),
    };
    let flags = ConfigOverrides {
        mode: args.mode,
        kappa: args.kappa,
        epsilon: args.epsilon,
        q0: args.q0,
        p0: args.p0,
        sigma: args.sigma,
        t_max: args.t_max,
        samples: args.samples,
        out_csv: args.out,
        out_svg: args.svg,
        oracle: args.oracle.then_some(true),
        oracle_grid: args.oracle_grid,
    };
    let cfg = flags.or(file).apply(RunConfig::default());
    let report = run_sweep(&cfg)?;
    for path in &report.csv {
        println!("wrote {}", path.display());
    }
    if let Some(path) = &report.svg {
        println!("wrote {}", path.display());
    }
    if let Some((dp, dc)) = report.oracle_deviation {
        println!("oracle max deviation: purity {dp:.3e}, concurrence {dc:.3e}");
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool, CliError> {
    let checks = run_verify(args.suite, args.grid, args.tol)?;
    for c in &checks {
        println!("{c}");
    }
    Ok(checks.iter().all(|c| c.pass))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Verify(args) => verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
