use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nanoresonance::cli::{self, Output, RunConfig};
use nanoresonance::kernel::Convention;
use nanoresonance::{Error, Result};

#[derive(Parser)]
#[command(
    name = "resonance",
    version,
    about = "Subwavelength resonances of dispersive nano-resonators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Key-value or JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Kernel convention (overrides the config)
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Run both conventions
    #[arg(long, global = true, conflicts_with = "mode")]
    both_modes: bool,

    /// Output file (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cells per axis (overrides the config)
    #[arg(long, global = true)]
    resolution: Option<usize>,

    /// Suppress notes on stderr
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Leading eigenvalue and shape constants
    Eigen,
    /// Single-particle resonance
    Single,
    /// Hybridized dimer resonances
    Dimer,
    /// Size sweep of isolated and hybridized resonances
    Sweep,
    /// Scattered field on a grid
    Field,
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Paper,
    Consistent,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::from_str_kv("")?,
    };
    if let Some(m) = cli.mode {
        cfg = cfg.with_mode(match m {
            ModeArg::Paper => Convention::PaperLiteral,
            ModeArg::Consistent => Convention::Consistent,
        });
    }
    if cli.both_modes {
        cfg.modes = vec![Convention::PaperLiteral, Convention::Consistent];
    }
    if let Some(n) = cli.resolution {
        cfg.resolution = n;
        let problems = cfg.problems();
        if !problems.is_empty() {
            return Err(Error::Config(problems.join("; ")));
        }
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Output> {
    cli::configure_threads()?;
    let cfg = load(cli)?;
    let out = match cli.command {
        Command::Eigen => cli::cmd_eigen(&cfg)?,
        Command::Single => cli::cmd_single(&cfg)?,
        Command::Dimer => cli::cmd_dimer(&cfg)?,
        Command::Sweep => cli::cmd_sweep(&cfg)?,
        Command::Field => cli::cmd_field(&cfg)?,
    };
    match &cli.out {
        Some(p) => std::fs::write(p, &out.text)?,
        None => std::io::stdout().write_all(out.text.as_bytes())?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if !cli.quiet {
                for n in &out.notes {
                    eprintln!("note: {n}");
                }
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
