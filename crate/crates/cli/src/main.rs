use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plasmon_core::config::{self, ConfigError};
use plasmon_core::experiments::Scenario;
use plasmon_core::Error;

mod commands;

#[derive(Parser)]
#[command(name = "plasmon-sim", version, about = "Coupled-mode simulator for a nanoparticle, an emitter and a microcavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Config file, or the name of a built-in config.
    #[arg(long)]
    config: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Number of sweep points.
    #[arg(long)]
    grid: Option<usize>,
    /// Sweep window and step in eV, as `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Yield,
    Power,
}

#[derive(Subcommand)]
enum Command {
    /// Plasmon radiation and absorption with and without the cavity.
    Fig1c(Common),
    /// Quantum yield and radiated power of the driven emitter.
    Fig2(Common),
    /// Emitter population traces and the emission spectrum.
    Fig3(Common),
    /// Eigen branches and spectra across the emitter-cavity detuning.
    Fig4(Common),
    /// Steady-state channel powers over the pump detuning.
    Spectrum(Common),
    /// Quantum yield over the pump detuning.
    Yield(Common),
    /// Free decay from the driven mode.
    Evolve(Common),
    /// Eigenvalue branches over the emitter-cavity detuning.
    Eigen(Common),
    /// Enhancement over emitter distance and cavity Q.
    Map(Common),
    /// Cavity Q maximising the enhancement.
    Optq {
        #[command(flatten)]
        common: Common,
        /// Emitter distances in nm, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0, 15.0])]
        distance: Vec<f64>,
        #[arg(long, value_enum, default_value = "yield")]
        objective: ObjectiveArg,
    },
    /// Parse a config and print the resolved parameters.
    Validate {
        /// Config file or built-in name.
        config: String,
    },
}

fn parse_sweep(spec: &str) -> Result<(f64, f64, usize), ConfigError> {
    let bad = || ConfigError::single(format!("--sweep expects start:stop:step, got \"{spec}\""));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b <= a {
        return Err(bad());
    }
    let n = ((b - a) / step).round() as usize + 1;
    Ok((a, b, n.max(2)))
}

fn scenario(common: &Common, default: &str) -> Result<Scenario, Error> {
    let mut s = config::load(common.config.as_deref().unwrap_or(default))?;
    if let Some(n) = common.grid {
        if n < 2 {
            return Err(ConfigError::single("--grid must be at least 2").into());
        }
        s.sweep.points = n;
        s.sweep.distance_points = n;
        s.sweep.q_points = n;
        s.run.time_points = n;
    }
    if let Some(spec) = &common.sweep {
        let (a, b, n) = parse_sweep(spec)?;
        s.sweep.detuning = Some((a, b));
        s.sweep.points = n;
    }
    Ok(s)
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("PLASMON_SIM_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| ConfigError::single(format!("PLASMON_SIM_THREADS must be an integer >= 1, got \"{v}\"")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError::single(format!("cannot size the worker pool: {e}")).into())
}

fn run(cli: Cli) -> Result<(), Error> {
    configure_threads()?;
    match cli.command {
        Command::Fig1c(c) => commands::fig1c(&scenario(&c, "fig1c")?, &c),
        Command::Fig2(c) => commands::fig2(&scenario(&c, "fig2")?, &c),
        Command::Fig3(c) => commands::fig3(&scenario(&c, "fig3")?, &c),
        Command::Fig4(c) => commands::fig4(&scenario(&c, "fig4")?, &c),
        Command::Spectrum(c) => commands::spectrum(&scenario(&c, "fig3")?, &c),
        Command::Yield(c) => commands::quantum_yield(&scenario(&c, "fig2")?, &c),
        Command::Evolve(c) => commands::evolve(&scenario(&c, "fig3")?, &c),
        Command::Eigen(c) => commands::eigen(&scenario(&c, "fig4")?, &c),
        Command::Map(c) => commands::map(&scenario(&c, "fig2_first_principles")?, &c),
        Command::Optq {
            common,
            distance,
            objective,
        } => commands::optq(&scenario(&common, "fig2_first_principles")?, &common, &distance, objective),
        Command::Validate { config: name } => commands::validate(&config::load(&name)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("ERROR[usage]: {e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ERROR[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
