//! Clap definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::OutputTable;

#[derive(Debug, Parser)]
#[command(
    name = "cfshape",
    version,
    about = "Coherent-feedback noise shaping for optomechanical cooling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate spectrum on a frequency grid (or filter |R|², |T|² with --element filter)
    Spectrum(RunArgs),
    /// Stokes / anti-Stokes rates and occupations
    Rates(RunArgs),
    /// Rates over a parameter grid
    Sweep(RunArgs),
    /// State-space cross-check of the rate equation
    Oracle(RunArgs),
    /// Optimal detuning and feasibility
    Design(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Rates(_) => "rates",
            Command::Sweep(_) => "sweep",
            Command::Oracle(_) => "oracle",
            Command::Design(_) => "design",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Spectrum(a)
            | Command::Rates(a)
            | Command::Sweep(a)
            | Command::Oracle(a)
            | Command::Design(a) => a,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat key=value config file; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Flags,
}

macro_rules! flags {
    ($($field:ident => $key:literal, $help:literal;)*) => {
        #[derive(Debug, Default, Args)]
        pub struct Flags {
            $(
                #[doc = $help]
                #[arg(long = $key, allow_hyphen_values = true)]
                pub $field: Option<String>,
            )*
        }

        impl Flags {
            /// Given flags as `(key, value)` pairs.
            pub fn pairs(&self) -> Vec<(&'static str, String)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(($key, v.clone()));
                    }
                )*
                out
            }
        }
    };
}

flags! {
    units => "units", "omega_m (default, ω_m = 1) or si";
    element => "element", "system (default) or filter";
    topology => "topology", "notch, bandpass or none (default)";
    kappa => "kappa", "Optomechanical cavity linewidth";
    omega_m => "omega-m", "Mechanical frequency";
    g => "g", "Linearized optomechanical coupling";
    delta => "delta", "Drive detuning, or auto for the notch optimum (default -omega_m)";
    kappa_f => "kappa-f", "Symmetric filter mirror rate";
    kappa1 => "kappa1", "Filter port-1 rate";
    kappa2 => "kappa2", "Filter port-2 rate";
    kappa_loss => "kappa-loss", "Filter internal loss rate";
    delta_f => "delta-f", "Filter detuning override";
    tau => "tau", "Loop delay";
    gamma_m => "gamma-m", "Intrinsic mechanical damping";
    n_th => "n-th", "Thermal bath occupation";
    omega_min => "omega-min", "Spectrum grid start";
    omega_max => "omega-max", "Spectrum grid end";
    points => "points", "Spectrum grid points (>= 2)";
    format => "format", "csv (default) or json";
    sweep_param => "sweep-param", "delta, kappa-f, kappa or g";
    sweep_values => "sweep-values", "Comma-separated sweep grid";
    sweep_min => "sweep-min", "Sweep grid start";
    sweep_max => "sweep-max", "Sweep grid end";
    sweep_points => "sweep-points", "Sweep grid points";
    threshold => "threshold", "Oracle relative-deviation threshold";
}

pub fn load_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let text = match &args.config {
        Some(p) => Some(
            std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("--config {}: {e}", p.display())))?,
        ),
        None => None,
    };
    RunConfig::parse(text.as_deref(), args.flags.pairs())
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<OutputTable, CliError> {
    match command {
        Command::Spectrum(_) => commands::cmd_spectrum(cfg),
        Command::Rates(_) => commands::cmd_rates(cfg),
        Command::Sweep(_) => commands::cmd_sweep(cfg),
        Command::Oracle(_) => commands::cmd_oracle(cfg),
        Command::Design(_) => commands::cmd_design(cfg),
    }
}

/// Parse, run and write the rendered table.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let args = cli.command.args();
    let cfg = load_config(args)?;
    let text = execute(&cli.command, &cfg)?.render(cfg.format);
    match &args.output {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
