use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fourlat_core::harness::{run, ExperimentConfig, ExperimentKind, Report};
use fourlat_core::Error;

#[derive(Parser)]
#[command(name = "fourlat", version, about = "Lattice discretization of Fourier multipliers and convergence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact identities of the embedding and discretization.
    Identity(Common),
    /// Resolvent error rate, with or without a potential.
    Rate {
        #[command(flatten)]
        common: Common,
        /// Smallest mesh size of the sweep.
        #[arg(long)]
        h_min: Option<f64>,
        /// Number of mesh sizes in the sweep.
        #[arg(long)]
        h_count: Option<usize>,
    },
    /// Spectral distances, gaps and spectral projections.
    Spectrum(Common),
    /// Eigenvalue tracking inside a window.
    Eigen(Common),
    /// Commutator rate of the discretization with the potential.
    Commutator(Common),
    /// Growth of the error norm as the spectral parameter nears the axis.
    Blowup(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = Output::Csv)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Csv,
    Json,
    Summary,
    None,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Identity(c)
            | Command::Spectrum(c)
            | Command::Eigen(c)
            | Command::Commutator(c)
            | Command::Blowup(c) => c,
            Command::Rate { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Identity(_) => "identity",
            Command::Rate { .. } => "rate",
            Command::Spectrum(_) => "spectrum",
            Command::Eigen(_) => "eigen",
            Command::Commutator(_) => "commutator",
            Command::Blowup(_) => "blowup",
        }
    }

    fn accepts(&self, kind: ExperimentKind) -> bool {
        use ExperimentKind::*;
        match self {
            Command::Identity(_) => kind == IdentitySuite,
            Command::Rate { .. } => matches!(kind, RateFree | RatePotential),
            Command::Spectrum(_) => matches!(kind, SpectrumDistance | LocalSpectrum | Gap | Projection),
            Command::Eigen(_) => kind == EigenTrack,
            Command::Commutator(_) => kind == Commutator,
            Command::Blowup(_) => kind == YBlowup,
        }
    }
}

fn load(command: &Command) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(&command.common().config)?;
    if !command.accepts(cfg.kind) {
        return Err(Error::Configuration(format!(
            "`{}` cannot run a {} experiment",
            command.name(),
            cfg.kind.name()
        )));
    }
    if let Command::Rate { h_min, h_count, .. } = command {
        cfg.override_h(*h_min, *h_count)?;
    }
    Ok(cfg)
}

fn summary(report: &Report) -> String {
    let mut out = format!("{} ({}, {}): {}\n", report.experiment, report.kind.name(), report.symbol, report.verdict);
    if let Some(r) = &report.rate {
        out += &format!(
            "  slope {:.4} vs predicted {:.4} (tol {}), R² {:.4}: {}\n",
            r.slope, r.gamma, r.tolerance, r.r2, r.verdict
        );
    }
    for c in &report.checks {
        out += &format!("  {}: {:.3e} (limit {:.3e}) {}\n", c.name, c.value, c.threshold, c.verdict);
    }
    out
}

fn execute(command: &Command) -> Result<Report, Error> {
    let cfg = load(command)?;
    log::info!("running {} ({} mesh sizes)", cfg.experiment, cfg.h.len());
    let report = run(&cfg)?;
    match command.common().output {
        Output::Csv => print!("{}", report.to_csv_string()?),
        Output::Json => println!("{}", report.to_json_string()?),
        Output::Summary => print!("{}", summary(&report)),
        Output::None => {}
    }
    Ok(report)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(report) => {
            if !matches!(cli.command.common().output, Output::Summary) {
                eprint!("{}", summary(&report));
            }
            ExitCode::from(1)
        }
        Err(e) if e.is_configuration() => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
