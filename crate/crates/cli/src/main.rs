mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use qplame::verify::Suite;
use qplame::Geometry;
use std::path::PathBuf;
use std::process::ExitCode;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "qplame",
    version,
    about = "Quasi-periodic elastic Green's tensors, grating scattering and phaseless data"
)]
struct Cli {
    /// JSON run configuration; a built-in default is used when absent
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the geometry of the config
    #[arg(long, global = true)]
    geometry: Option<Geometry>,
    /// Worker threads for batch work
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed of the randomized suites; recorded in the report
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Green's tensor on the configured grid, as CSV
    Eval,
    /// Run verification suites; exit 1 when a check fails
    Verify {
        #[arg(long)]
        suite: Option<Suite>,
    },
    /// Rigid grating solve: density, Rayleigh coefficients, energy balance
    Solve2d,
    /// Extract coefficients from samples or evaluate an expansion
    Rayleigh {
        #[arg(value_enum)]
        action: RayleighAction,
    },
    /// Synthesize phaseless datasets or compare them
    Phaseless {
        #[arg(value_enum)]
        action: PhaselessAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RayleighAction {
    Extract,
    Eval,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhaselessAction {
    Synth,
    Check,
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Domain(String),
    Io(String),
}

impl Failure {
    fn context(self, what: &str) -> Self {
        match self {
            Failure::Config(m) => Failure::Config(format!("{what}: {m}")),
            Failure::Domain(m) => Failure::Domain(format!("{what}: {m}")),
            Failure::Io(m) => Failure::Io(format!("{what}: {m}")),
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Domain(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Domain(m) => write!(f, "domain error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<qplame::Error> for Failure {
    fn from(e: qplame::Error) -> Self {
        use qplame::Error as E;
        match e {
            E::InvalidMedium(_) | E::InvalidInput(_) | E::GridMismatch(_) => Failure::Config(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("--threads: {e}")))?;
    }
    let (raw, base) = RunConfig::load(cli.config.as_deref())?;
    let cfg = raw.resolve(cli.geometry, cli.seed)?;
    let outcome = match cli.cmd {
        Cmd::Eval => commands::eval(&cfg)?,
        Cmd::Verify { suite } => commands::verify(&cfg, suite, cli.geometry)?,
        Cmd::Solve2d => commands::solve2d(&cfg)?,
        Cmd::Rayleigh {
            action: RayleighAction::Extract,
        } => commands::rayleigh_extract(&cfg, &base)?,
        Cmd::Rayleigh {
            action: RayleighAction::Eval,
        } => commands::rayleigh_eval(&cfg, &base)?,
        Cmd::Phaseless {
            action: PhaselessAction::Synth,
        } => commands::phaseless_synth(&cfg)?,
        Cmd::Phaseless {
            action: PhaselessAction::Check,
        } => commands::phaseless_check(&cfg, &base)?,
    };
    output::emit(cli.out.as_deref(), &outcome.bytes)?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("numerical check failed; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
