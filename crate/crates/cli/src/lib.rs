//! `pdm-gk`: command-line front end for the position-dependent-mass
//! oscillator library. Emits deterministic CSV tables and JSON documents
//! (identical invocations are byte-identical), plus `.meta.json` plot
//! sidecars when writing figure data to files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical non-convergence.

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use config::GridSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICS: i32 = 3;

/// Command-level failure, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerics(pdm_gk::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Numerics(_) => EXIT_NUMERICS,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numerics(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<pdm_gk::Error> for CliError {
    fn from(e: pdm_gk::Error) -> Self {
        CliError::Numerics(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    /// Closed-form alternating series in |z| for a coherent state.
    Paper,
    /// Displaced-parity expansion over number-basis matrix elements.
    Fock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

/// `n:delta` pair naming a level and the energy shift to inject.
#[derive(Debug, Clone, Copy)]
pub struct CorruptSpec {
    pub n: usize,
    pub delta: f64,
}

impl FromStr for CorruptSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (n, delta) = s
            .split_once(':')
            .ok_or_else(|| format!("expected n:delta, got {s:?}"))?;
        let n: usize = n.parse().map_err(|_| format!("bad level index {n:?}"))?;
        let delta: f64 = delta.parse().map_err(|_| format!("bad shift {delta:?}"))?;
        if !delta.is_finite() {
            return Err(format!("shift must be finite, got {delta}"));
        }
        Ok(Self { n, delta })
    }
}

/// Options shared by every subcommand (flags override `--config` overrides
/// built-in defaults).
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Deformation parameter in (0, 1); repeat for multi-curve tables.
    #[arg(long, global = true, action = ArgAction::Append, value_name = "R")]
    pub alpha: Vec<f64>,

    /// Action label of the coherent state (J >= 0).
    #[arg(long = "J", global = true, value_name = "R")]
    pub j: Option<f64>,

    /// Phase label of the coherent state.
    #[arg(long, global = true, value_name = "R")]
    pub gamma: Option<f64>,

    /// Highest level index (spectrum) or minimum row count (pn).
    #[arg(long = "n-max", global = true, value_name = "N")]
    pub n_max: Option<usize>,

    /// Sample grid, written lo:hi:npts.
    #[arg(long, global = true, value_name = "LO:HI:NPTS", allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,

    /// Wigner kernel.
    #[arg(long, global = true, value_enum, value_name = "NAME")]
    pub kernel: Option<KernelArg>,

    /// Table output format (grids and reports are always JSON).
    #[arg(long, global = true, value_enum, value_name = "NAME")]
    pub format: Option<FormatArg>,

    /// JSON config file supplying defaults for the options above.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the document here instead of stdout (figure commands also get
    /// a <PATH>.meta.json plot-metadata sidecar).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PnArgs {
    /// Solve for the action J that places the distribution peak at this level.
    #[arg(long = "peak-at", value_name = "N", conflicts_with = "j")]
    pub peak_at: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Battery tier: fast stays under a minute, full tightens quadratures.
    #[arg(long, value_enum, default_value = "fast")]
    pub level: LevelArg,

    /// Negative control: inject an n:delta energy defect and expect the
    /// battery to flag it.
    #[arg(long = "corrupt-spectrum", value_name = "N:DELTA")]
    pub corrupt_spectrum: Option<CorruptSpec>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels E_n and shifted levels e_n per deformation value.
    Spectrum,
    /// Effective mass profile m(x) per deformation value.
    Mass,
    /// Occupation distribution P_n of a coherent state.
    Pn(PnArgs),
    /// Photon statistics g2(0), Mandel Q, mean N over an action grid.
    Stats,
    /// Resolution-of-unity weight function W(J) per deformation value.
    Weight,
    /// Wigner quasi-distribution on a square phase-space window.
    Wigner,
    /// Run the self-verification battery and emit its JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Parser)]
#[command(
    name = "pdm-gk",
    version,
    about = "Position-dependent-mass oscillator: spectra, coherent states, photon statistics, Wigner maps, and self-verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Parse the real command line and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Run a parsed invocation (separated from `run` for tests).
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = config::resolve(&cli.common)?;
    let out = match &cli.command {
        Command::Spectrum => commands::cmd_spectrum(&cfg)?,
        Command::Mass => commands::cmd_mass(&cfg)?,
        Command::Pn(args) => commands::cmd_pn(&cfg, args)?,
        Command::Stats => commands::cmd_stats(&cfg)?,
        Command::Weight => commands::cmd_weight(&cfg)?,
        Command::Wigner => commands::cmd_wigner(&cfg)?,
        Command::Verify(args) => commands::cmd_verify(&cfg, args)?,
    };
    output::emit(&cfg, out)
}
