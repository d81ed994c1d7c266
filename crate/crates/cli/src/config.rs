//! Option resolution: command-line flags override a JSON config file, which
//! overrides built-in defaults (m0 = omega = hbar = 1, alpha = 0.2).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use pdm_gk::model::ModelParams;
use pdm_gk::stats::WignerKernel;
use serde::Deserialize;

use crate::{CliError, CommonArgs, FormatArg, KernelArg};

/// Hard ceilings keeping table/grid requests at desk scale. Violations are
/// usage errors, not numerical failures.
pub const MAX_N_MAX: usize = 10_000;
pub const MAX_TABLE_POINTS: usize = 100_001;
pub const MAX_WIGNER_POINTS: usize = 1_001;
pub const MIN_WIGNER_POINTS: usize = 16;
pub const MAX_PEAK_LEVEL: usize = 300;

/// A uniform sample grid written as `lo:hi:npts`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub npts: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, npts: usize) -> Result<Self, String> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(format!("grid endpoints must be finite, got {lo}:{hi}"));
        }
        if lo >= hi {
            return Err(format!("grid needs lo < hi, got {lo}:{hi}"));
        }
        if npts < 2 {
            return Err(format!("grid needs at least 2 points, got {npts}"));
        }
        if npts > MAX_TABLE_POINTS {
            return Err(format!(
                "grid of {npts} points exceeds the supported maximum {MAX_TABLE_POINTS}"
            ));
        }
        Ok(Self { lo, hi, npts })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.npts - 1) as f64;
        (0..self.npts)
            .map(|i| self.lo + step * i as f64)
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:npts, got {s:?}"));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad grid lower bound {:?}", parts[0]))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad grid upper bound {:?}", parts[1]))?;
        let npts: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad grid point count {:?}", parts[2]))?;
        Self::new(lo, hi, npts)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.npts)
    }
}

/// One `alpha` entry or a list of them in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AlphaField {
    One(f64),
    Many(Vec<f64>),
}

/// JSON config file schema; every field optional, flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    m0: Option<f64>,
    omega: Option<f64>,
    hbar: Option<f64>,
    alpha: Option<AlphaField>,
    #[serde(alias = "J")]
    j: Option<f64>,
    gamma: Option<f64>,
    n_max: Option<usize>,
    grid: Option<String>,
    kernel: Option<String>,
    format: Option<String>,
}

/// Fully resolved options shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alphas: Vec<f64>,
    /// Model parameters per alpha, same order as `alphas`.
    pub params: Vec<ModelParams>,
    pub j: Option<f64>,
    pub gamma: f64,
    pub n_max: Option<usize>,
    pub grid: Option<GridSpec>,
    pub kernel: WignerKernel,
    pub format: Option<FormatArg>,
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn resolve(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| usage(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let m0 = file.m0.unwrap_or(1.0);
    let omega = file.omega.unwrap_or(1.0);
    let hbar = file.hbar.unwrap_or(1.0);

    let alphas: Vec<f64> = if !common.alpha.is_empty() {
        common.alpha.clone()
    } else {
        match file.alpha {
            Some(AlphaField::One(a)) => vec![a],
            Some(AlphaField::Many(v)) if !v.is_empty() => v,
            _ => vec![0.2],
        }
    };
    let params = alphas
        .iter()
        .map(|&a| ModelParams::new(m0, omega, hbar, a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;

    let j = common.j.or(file.j);
    if let Some(j) = j {
        if !j.is_finite() || j < 0.0 {
            return Err(usage(format!("J must be a finite non-negative number, got {j}")));
        }
    }
    let gamma = common.gamma.or(file.gamma).unwrap_or(0.0);
    if !gamma.is_finite() {
        return Err(usage(format!("gamma must be finite, got {gamma}")));
    }
    let n_max = common.n_max.or(file.n_max);
    if let Some(n) = n_max {
        if n > MAX_N_MAX {
            return Err(usage(format!(
                "n-max {n} exceeds the supported maximum {MAX_N_MAX}"
            )));
        }
    }
    let grid = match (common.grid, &file.grid) {
        (Some(g), _) => Some(g),
        (None, Some(s)) => Some(GridSpec::from_str(s).map_err(usage)?),
        (None, None) => None,
    };
    let kernel = match (common.kernel, &file.kernel) {
        (Some(k), _) => k.into(),
        (None, Some(s)) => match s.as_str() {
            "paper" => WignerKernel::Paper,
            "fock" => WignerKernel::Fock,
            other => return Err(usage(format!("unknown kernel {other:?} in config"))),
        },
        (None, None) => WignerKernel::Paper,
    };
    let format = match (common.format, &file.format) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => match s.as_str() {
            "csv" => Some(FormatArg::Csv),
            "json" => Some(FormatArg::Json),
            other => return Err(usage(format!("unknown format {other:?} in config"))),
        },
        (None, None) => None,
    };

    Ok(RunConfig {
        alphas,
        params,
        j,
        gamma,
        n_max,
        grid,
        kernel,
        format,
        out: common.out.clone(),
    })
}

impl From<KernelArg> for WignerKernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Paper => WignerKernel::Paper,
            KernelArg::Fock => WignerKernel::Fock,
        }
    }
}
