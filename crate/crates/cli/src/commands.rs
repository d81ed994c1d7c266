//! One function per subcommand; each builds a deterministic document from
//! the resolved configuration.

use pdm_gk::gk::{build_state, resolution_of_unity_check, weight_function, GkMoments};
use pdm_gk::model::{mass_profile, shifted_spectrum, ModelParams};
use pdm_gk::stats::{
    g2, mandel_q, mean_n, photon_distribution_full, solve_peak_j, wigner_grid, WignerKernel,
};
use pdm_gk::verify::{run_battery_with, BatteryLevel, BatteryOptions};
use serde_json::Value;

use crate::config::{
    GridSpec, RunConfig, MAX_PEAK_LEVEL, MAX_WIGNER_POINTS, MIN_WIGNER_POINTS,
};
use crate::output::{figure_meta, fmt_float, Cell, CommandOutput, Table};
use crate::{CliError, PnArgs, VerifyArgs};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn moments_for(params: &ModelParams, j: f64) -> Result<GkMoments, CliError> {
    let d = params.derive();
    Ok(GkMoments::adaptive(d.a, d.b, j)?)
}

fn alpha_legend(alphas: &[f64]) -> Vec<String> {
    alphas.iter().map(|a| format!("alpha = {}", fmt_float(*a))).collect()
}

/// Levels E_n and shifted levels e_n = E_n - E_0 per deformation value.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let n_max = cfg.n_max.unwrap_or(10);
    let mut table = Table::new("spectrum", vec!["alpha", "n", "E_n", "e_n"]);
    for (alpha, params) in cfg.alphas.iter().zip(&cfg.params) {
        let spec = shifted_spectrum(params, n_max);
        for n in 0..=n_max {
            table.push_row(vec![
                Cell::Float(*alpha),
                Cell::Int(n as u64),
                Cell::Float(spec.energies()[n]),
                Cell::Float(spec.shifted()[n]),
            ]);
        }
    }
    let meta = figure_meta(
        "spectrum",
        "level index n",
        "energy E_n (units of hbar*omega)",
        alpha_legend(&cfg.alphas),
    );
    Ok(CommandOutput::table(cfg, table)?.with_meta(meta))
}

/// Effective mass profile m(x) per deformation value.
pub fn cmd_mass(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let grid = cfg.grid.unwrap_or(GridSpec {
        lo: 0.0,
        hi: 0.5,
        npts: 51,
    });
    let mut table = Table::new("mass", vec!["alpha", "x", "m"]);
    for (alpha, params) in cfg.alphas.iter().zip(&cfg.params) {
        for x in grid.points() {
            table.push_row(vec![
                Cell::Float(*alpha),
                Cell::Float(x),
                Cell::Float(mass_profile(params, x)),
            ]);
        }
    }
    let meta = figure_meta("mass", "position x", "mass m(x)", alpha_legend(&cfg.alphas));
    Ok(CommandOutput::table(cfg, table)?.with_meta(meta))
}

/// Occupation distribution P_n of a coherent state, tail-complete so the
/// probability footer always sums to one within the state's tail bound.
pub fn cmd_pn(cfg: &RunConfig, args: &PnArgs) -> Result<CommandOutput, CliError> {
    // --peak-at and --J conflict at parse time; a config-file action is
    // simply superseded when --peak-at is given.
    if let Some(n_star) = args.peak_at {
        if n_star > MAX_PEAK_LEVEL {
            return Err(usage(format!(
                "--peak-at {n_star} exceeds the supported maximum {MAX_PEAK_LEVEL}"
            )));
        }
    }
    let mut table = Table::new("pn", vec!["alpha", "n", "P_n"]);
    let mut legend = Vec::new();
    for (alpha, params) in cfg.alphas.iter().zip(&cfg.params) {
        let (moments, j) = match args.peak_at {
            Some(n_star) => {
                let d = params.derive();
                let nf = (n_star + 1) as f64;
                // Upper bracket e_{n*+1} is available in closed form, so the
                // moment table can be sized before the action is known.
                let j_hi = d.a * nf * nf + d.b * nf;
                let probe = GkMoments::adaptive(d.a, d.b, j_hi)?;
                let j = solve_peak_j(&probe, n_star)?;
                (moments_for(params, j)?, j)
            }
            None => {
                let j = cfg.j.unwrap_or(1.0);
                (moments_for(params, j)?, j)
            }
        };
        let mut p = photon_distribution_full(&moments, j)?;
        if let Some(n_max) = cfg.n_max {
            while p.len() < n_max + 1 {
                p.push(0.0);
            }
        }
        let total: f64 = p.iter().sum();
        for (n, pn) in p.iter().enumerate() {
            table.push_row(vec![
                Cell::Float(*alpha),
                Cell::Int(n as u64),
                Cell::Float(*pn),
            ]);
        }
        let tag = fmt_float(*alpha);
        table.push_footer(format!("J[alpha={tag}]"), j);
        table.push_footer(format!("sum_P[alpha={tag}]"), total);
        legend.push(format!("alpha = {tag}, J = {}", fmt_float(j)));
    }
    let meta = figure_meta("pn", "level index n", "probability P_n", legend);
    Ok(CommandOutput::table(cfg, table)?.with_meta(meta))
}

/// Photon statistics g2(0), Mandel Q, and mean occupation over an action grid.
pub fn cmd_stats(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let grid = cfg.grid.unwrap_or(GridSpec {
        lo: 0.5,
        hi: 20.0,
        npts: 40,
    });
    if grid.lo < 0.0 {
        return Err(usage(format!("the action grid must be non-negative, got {grid}")));
    }
    let mut table = Table::new("stats", vec!["alpha", "J", "g2", "Q", "mean_N"]);
    for (alpha, params) in cfg.alphas.iter().zip(&cfg.params) {
        for j in grid.points() {
            let moments = moments_for(params, j)?;
            table.push_row(vec![
                Cell::Float(*alpha),
                Cell::Float(j),
                Cell::Float(g2(&moments, j)?),
                Cell::Float(mandel_q(&moments, j)?),
                Cell::Float(mean_n(&moments, j)?),
            ]);
        }
    }
    let meta = figure_meta(
        "stats",
        "action J",
        "g2(0), Mandel Q, mean N",
        alpha_legend(&cfg.alphas),
    );
    Ok(CommandOutput::table(cfg, table)?.with_meta(meta))
}

/// Resolution-of-unity weight W(J) per deformation value, with the zeroth
/// quadrature moment of the reduced weight as a footer (must be 1).
pub fn cmd_weight(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let grid = cfg.grid.unwrap_or(GridSpec {
        lo: 0.0,
        hi: 5.0,
        npts: 51,
    });
    if grid.lo < 0.0 {
        return Err(usage(format!("the action grid must be non-negative, got {grid}")));
    }
    let mut table = Table::new("weight", vec!["alpha", "J", "W"]);
    for (alpha, params) in cfg.alphas.iter().zip(&cfg.params) {
        let moments = moments_for(params, 1.0)?;
        let weight = weight_function(&moments)?;
        for j in grid.points() {
            table.push_row(vec![
                Cell::Float(*alpha),
                Cell::Float(j),
                Cell::Float(weight.eval(j)?),
            ]);
        }
        let unity = 1.0 + resolution_of_unity_check(&moments, 0)?[0];
        table.push_footer(format!("unity_moment_n0[alpha={}]", fmt_float(*alpha)), unity);
    }
    let meta = figure_meta(
        "weight",
        "action J",
        "weight W(J)",
        alpha_legend(&cfg.alphas),
    );
    Ok(CommandOutput::table(cfg, table)?.with_meta(meta))
}

/// Wigner quasi-distribution of one coherent state on a square window.
pub fn cmd_wigner(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    if matches!(cfg.format, Some(crate::FormatArg::Csv)) {
        return Err(usage("this command emits JSON only; drop --format csv"));
    }
    if cfg.alphas.len() != 1 {
        return Err(usage("wigner maps a single state; pass exactly one --alpha"));
    }
    let grid = cfg.grid.unwrap_or(GridSpec {
        lo: -3.0,
        hi: 3.0,
        npts: 101,
    });
    if grid.lo != -grid.hi {
        return Err(usage(format!(
            "the phase-space window must be symmetric (lo = -hi), got {grid}"
        )));
    }
    if grid.npts < MIN_WIGNER_POINTS || grid.npts > MAX_WIGNER_POINTS {
        return Err(usage(format!(
            "wigner grids support {MIN_WIGNER_POINTS}..={MAX_WIGNER_POINTS} points per axis, got {}",
            grid.npts
        )));
    }
    let alpha = cfg.alphas[0];
    let j = cfg.j.unwrap_or(1.0);
    let moments = moments_for(&cfg.params[0], j)?;
    let state = build_state(&moments, j, cfg.gamma)?;
    let map = wigner_grid(&state, grid.hi, grid.npts, cfg.kernel)?;
    let kernel_name = match cfg.kernel {
        WignerKernel::Paper => "paper",
        WignerKernel::Fock => "fock",
    };

    let number = |v: f64| {
        serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
    };
    let axis = |values: &[f64]| {
        Value::from(values.iter().map(|v| number(*v)).collect::<Vec<_>>())
    };
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), Value::from("1"));
    doc.insert("command".into(), Value::from("wigner"));
    doc.insert("alpha".into(), number(alpha));
    doc.insert("J".into(), number(j));
    doc.insert("gamma".into(), number(cfg.gamma));
    doc.insert("kernel".into(), Value::from(kernel_name));
    doc.insert("half_width".into(), number(grid.hi));
    doc.insert("npts".into(), Value::from(grid.npts as u64));
    doc.insert("re_axis".into(), axis(&map.re_axis));
    doc.insert("im_axis".into(), axis(&map.im_axis));
    doc.insert("values".into(), axis(&map.values));
    doc.insert("min_value".into(), number(map.min_value));
    doc.insert("negative_fraction".into(), number(map.negative_fraction));
    doc.insert("window_integral".into(), number(map.cell_integral()));

    let meta = figure_meta(
        "wigner",
        "Re z",
        "Im z",
        vec![
            format!("alpha = {}", fmt_float(alpha)),
            format!("J = {}", fmt_float(j)),
            format!("gamma = {}", fmt_float(cfg.gamma)),
            format!("kernel = {kernel_name}"),
        ],
    );
    Ok(CommandOutput::json(cfg, &Value::Object(doc))?.with_meta(meta))
}

/// Self-verification battery; exit code 1 when any check fails.
pub fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<CommandOutput, CliError> {
    if matches!(cfg.format, Some(crate::FormatArg::Csv)) {
        return Err(usage("this command emits JSON only; drop --format csv"));
    }
    if cfg.alphas.len() != 1 {
        return Err(usage("verify runs on a single model; pass exactly one --alpha"));
    }
    let level = match args.level {
        crate::LevelArg::Fast => BatteryLevel::Fast,
        crate::LevelArg::Full => BatteryLevel::Full,
    };
    let options = BatteryOptions {
        corrupt_spectrum: args.corrupt_spectrum.map(|c| (c.n, c.delta)),
    };
    let report = run_battery_with(&cfg.params[0], level, &options);
    let doc = serde_json::to_value(&report)
        .map_err(|e| CliError::Usage(format!("report serialization failed: {e}")))?;
    let exit = if report.overall { 0 } else { 1 };
    Ok(CommandOutput::json(cfg, &doc)?.with_exit(exit))
}
