//! Named verification battery: every quantitative claim the library rests
//! on, run as a deterministic, machine-readable sequence of checks.
//!
//! Individual check failures never abort the battery; infrastructure
//! errors (e.g. quadrature divergence) are recorded as failed checks with
//! a diagnostic string. Reports contain no timestamps and are reproducible
//! bit for bit for identical inputs.

use crate::error::Result;
use crate::gk::{
    build_state, evolve, label_continuity_check, normalization_sq, overlap,
    resolution_of_unity_check, GkMoments,
};
use crate::model::{
    energy, ode_residual, orthonormality_deviation, shifted_spectrum, ModelParams,
    SpectrumTable,
};
use crate::stats::{
    g2, mandel_q, mean_n, photon_distribution_full, statistics_report, wigner_grid,
    WignerKernel,
};
use num_complex::Complex64;
use serde::Serialize;

/// How a measured value is compared against its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Error-type check: passes when measured <= threshold.
    Le,
    /// Sign-type check: passes when measured < threshold (strict).
    Lt,
    /// Scaling-type check: passes when measured >= threshold.
    Ge,
}

/// One named check with its measured value and verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Stable slug identifying the verified claim.
    pub claim_ref: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub passed: bool,
    /// Present only when the check could not be evaluated.
    pub diagnostic: Option<String>,
}

/// Verbosity/cost tier of the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BatteryLevel {
    /// Sub-minute tier.
    Fast,
    /// Extended quadrature orders and denser grids.
    Full,
}

/// Deliberate-corruption hooks for testing the battery's sensitivity.
#[derive(Debug, Clone, Copy, Default)]
pub struct BatteryOptions {
    /// Inject an energy defect (level, delta) into the spectrum table used
    /// by the consistency check; the battery must detect it.
    pub corrupt_spectrum: Option<(usize, f64)>,
}

/// Full battery outcome.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub params: ModelParams,
    pub level: BatteryLevel,
    pub checks: Vec<CheckResult>,
    pub overall: bool,
}

struct Battery {
    checks: Vec<CheckResult>,
}

impl Battery {
    fn record(
        &mut self,
        name: &str,
        claim_ref: &str,
        threshold: f64,
        comparison: Comparison,
        body: impl FnOnce() -> Result<f64>,
    ) {
        let (measured, diagnostic) = match body() {
            Ok(v) => (v, None),
            Err(e) => (f64::MAX, Some(e.to_string())),
        };
        let passed = diagnostic.is_none()
            && match comparison {
                Comparison::Le => measured <= threshold,
                Comparison::Lt => measured < threshold,
                Comparison::Ge => measured >= threshold,
            };
        self.checks.push(CheckResult {
            name: name.to_string(),
            claim_ref: claim_ref.to_string(),
            measured,
            threshold,
            comparison,
            passed,
            diagnostic,
        });
    }
}

/// Run the battery with default options.
pub fn run_battery(params: &ModelParams, level: BatteryLevel) -> VerificationReport {
    run_battery_with(params, level, &BatteryOptions::default())
}

/// Run the battery; `options` can inject deliberate defects (negative
/// controls for the battery itself).
pub fn run_battery_with(
    params: &ModelParams,
    level: BatteryLevel,
    options: &BatteryOptions,
) -> VerificationReport {
    let mut battery = Battery { checks: Vec::new() };
    let d = params.derive();
    let full = level == BatteryLevel::Full;

    // 1. Shifted spectrum agrees with its quadratic closed form.
    battery.record(
        "spectrum-consistency",
        "shifted-spectrum-closed-form",
        1e-12,
        Comparison::Le,
        || {
            let mut table = shifted_spectrum(params, 100);
            if let Some((n, delta)) = options.corrupt_spectrum {
                table = table.with_level_shift(n, delta);
            }
            Ok(spectrum_deviation(&table))
        },
    );

    // 2. Levels collapse to the evenly spaced ladder as the deformation
    // vanishes (probed at a fixed internal deformation).
    battery.record(
        "undeformed-energy-recovery",
        "energy-undeformed-limit",
        1e-8,
        Comparison::Le,
        || {
            let small = ModelParams::new(params.m0(), params.omega(), params.hbar(), 1e-10)?;
            let mut worst = 0.0_f64;
            for n in 0..=10_usize {
                worst = worst.max((energy(&small, n) - (n as f64 + 0.5)).abs());
            }
            Ok(worst)
        },
    );

    // 3. Bound states are orthonormal under the angle-variable measure.
    battery.record(
        "eigenfunction-orthonormality",
        "bound-state-orthonormality",
        1e-8,
        Comparison::Le,
        || orthonormality_deviation(params, 12, if full { 600 } else { 400 }),
    );

    // 4. Each bound state solves its differential equation.
    battery.record(
        "ode-residual",
        "bound-state-equation-residual",
        1e-4,
        Comparison::Le,
        || {
            let npts = 4001;
            let grid: Vec<f64> = (0..npts)
                .map(|i| -10.0 + 20.0 * i as f64 / (npts - 1) as f64)
                .collect();
            let mut worst = 0.0_f64;
            for n in 0..=10_usize {
                let r = ode_residual(params, n, &grid)?;
                worst = worst.max(r.residual);
            }
            Ok(worst)
        },
    );

    // 5. States have unit norm across the action range.
    battery.record(
        "gk-normalizability",
        "state-normalizability",
        1e-12,
        Comparison::Le,
        || {
            let mut worst = 0.0_f64;
            for &j in &[0.1, 1.0, 5.0, 20.0] {
                let m = GkMoments::adaptive(d.a, d.b, j)?;
                let s = build_state(&m, j, 0.4)?;
                worst = worst.max((s.norm_check() - 1.0).abs());
                let _ = normalization_sq(&m, j)?;
            }
            Ok(worst)
        },
    );

    // 6. Label continuity: squared distance falls at least 5x per decade
    // of the perturbation.
    battery.record(
        "gk-label-continuity",
        "state-label-continuity",
        5.0,
        Comparison::Ge,
        || {
            let m = GkMoments::adaptive(d.a, d.b, 2.0)?;
            let d2 = label_continuity_check(&m, 1.0, 0.0, 1e-2)?;
            let d3 = label_continuity_check(&m, 1.0, 0.0, 1e-3)?;
            let d4 = label_continuity_check(&m, 1.0, 0.0, 1e-4)?;
            Ok((d2 / d3).min(d3 / d4))
        },
    );

    // 7. The Bessel-type weight reproduces the spectrum moments.
    battery.record(
        "gk-unity-moments",
        "resolution-of-unity-moments",
        1e-5,
        Comparison::Le,
        || {
            let m = GkMoments::from_coefficients(d.a, d.b, 2)?;
            let errs = resolution_of_unity_check(&m, if full { 10 } else { 5 })?;
            Ok(errs.iter().fold(0.0_f64, |acc, e| acc.max(e.abs())))
        },
    );

    // 8. Evolution only rotates phases; round trips are exact.
    battery.record(
        "gk-temporal-stability",
        "state-temporal-stability",
        1e-12,
        Comparison::Le,
        || {
            let m = GkMoments::adaptive(d.a, d.b, 5.0)?;
            let s = build_state(&m, 5.0, 0.3)?;
            let forward = evolve(&s, 1.0, 1.7);
            let mut bits_differ = false;
            for n in 0..=s.n_max() {
                if forward.magnitude(n).to_bits() != s.magnitude(n).to_bits() {
                    bits_differ = true;
                }
            }
            let back = evolve(&forward, 1.0, -1.7);
            let ov = overlap(&back, &s)?;
            let err = (ov - Complex64::new(1.0, 0.0)).norm();
            Ok(if bits_differ { 1.0 } else { err })
        },
    );

    // 9. The photon distribution is a probability distribution.
    battery.record(
        "pn-normalization",
        "photon-distribution-normalization",
        1e-10,
        Comparison::Le,
        || {
            let mut worst = 0.0_f64;
            for &j in &[0.5, 5.0, 20.0] {
                let m = GkMoments::adaptive(d.a, d.b, j)?;
                let p = photon_distribution_full(&m, j)?;
                worst = worst.max((p.iter().sum::<f64>() - 1.0).abs());
            }
            Ok(worst)
        },
    );

    // 10. Closed-form statistics equal their series counterparts.
    battery.record(
        "stats-dual-path",
        "statistics-closed-vs-series",
        1e-9,
        Comparison::Le,
        || {
            let mut worst = 0.0_f64;
            for &j in &[0.5, 1.0, 5.0, 10.0, 20.0] {
                let m = GkMoments::adaptive(d.a, d.b, j)?;
                let report = statistics_report(&m, params.alpha(), j)?;
                worst = worst.max(report.residual_series_vs_closed);
            }
            Ok(worst)
        },
    );

    // 11. The two arrangements of the Mandel parameter agree.
    battery.record(
        "mandel-identity",
        "mandel-from-correlation",
        1e-10,
        Comparison::Le,
        || {
            let mut worst = 0.0_f64;
            for &j in &[0.5, 5.0, 15.0] {
                let m = GkMoments::adaptive(d.a, d.b, j)?;
                let q = mandel_q(&m, j)?;
                let alt = mean_n(&m, j)? * (g2(&m, j)? - 1.0);
                worst = worst.max((q - alt).abs() / q.abs().max(f64::MIN_POSITIVE));
            }
            Ok(worst)
        },
    );

    // 12. Statistics are strictly sub-Poissonian for any deformation.
    battery.record(
        "sub-poissonian-signs",
        "sub-poissonian-statistics",
        0.0,
        Comparison::Lt,
        || {
            let mut worst = f64::NEG_INFINITY;
            for &j in &[0.5, 2.0, 8.0, 20.0] {
                let m = GkMoments::adaptive(d.a, d.b, j)?;
                worst = worst.max(mandel_q(&m, j)?);
                worst = worst.max(g2(&m, j)? - 1.0);
            }
            Ok(worst)
        },
    );

    // 13. Poisson statistics re-emerge as the deformation vanishes
    // (fixed internal deformation).
    battery.record(
        "poisson-limit-stats",
        "undeformed-limit-statistics",
        1e-5,
        Comparison::Le,
        || {
            let dd = ModelParams::new(params.m0(), params.omega(), params.hbar(), 1e-8)?
                .derive();
            let j = 5.0;
            let m = GkMoments::adaptive(dd.a, dd.b, j)?;
            Ok((g2(&m, j)? - 1.0).abs().max(mandel_q(&m, j)?.abs()))
        },
    );

    // 14. ... and the distribution itself becomes Poissonian.
    battery.record(
        "poisson-limit-distribution",
        "undeformed-limit-distribution",
        1e-6,
        Comparison::Le,
        || {
            let dd = ModelParams::new(params.m0(), params.omega(), params.hbar(), 1e-8)?
                .derive();
            let j: f64 = 5.0;
            let m = GkMoments::adaptive(dd.a, dd.b, j)?;
            let p = photon_distribution_full(&m, j)?;
            let mut worst = 0.0_f64;
            let mut ln_fact = 0.0_f64;
            for n in 0..=30_usize {
                if n > 0 {
                    ln_fact += (n as f64).ln();
                }
                let poisson = (-j + n as f64 * j.ln() - ln_fact).exp();
                worst = worst.max((p[n] - poisson).abs());
            }
            Ok(worst)
        },
    );

    // 15. The alternating-series phase-space function turns negative.
    battery.record(
        "wigner-negativity",
        "phase-space-negativity",
        0.0,
        Comparison::Lt,
        || {
            let dw = ModelParams::new(params.m0(), params.omega(), params.hbar(), 0.1)?
                .derive();
            let m = GkMoments::adaptive(dw.a, dw.b, 1.0)?;
            let s = build_state(&m, 1.0, 0.0)?;
            let npts = if full { 201 } else { 101 };
            let grid = wigner_grid(&s, 3.0, npts, WignerKernel::Paper)?;
            Ok(grid.min_value)
        },
    );

    let overall = battery.checks.iter().all(|c| c.passed);
    VerificationReport {
        schema_version: "1".to_string(),
        params: *params,
        level,
        checks: battery.checks,
        overall,
    }
}

/// Worst relative deviation of the stored shifted levels from the
/// quadratic closed form a n^2 + b n.
fn spectrum_deviation(table: &SpectrumTable) -> f64 {
    let mut worst = 0.0_f64;
    for n in 0..=table.n_max() {
        let nf = n as f64;
        let closed = table.a() * nf * nf + table.b() * nf;
        let dev = (table.shifted()[n] - closed).abs() / closed.max(1.0);
        worst = worst.max(dev);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_battery_passes_at_default_params() {
        let params = ModelParams::default();
        let report = run_battery(&params, BatteryLevel::Fast);
        for check in &report.checks {
            assert!(
                check.passed,
                "{} failed: measured={:e} threshold={:e} diagnostic={:?}",
                check.name, check.measured, check.threshold, check.diagnostic
            );
        }
        assert!(report.overall);
        assert_eq!(report.schema_version, "1");
        assert_eq!(report.checks.len(), 15);
    }

    #[test]
    fn battery_near_undeformed_limit() {
        let params = ModelParams::with_alpha(1e-8).unwrap();
        let report = run_battery(&params, BatteryLevel::Fast);
        assert_eq!(report.checks.len(), 15);
        let get = |name: &str| report.checks.iter().find(|c| c.name == name).unwrap();
        // The limit-recovery checks must come in far below their thresholds.
        assert!(get("poisson-limit-stats").passed);
        assert!(get("poisson-limit-stats").measured < 1e-6);
        assert!(get("poisson-limit-distribution").passed);
        assert!(get("poisson-limit-distribution").measured < 1e-6);
        // Algebraic checks are deformation-independent. (stats-dual-path is
        // not on this list: Q vanishes in this limit and its relative
        // comparison amplifies rounding noise past 1e-9.)
        for name in [
            "spectrum-consistency",
            "gk-normalizability",
            "gk-temporal-stability",
            "pn-normalization",
            "wigner-negativity",
        ] {
            assert!(get(name).passed, "{:?}", get(name));
        }
        // The weight-moment quadrature rightfully refuses this regime
        // (Bessel order b/a ~ 2e8); it must surface as a diagnosed failure,
        // not a hang or a panic.
        let unity = get("gk-unity-moments");
        assert!(!unity.passed);
        assert!(unity.diagnostic.is_some());
    }

    #[test]
    fn corrupt_spectrum_is_detected() {
        let params = ModelParams::default();
        let options = BatteryOptions {
            corrupt_spectrum: Some((1, 0.1)),
        };
        let report = run_battery_with(&params, BatteryLevel::Fast, &options);
        let spectrum_check = report
            .checks
            .iter()
            .find(|c| c.name == "spectrum-consistency")
            .unwrap();
        assert!(!spectrum_check.passed);
        assert!(!report.overall);
        // Only the consistency check is poisoned by the hook.
        for check in &report.checks {
            if check.name != "spectrum-consistency" {
                assert!(check.passed, "{} unexpectedly failed", check.name);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let params = ModelParams::default();
        let a = run_battery(&params, BatteryLevel::Fast);
        let b = run_battery(&params, BatteryLevel::Fast);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn full_battery_passes_and_extends_orders() {
        let params = ModelParams::default();
        let report = run_battery(&params, BatteryLevel::Full);
        assert!(report.overall, "{:#?}", report.checks);
        assert_eq!(report.level, BatteryLevel::Full);
    }
}
