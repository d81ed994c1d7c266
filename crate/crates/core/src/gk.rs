//! Coherent states labeled by an action J >= 0 and an angle gamma.
//!
//! For a shifted spectrum e_n = a n^2 + b n the states are
//!
//! ```text
//! |J, gamma> = (1 / N(J)) sum_n  J^{n/2} e^{-i gamma e_n} / sqrt(rho_n) |n>,
//! rho_n = e_1 e_2 ... e_n,    N^2(J) = sum_n J^n / rho_n,
//! ```
//!
//! together with the machinery needed to verify the four defining
//! conditions: normalizability, label continuity, resolution of unity
//! (through a weight function built from a modified Bessel function), and
//! temporal stability.

use crate::error::{Error, Result};
use crate::model::SpectrumTable;
use crate::specfun::{bessel_k_ln, hyp0f1_ln, integrate_semi_infinite_tol, log_gamma};
use num_complex::Complex64;

/// Hard cap on the number of retained levels in any state expansion.
pub const STATE_MAX_LEVELS: usize = 2000;

/// Relative tail mass that a truncated expansion must stay below.
pub const STATE_TAIL_BOUND: f64 = 1e-14;

/// Natural log of the adaptive truncation policy: keep terms until
/// J^n / rho_n falls below 1e-18 of the running normalization sum.
const LN_TERM_CUTOFF: f64 = -41.446531673892822; // ln(1e-18)

/// Moment table rho_n = e_1 e_2 ... e_n of the shifted spectrum, stored in
/// log space, with rho_0 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GkMoments {
    a: f64,
    b: f64,
    levels: Vec<f64>,
    log_rho: Vec<f64>,
}

impl GkMoments {
    /// Build the moment table from an explicit spectrum table, using its
    /// stored shifted levels (not the closed form), up to `n_max` entries.
    pub fn from_spectrum(spectrum: &SpectrumTable, n_max: usize) -> Result<Self> {
        if n_max > spectrum.n_max() {
            return Err(Error::Domain(format!(
                "requested n_max {} exceeds the spectrum table length {}",
                n_max,
                spectrum.n_max()
            )));
        }
        let shifted = &spectrum.shifted()[..=n_max];
        for n in 1..=n_max {
            if !(shifted[n] > shifted[n - 1]) {
                return Err(Error::Domain(format!(
                    "spectrum must be strictly increasing; violated at level {n}"
                )));
            }
        }
        Ok(Self::from_levels(
            spectrum.a(),
            spectrum.b(),
            shifted.to_vec(),
        ))
    }

    /// Build the moment table directly from the quadratic coefficients,
    /// e_n = a n^2 + b n; requires a >= 0, b > 0.
    pub fn from_coefficients(a: f64, b: f64, n_max: usize) -> Result<Self> {
        Self::validate_coefficients(a, b)?;
        let levels = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                a * nf * nf + b * nf
            })
            .collect();
        Ok(Self::from_levels(a, b, levels))
    }

    /// Build a moment table whose length is chosen adaptively for action
    /// value `j`: terms J^n / rho_n are kept until they drop below 1e-18 of
    /// the normalization sum, capped at [`STATE_MAX_LEVELS`].
    pub fn adaptive(a: f64, b: f64, j: f64) -> Result<Self> {
        Self::validate_coefficients(a, b)?;
        if !(j >= 0.0) || !j.is_finite() {
            return Err(Error::Domain(format!("J must be non-negative, got {j}")));
        }
        if j == 0.0 {
            return Self::from_coefficients(a, b, 0);
        }
        let ln_j = j.ln();
        let mut ln_term = 0.0_f64;
        let mut ln_peak = 0.0_f64;
        let mut n_max = STATE_MAX_LEVELS;
        let mut reached_cutoff = false;
        for n in 1..=STATE_MAX_LEVELS {
            let nf = n as f64;
            ln_term += ln_j - (a * nf * nf + b * nf).ln();
            ln_peak = ln_peak.max(ln_term);
            if ln_term < ln_peak + LN_TERM_CUTOFF {
                n_max = n;
                reached_cutoff = true;
                break;
            }
        }
        if !reached_cutoff {
            return Err(Error::Truncation {
                tail: (ln_term - ln_peak).exp(),
                threshold: LN_TERM_CUTOFF.exp(),
                n_max: STATE_MAX_LEVELS,
            });
        }
        Self::from_coefficients(a, b, n_max)
    }

    fn validate_coefficients(a: f64, b: f64) -> Result<()> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::Domain(format!(
                "quadratic coefficient a must be non-negative, got {a}"
            )));
        }
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::Domain(format!(
                "linear coefficient b must be positive, got {b}"
            )));
        }
        Ok(())
    }

    fn from_levels(a: f64, b: f64, levels: Vec<f64>) -> Self {
        let mut log_rho = Vec::with_capacity(levels.len());
        log_rho.push(0.0);
        for level in &levels[1..] {
            log_rho.push(log_rho.last().unwrap() + level.ln());
        }
        Self {
            a,
            b,
            levels,
            log_rho,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_max(&self) -> usize {
        self.log_rho.len() - 1
    }

    /// ln rho_n for n <= n_max.
    pub fn log_rho(&self) -> &[f64] {
        &self.log_rho
    }

    /// Shifted level e_n.
    pub fn level(&self, n: usize) -> f64 {
        self.levels[n]
    }

    /// rho_n^{1/n} from the closed form
    /// rho_n = a^n n! Gamma(n + 1 + b/a) / Gamma(1 + b/a) (a > 0), or
    /// rho_n = b^n n! (a = 0); diverges as n grows, which is what makes the
    /// state family defined for every J.
    pub fn moment_growth(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(1.0);
        }
        let nf = n as f64;
        let ln_rho = if self.a > 0.0 {
            let nu = self.b / self.a;
            nf * self.a.ln() + log_gamma(nf + 1.0)? + log_gamma(nf + 1.0 + nu)?
                - log_gamma(1.0 + nu)?
        } else {
            nf * self.b.ln() + log_gamma(nf + 1.0)?
        };
        Ok((ln_rho / nf).exp())
    }
}

/// N^2(J) = sum_n J^n / rho_n, summed in log space over the moment table.
///
/// Errors with `NoConvergence` when the table is too short for the requested
/// action, i.e. the estimated tail past n_max exceeds 1e-14 of the sum.
pub fn normalization_sq(moments: &GkMoments, j: f64) -> Result<f64> {
    Ok(series_terms(moments, j)?.norm_sq)
}

struct SeriesTerms {
    /// ln(J^n / rho_n) for each retained n.
    ln_terms: Vec<f64>,
    norm_sq: f64,
    /// Bound on the neglected relative tail mass.
    tail: f64,
}

fn series_terms(moments: &GkMoments, j: f64) -> Result<SeriesTerms> {
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::Domain(format!("J must be non-negative, got {j}")));
    }
    if j == 0.0 {
        return Ok(SeriesTerms {
            ln_terms: vec![0.0],
            norm_sq: 1.0,
            tail: 0.0,
        });
    }
    let ln_j = j.ln();
    let ln_terms: Vec<f64> = moments
        .log_rho
        .iter()
        .enumerate()
        .map(|(n, &lr)| n as f64 * ln_j - lr)
        .collect();
    let peak = ln_terms.iter().fold(f64::NEG_INFINITY, |m, &t| m.max(t));
    let sum: f64 = ln_terms.iter().map(|&t| (t - peak).exp()).sum();
    let norm_sq = peak.exp() * sum;

    // Geometric tail estimate past the end of the table: the term ratio is
    // J / e_{n+1}, evaluated from the quadratic closed form.
    let n_next = (moments.n_max() + 1) as f64;
    let e_next = moments.a * n_next * n_next + moments.b * n_next;
    let ratio = j / e_next;
    let last_rel = (ln_terms[moments.n_max()] - peak).exp() / sum;
    let tail = if ratio < 1.0 {
        last_rel * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    if !(tail < STATE_TAIL_BOUND) {
        return Err(Error::NoConvergence {
            terms: moments.n_max() + 1,
            last_term: last_rel,
        });
    }
    Ok(SeriesTerms {
        ln_terms,
        norm_sq,
        tail,
    })
}

/// Always infinite for the quadratic spectrum: rho_n^{1/n} grows without
/// bound. The growth is probed at n = 50, 100, 200, 500 as a sanity check;
/// the probes are strictly increasing for every valid (a, b).
pub fn radius_of_convergence(moments: &GkMoments) -> Result<f64> {
    let mut last = 0.0;
    for n in [50_usize, 100, 200, 500] {
        let g = moments.moment_growth(n)?;
        if g <= last {
            return Err(Error::Domain(format!(
                "moment growth failed to increase at n = {n}: {g} <= {last}"
            )));
        }
        last = g;
    }
    Ok(f64::INFINITY)
}

/// A coherent state |J, gamma>.
///
/// Coefficient magnitudes and phases are stored separately: evolution in
/// time only shifts `gamma`, so the magnitudes of an evolved state are
/// bit-identical to the original's.
#[derive(Debug, Clone, PartialEq)]
pub struct GkState {
    a: f64,
    b: f64,
    j: f64,
    gamma: f64,
    levels: Vec<f64>,
    magnitudes: Vec<f64>,
    norm_sq: f64,
    truncation_tail: f64,
}

/// Expand |J, gamma> over the moment table:
/// c_n = J^{n/2} e^{-i gamma e_n} / (N(J) sqrt(rho_n)).
pub fn build_state(moments: &GkMoments, j: f64, gamma: f64) -> Result<GkState> {
    let series = series_terms(moments, j)?;
    let ln_norm_sq = series.norm_sq.ln();
    let magnitudes: Vec<f64> = series
        .ln_terms
        .iter()
        .map(|&t| (0.5 * (t - ln_norm_sq)).exp())
        .collect();
    let levels = moments.levels[..magnitudes.len()].to_vec();
    Ok(GkState {
        a: moments.a,
        b: moments.b,
        j,
        gamma,
        levels,
        magnitudes,
        norm_sq: series.norm_sq,
        truncation_tail: series.tail,
    })
}

impl GkState {
    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    /// Bound on the neglected tail mass sum_{n > n_max} |c_n|^2.
    pub fn truncation_tail(&self) -> f64 {
        self.truncation_tail
    }

    pub fn n_max(&self) -> usize {
        self.magnitudes.len() - 1
    }

    /// |c_n|.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.magnitudes[n]
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Shifted levels e_n backing the phases.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// c_n = |c_n| e^{-i gamma e_n}.
    pub fn coeff(&self, n: usize) -> Complex64 {
        Complex64::from_polar(self.magnitudes[n], -self.gamma * self.levels[n])
    }

    pub fn coeffs(&self) -> Vec<Complex64> {
        (0..self.magnitudes.len()).map(|n| self.coeff(n)).collect()
    }

    /// sum_n |c_n|^2; equals 1 up to rounding plus the truncation tail.
    pub fn norm_check(&self) -> f64 {
        self.magnitudes.iter().map(|m| m * m).sum()
    }
}

/// <s1 | s2> = sum_n conj(c_n^{(1)}) c_n^{(2)}.
///
/// Both states must be expanded over the same moment table; the sum runs
/// over the shared prefix (tails are below [`STATE_TAIL_BOUND`] by
/// construction).
pub fn overlap(s1: &GkState, s2: &GkState) -> Result<Complex64> {
    if s1.a.to_bits() != s2.a.to_bits() || s1.b.to_bits() != s2.b.to_bits() {
        return Err(Error::IncompatibleMoments(format!(
            "states use different spectra: (a, b) = ({}, {}) vs ({}, {})",
            s1.a, s1.b, s2.a, s2.b
        )));
    }
    let shared = s1.levels.len().min(s2.levels.len());
    if s1.levels[..shared] != s2.levels[..shared] {
        return Err(Error::IncompatibleMoments(
            "states were built from different level tables".into(),
        ));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..shared {
        acc += s1.coeff(n).conj() * s2.coeff(n);
    }
    Ok(acc)
}

/// Max over the four label perturbations (J +/- delta, gamma +/- delta) of
/// the squared distance || |J', gamma'> - |J, gamma> ||^2
/// = 2 [1 - Re <J', gamma' | J, gamma>]. A negative-action perturbation
/// (J - delta < 0) is skipped. Vanishes as delta -> 0.
pub fn label_continuity_check(
    moments: &GkMoments,
    j: f64,
    gamma: f64,
    delta: f64,
) -> Result<f64> {
    if !(0.0..=0.1).contains(&delta) {
        return Err(Error::Domain(format!(
            "perturbation delta must lie in [0, 0.1], got {delta}"
        )));
    }
    let base = build_state(moments, j, gamma)?;
    let mut worst = 0.0_f64;
    let mut probe = |j_p: f64, gamma_p: f64| -> Result<()> {
        let pert = build_state(moments, j_p, gamma_p)?;
        let re = overlap(&pert, &base)?.re;
        worst = worst.max((2.0 * (1.0 - re)).max(0.0));
        Ok(())
    };
    probe(j + delta, gamma)?;
    if j - delta >= 0.0 {
        probe(j - delta, gamma)?;
    }
    probe(j, gamma + delta)?;
    probe(j, gamma - delta)?;
    Ok(worst)
}

/// Time evolution: the labels move as gamma -> gamma + nu t, the magnitudes
/// are carried over bit-identically.
pub fn evolve(state: &GkState, nu: f64, t: f64) -> GkState {
    let mut out = state.clone();
    out.gamma += nu * t;
    out
}

/// The weight making the states resolve the identity over the action:
///
/// ```text
/// Wbar(J) = 2 (J/a)^{nu/2} K_nu(2 sqrt(J/a)) / (a Gamma(1 + nu)),
/// W(J)    = 0F1(1 + nu; J/a) * Wbar(J),          nu = b/a,
/// ```
///
/// so that int_0^inf Wbar(J) J^n dJ = rho_n for every n >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction {
    a: f64,
    b: f64,
}

/// Construct the weight for a deformed spectrum; requires a > 0 (the
/// undeformed limit needs no Bessel factor and is out of scope here).
pub fn weight_function(moments: &GkMoments) -> Result<WeightFunction> {
    if moments.a <= 0.0 {
        return Err(Error::Domain(
            "weight function requires a strictly positive quadratic coefficient".into(),
        ));
    }
    Ok(WeightFunction {
        a: moments.a,
        b: moments.b,
    })
}

impl WeightFunction {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// nu = b / a.
    pub fn nu(&self) -> f64 {
        self.b / self.a
    }

    /// Reduced weight Wbar(J) = W(J) / N^2(J); this is the density whose
    /// moments are the rho_n. Underflows to 0 for large J.
    pub fn eval_reduced(&self, j: f64) -> Result<f64> {
        if !(j >= 0.0) || !j.is_finite() {
            return Err(Error::Domain(format!("J must be non-negative, got {j}")));
        }
        let nu = self.nu();
        if j == 0.0 {
            return Ok(1.0 / self.b);
        }
        let z = j / self.a;
        let ln = std::f64::consts::LN_2 + 0.5 * nu * z.ln() + bessel_k_ln(nu, 2.0 * z.sqrt())?
            - self.a.ln()
            - log_gamma(1.0 + nu)?;
        Ok(ln.exp())
    }

    /// Full weight W(J) = 0F1(1 + nu; J/a) Wbar(J); non-negative.
    pub fn eval(&self, j: f64) -> Result<f64> {
        if !(j >= 0.0) || !j.is_finite() {
            return Err(Error::Domain(format!("J must be non-negative, got {j}")));
        }
        let nu = self.nu();
        if j == 0.0 {
            return Ok(1.0 / self.b);
        }
        let z = j / self.a;
        let ln_wbar = std::f64::consts::LN_2 + 0.5 * nu * z.ln()
            + bessel_k_ln(nu, 2.0 * z.sqrt())?
            - self.a.ln()
            - log_gamma(1.0 + nu)?;
        Ok((ln_wbar + hyp0f1_ln(1.0 + nu, z)?).exp())
    }
}

/// Signed relative errors of the weight-moment identity
/// int_0^inf Wbar(J) J^n dJ = rho_n for n = 0 ... n_check (<= 20).
///
/// The integral is evaluated in the variable u = 2 sqrt(J/a), where the
/// integrand is exponentially decaying and free of endpoint singularities;
/// it is normalized by the closed-form rho_n inside the log-space integrand,
/// so each returned entry is (integral / rho_n) - 1.
pub fn resolution_of_unity_check(moments: &GkMoments, n_check: usize) -> Result<Vec<f64>> {
    if n_check > 20 {
        return Err(Error::Domain(format!(
            "moment check order must be at most 20, got {n_check}"
        )));
    }
    let w = weight_function(moments)?;
    let nu = w.nu();
    // The integrand's Bessel order is nu = b/a; surface an unsupported
    // order as an error here rather than as a silently zero integrand.
    bessel_k_ln(nu, 1.0)?;
    let mut errors = Vec::with_capacity(n_check + 1);
    for n in 0..=n_check {
        let nf = n as f64;
        let ln_scale = log_gamma(nf + 1.0)? + log_gamma(nf + 1.0 + nu)?;
        let integrand = move |u: f64| -> f64 {
            if u <= 0.0 {
                return 0.0;
            }
            let ln_k = match bessel_k_ln(nu, u) {
                Ok(v) => v,
                Err(_) => return 0.0,
            };
            (u.ln() + (2.0 * nf + nu) * (u / 2.0).ln() + ln_k - ln_scale).exp()
        };
        let val = integrate_semi_infinite_tol(integrand, 1.0, 1e-11)?;
        errors.push(val - 1.0);
    }
    Ok(errors)
}
