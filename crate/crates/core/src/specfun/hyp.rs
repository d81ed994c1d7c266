//! The confluent limit function 0F1(; c; x) = sum_n x^n / ((c)_n n!).

use super::gamma::log_gamma;
use super::{SeriesResult, MAX_SERIES_TERMS};
use crate::error::{Error, Result};

const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;
const LN_RESCALE: f64 = 575.646_273_248_511_4; // ln(1e250)

/// 0F1(; c; x) for c > 0 and x >= 0, with term count and tail estimate.
///
/// Terms are generated by the exact ratio recurrence
/// t_{n+1} = t_n * x / ((c+n)(n+1)); summation stops once three consecutive
/// terms fall below 1e-16 of the running sum. Errors with `Overflow` when the
/// value exceeds the double range (use [`hyp0f1_ln`] there) and with
/// `NoConvergence` if the cap on terms is hit.
pub fn hyp0f1(c: f64, x: f64) -> Result<SeriesResult> {
    let (ln_value, terms_used, tail_rel) = hyp0f1_core(c, x)?;
    if ln_value > f64::MAX.ln() {
        return Err(Error::Overflow(format!(
            "0F1({c}; {x}) has ln value {ln_value:.3}, beyond the f64 range"
        )));
    }
    let value = ln_value.exp();
    Ok(SeriesResult {
        value,
        terms_used,
        tail_bound: tail_rel * value,
    })
}

/// ln 0F1(; c; x), valid even when the value itself overflows f64.
pub fn hyp0f1_ln(c: f64, x: f64) -> Result<f64> {
    Ok(hyp0f1_core(c, x)?.0)
}

/// Shared series driver; returns (ln of the sum, terms used, relative tail bound).
fn hyp0f1_core(c: f64, x: f64) -> Result<(f64, usize, f64)> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Domain(format!("0F1 requires c > 0, got c = {c}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("0F1 requires x >= 0, got x = {x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 1, 0.0));
    }

    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut ln_offset = 0.0_f64;
    let mut consecutive_small = 0_u32;
    let mut n = 0_usize;
    loop {
        let ratio = x / ((c + n as f64) * (n as f64 + 1.0));
        term *= ratio;
        sum += term;
        n += 1;
        if term < 1e-16 * sum {
            consecutive_small += 1;
            if consecutive_small >= 3 {
                // All terms are positive and, past this point, decay at least
                // geometrically with ratio r < 1.
                let r = x / ((c + n as f64) * (n as f64 + 1.0));
                let tail_rel = (term / sum) * r / (1.0 - r).max(0.5);
                return Ok((sum.ln() + ln_offset, n + 1, tail_rel));
            }
        } else {
            consecutive_small = 0;
        }
        if n >= MAX_SERIES_TERMS {
            return Err(Error::NoConvergence {
                terms: n,
                last_term: term,
            });
        }
        if sum > RESCALE_THRESHOLD {
            sum *= RESCALE_FACTOR;
            term *= RESCALE_FACTOR;
            ln_offset += LN_RESCALE;
        }
    }
}

/// ln[Gamma(c) * 0F1(; c; x)], a combination both large-argument call sites use.
#[allow(dead_code)]
pub(crate) fn hyp0f1_ln_scaled(c: f64, x: f64) -> Result<f64> {
    Ok(hyp0f1_ln(c, x)? + log_gamma(c)?)
}

#[cfg(test)]
mod tests {
    use super::super::log_gamma;
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn returns_one_at_zero_argument() {
        let r = hyp0f1(3.7, 0.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.terms_used, 1);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn matches_brute_force_sum_at_unit_arguments() {
        // 0F1(;1;1) = sum 1/(n!)^2, summed directly here as the oracle.
        let mut oracle = 0.0_f64;
        let mut inv_fact = 1.0_f64;
        for n in 0..40 {
            if n > 0 {
                inv_fact /= n as f64;
            }
            oracle += inv_fact * inv_fact;
        }
        let r = hyp0f1(1.0, 1.0).unwrap();
        assert_relative_eq!(r.value, oracle, max_relative = 1e-14);
        assert_relative_eq!(r.value, 2.279_585_302_336_067_3, max_relative = 1e-12);
    }

    #[test]
    fn matches_hyperbolic_closed_form() {
        // 0F1(;3/2; z^2/4) = sinh(z)/z.
        for &z in &[0.3, 1.0, 2.0, 10.0, 40.0] {
            let r = hyp0f1(1.5, z * z / 4.0).unwrap();
            assert_relative_eq!(r.value, z.sinh() / z, max_relative = 1e-13);
        }
        // 0F1(;1/2; z^2/4) = cosh(z).
        for &z in &[0.5, 3.0, 25.0] {
            let r = hyp0f1(0.5, z * z / 4.0).unwrap();
            assert_relative_eq!(r.value, z.cosh(), max_relative = 1e-13);
        }
    }

    #[test]
    fn matches_modified_bessel_series_identity() {
        // 0F1(; c; x) = Gamma(c) x^{(1-c)/2} I_{c-1}(2 sqrt(x)), with the
        // Bessel-I series summed independently in log space.
        for &c in &[1.5, 2.0, 5.0, 20.0] {
            for &x in &[0.1_f64, 1.0, 10.0, 100.0] {
                let nu = c - 1.0;
                let arg = 2.0 * x.sqrt();
                let mut besi = 0.0_f64;
                for k in 0..200 {
                    let kf = k as f64;
                    let ln_t = (2.0 * kf + nu) * (arg / 2.0).ln()
                        - log_gamma(kf + 1.0).unwrap()
                        - log_gamma(kf + nu + 1.0).unwrap();
                    besi += ln_t.exp();
                }
                let expected =
                    (log_gamma(c).unwrap() + ((1.0 - c) / 2.0) * x.ln()).exp() * besi;
                let r = hyp0f1(c, x).unwrap();
                assert_relative_eq!(r.value, expected, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn log_variant_agrees_with_direct_value() {
        for &(c, x) in &[(1.2, 0.5), (6.0, 30.0), (13.05, 50.0), (2.0, 300.0)] {
            let direct = hyp0f1(c, x).unwrap().value.ln();
            assert_relative_eq!(hyp0f1_ln(c, x).unwrap(), direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_variant_survives_overflowing_arguments() {
        // 0F1(;1.5; 1e8) ~ exp(2e4)/..., far beyond f64: the plain evaluator
        // must refuse while the log form stays finite and close to the
        // asymptotic ln 0F1 ~ 2 sqrt(x) - (c/2 - 3/4) ln x + ...
        let c = 1.5;
        let x = 1e8;
        assert!(matches!(hyp0f1(c, x), Err(Error::Overflow(_))));
        let ln_val = hyp0f1_ln(c, x).unwrap();
        // ln 0F1 = lnGamma(c) + (1-c)/2 ln x + ln I_{c-1}(2 sqrt(x)) with
        // I_nu(z) ~ e^z / sqrt(2 pi z); corrections are O(1/sqrt(x)).
        let asym = log_gamma(c).unwrap() + 0.5 * (1.0 - c) * x.ln() + 2.0 * x.sqrt()
            - 0.25 * x.ln()
            - 0.5 * (4.0 * std::f64::consts::PI).ln();
        assert_abs_diff_eq!(ln_val, asym, epsilon = 1e-3);
    }

    #[test]
    fn reports_no_convergence_past_the_term_cap() {
        // Convergence needs roughly 2 sqrt(x) terms; 1e13 forces ~6e6.
        assert!(matches!(
            hyp0f1(1.5, 1e13),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(hyp0f1(0.0, 1.0).is_err());
        assert!(hyp0f1(-2.0, 1.0).is_err());
        assert!(hyp0f1(1.0, -0.5).is_err());
        assert!(hyp0f1(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn tail_bound_is_small_and_terms_positive() {
        let r = hyp0f1(5.52, 123.4).unwrap();
        assert!(r.terms_used > 5);
        assert!(r.tail_bound >= 0.0);
        assert!(r.tail_bound < 1e-14 * r.value);
    }
}
