//! Modified Bessel function of the second kind, K_nu, for real nu >= 0.
//!
//! The order is reduced to mu in [-1/2, 1/2]; K_mu and K_{mu+1} come from the
//! Temme series for x < 2 and from Steed's second continued fraction
//! (evaluated on the e^x-scaled function) for x >= 2, then an upward
//! recurrence in the order climbs to nu with periodic rescaling. All values
//! are tracked alongside a log offset so `bessel_k_ln` works far outside the
//! double range.

use super::gamma::{recip_gamma_even, recip_gamma_odd};
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
/// Cap on the order-raising recurrence; each unit of order costs one step,
/// so unboundedly large orders would be unboundedly slow (and the
/// recurrence loses relative accuracy long before that).
const MAX_ORDER_STEPS: usize = 100_000;
const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;
const LN_RESCALE: f64 = 575.646_273_248_511_4; // ln(1e250)

/// K_nu(x) for nu >= 0, x > 0.
///
/// Errors with `Overflow` when the result exceeds the double range; the
/// log-space variant [`bessel_k_ln`] covers that regime. Results too small
/// for doubles underflow quietly to zero.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let ln = bessel_k_ln(nu, x)?;
    if ln > f64::MAX.ln() {
        return Err(Error::Overflow(format!(
            "K_{nu}({x}) has ln value {ln:.3}, beyond the f64 range"
        )));
    }
    Ok(ln.exp())
}

/// ln K_nu(x) for nu >= 0, x > 0. K_nu is strictly positive, so this is
/// always well defined.
pub fn bessel_k_ln(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::Domain(format!(
            "bessel_k requires nu >= 0, got {nu}"
        )));
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }

    // Split nu = mu + nl with integer nl >= 0 and mu in [-1/2, 1/2].
    let nl = (nu + 0.5).floor() as usize;
    if nl > MAX_ORDER_STEPS {
        return Err(Error::Domain(format!(
            "bessel_k order {nu} exceeds the supported maximum {MAX_ORDER_STEPS}; \
             the order recurrence would need {nl} steps"
        )));
    }
    let mu = nu - nl as f64;

    let (mut k_lo, mut k_hi, mut ln_offset) = if x < 2.0 {
        let (a, b) = k_mu_series(mu, x)?;
        (a, b, 0.0)
    } else {
        let (a, b) = k_mu_cf2(mu, x)?;
        (a, b, -x)
    };

    // Upward recurrence K_{m+1}(x) = K_{m-1}(x) + (2m/x) K_m(x).
    for i in 1..=nl {
        let next = k_lo + 2.0 * (mu + i as f64) / x * k_hi;
        k_lo = k_hi;
        k_hi = next;
        if k_hi > RESCALE_THRESHOLD {
            k_lo *= RESCALE_FACTOR;
            k_hi *= RESCALE_FACTOR;
            ln_offset += LN_RESCALE;
        }
    }
    // After nl steps k_lo holds K_{mu+nl} = K_nu.
    Ok(k_lo.ln() + ln_offset)
}

/// Temme's series for (K_mu, K_{mu+1}) with |mu| <= 1/2, valid for x < 2.
fn k_mu_series(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let mu2 = mu * mu;
    let pimu = std::f64::consts::PI * mu;
    let fact = if pimu.abs() < 1e-30 {
        1.0
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < 1e-30 { 1.0 } else { e.sinh() / e };
    let gam1 = recip_gamma_odd(mu);
    let gam2 = recip_gamma_even(mu);
    // 1/Gamma(1+mu) and 1/Gamma(1-mu) from the same stable combinations.
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let e_exp = e.exp();
    let mut p = 0.5 * e_exp / gampl;
    let mut q = 0.5 / (e_exp * gammi);
    let mut c = 1.0;
    let dsq = x2 * x2;
    let mut sum1 = p;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dsq / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::NoConvergence {
        terms: MAX_ITER,
        last_term: sum,
    })
}

/// Steed's CF2 for (e^x K_mu, e^x K_{mu+1}) with |mu| <= 1/2, valid for x >= 2.
fn k_mu_cf2(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = delh;
    let mut q1 = 0.0_f64;
    let mut q2 = 1.0_f64;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..=MAX_ITER {
        a -= 2.0 * (i as f64 - 1.0);
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() <= EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            terms: MAX_ITER,
            last_term: s,
        });
    }
    let h = a1 * h;
    // Scaled by e^x: these stay O(sqrt(pi/2x)).
    let k_mu = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    Ok((k_mu, k_mu1))
}
