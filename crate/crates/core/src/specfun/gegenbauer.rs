//! Gegenbauer (ultraspherical) polynomials C_n^lambda on [-1, 1].

use crate::error::{Error, Result};

/// C_n^lambda(s) by the standard three-term recurrence
/// k C_k = 2 (k + lambda - 1) s C_{k-1} - (k + 2 lambda - 2) C_{k-2}.
///
/// Requires lambda > -1/2, lambda != 0, and |s| <= 1; errors with `Overflow`
/// if the recurrence leaves the double range (possible only for enormous n
/// or lambda).
pub fn gegenbauer_c(n: usize, lambda: f64, s: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= -0.5 || lambda == 0.0 {
        return Err(Error::Domain(format!(
            "gegenbauer_c requires lambda > -1/2 and lambda != 0, got {lambda}"
        )));
    }
    if !s.is_finite() || !(-1.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!(
            "gegenbauer_c requires s in [-1, 1], got {s}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0_f64;
    let mut cur = 2.0 * lambda * s;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda - 1.0) * s * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    if !cur.is_finite() {
        return Err(Error::Overflow(format!(
            "gegenbauer_c overflowed at n = {n}, lambda = {lambda}"
        )));
    }
    Ok(cur)
}
