//! Associated Laguerre polynomials L_n^(k)(x).

use crate::error::{Error, Result};

/// Largest degree accepted by [`laguerre_assoc`]; beyond this the recurrence
/// loses too much accuracy in double precision for the oscillatory region.
pub const LAGUERRE_MAX_DEGREE: usize = 200;

/// L_n^(k)(x) by the three-term recurrence
/// (i+1) L_{i+1} = (2i + 1 + k - x) L_i - (i + k) L_{i-1}.
///
/// Requires k > -1, x >= 0, and n <= [`LAGUERRE_MAX_DEGREE`].
pub fn laguerre_assoc(n: usize, k: f64, x: f64) -> Result<f64> {
    if !k.is_finite() || k <= -1.0 {
        return Err(Error::Domain(format!(
            "laguerre_assoc requires k > -1, got {k}"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "laguerre_assoc requires x >= 0, got {x}"
        )));
    }
    if n > LAGUERRE_MAX_DEGREE {
        return Err(Error::Domain(format!(
            "laguerre_assoc degree {n} exceeds the supported maximum {LAGUERRE_MAX_DEGREE}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0_f64;
    let mut cur = 1.0 + k - x;
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + k - x) * cur - (fi + k) * prev) / (fi + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
