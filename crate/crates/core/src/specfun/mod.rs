//! Special functions and quadrature used throughout the crate.
//!
//! Everything here is regime-aware but physics-free: log-gamma, the confluent
//! limit function `0F1`, the modified Bessel function `K_nu` for real order,
//! Gegenbauer and associated-Laguerre recurrences, Gauss-Legendre rules, and
//! an adaptive integrator for `[0, inf)`. Routines that can grow past the
//! double-precision range expose log-space variants.

mod bessel;
mod gamma;
mod gegenbauer;
mod hyp;
mod laguerre;
mod quad;

pub use bessel::{bessel_k, bessel_k_ln};
pub use gamma::log_gamma;
pub use gegenbauer::gegenbauer_c;
pub use hyp::{hyp0f1, hyp0f1_ln};
pub use laguerre::{laguerre_assoc, LAGUERRE_MAX_DEGREE};
pub use quad::{
    gauss_legendre, integrate_semi_infinite, integrate_semi_infinite_tol, QuadDomain,
    QuadratureRule,
};

/// Result of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// The summed value.
    pub value: f64,
    /// Number of terms actually accumulated (>= 1; the leading term counts).
    pub terms_used: usize,
    /// Estimated truncation error, in the same units as `value` (>= 0).
    pub tail_bound: f64,
}

/// Cap on series terms before a summation reports non-convergence.
pub const MAX_SERIES_TERMS: usize = 1_000_000;
