//! Shared error type for the numerical library.

use thiserror::Error;

/// Errors produced by the numerical routines.
///
/// Every routine in this crate is a pure function; an `Err` always means the
/// *inputs* were outside the supported domain or a documented numerical limit
/// (series cap, panel cap, float range) was hit. Nothing here is transient.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration failed to meet its tail bound within the cap.
    #[error("no convergence after {terms} terms (last term {last_term:e})")]
    NoConvergence { terms: usize, last_term: f64 },

    /// The result (or an intermediate) exceeds the double-precision range.
    #[error("floating-point overflow: {0}")]
    Overflow(String),

    /// Adaptive quadrature hit its subdivision or panel cap.
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    /// Two states that must share a spectrum were built from different (a, b).
    #[error("incompatible moments: {0}")]
    IncompatibleMoments(String),

    /// A coefficient table could not absorb the requested tail mass.
    #[error("truncation failure: tail {tail:e} above {threshold:e} at n_max {n_max}")]
    Truncation {
        tail: f64,
        threshold: f64,
        n_max: usize,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
