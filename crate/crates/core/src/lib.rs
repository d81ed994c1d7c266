//! Numerics for a quantum oscillator whose mass falls off with position as
//! m(x) = m0 / (1 + alpha x^2)^2.
//!
//! The library computes the exact spectrum and bound states of that model,
//! builds the associated family of coherent states labelled by an action J
//! and a phase gamma, measures their photon statistics, and maps their Wigner
//! quasi-distributions. A verification battery re-derives the key structural
//! identities numerically so a binary or CI job can assert them in one call.
//!
//! Layer map:
//! - [`specfun`]: special functions and quadrature (physics-free),
//! - [`model`]: parameters, spectrum, eigenfunctions,
//! - [`gk`]: coherent-state construction and measure checks,
//! - [`stats`]: photon statistics and Wigner distributions,
//! - [`verify`]: the self-check battery.

pub mod error;
pub mod gk;
pub mod model;
pub mod specfun;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use gk::{GkMoments, GkState, WeightFunction};
pub use model::{
    DerivedParams, Eigenfunction, ModelParams, Normalization, OdeResidual, SpectrumTable,
};
pub use specfun::{QuadDomain, QuadratureRule, SeriesResult};
pub use stats::{StatisticsReport, WignerGrid, WignerKernel};
pub use verify::{BatteryLevel, CheckResult, VerificationReport};
