//! Entanglement dynamics of a pair of independent, non-identical
//! Jaynes-Cummings systems: two two-level atoms, each coupled to its own
//! single-mode cavity, with no interaction between the two atom-cavity
//! subsystems. Everything entangling that happens at later times is carried
//! there by the initial state.
//!
//! The crate provides closed-form propagators on the invariant excitation
//! manifolds, a brute-force truncated-Fock oracle for cross-checking them,
//! Wootters/X-state concurrence machinery for all six subsystem pairs, and
//! higher-level analysis (sudden-death detection, transfer times, parameter
//! sweeps).

pub mod analysis;
pub mod analytic;
pub mod entanglement;
pub mod error;
mod linalg;
pub mod model;
pub mod oracle;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
