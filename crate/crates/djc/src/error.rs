//! Crate-wide error type.

use thiserror::Error;

/// Alias for results produced by this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the model, propagators, oracle,
/// concurrence machinery and analysis layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Coupling strengths must be non-negative.
    #[error("negative coupling: g1 = {g1}, g2 = {g2}")]
    NegativeCoupling { g1: f64, g2: f64 },

    /// At least one coupling must be strictly positive (the mean coupling
    /// sets the time unit).
    #[error("both couplings are zero; the mean coupling must be positive")]
    ZeroCouplings,

    /// A frequency, coupling, angle or amplitude was NaN or infinite.
    #[error("non-finite input: {0}")]
    NonFiniteInput(String),

    /// The requested preset does not live on the requested basis.
    #[error("preset {preset} is not defined on basis {basis}")]
    PresetBasisMismatch { preset: String, basis: String },

    /// Custom amplitudes must be normalized to within 1e-9 before the exact
    /// renormalization step.
    #[error("custom amplitudes deviate from unit norm by {deviation:.3e} (allowed 1e-9)")]
    UnnormalizedCustomInput { deviation: f64 },

    /// An amplitude vector arrived on an unexpected manifold.
    #[error("wrong basis: expected {expected}, found {found}")]
    WrongBasis { expected: String, found: String },

    /// Operation requires exact resonance (zero detunings).
    #[error("operation requires delta1 = delta2 = 0, found delta1 = {delta1}, delta2 = {delta2}")]
    NotResonant { delta1: f64, delta2: f64 },

    /// Operation requires equal couplings.
    #[error("operation requires g1 = g2, found g1 = {g1}, g2 = {g2}")]
    UnequalCouplings { g1: f64, g2: f64 },

    /// Parameters fall outside the validity regime of a closed-form
    /// propagator (the numeric engine has no such restriction).
    #[error("parameters outside closed-form regime: {0}")]
    RegimeMismatch(String),

    /// The Fock cutoff cannot hold the requested state.
    #[error("Fock cutoff too small: state needs n_max >= {needed}, have {n_max}")]
    CutoffTooSmall { needed: usize, n_max: usize },

    /// Vector/matrix dimensions disagree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A cavity carries population above the one-photon level, so it cannot
    /// be reduced to a qubit.
    #[error("cavity population {population:.3e} above the one-photon level; not qubit-like")]
    CavityNotQubitLike { population: f64 },

    /// Matrix failed Hermiticity / unit-trace / positivity checks.
    #[error("not a density matrix: {0}")]
    NotADensityMatrix(String),

    /// Matrix does not have the X-state zero pattern.
    #[error("matrix does not have the X-state zero pattern")]
    NotXForm,

    /// A computed quantity violated its mathematical bounds by more than
    /// numerical noise.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    /// Series grid too coarse for reliable zero-interval detection.
    #[error("time grid too coarse: step {step:.3e} exceeds allowed {max_step:.3e}")]
    GridTooCoarse { step: f64, max_step: f64 },

    /// Sweep would evaluate more cells than the configured budget.
    #[error("sweep of {cells} cells exceeds budget {budget}")]
    CellBudgetExceeded { cells: usize, budget: usize },

    /// Conflicting configuration inputs.
    #[error("configuration conflict: {0}")]
    ConfigConflict(String),

    /// Malformed configuration input.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// I/O failure while reading config or writing output.
    #[error("i/o failure: {0}")]
    IoFailure(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}
