//! Error type shared by all numerical modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Requested Hilbert space exceeds the configured dimension cap.
    #[error("space dimension {dim} exceeds the maximum of {max}")]
    DimensionOverflow { dim: usize, max: usize },

    /// Two operators live on different spaces (or a raw matrix is not square
    /// of the expected size).
    #[error("dimension mismatch: {lhs} vs {rhs}")]
    DimensionMismatch { lhs: usize, rhs: usize },

    /// A matrix required to be diagonal has off-diagonal weight.
    #[error("matrix is not diagonal (max off-diagonal {max_offdiag:e})")]
    NotDiagonal { max_offdiag: f64 },

    /// A matrix required to be symmetric is not.
    #[error("matrix is not symmetric (max asymmetry {max_asym:e})")]
    NotSymmetric { max_asym: f64 },

    /// A nonzero interaction element sits on a vanishing energy gap; the
    /// elimination has no solution at this detuning.
    #[error("resonance between basis states {row} and {col}: interaction element on a vanishing energy gap")]
    Resonance { row: usize, col: usize },

    /// The operator does not conserve excitation number, so it has no
    /// block decomposition.
    #[error("operator does not conserve excitation number (max block-coupling {max_coupling:e})")]
    NotBlockDiagonal { max_coupling: f64 },

    /// The flow step size collapsed; the flow is stalled (typically by
    /// off-diagonal coupling between degenerate diagonal entries).
    #[error("flow step underflow at l = {l:e}: the flow has stalled")]
    StepUnderflow { l: f64 },

    /// A parameter is outside the domain of the requested formula.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Too few (or degenerate) data points for a least-squares fit.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
