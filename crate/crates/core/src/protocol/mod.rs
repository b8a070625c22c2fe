//! The BCRSP engine for arbitrary dimension.

mod decomposition;
mod phase;
mod register;
mod run;
mod states;
mod table;

pub use decomposition::{verify_decomposition, DecompositionReport, MAX_DECOMPOSITION_DIM};
pub use phase::PhaseVector;
pub use register::{Register, Site};
pub use run::{
    joint_probability, outcome_probability, run_protocol, CorrectionRule, OutcomeSelection, OutcomeTuple,
    ProtocolResult,
};
pub(crate) use run::{finish, measure_site, Choice};
pub use states::{
    collapsed_state, correction_unitary, equatorial_state, fourier_basis, ghz_state, sender_basis,
};
pub use table::{build_correction_table, CorrectionEntry};

use crate::qudit::QuditError;

/// Addition modulo `n`, the `⊕` of the correction rule.
pub fn oplus(a: usize, b: usize, n: usize) -> usize {
    (a + b) % n
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("expected {expected} phases for dimension {dim}, got {actual}")]
    PhaseCount { dim: usize, expected: usize, actual: usize },
    #[error("phase {0} is not finite")]
    NonFinitePhase(f64),
    #[error("phase vectors have different dimensions ({alice} vs {bob})")]
    DimensionMismatch { alice: usize, bob: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("outcome has zero probability at site {0:?}")]
    ZeroProbability(Site),
    #[error("site {0:?} is not present in the register")]
    MissingSite(Site),
    #[error("remaining register does not factor into a product state (residual {0:e})")]
    NotProduct(f64),
    #[error("dimension {0} exceeds the supported limit for this check")]
    TooLarge(usize),
    #[error(transparent)]
    Qudit(#[from] QuditError),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(ProtocolError::InvalidDimension(n))
    } else {
        Ok(())
    }
}
