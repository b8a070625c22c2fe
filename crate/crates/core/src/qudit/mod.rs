//! Dense complex linear algebra for small multi-qudit registers.
//!
//! States are stored as row-major amplitude vectors with the first subsystem
//! most significant. Mixtures are kept as weighted ensembles of pure branches
//! rather than dense density matrices, so a six-qudit register never needs a
//! `N^6 x N^6` allocation.

mod basis;
mod ensemble;
mod operator;
mod state;

pub use basis::MeasurementBasis;
pub use ensemble::{apply_kraus, fidelity, Branch, BranchEnsemble, KrausSet};
pub use operator::Operator;
pub use state::{apply_on, measure, project, reduce_to, tensor, Measurement, Projection, StateVector};
pub(crate) use state::contract;

pub use num_complex::Complex64 as C64;

/// Tolerance for structural checks: normalisation, unitarity, orthonormality.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Tolerance for weight and trace sums.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuditError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("subsystem {0} listed more than once")]
    RepeatedSubsystem(usize),
    #[error("state is not normalised (norm {0})")]
    NotNormalized(f64),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("basis is not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("basis needs {expected} vectors, got {actual}")]
    IncompleteBasis { expected: usize, actual: usize },
    #[error("kraus set is not complete (max deviation {0:e})")]
    IncompleteKraus(f64),
    #[error("ensemble weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("negative or non-finite branch weight {0}")]
    InvalidWeight(f64),
    #[error("empty ensemble")]
    EmptyEnsemble,
    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, QuditError>;

/// `e^{i 2 pi p / n}`, with `p` reduced mod `n` first so equal residues give
/// bit-identical phasors.
pub fn root_of_unity(n: usize, p: usize) -> C64 {
    let r = p % n;
    if r == 0 {
        return C64::new(1.0, 0.0);
    }
    C64::from_polar(1.0, std::f64::consts::TAU * r as f64 / n as f64)
}
