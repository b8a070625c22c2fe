//! Spatial-mode linear optics: beam splitters, phase shifters, networks
//! synthesised from unitaries, and the circuits for the protocol's bases and
//! corrections. Mode `j` carries the basis state `|j>`, counting from zero.

mod circuits;
mod elements;
mod reck;

pub use circuits::{
    cnot_gate, correction_circuit, fourier_matrix, ghz_via_cnot, paper_network_4d, sender_network,
    PaperNetworkReport,
};
pub use elements::{bs_matrix, BeamSplitter, Element, InterferometerNetwork, PhaseShifter};
pub use reck::{reck_decompose, MAX_RECK_DIM};

use crate::protocol::ProtocolError;
use crate::qudit::QuditError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OpticsError {
    #[error("beam splitter needs m > n, got m = {m}, n = {n}")]
    InvalidModes { m: usize, n: usize },
    #[error("mode {mode} out of range for {dim} modes")]
    ModeOutOfRange { mode: usize, dim: usize },
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("dimension {0} is outside the supported range")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Qudit(#[from] QuditError),
}

pub type Result<T> = std::result::Result<T, OpticsError>;
