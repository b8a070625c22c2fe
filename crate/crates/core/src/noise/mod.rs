//! Qudit-flip, dephasing and qudit-phase-flip noise on the four distributed
//! particles `B1, C1, A2, C2`, with exact simulation and the closed-form
//! fidelities quoted for the four-dimensional case.

mod closed_form;
mod compare;
mod kraus;
mod reference;
mod simulate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::protocol::ProtocolError;
use crate::qudit::QuditError;

pub use closed_form::{paper_fidelity, paper_fidelity_dephasing, paper_fidelity_phaseflip_equatorial};
pub use compare::{compare_paper_vs_exact, default_gamma_grid, ComparisonReport, ComparisonRow, DEVIATION_FLAG};
pub use kraus::{dephasing_kraus, kraus_set, phase_flip_kraus, qudit_flip_kraus};
pub use reference::{reference_run, ReferenceRun};
pub use simulate::{noisy_protocol_run, BranchContribution, NoiseDiagnostics, NoisyRun, OutcomePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    QuditFlip,
    Dephasing,
    QuditPhaseFlip,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 3] = [NoiseKind::QuditFlip, NoiseKind::Dephasing, NoiseKind::QuditPhaseFlip];

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::QuditFlip => "qudit_flip",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::QuditPhaseFlip => "qudit_phase_flip",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = NoiseError;

    fn from_str(s: &str) -> Result<Self> {
        NoiseKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| NoiseError::UnknownKind(s.to_string()))
    }
}

/// Noise strength `gamma` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NoiseFactor(f64);

impl NoiseFactor {
    pub fn new(gamma: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&gamma) {
            Ok(Self(gamma))
        } else {
            Err(NoiseError::GammaOutOfRange(gamma))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for NoiseFactor {
    type Error = NoiseError;

    fn try_from(g: f64) -> Result<Self> {
        Self::new(g)
    }
}

impl From<NoiseFactor> for f64 {
    fn from(g: NoiseFactor) -> f64 {
        g.0
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NoiseError {
    #[error("gamma must lie in [0, 1], got {0}")]
    GammaOutOfRange(f64),
    #[error("unknown noise kind {0:?}")]
    UnknownKind(String),
    #[error("conditioning outcome has zero probability")]
    ZeroProbability,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Qudit(#[from] QuditError),
}

pub type Result<T> = std::result::Result<T, NoiseError>;
