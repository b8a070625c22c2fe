use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, ProtocolError, Result};

/// The `N - 1` free phases of an equatorial qudit state; the phase on `|0>`
/// is fixed to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseVector {
    phases: Vec<f64>,
}

impl PhaseVector {
    pub fn new(dim: usize, phases: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if phases.len() != dim - 1 {
            return Err(ProtocolError::PhaseCount { dim, expected: dim - 1, actual: phases.len() });
        }
        if let Some(&bad) = phases.iter().find(|p| !p.is_finite()) {
            return Err(ProtocolError::NonFinitePhase(bad));
        }
        Ok(Self { phases })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim.saturating_sub(1)])
    }

    /// Phases drawn uniformly from `[0, 2 pi)`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        check_dim(dim)?;
        Self::new(dim, (1..dim).map(|_| rng.gen_range(0.0..TAU)).collect())
    }

    pub fn dim(&self) -> usize {
        self.phases.len() + 1
    }

    /// Free phases `theta_1 .. theta_{N-1}`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Phase on `|j>`, zero for `j = 0`.
    pub fn phase(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.phases[j - 1]
        }
    }

    /// `theta_j + 2 pi j s / N` for every `j`.
    pub fn shifted(&self, s: usize) -> Self {
        let n = self.dim() as f64;
        let phases = self.phases.iter().enumerate().map(|(i, p)| p + TAU * ((i + 1) * s) as f64 / n).collect();
        Self { phases }
    }

    /// Phases reduced into `[0, 2 pi)`; only for comparisons.
    pub fn reduced(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.rem_euclid(TAU)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.phases.iter().all(|&p| p == 0.0)
    }
}

impl TryFrom<Vec<f64>> for PhaseVector {
    type Error = ProtocolError;

    fn try_from(phases: Vec<f64>) -> Result<Self> {
        let dim = phases.len() + 1;
        Self::new(dim, phases)
    }
}

impl From<PhaseVector> for Vec<f64> {
    fn from(p: PhaseVector) -> Self {
        p.phases
    }
}
