use serde::{Deserialize, Serialize};

use super::{OpticsError, Result};
use crate::qudit::{Operator, C64};

/// Variable beam splitter on modes `n < m`. Within those two modes it acts as
/// `[[e^{i phi} sin w, e^{i phi} cos w], [cos w, -sin w]]` (rows and columns
/// ordered `n, m`) and as the identity elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BsRecord", into = "BsRecord")]
pub struct BeamSplitter {
    m: usize,
    n: usize,
    pub omega: f64,
    pub phi: f64,
}

#[derive(Serialize, Deserialize)]
struct BsRecord {
    modes: [usize; 2],
    omega: f64,
    phi: f64,
}

impl TryFrom<BsRecord> for BeamSplitter {
    type Error = OpticsError;

    fn try_from(r: BsRecord) -> Result<Self> {
        BeamSplitter::new(r.modes[0], r.modes[1], r.omega, r.phi)
    }
}

impl From<BeamSplitter> for BsRecord {
    fn from(b: BeamSplitter) -> Self {
        BsRecord { modes: [b.m, b.n], omega: b.omega, phi: b.phi }
    }
}

impl BeamSplitter {
    pub fn new(m: usize, n: usize, omega: f64, phi: f64) -> Result<Self> {
        if m <= n {
            return Err(OpticsError::InvalidModes { m, n });
        }
        Ok(Self { m, n, omega, phi })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The 2x2 block on modes `(n, m)`.
    pub fn block(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.omega.sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[e * s, e * c], [C64::new(c, 0.0), C64::new(-s, 0.0)]]
    }
}

/// Embeds the beam splitter in an `dim`-mode identity.
pub fn bs_matrix(bs: &BeamSplitter, dim: usize) -> Result<Operator> {
    if bs.m >= dim {
        return Err(OpticsError::ModeOutOfRange { mode: bs.m, dim });
    }
    let b = bs.block();
    let modes = [bs.n, bs.m];
    Ok(Operator::from_fn(dim, dim, |r, c| {
        match (modes.iter().position(|&x| x == r), modes.iter().position(|&x| x == c)) {
            (Some(i), Some(j)) => b[i][j],
            _ if r == c => C64::new(1.0, 0.0),
            _ => C64::new(0.0, 0.0),
        }
    }))
}

/// Single-mode phase `e^{i theta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PsRecord", into = "PsRecord")]
pub struct PhaseShifter {
    pub mode: usize,
    pub theta: f64,
}

#[derive(Serialize, Deserialize)]
struct PsRecord {
    modes: [usize; 1],
    theta: f64,
}

impl TryFrom<PsRecord> for PhaseShifter {
    type Error = OpticsError;

    fn try_from(r: PsRecord) -> Result<Self> {
        Ok(PhaseShifter { mode: r.modes[0], theta: r.theta })
    }
}

impl From<PhaseShifter> for PsRecord {
    fn from(p: PhaseShifter) -> Self {
        PsRecord { modes: [p.mode], theta: p.theta }
    }
}

impl PhaseShifter {
    pub fn new(mode: usize, theta: f64) -> Self {
        Self { mode, theta }
    }

    pub fn phasor(&self) -> C64 {
        C64::from_polar(1.0, self.theta)
    }

    pub fn matrix(&self, dim: usize) -> Result<Operator> {
        if self.mode >= dim {
            return Err(OpticsError::ModeOutOfRange { mode: self.mode, dim });
        }
        let diag: Vec<C64> = (0..dim).map(|j| if j == self.mode { self.phasor() } else { C64::new(1.0, 0.0) }).collect();
        Ok(Operator::diagonal(&diag))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Element {
    #[serde(rename = "bs")]
    BeamSplitter(BeamSplitter),
    #[serde(rename = "ps")]
    PhaseShifter(PhaseShifter),
}

impl Element {
    pub fn matrix(&self, dim: usize) -> Result<Operator> {
        match self {
            Element::BeamSplitter(b) => bs_matrix(b, dim),
            Element::PhaseShifter(p) => p.matrix(dim),
        }
    }
}

/// Elements in the order light passes through them; the network's matrix is
/// `E_last ... E_first`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferometerNetwork {
    pub dim: usize,
    pub elements: Vec<Element>,
}

impl InterferometerNetwork {
    pub fn new(dim: usize, elements: Vec<Element>) -> Result<Self> {
        for e in &elements {
            e.matrix(dim)?;
        }
        Ok(Self { dim, elements })
    }

    pub fn matrix(&self) -> Operator {
        self.elements.iter().fold(Operator::identity(self.dim), |acc, e| {
            e.matrix(self.dim).expect("validated").matmul(&acc).expect("square")
        })
    }

    pub fn beam_splitters(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, Element::BeamSplitter(_))).count()
    }

    pub fn phase_shifters(&self) -> usize {
        self.elements.len() - self.beam_splitters()
    }

    /// `max |matrix - target|`.
    pub fn reconstruction_error(&self, target: &Operator) -> f64 {
        self.matrix().max_abs_diff(target)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use super::*;

    #[test]
    fn modes_must_be_ordered() {
        assert!(matches!(BeamSplitter::new(1, 1, 0.0, 0.0), Err(OpticsError::InvalidModes { .. })));
        assert!(matches!(BeamSplitter::new(0, 2, 0.0, 0.0), Err(OpticsError::InvalidModes { .. })));
    }

    #[test]
    fn right_angle_gives_reflection_block() {
        let b = bs_matrix(&BeamSplitter::new(1, 0, FRAC_PI_2, 0.0).unwrap(), 2).unwrap();
        assert!((b.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-16);
        assert!(b.get(0, 1).norm() < 1e-16);
        assert!(b.get(1, 0).norm() < 1e-16);
        assert!((b.get(1, 1) - C64::new(-1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn embedding_matches_written_pattern() {
        let t = bs_matrix(&BeamSplitter::new(3, 2, FRAC_PI_4, FRAC_PI_2).unwrap(), 4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((t.get(2, 2) - C64::new(0.0, h)).norm() < 1e-15);
        assert!((t.get(2, 3) - C64::new(0.0, h)).norm() < 1e-15);
        assert!((t.get(3, 2) - C64::new(h, 0.0)).norm() < 1e-15);
        assert!((t.get(3, 3) - C64::new(-h, 0.0)).norm() < 1e-15);
        assert_eq!(t.get(0, 0), C64::new(1.0, 0.0));
        assert_eq!(t.get(1, 3), C64::new(0.0, 0.0));
        assert!(t.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn element_json_shape() {
        let e = Element::BeamSplitter(BeamSplitter::new(2, 0, 0.5, 1.5).unwrap());
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"kind":"bs","modes":[2,0],"omega":0.5,"phi":1.5}"#);
        let p = Element::PhaseShifter(PhaseShifter::new(1, 0.25));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"kind":"ps","modes":[1],"theta":0.25}"#);
        let back: Element = serde_json::from_str(r#"{"kind":"bs","modes":[2,0],"omega":0.5,"phi":1.5}"#).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<Element>(r#"{"kind":"bs","modes":[0,2],"omega":0.5,"phi":1.5}"#).is_err());
    }
}
