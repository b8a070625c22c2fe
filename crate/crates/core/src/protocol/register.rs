use std::fmt;

use rand::Rng;

use super::{ghz_state, ProtocolError, Result};
use crate::qudit::{measure, project, reduce_to, tensor, BranchEnsemble, MeasurementBasis, StateVector};

/// One particle of the two shared GHZ states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    A1,
    B1,
    C1,
    A2,
    B2,
    C2,
}

impl Site {
    /// Global subsystem order of the freshly prepared channel.
    pub const ORDER: [Site; 6] = [Site::A1, Site::B1, Site::C1, Site::A2, Site::B2, Site::C2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Site::A1 => "A1",
            Site::B1 => "B1",
            Site::C1 => "C1",
            Site::A2 => "A2",
            Site::B2 => "B2",
            Site::C2 => "C2",
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The joint state of whichever sites have not been measured yet.
///
/// Measured sites are removed, so `sites[i]` always labels subsystem `i` of
/// `state`.
#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    sites: Vec<Site>,
    state: StateVector,
}

impl Register {
    /// `GHZ(A1 B1 C1) ⊗ GHZ(A2 B2 C2)`.
    pub fn channel(n: usize) -> Result<Self> {
        let g = ghz_state(n)?;
        Ok(Self { sites: Site::ORDER.to_vec(), state: tensor(&g, &g) })
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn position(&self, site: Site) -> Result<usize> {
        self.sites.iter().position(|&s| s == site).ok_or(ProtocolError::MissingSite(site))
    }

    fn without(&self, site: Site, state: StateVector) -> Self {
        Self { sites: self.sites.iter().copied().filter(|&s| s != site).collect(), state }
    }

    /// Projects `site` onto `vector`. Returns the conditional probability and
    /// the remaining register, or `None` for a zero-probability outcome.
    pub fn project(&self, site: Site, vector: &StateVector) -> Result<(f64, Option<Self>)> {
        let pos = self.position(site)?;
        let p = project(&self.state, vector, pos)?;
        Ok((p.probability, p.state.map(|s| self.without(site, s))))
    }

    /// Born-rule measurement of `site`; returns outcome, conditional
    /// probability and the remaining register.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        site: Site,
        basis: &MeasurementBasis,
        rng: &mut R,
    ) -> Result<(usize, f64, Self)> {
        let pos = self.position(site)?;
        let m = measure(&self.state, basis, pos, rng)?;
        Ok((m.outcome, m.probability, self.without(site, m.state)))
    }

    /// Reduced state of one site.
    pub fn reduced(&self, site: Site) -> Result<BranchEnsemble> {
        Ok(reduce_to(&self.state, self.position(site)?)?)
    }
}
