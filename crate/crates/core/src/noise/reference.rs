use super::{kraus_set, NoiseError, NoiseFactor, NoiseKind, OutcomePolicy, Result};
use crate::protocol::{
    correction_unitary, equatorial_state, fourier_basis, oplus, sender_basis, OutcomeTuple, PhaseVector,
    ProtocolError, Register, Site,
};
use crate::qudit::{apply_on, contract, KrausSet, MeasurementBasis, Operator, StateVector, C64};

/// Result of the literal six-qudit simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRun {
    /// Density operator of A1.
    pub rho_a1: Operator,
    /// Density operator of B2.
    pub rho_b2: Operator,
    pub fidelity_a1: f64,
    pub fidelity_b2: f64,
    /// Number of non-vanishing Kraus products on the four noisy sites.
    pub kraus_branches: usize,
}

struct Walk<'a> {
    n: usize,
    kraus: &'a KrausSet,
    alice_basis: MeasurementBasis,
    bob_basis: MeasurementBasis,
    fourier: MeasurementBasis,
    corrections: Vec<Operator>,
    only: Option<OutcomeTuple>,
    rho_a1: Operator,
    rho_b2: Operator,
    branches: usize,
}

/// Sites that receive noise, as positions in the six-site register.
const NOISY: [Site; 4] = [Site::B1, Site::C1, Site::A2, Site::C2];

impl Walk<'_> {
    fn kraus_depth(&mut self, state: &StateVector, depth: usize) -> Result<()> {
        if depth == NOISY.len() {
            self.branches += 1;
            return self.measure_all(state);
        }
        for op in self.kraus.operators() {
            let next = apply_on(op, state, &[NOISY[depth].index()])?;
            if next.norm_sqr() > 0.0 {
                self.kraus_depth(&next, depth + 1)?;
            }
        }
        Ok(())
    }

    fn choices(&self, pick: impl Fn(&OutcomeTuple) -> usize) -> Vec<usize> {
        match &self.only {
            Some(t) => vec![pick(t)],
            None => (0..self.n).collect(),
        }
    }

    /// Projection tree over (l, n, m, k) on an unnormalised branch; the
    /// leaves are added to the two density operators without renormalising,
    /// so the branch weights come out of the amplitudes.
    fn measure_all(&mut self, state: &StateVector) -> Result<()> {
        // Register order A1 B1 C1 A2 B2 C2; A2 first, then B1, C1, C2.
        for l in self.choices(|t| t.l) {
            let s_l = contract(state, &self.alice_basis.vectors()[l], 3)?; // A1 B1 C1 B2 C2
            for nn in self.choices(|t| t.n) {
                let s_n = contract(&s_l, &self.bob_basis.vectors()[nn], 1)?; // A1 C1 B2 C2
                for m in self.choices(|t| t.m) {
                    let s_m = contract(&s_n, &self.fourier.vectors()[m], 1)?; // A1 B2 C2
                    for k in self.choices(|t| t.k) {
                        let leaf = contract(&s_m, &self.fourier.vectors()[k], 2)?; // A1 B2
                        let leaf = apply_on(&self.corrections[oplus(m, nn, self.n)], &leaf, &[0])?;
                        let leaf = apply_on(&self.corrections[oplus(k, l, self.n)], &leaf, &[1])?;
                        self.accumulate(&leaf);
                    }
                }
            }
        }
        Ok(())
    }

    fn accumulate(&mut self, leaf: &StateVector) {
        let n = self.n;
        let a = leaf.amplitudes();
        for j in 0..n {
            let col: Vec<_> = (0..n).map(|i| a[i * n + j]).collect();
            self.rho_a1.add_outer(&col, 1.0);
        }
        for i in 0..n {
            self.rho_b2.add_outer(&a[i * n..(i + 1) * n], 1.0);
        }
    }
}

/// Straightforward simulation on the full six-qudit register: every product
/// of Kraus operators on `B1, C1, A2, C2` is applied to the channel, every
/// outcome tuple is projected out and corrected, and the reduced density
/// operators of A1 and B2 are accumulated. Slow, but independent of the
/// per-channel factorisation used by [`noisy_protocol_run`](super::noisy_protocol_run).
pub fn reference_run(
    alice: &PhaseVector,
    bob: &PhaseVector,
    kind: NoiseKind,
    gamma: f64,
    policy: OutcomePolicy,
) -> Result<ReferenceRun> {
    NoiseFactor::new(gamma)?;
    let n = alice.dim();
    if bob.dim() != n {
        return Err(ProtocolError::DimensionMismatch { alice: n, bob: bob.dim() }.into());
    }
    let kraus = kraus_set(kind, gamma, n)?;
    let only = match policy {
        OutcomePolicy::Averaged => None,
        OutcomePolicy::Conditioned(t) => {
            t.validate(n)?;
            Some(t)
        }
    };
    let corrections = (0..n).map(|k| correction_unitary(k, n)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut walk = Walk {
        n,
        kraus: &kraus,
        alice_basis: sender_basis(alice),
        bob_basis: sender_basis(bob),
        fourier: fourier_basis(n)?,
        corrections,
        only,
        rho_a1: Operator::zeros(n),
        rho_b2: Operator::zeros(n),
        branches: 0,
    };
    let channel = Register::channel(n)?.into_state();
    walk.kraus_depth(&channel, 0)?;

    let trace = walk.rho_a1.trace().re;
    if trace == 0.0 {
        return Err(NoiseError::ZeroProbability);
    }
    let scale = C64::new(1.0 / trace, 0.0);
    let rho_a1 = walk.rho_a1.scale(scale);
    let rho_b2 = walk.rho_b2.scale(scale);
    let fid = |rho: &Operator, target: &StateVector| -> Result<f64> {
        Ok(rho.expectation(target.amplitudes())?.re.max(0.0).sqrt())
    };
    Ok(ReferenceRun {
        fidelity_a1: fid(&rho_a1, &equatorial_state(bob))?,
        fidelity_b2: fid(&rho_b2, &equatorial_state(alice))?,
        rho_a1,
        rho_b2,
        kraus_branches: walk.branches,
    })
}
