use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_dim, correction_unitary, equatorial_state, fourier_basis, oplus, sender_basis, PhaseVector, ProtocolError,
    Register, Result, Site,
};
use crate::qudit::{apply_on, MeasurementBasis, StateVector, C64, STRUCTURAL_TOL};

/// Measurement outcomes: `l` on A2, `n` on B1, `m` on C1, `k` on C2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeTuple {
    pub l: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl OutcomeTuple {
    pub fn new(l: usize, n: usize, m: usize, k: usize) -> Self {
        Self { l, n, m, k }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        for index in [self.l, self.n, self.m, self.k] {
            if index >= dim {
                return Err(ProtocolError::IndexOutOfRange { index, dim });
            }
        }
        Ok(())
    }

    /// All `dim^4` tuples, `l` slowest and `k` fastest.
    pub fn all(dim: usize) -> impl Iterator<Item = OutcomeTuple> {
        (0..dim.pow(4)).map(move |i| {
            OutcomeTuple::new(i / (dim * dim * dim), (i / (dim * dim)) % dim, (i / dim) % dim, i % dim)
        })
    }
}

/// Correction indices: `U_{a1_index}` on A1 and `U_{b2_index}` on B2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrectionRule {
    pub a1_index: usize,
    pub b2_index: usize,
}

impl CorrectionRule {
    pub fn for_outcome(t: &OutcomeTuple, dim: usize) -> Self {
        Self { a1_index: oplus(t.m, t.n, dim), b2_index: oplus(t.k, t.l, dim) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeSelection {
    Forced(OutcomeTuple),
    /// Born sampling with `ChaCha8Rng::seed_from_u64(seed)`, one draw per
    /// measurement in the order A2, B1, C1, C2.
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub outcome: OutcomeTuple,
    /// Joint probability of `outcome`.
    pub probability: f64,
    pub corrections: CorrectionRule,
    pub alice_pre_correction: StateVector,
    pub bob_pre_correction: StateVector,
    /// State on A1 after correction; the target is Bob's state.
    pub alice_final: StateVector,
    /// State on B2 after correction; the target is Alice's state.
    pub bob_final: StateVector,
    /// Whether A1 and B2 equal their targets up to global phase.
    pub recovered: (bool, bool),
}

pub(crate) enum Choice<'a> {
    Forced(usize),
    Sample(&'a mut ChaCha8Rng),
}

/// Measures one site, returning outcome, conditional probability and the
/// remaining register.
pub(crate) fn measure_site(
    reg: &Register,
    site: Site,
    basis: &MeasurementBasis,
    choice: Choice<'_>,
) -> Result<(usize, f64, Register)> {
    match choice {
        Choice::Forced(idx) => {
            let v = basis.vector(idx).ok_or(ProtocolError::IndexOutOfRange { index: idx, dim: basis.dim() })?;
            match reg.project(site, v)? {
                (p, Some(rest)) => Ok((idx, p, rest)),
                (_, None) => Err(ProtocolError::ZeroProbability(site)),
            }
        }
        Choice::Sample(rng) => Ok(reg.measure(site, basis, rng)?),
    }
}

/// Splits a two-site pure state into its factors.
fn factor_pair(state: &StateVector) -> Result<(StateVector, StateVector)> {
    let dims = state.dims();
    let (da, db) = (dims[0], dims[1]);
    let amps = state.amplitudes();
    let col_norm = |j: usize| (0..da).map(|i| amps[i * db + j].norm_sqr()).sum::<f64>();
    let jstar = (0..db).max_by(|&x, &y| col_norm(x).total_cmp(&col_norm(y))).expect("non-empty");
    let a = StateVector::normalize(vec![da], (0..da).map(|i| amps[i * db + jstar]).collect())?;
    let b_raw: Vec<C64> =
        (0..db).map(|j| (0..da).map(|i| a.amplitudes()[i].conj() * amps[i * db + j]).sum()).collect();
    let b = StateVector::normalize(vec![db], b_raw)?;
    let mut residual: f64 = 0.0;
    for i in 0..da {
        for j in 0..db {
            residual = residual.max((amps[i * db + j] - a.amplitudes()[i] * b.amplitudes()[j]).norm());
        }
    }
    if residual > STRUCTURAL_TOL {
        return Err(ProtocolError::NotProduct(residual));
    }
    Ok((a, b))
}

/// Step 3: splits the A1/B2 register, applies both corrections and checks
/// recovery.
pub(crate) fn finish(
    reg: Register,
    alice: &PhaseVector,
    bob: &PhaseVector,
    outcome: OutcomeTuple,
    probability: f64,
) -> Result<ProtocolResult> {
    let dim = alice.dim();
    if reg.sites() != [Site::A1, Site::B2] {
        let missing = [Site::A1, Site::B2].into_iter().find(|s| !reg.sites().contains(s)).unwrap_or(Site::A1);
        return Err(ProtocolError::MissingSite(missing));
    }
    let (alice_pre, bob_pre) = factor_pair(reg.state())?;
    let corrections = CorrectionRule::for_outcome(&outcome, dim);
    let alice_final = apply_on(&correction_unitary(corrections.a1_index, dim)?, &alice_pre, &[0])?;
    let bob_final = apply_on(&correction_unitary(corrections.b2_index, dim)?, &bob_pre, &[0])?;
    let recovered = (
        alice_final.equals_up_to_phase(&equatorial_state(bob)),
        bob_final.equals_up_to_phase(&equatorial_state(alice)),
    );
    Ok(ProtocolResult {
        outcome,
        probability,
        corrections,
        alice_pre_correction: alice_pre,
        bob_pre_correction: bob_pre,
        alice_final,
        bob_final,
        recovered,
    })
}

fn check_pair(alice: &PhaseVector, bob: &PhaseVector) -> Result<usize> {
    if alice.dim() != bob.dim() {
        return Err(ProtocolError::DimensionMismatch { alice: alice.dim(), bob: bob.dim() });
    }
    check_dim(alice.dim())?;
    Ok(alice.dim())
}

/// Runs the ideal protocol: Alice measures A2, Bob measures B1, Charlie
/// measures C1 and C2, then A1 and B2 are corrected.
pub fn run_protocol(alice: &PhaseVector, bob: &PhaseVector, selection: OutcomeSelection) -> Result<ProtocolResult> {
    let dim = check_pair(alice, bob)?;
    let alice_basis = sender_basis(alice);
    let bob_basis = sender_basis(bob);
    let fourier = fourier_basis(dim)?;
    let plan = [(Site::A2, &alice_basis), (Site::B1, &bob_basis), (Site::C1, &fourier), (Site::C2, &fourier)];

    let mut reg = Register::channel(dim)?;
    let mut outcomes = [0usize; 4];
    let mut probability = 1.0;
    match selection {
        OutcomeSelection::Forced(t) => {
            t.validate(dim)?;
            let forced = [t.l, t.n, t.m, t.k];
            for (i, (site, basis)) in plan.iter().enumerate() {
                let (o, p, rest) = measure_site(&reg, *site, basis, Choice::Forced(forced[i]))?;
                outcomes[i] = o;
                probability *= p;
                reg = rest;
            }
        }
        OutcomeSelection::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (i, (site, basis)) in plan.iter().enumerate() {
                let (o, p, rest) = measure_site(&reg, *site, basis, Choice::Sample(&mut rng))?;
                outcomes[i] = o;
                probability *= p;
                reg = rest;
            }
        }
    }
    let outcome = OutcomeTuple::new(outcomes[0], outcomes[1], outcomes[2], outcomes[3]);
    finish(reg, alice, bob, outcome, probability)
}

/// Joint Born probability of one outcome tuple.
pub fn joint_probability(alice: &PhaseVector, bob: &PhaseVector, outcome: OutcomeTuple) -> Result<f64> {
    match run_protocol(alice, bob, OutcomeSelection::Forced(outcome)) {
        Ok(r) => Ok(r.probability),
        Err(ProtocolError::ZeroProbability(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Joint probability of `outcome` in the noiseless protocol. The value does
/// not depend on the phases, so zero phases are used.
pub fn outcome_probability(n: usize, outcome: OutcomeTuple) -> Result<f64> {
    let zero = PhaseVector::zeros(n)?;
    joint_probability(&zero, &zero, outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_enumerate_lexicographically() {
        let all: Vec<_> = OutcomeTuple::all(2).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], OutcomeTuple::new(0, 0, 0, 0));
        assert_eq!(all[1], OutcomeTuple::new(0, 0, 0, 1));
        assert_eq!(all[15], OutcomeTuple::new(1, 1, 1, 1));
    }

    #[test]
    fn all_zero_outcome_needs_no_correction() {
        for n in 2..=6 {
            let p = PhaseVector::new(n, (1..n).map(|j| 0.3 * j as f64).collect()).unwrap();
            let q = PhaseVector::new(n, (1..n).map(|j| -0.7 * j as f64).collect()).unwrap();
            let r = run_protocol(&p, &q, OutcomeSelection::Forced(OutcomeTuple::new(0, 0, 0, 0))).unwrap();
            assert_eq!(r.corrections, CorrectionRule { a1_index: 0, b2_index: 0 });
            assert_eq!(r.recovered, (true, true));
        }
    }

    #[test]
    fn invalid_inputs() {
        let p = PhaseVector::zeros(3).unwrap();
        let q = PhaseVector::zeros(4).unwrap();
        assert!(matches!(
            run_protocol(&p, &q, OutcomeSelection::Sampled { seed: 1 }),
            Err(ProtocolError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            run_protocol(&p, &p, OutcomeSelection::Forced(OutcomeTuple::new(0, 3, 0, 0))),
            Err(ProtocolError::IndexOutOfRange { index: 3, dim: 3 })
        ));
    }

    #[test]
    fn product_split_rejects_entangled_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::new(
            vec![2, 2],
            vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)],
        )
        .unwrap();
        assert!(matches!(factor_pair(&bell), Err(ProtocolError::NotProduct(_))));
    }

    #[test]
    fn seeded_runs_replay() {
        let p = PhaseVector::new(3, vec![0.4, 2.0]).unwrap();
        let q = PhaseVector::new(3, vec![1.1, -0.3]).unwrap();
        let a = run_protocol(&p, &q, OutcomeSelection::Sampled { seed: 99 }).unwrap();
        let b = run_protocol(&p, &q, OutcomeSelection::Sampled { seed: 99 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.recovered, (true, true));
    }
}
