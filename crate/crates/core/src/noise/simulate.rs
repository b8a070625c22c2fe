use serde::Serialize;

use super::{kraus_set, NoiseError, NoiseFactor, NoiseKind, Result};
use crate::protocol::{
    correction_unitary, equatorial_state, fourier_basis, ghz_state, oplus, sender_basis, OutcomeTuple, PhaseVector,
    ProtocolError,
};
use crate::qudit::{apply_on, contract, fidelity, Branch, BranchEnsemble, KrausSet};

/// How the outcome tuples of a noisy run are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutcomePolicy {
    /// Every tuple weighted by its probability, each with its own correction.
    #[default]
    Averaged,
    /// Only the given tuple, renormalised.
    Conditioned(OutcomeTuple),
}

impl OutcomePolicy {
    /// Conditioning on the all-zero tuple.
    pub fn conditioned_on_zero() -> Self {
        OutcomePolicy::Conditioned(OutcomeTuple::new(0, 0, 0, 0))
    }
}

/// Share of one Kraus pair (sender operator, controller operator) in a final
/// ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchContribution {
    pub sender_kraus: usize,
    pub controller_kraus: usize,
    /// Probability mass carried by this pair.
    pub weight: f64,
    /// This pair's term in the squared fidelity.
    pub fidelity_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDiagnostics {
    pub kraus_operators: usize,
    /// Probability of the conditioning outcome, if any.
    pub conditioning_probability: Option<f64>,
    pub a1_breakdown: Vec<BranchContribution>,
    pub b2_breakdown: Vec<BranchContribution>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyRun {
    /// Final state on A1; the target is Bob's state.
    pub alice_final: BranchEnsemble,
    /// Final state on B2; the target is Alice's state.
    pub bob_final: BranchEnsemble,
    pub fidelity_a1: f64,
    pub fidelity_b2: f64,
    pub diagnostics: NoiseDiagnostics,
}

/// Positions of the measured particles of one GHZ state; the receiver is
/// whatever remains.
struct Layout {
    sender: usize,
    controller: usize,
}

struct ChannelResult {
    ensemble: BranchEnsemble,
    fidelity: f64,
    probability: f64,
    breakdown: Vec<BranchContribution>,
}

/// One GHZ state with noise on its sender and controller particles, measured
/// and corrected. The two GHZ states of the protocol never interact, so each
/// receiver's final state depends only on its own triple.
fn run_channel(
    layout: &Layout,
    sender_phases: &PhaseVector,
    kraus: &KrausSet,
    only: Option<(usize, usize)>,
) -> Result<ChannelResult> {
    let n = sender_phases.dim();
    let ghz = ghz_state(n)?;
    let sender_basis = sender_basis(sender_phases);
    let fourier = fourier_basis(n)?;
    let target = equatorial_state(sender_phases);
    let ops = kraus.operators();
    // Positions shift once the sender is contracted away.
    let controller_after = if layout.controller > layout.sender { layout.controller - 1 } else { layout.controller };
    let outcomes: Vec<(usize, usize)> = match only {
        Some(pair) => vec![pair],
        None => (0..n).flat_map(|s| (0..n).map(move |c| (s, c))).collect(),
    };

    let mut branches = Vec::new();
    let mut breakdown = Vec::new();
    for (i, e_s) in ops.iter().enumerate() {
        let after_sender = apply_on(e_s, &ghz, &[layout.sender])?;
        for (j, e_c) in ops.iter().enumerate() {
            let noisy = apply_on(e_c, &after_sender, &[layout.controller])?;
            let mut contribution = BranchContribution { sender_kraus: i, controller_kraus: j, weight: 0.0, fidelity_sq: 0.0 };
            for &(s, c) in &outcomes {
                let v = contract(&noisy, &sender_basis.vectors()[s], layout.sender)?;
                let v = contract(&v, &fourier.vectors()[c], controller_after)?;
                let w = v.norm_sqr();
                if w == 0.0 {
                    continue;
                }
                let corrected = apply_on(&correction_unitary(oplus(s, c, n), n)?, &v.into_normalized()?, &[0])?;
                contribution.weight += w;
                contribution.fidelity_sq += w * target.inner(&corrected)?.norm_sqr();
                branches.push(Branch { weight: w, state: corrected });
            }
            breakdown.push(contribution);
        }
    }
    let probability: f64 = branches.iter().map(|b| b.weight).sum();
    if probability == 0.0 {
        return Err(NoiseError::ZeroProbability);
    }
    for b in &mut branches {
        b.weight /= probability;
    }
    for c in &mut breakdown {
        c.weight /= probability;
        c.fidelity_sq /= probability;
    }
    let ensemble = BranchEnsemble::new(branches)?;
    let fidelity = fidelity(&target, &ensemble)?;
    Ok(ChannelResult { ensemble, fidelity, probability, breakdown })
}

/// Exact noisy protocol: the channel acts independently on `B1, C1, A2, C2`,
/// then the usual measurements and corrections are applied on every branch.
pub fn noisy_protocol_run(
    alice: &PhaseVector,
    bob: &PhaseVector,
    kind: NoiseKind,
    gamma: f64,
    policy: OutcomePolicy,
) -> Result<NoisyRun> {
    NoiseFactor::new(gamma)?;
    let n = alice.dim();
    if bob.dim() != n {
        return Err(ProtocolError::DimensionMismatch { alice: n, bob: bob.dim() }.into());
    }
    let kraus = kraus_set(kind, gamma, n)?;
    let (only1, only2) = match policy {
        OutcomePolicy::Averaged => (None, None),
        OutcomePolicy::Conditioned(t) => {
            t.validate(n)?;
            (Some((t.n, t.m)), Some((t.l, t.k)))
        }
    };
    // A1 B1 C1: Bob sends through B1, Charlie controls with C1.
    let first = run_channel(&Layout { sender: 1, controller: 2 }, bob, &kraus, only1)?;
    // A2 B2 C2: Alice sends through A2, Charlie controls with C2.
    let second = run_channel(&Layout { sender: 0, controller: 2 }, alice, &kraus, only2)?;
    let conditioning_probability = match policy {
        OutcomePolicy::Averaged => None,
        OutcomePolicy::Conditioned(_) => Some(first.probability * second.probability),
    };
    Ok(NoisyRun {
        fidelity_a1: first.fidelity,
        fidelity_b2: second.fidelity,
        alice_final: first.ensemble,
        bob_final: second.ensemble,
        diagnostics: NoiseDiagnostics {
            kraus_operators: kraus.len(),
            conditioning_probability,
            a1_breakdown: first.breakdown,
            b2_breakdown: second.breakdown,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(n: usize) -> PhaseVector {
        PhaseVector::zeros(n).unwrap()
    }

    #[test]
    fn noiseless_runs_are_perfect() {
        let a = PhaseVector::new(3, vec![0.3, 1.7]).unwrap();
        let b = PhaseVector::new(3, vec![-2.0, 0.9]).unwrap();
        for kind in NoiseKind::ALL {
            let r = noisy_protocol_run(&a, &b, kind, 0.0, OutcomePolicy::Averaged).unwrap();
            assert!((r.fidelity_a1 - 1.0).abs() < 1e-12);
            assert!((r.fidelity_b2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_dephasing_equatorial_value() {
        let r = noisy_protocol_run(&zero(4), &zero(4), NoiseKind::Dephasing, 1.0, OutcomePolicy::Averaged).unwrap();
        assert!((r.fidelity_a1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn conditioning_reports_probability() {
        let r = noisy_protocol_run(&zero(3), &zero(3), NoiseKind::QuditFlip, 0.5, OutcomePolicy::conditioned_on_zero())
            .unwrap();
        let p = r.diagnostics.conditioning_probability.unwrap();
        assert!((p - 1.0 / 81.0).abs() < 1e-12);
    }

    #[test]
    fn breakdown_sums_to_totals() {
        let a = PhaseVector::new(4, vec![0.5, 1.0, 1.5]).unwrap();
        let r = noisy_protocol_run(&a, &a, NoiseKind::QuditPhaseFlip, 0.6, OutcomePolicy::Averaged).unwrap();
        let w: f64 = r.diagnostics.a1_breakdown.iter().map(|c| c.weight).sum();
        let f: f64 = r.diagnostics.a1_breakdown.iter().map(|c| c.fidelity_sq).sum();
        assert!((w - 1.0).abs() < 1e-12);
        assert!((f.sqrt() - r.fidelity_a1).abs() < 1e-12);
        assert_eq!(r.diagnostics.a1_breakdown.len(), 100);
    }
}
