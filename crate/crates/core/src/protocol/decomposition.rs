use super::{
    collapsed_state, fourier_basis, oplus, sender_basis, PhaseVector, ProtocolError, Register, Result,
};
use crate::qudit::{tensor, C64, STRUCTURAL_TOL};

/// Largest dimension accepted by [`verify_decomposition`]; the sum has `N^4`
/// terms of `N^6` amplitudes each.
pub const MAX_DECOMPOSITION_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionReport {
    pub max_deviation: f64,
    pub passed: bool,
}

/// Rebuilds the channel as
/// `(1/N^2) sum_{k,l,m,n} |z~_{m+n}>_A1 |tau~_n>_B1 |tau_bar_m>_C1 |tau_l>_A2 |z_{k+l}>_B2 |tau_bar_k>_C2`
/// and compares it entrywise with the two GHZ states.
pub fn verify_decomposition(alice: &PhaseVector, bob: &PhaseVector) -> Result<DecompositionReport> {
    let n = alice.dim();
    if bob.dim() != n {
        return Err(ProtocolError::DimensionMismatch { alice: n, bob: bob.dim() });
    }
    if n > MAX_DECOMPOSITION_DIM {
        return Err(ProtocolError::TooLarge(n));
    }
    let tau = sender_basis(alice);
    let tau_tilde = sender_basis(bob);
    let tau_bar = fourier_basis(n)?;
    let scale = 1.0 / (n * n) as f64;

    let mut sum = vec![C64::new(0.0, 0.0); n.pow(6)];
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                for nn in 0..n {
                    let a1 = collapsed_state(bob, oplus(m, nn, n))?;
                    let b2 = collapsed_state(alice, oplus(k, l, n))?;
                    let parts = [
                        &a1,
                        &tau_tilde.vectors()[nn],
                        &tau_bar.vectors()[m],
                        &tau.vectors()[l],
                        &b2,
                        &tau_bar.vectors()[k],
                    ];
                    let term = parts[1..].iter().fold(parts[0].clone(), |acc, v| tensor(&acc, v));
                    for (s, t) in sum.iter_mut().zip(term.amplitudes()) {
                        *s += t * scale;
                    }
                }
            }
        }
    }
    let channel = Register::channel(n)?.into_state();
    let max_deviation =
        channel.amplitudes().iter().zip(&sum).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(DecompositionReport { max_deviation, passed: max_deviation <= STRUCTURAL_TOL })
}
