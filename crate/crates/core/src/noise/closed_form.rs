use super::{NoiseFactor, NoiseKind, Result};
use crate::protocol::PhaseVector;

/// Closed-form dephasing fidelity quoted for `N = 4`:
/// `(1/16) sqrt([1 + 6 s + 9 s^2]^2 + 6 gamma (1 + 3 s)^2 + 9 gamma^2)` with
/// `s = sqrt(1 - gamma)`.
pub fn paper_fidelity_dephasing(gamma: f64) -> Result<f64> {
    let g = NoiseFactor::new(gamma)?.value();
    let s = (1.0 - g).sqrt();
    let a = 1.0 + 6.0 * s + 9.0 * (1.0 - g);
    let b = 1.0 + 3.0 * s;
    Ok((a * a + 6.0 * g * b * b + 9.0 * g * g).sqrt() / 16.0)
}

/// `1 - 3 gamma / 4`, quoted for the phase-flip channel and the `N = 4`
/// state with all phases zero.
pub fn paper_fidelity_phaseflip_equatorial(gamma: f64) -> Result<f64> {
    let g = NoiseFactor::new(gamma)?.value();
    Ok(1.0 - 0.75 * g)
}

/// The quoted closed form applicable to this configuration, if any. All of
/// them are stated for `N = 4` only; the flip and phase-flip values further
/// assume the target phases are all zero.
pub fn paper_fidelity(kind: NoiseKind, target: &PhaseVector, gamma: f64) -> Result<Option<f64>> {
    NoiseFactor::new(gamma)?;
    if target.dim() != 4 {
        return Ok(None);
    }
    Ok(match kind {
        NoiseKind::Dephasing => Some(paper_fidelity_dephasing(gamma)?),
        NoiseKind::QuditPhaseFlip if target.is_zero() => Some(paper_fidelity_phaseflip_equatorial(gamma)?),
        NoiseKind::QuditFlip if target.is_zero() => Some(1.0),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dephasing_endpoints() {
        assert!((paper_fidelity_dephasing(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((paper_fidelity_dephasing(1.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn phaseflip_values() {
        assert_eq!(paper_fidelity_phaseflip_equatorial(0.0).unwrap(), 1.0);
        assert!((paper_fidelity_phaseflip_equatorial(0.4).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(paper_fidelity_phaseflip_equatorial(1.0).unwrap(), 0.25);
    }

    #[test]
    fn no_closed_form_outside_quoted_cases() {
        let z3 = PhaseVector::zeros(3).unwrap();
        let p4 = PhaseVector::new(4, vec![0.1, 0.2, 0.3]).unwrap();
        assert_eq!(paper_fidelity(NoiseKind::Dephasing, &z3, 0.5).unwrap(), None);
        assert_eq!(paper_fidelity(NoiseKind::QuditPhaseFlip, &p4, 0.5).unwrap(), None);
        assert!(paper_fidelity(NoiseKind::Dephasing, &p4, 0.5).unwrap().is_some());
    }
}
