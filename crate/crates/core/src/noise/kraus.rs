use super::{NoiseFactor, NoiseKind, Result};
use crate::protocol::check_dim;
use crate::qudit::{root_of_unity, KrausSet, Operator, C64};

fn shift(n: usize, s: usize, coeff: f64, clock: usize) -> Operator {
    // coeff * sum_j w^{j clock} |j+s><j|
    Operator::from_fn(n, n, |r, c| if r == (c + s) % n { root_of_unity(n, c * clock) * coeff } else { C64::new(0.0, 0.0) })
}

fn build(n: usize, ops: Vec<(f64, Operator)>) -> Result<KrausSet> {
    let kept = ops.into_iter().filter(|(c, _)| *c != 0.0).map(|(_, op)| op).collect();
    Ok(KrausSet::new(n, kept)?)
}

/// `E_l = gamma_l sum_j |j+l><j|` with `gamma_0 = sqrt(1 - (N-1) gamma / N)`
/// and `gamma_l = sqrt(gamma / N)` otherwise.
pub fn qudit_flip_kraus(gamma: f64, n: usize) -> Result<KrausSet> {
    let g = NoiseFactor::new(gamma)?.value();
    check_dim(n)?;
    let nf = n as f64;
    let ops = (0..n)
        .map(|l| {
            let c = if l == 0 { (1.0 - (nf - 1.0) * g / nf).sqrt() } else { (g / nf).sqrt() };
            (c, shift(n, l, c, 0))
        })
        .collect();
    build(n, ops)
}

/// `E_0 = diag(1, sqrt(1-gamma), ...)`, `E_s = sqrt(gamma) |s><s|`.
pub fn dephasing_kraus(gamma: f64, n: usize) -> Result<KrausSet> {
    let g = NoiseFactor::new(gamma)?.value();
    check_dim(n)?;
    let keep = (1.0 - g).sqrt();
    let e0: Vec<C64> = (0..n).map(|j| C64::new(if j == 0 { 1.0 } else { keep }, 0.0)).collect();
    let mut ops = vec![(1.0, Operator::diagonal(&e0))];
    let c = g.sqrt();
    for s in 1..n {
        let diag: Vec<C64> = (0..n).map(|j| C64::new(if j == s { c } else { 0.0 }, 0.0)).collect();
        ops.push((c, Operator::diagonal(&diag)));
    }
    build(n, ops)
}

/// `E_00 = sqrt(1 - (N-1) gamma / N) I` and, for `s1, s2` both nonzero,
/// `E_{s1 s2} = sqrt(gamma / (N (N-1))) sum_j w^{j s1} |j+s2><j|`.
pub fn phase_flip_kraus(gamma: f64, n: usize) -> Result<KrausSet> {
    let g = NoiseFactor::new(gamma)?.value();
    check_dim(n)?;
    let nf = n as f64;
    let c0 = (1.0 - (nf - 1.0) * g / nf).sqrt();
    let mut ops = vec![(c0, shift(n, 0, c0, 0))];
    let c = (g / (nf * (nf - 1.0))).sqrt();
    for s1 in 1..n {
        for s2 in 1..n {
            ops.push((c, shift(n, s2, c, s1)));
        }
    }
    build(n, ops)
}

pub fn kraus_set(kind: NoiseKind, gamma: f64, n: usize) -> Result<KrausSet> {
    match kind {
        NoiseKind::QuditFlip => qudit_flip_kraus(gamma, n),
        NoiseKind::Dephasing => dephasing_kraus(gamma, n),
        NoiseKind::QuditPhaseFlip => phase_flip_kraus(gamma, n),
    }
}
