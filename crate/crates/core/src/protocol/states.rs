use super::{check_dim, PhaseVector, ProtocolError, Result};
use crate::qudit::{root_of_unity, MeasurementBasis, Operator, StateVector, C64};

fn amplitude_scale(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

fn phasor(theta: f64) -> C64 {
    if theta == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        C64::from_polar(1.0, theta)
    }
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index >= n {
        Err(ProtocolError::IndexOutOfRange { index, dim: n })
    } else {
        Ok(())
    }
}

/// `(1/sqrt N) sum_j e^{i theta_j} |j>`.
pub fn equatorial_state(p: &PhaseVector) -> StateVector {
    let n = p.dim();
    let s = amplitude_scale(n);
    let amps = (0..n).map(|j| phasor(p.phase(j)) * s).collect();
    StateVector::new(vec![n], amps).expect("equatorial state is normalised")
}

/// Three-qudit GHZ state `(1/sqrt N) sum_j |jjj>`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    check_dim(n)?;
    let s = amplitude_scale(n);
    let mut amps = vec![C64::new(0.0, 0.0); n * n * n];
    for j in 0..n {
        amps[(j * n + j) * n + j] = C64::new(s, 0.0);
    }
    Ok(StateVector::new(vec![n, n, n], amps)?)
}

/// Sender basis `|tau_l> = (1/sqrt N) sum_j e^{i 2 pi j l / N} e^{-i theta_j} |j>`.
pub fn sender_basis(p: &PhaseVector) -> MeasurementBasis {
    let n = p.dim();
    let s = amplitude_scale(n);
    let rows = (0..n)
        .map(|l| (0..n).map(|j| root_of_unity(n, j * l) * phasor(-p.phase(j)) * s).collect())
        .collect();
    MeasurementBasis::from_rows(rows).expect("sender basis is orthonormal")
}

/// Controller basis `|tau_bar_k> = (1/sqrt N) sum_j e^{i 2 pi j k / N} |j>`.
pub fn fourier_basis(n: usize) -> Result<MeasurementBasis> {
    check_dim(n)?;
    let s = amplitude_scale(n);
    let rows = (0..n).map(|k| (0..n).map(|j| root_of_unity(n, j * k) * s).collect()).collect();
    Ok(MeasurementBasis::from_rows(rows)?)
}

/// Diagonal correction `U_k = sum_j e^{i 2 pi j k / N} |j><j|`.
pub fn correction_unitary(k: usize, n: usize) -> Result<Operator> {
    check_dim(n)?;
    check_index(k, n)?;
    let diag: Vec<C64> = (0..n).map(|j| root_of_unity(n, j * k)).collect();
    Ok(Operator::diagonal(&diag))
}

/// State left on the receiver's particle before correction,
/// `(1/sqrt N) sum_j e^{-i 2 pi j idx / N} e^{i theta_j} |j>`.
///
/// The negative exponent is what makes `U_idx |z_idx> = |nu>` hold.
pub fn collapsed_state(p: &PhaseVector, idx: usize) -> Result<StateVector> {
    let n = p.dim();
    check_index(idx, n)?;
    let s = amplitude_scale(n);
    let amps = (0..n)
        .map(|j| root_of_unity(n, n - (j * idx) % n) * phasor(p.phase(j)) * s)
        .collect();
    Ok(StateVector::new(vec![n], amps)?)
}
