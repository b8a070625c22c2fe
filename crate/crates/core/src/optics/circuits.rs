use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use super::{reck_decompose, BeamSplitter, Element, InterferometerNetwork, OpticsError, PhaseShifter, Result};
use crate::protocol::{check_dim, fourier_basis, PhaseVector};
use crate::qudit::{apply_on, tensor, Operator, StateVector, C64};

/// Two-qudit `|i, j> -> |i, i + j mod N>`.
pub fn cnot_gate(n: usize) -> Result<Operator> {
    check_dim(n)?;
    Ok(Operator::from_fn(n * n, n * n, |row, col| {
        let (i, j) = (col / n, col % n);
        C64::new(if row == i * n + (i + j) % n { 1.0 } else { 0.0 }, 0.0)
    }))
}

/// CNOT with the second particle of `(1/sqrt N) sum_j |jj>` as control and an
/// ancilla in `|0>` as target.
pub fn ghz_via_cnot(n: usize) -> Result<StateVector> {
    check_dim(n)?;
    let s = 1.0 / (n as f64).sqrt();
    let mut bell = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        bell[j * n + j] = C64::new(s, 0.0);
    }
    let bell = StateVector::new(vec![n, n], bell)?;
    let ancilla = StateVector::basis(&[n], &[0])?;
    Ok(apply_on(&cnot_gate(n)?, &tensor(&bell, &ancilla), &[1, 2])?)
}

/// Matrix whose row `k` is the Fourier vector `|tau_bar_k>`.
pub fn fourier_matrix(n: usize) -> Result<Operator> {
    Ok(fourier_basis(n)?.matrix())
}

/// The fixed four-mode network with its printed parameters, and how far it
/// lands from the four-dimensional Fourier matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperNetworkReport {
    pub network: InterferometerNetwork,
    pub matrix: Operator,
    pub target: Operator,
    /// `max |matrix - target|`.
    pub max_deviation: f64,
    /// `max ||matrix| - |target||`, blind to every phase.
    pub modulus_deviation: f64,
    pub unitarity_deviation: f64,
    /// `max |matrix - matrix without phase shifters|`.
    pub phase_shifter_effect: f64,
}

/// Beam splitters `T_43, T_42, T_41, T_32, T_31, T_21` (modes counted from
/// one in the labels) in that propagation order, then the four output phase
/// shifters.
pub fn paper_network_4d() -> PaperNetworkReport {
    let t = |m: usize, n: usize, phi: f64, omega: f64| {
        Element::BeamSplitter(BeamSplitter::new(m - 1, n - 1, omega, phi).expect("m > n"))
    };
    let mut elements = vec![
        t(4, 3, FRAC_PI_2, FRAC_PI_4),
        t(4, 2, PI, 2f64.sqrt().atan()),
        t(4, 1, 3.0 * FRAC_PI_2, PI / 3.0),
        t(3, 2, (-2f64).atan(), 0.6f64.sqrt().atan()),
        t(3, 1, (-(2f64.sqrt())).atan(), FRAC_PI_4),
        t(2, 1, FRAC_PI_4, (-2f64).atan()),
    ];
    let bare = InterferometerNetwork::new(4, elements.clone()).expect("valid modes").matrix();
    let theta01 = (-1.0f64 / 3.0).atan();
    for (mode, theta) in [(0, theta01), (1, theta01), (2, FRAC_PI_4), (3, FRAC_PI_2)] {
        elements.push(Element::PhaseShifter(PhaseShifter::new(mode, theta)));
    }
    let network = InterferometerNetwork::new(4, elements).expect("valid modes");
    let matrix = network.matrix();
    let target = fourier_matrix(4).expect("dimension 4");
    let modulus_deviation = matrix
        .entries()
        .iter()
        .zip(target.entries())
        .map(|(a, b)| (a.norm() - b.norm()).abs())
        .fold(0.0, f64::max);
    PaperNetworkReport {
        max_deviation: matrix.max_abs_diff(&target),
        modulus_deviation,
        unitarity_deviation: matrix.unitarity_deviation(),
        phase_shifter_effect: matrix.max_abs_diff(&bare),
        network,
        matrix,
        target,
    }
}

/// Input phase shifters `e^{-i theta_j}` followed by the Fourier network. Row
/// `l` of the resulting matrix holds the coordinates of `|tau_l>`.
pub fn sender_network(p: &PhaseVector) -> Result<InterferometerNetwork> {
    let n = p.dim();
    let fourier = reck_decompose(&fourier_matrix(n)?)?;
    let mut elements: Vec<Element> = (1..n)
        .filter(|&j| p.phase(j) != 0.0)
        .map(|j| Element::PhaseShifter(PhaseShifter::new(j, -p.phase(j))))
        .collect();
    elements.extend(fourier.elements);
    InterferometerNetwork::new(n, elements)
}

/// Phase shifters realising `U_k`: mode `j` gets `2 pi (j k mod N) / N`,
/// zero phases omitted.
pub fn correction_circuit(k: usize, n: usize) -> Result<Vec<PhaseShifter>> {
    check_dim(n)?;
    if k >= n {
        return Err(OpticsError::ModeOutOfRange { mode: k, dim: n });
    }
    Ok((0..n)
        .filter_map(|j| {
            let r = (j * k) % n;
            (r != 0).then(|| PhaseShifter::new(j, TAU * r as f64 / n as f64))
        })
        .collect())
}
