use rand::Rng;

use super::{Branch, BranchEnsemble, MeasurementBasis, Operator, QuditError, Result, C64, STRUCTURAL_TOL};

/// Pure state of a register of qudits with possibly different dimensions.
///
/// Amplitudes are row-major over `dims`, first subsystem most significant.
/// A vector built through [`StateVector::unnormalized`] carries a flag so that
/// intermediate projections can be kept with their raw norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
    normalized: bool,
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(C64::norm_sqr).sum()
}

impl StateVector {
    /// Validating constructor: the amplitude vector must have unit norm.
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = product(&dims);
        if amplitudes.len() != expected {
            return Err(QuditError::DimensionMismatch { expected, actual: amplitudes.len() });
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(QuditError::NotNormalized(norm));
        }
        Ok(Self { dims, amplitudes, normalized: true })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalize(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        Self::unnormalized(dims, amplitudes)?.into_normalized()
    }

    /// Keeps the amplitudes as given and flags the vector as unnormalised.
    pub fn unnormalized(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = product(&dims);
        if amplitudes.len() != expected {
            return Err(QuditError::DimensionMismatch { expected, actual: amplitudes.len() });
        }
        Ok(Self { dims, amplitudes, normalized: false })
    }

    /// Computational basis state `|digits>`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() {
            return Err(QuditError::DimensionMismatch { expected: dims.len(), actual: digits.len() });
        }
        let mut index = 0;
        for (&d, &digit) in dims.iter().zip(digits) {
            if digit >= d {
                return Err(QuditError::DimensionMismatch { expected: d, actual: digit });
            }
            index = index * d + digit;
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); product(dims)];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { dims: dims.to_vec(), amplitudes, normalized: true })
    }

    pub(crate) fn from_parts(dims: Vec<usize>, amplitudes: Vec<C64>, normalized: bool) -> Self {
        debug_assert_eq!(product(&dims), amplitudes.len());
        Self { dims, amplitudes, normalized }
    }

    pub fn into_normalized(self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuditError::ZeroNorm);
        }
        let amplitudes = self.amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { dims: self.dims, amplitudes, normalized: true })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `<self|other>`; vectors must have the same dims.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(QuditError::DimensionMismatch { expected: self.len(), actual: other.len() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Equality up to a global phase: `|<a|b>| = 1` within [`STRUCTURAL_TOL`].
    pub fn equals_up_to_phase(&self, other: &StateVector) -> bool {
        self.overlap(other).is_ok_and(|o| (o - 1.0).abs() <= STRUCTURAL_TOL)
    }

    /// Largest entrywise deviation after removing the relative global phase.
    pub fn phase_aligned_deviation(&self, other: &StateVector) -> f64 {
        let Ok(ip) = self.inner(other) else {
            return f64::INFINITY;
        };
        let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { C64::new(1.0, 0.0) };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for p in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * self.dims[p + 1];
        }
        strides
    }

    fn check_subsystem(&self, index: usize) -> Result<()> {
        if index >= self.dims.len() {
            return Err(QuditError::SubsystemOutOfRange { index, count: self.dims.len() });
        }
        Ok(())
    }
}

/// Kronecker product; dims are concatenated.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let mut amplitudes = Vec::with_capacity(a.len() * b.len());
    for x in &a.amplitudes {
        amplitudes.extend(b.amplitudes.iter().map(|y| x * y));
    }
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    StateVector::from_parts(dims, amplitudes, a.normalized && b.normalized)
}

/// Flat offsets of every configuration of the listed subsystems, first listed
/// subsystem most significant.
fn offsets(dims: &[usize], strides: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in subsystems {
        out = out.iter().flat_map(|&o| (0..dims[p]).map(move |d| o + d * strides[p])).collect();
    }
    out
}

fn complement(count: usize, subsystems: &[usize]) -> Vec<usize> {
    (0..count).filter(|p| !subsystems.contains(p)).collect()
}

/// Applies `op` to the listed subsystems, identity elsewhere.
///
/// The operator index runs over the targets in the order given, first target
/// most significant.
pub fn apply_on(op: &Operator, state: &StateVector, targets: &[usize]) -> Result<StateVector> {
    for (i, &t) in targets.iter().enumerate() {
        state.check_subsystem(t)?;
        if targets[..i].contains(&t) {
            return Err(QuditError::RepeatedSubsystem(t));
        }
    }
    let target_dim: usize = targets.iter().map(|&t| state.dims[t]).product();
    let dim = op.dim()?;
    if dim != target_dim {
        return Err(QuditError::DimensionMismatch { expected: target_dim, actual: dim });
    }
    let strides = state.strides();
    let inner = offsets(&state.dims, &strides, targets);
    let bases = offsets(&state.dims, &strides, &complement(state.dims.len(), targets));

    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    let mut gathered = vec![C64::new(0.0, 0.0); dim];
    for &base in &bases {
        for (g, &o) in gathered.iter_mut().zip(&inner) {
            *g = state.amplitudes[base + o];
        }
        for (r, &o) in inner.iter().enumerate() {
            out[base + o] = op.row(r).iter().zip(&gathered).map(|(a, b)| a * b).sum();
        }
    }
    let normalized = state.normalized && op.is_unitary(STRUCTURAL_TOL);
    Ok(StateVector::from_parts(state.dims.clone(), out, normalized))
}

/// Contracts subsystem `target` with `<bra|`, returning the raw (unnormalised)
/// remainder with `target` removed from the dims.
pub(crate) fn contract(state: &StateVector, bra: &StateVector, target: usize) -> Result<StateVector> {
    state.check_subsystem(target)?;
    let d = state.dims[target];
    if bra.dims.len() != 1 || bra.len() != d {
        return Err(QuditError::DimensionMismatch { expected: d, actual: bra.len() });
    }
    let stride: usize = state.dims[target + 1..].iter().product();
    let outer: usize = state.dims[..target].iter().product();
    let conj: Vec<C64> = bra.amplitudes.iter().map(C64::conj).collect();
    let mut out = vec![C64::new(0.0, 0.0); outer * stride];
    for o in 0..outer {
        let block = &state.amplitudes[o * d * stride..(o + 1) * d * stride];
        let dst = &mut out[o * stride..(o + 1) * stride];
        for (t, c) in conj.iter().enumerate() {
            let src = &block[t * stride..(t + 1) * stride];
            for (x, y) in dst.iter_mut().zip(src) {
                *x += c * y;
            }
        }
    }
    let mut dims = state.dims.clone();
    dims.remove(target);
    Ok(StateVector::from_parts(dims, out, false))
}

/// Outcome of projecting one subsystem onto a single vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Squared norm of the projected component (relative to the input norm).
    pub probability: f64,
    /// Renormalised remainder, `None` when the probability is exactly zero.
    pub state: Option<StateVector>,
}

/// Projects subsystem `target` onto `basis_vec` and removes it from the register.
pub fn project(state: &StateVector, basis_vec: &StateVector, target: usize) -> Result<Projection> {
    let raw = contract(state, basis_vec, target)?;
    let total = state.norm_sqr();
    let weight = raw.norm_sqr();
    let probability = if total > 0.0 { weight / total } else { 0.0 };
    let state = if weight > 0.0 { Some(raw.into_normalized()?) } else { None };
    Ok(Projection { probability, state })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: usize,
    pub probability: f64,
    pub state: StateVector,
}

/// Born-rule measurement of one subsystem in `basis`.
///
/// Draws exactly one `f64` from `rng`, so a seeded generator replays the same
/// outcome sequence.
pub fn measure<R: Rng + ?Sized>(
    state: &StateVector,
    basis: &MeasurementBasis,
    target: usize,
    rng: &mut R,
) -> Result<Measurement> {
    state.check_subsystem(target)?;
    if basis.dim() != state.dims[target] {
        return Err(QuditError::DimensionMismatch { expected: state.dims[target], actual: basis.dim() });
    }
    let projections = basis
        .vectors()
        .iter()
        .map(|v| project(state, v, target))
        .collect::<Result<Vec<_>>>()?;
    let draw: f64 = rng.gen::<f64>() * projections.iter().map(|p| p.probability).sum::<f64>();
    let mut acc = 0.0;
    let mut chosen = None;
    for (i, p) in projections.iter().enumerate() {
        if p.state.is_none() {
            continue;
        }
        acc += p.probability;
        chosen = Some(i);
        if draw < acc {
            break;
        }
    }
    let outcome = chosen.ok_or(QuditError::ZeroNorm)?;
    let Projection { probability, state } = projections.into_iter().nth(outcome).expect("index in range");
    Ok(Measurement { outcome, probability, state: state.expect("nonzero branch") })
}

/// Reduced state of subsystem `keep`, unravelled in the computational basis of
/// the other subsystems. The result's density operator is the partial trace.
pub fn reduce_to(state: &StateVector, keep: usize) -> Result<BranchEnsemble> {
    state.check_subsystem(keep)?;
    let strides = state.strides();
    let inner = offsets(&state.dims, &strides, &[keep]);
    let bases = offsets(&state.dims, &strides, &complement(state.dims.len(), &[keep]));
    let total = state.norm_sqr();
    if total == 0.0 {
        return Err(QuditError::ZeroNorm);
    }
    let mut branches = Vec::new();
    for &base in &bases {
        let amps: Vec<C64> = inner.iter().map(|&o| state.amplitudes[base + o]).collect();
        let w = norm_sqr(&amps);
        if w > 0.0 {
            let v = StateVector::unnormalized(vec![state.dims[keep]], amps)?.into_normalized()?;
            branches.push(Branch { weight: w / total, state: v });
        }
    }
    BranchEnsemble::new(branches)
}
