use super::state::apply_on;
use super::{Operator, QuditError, Result, StateVector, STRUCTURAL_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub weight: f64,
    pub state: StateVector,
}

/// A mixed state as a convex combination of normalised pure branches.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchEnsemble {
    branches: Vec<Branch>,
}

impl BranchEnsemble {
    /// Weights must be non-negative and sum to one within [`STRUCTURAL_TOL`];
    /// every branch state must be normalised and share the same dims.
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let first = branches.first().ok_or(QuditError::EmptyEnsemble)?;
        let dims = first.state.dims().to_vec();
        let mut total = 0.0;
        for b in &branches {
            if !(b.weight >= 0.0 && b.weight.is_finite()) {
                return Err(QuditError::InvalidWeight(b.weight));
            }
            if b.state.dims() != dims.as_slice() {
                return Err(QuditError::DimensionMismatch { expected: first.state.len(), actual: b.state.len() });
            }
            let norm = b.state.norm();
            if (norm - 1.0).abs() > STRUCTURAL_TOL {
                return Err(QuditError::NotNormalized(norm));
            }
            total += b.weight;
        }
        if (total - 1.0).abs() > STRUCTURAL_TOL {
            return Err(QuditError::WeightSum(total));
        }
        Ok(Self { branches })
    }

    pub fn pure(state: StateVector) -> Result<Self> {
        Self::new(vec![Branch { weight: 1.0, state }])
    }

    /// `lambda * a + (1 - lambda) * b`, concatenating branch lists.
    pub fn mix(lambda: f64, a: &BranchEnsemble, b: &BranchEnsemble) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(QuditError::InvalidWeight(lambda));
        }
        fn scaled(e: &BranchEnsemble, s: f64) -> impl Iterator<Item = Branch> + '_ {
            e.branches.iter().map(move |br| Branch { weight: br.weight * s, state: br.state.clone() })
        }
        Self::new(scaled(a, lambda).chain(scaled(b, 1.0 - lambda)).filter(|b| b.weight > 0.0).collect())
    }

    pub(crate) fn from_branches_unchecked(branches: Vec<Branch>) -> Self {
        Self { branches }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.branches[0].state.dims()
    }

    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }

    /// Dense `sum_b w_b |psi_b><psi_b|`. Only sensible for small registers.
    pub fn density_matrix(&self) -> Operator {
        let n = self.branches[0].state.len();
        let mut rho = Operator::zeros(n);
        for b in &self.branches {
            rho.add_outer(b.state.amplitudes(), b.weight);
        }
        rho
    }
}

/// Finite family of square operators with `sum E^dagger E = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<Operator>,
}

impl KrausSet {
    pub fn new(dim: usize, operators: Vec<Operator>) -> Result<Self> {
        for op in &operators {
            let d = op.dim()?;
            if d != dim {
                return Err(QuditError::DimensionMismatch { expected: dim, actual: d });
            }
        }
        let set = Self { dim, operators };
        let dev = set.completeness_deviation();
        if dev > STRUCTURAL_TOL {
            return Err(QuditError::IncompleteKraus(dev));
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `max |sum E^dagger E - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = Operator::zeros(self.dim);
        for op in &self.operators {
            sum.add_assign(&op.adjoint().matmul(op).expect("square"));
        }
        sum.max_abs_diff(&Operator::identity(self.dim))
    }
}

/// Applies the channel to subsystem `target` of every branch.
///
/// Each branch splits into one branch per Kraus operator, weighted by the
/// squared norm of the image; branches with zero weight are dropped.
pub fn apply_kraus(ens: &BranchEnsemble, kraus: &KrausSet, target: usize) -> Result<BranchEnsemble> {
    let mut out = Vec::with_capacity(ens.len() * kraus.len());
    for b in ens.branches() {
        for op in kraus.operators() {
            let image = apply_on(op, &b.state, &[target])?;
            let p = image.norm_sqr();
            let weight = b.weight * p;
            if weight > 0.0 {
                out.push(Branch { weight, state: image.into_normalized()? });
            }
        }
    }
    if out.is_empty() {
        return Err(QuditError::EmptyEnsemble);
    }
    Ok(BranchEnsemble::from_branches_unchecked(out))
}

/// `sqrt(<target| rho |target>)` for the ensemble's density operator.
pub fn fidelity(target: &StateVector, ens: &BranchEnsemble) -> Result<f64> {
    let mut acc = 0.0;
    for b in ens.branches() {
        acc += b.weight * target.inner(&b.state)?.norm_sqr();
    }
    Ok(acc.sqrt())
}
