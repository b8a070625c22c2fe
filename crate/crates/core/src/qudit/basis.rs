use super::{Operator, QuditError, Result, StateVector, C64, STRUCTURAL_TOL};

/// Ordered orthonormal family of single-qudit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    dim: usize,
    vectors: Vec<StateVector>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        let dim = vectors.first().map_or(0, StateVector::len);
        if vectors.len() != dim || dim == 0 {
            return Err(QuditError::IncompleteBasis { expected: dim, actual: vectors.len() });
        }
        for v in &vectors {
            if v.dims() != [dim] {
                return Err(QuditError::DimensionMismatch { expected: dim, actual: v.len() });
            }
        }
        let basis = Self { dim, vectors };
        let dev = basis.orthonormality_deviation();
        if dev > STRUCTURAL_TOL {
            return Err(QuditError::NotOrthonormal(dev));
        }
        Ok(basis)
    }

    /// Each row of `rows` is the coordinate vector of one basis element.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let vectors = rows
            .into_iter()
            .map(|r| {
                let n = r.len();
                StateVector::new(vec![n], r)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim).map(|j| StateVector::basis(&[dim], &[j]).expect("digit < dim")).collect();
        Self { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> Option<&StateVector> {
        self.vectors.get(index)
    }

    /// Matrix whose row `k` holds the coordinates of vector `k`.
    pub fn matrix(&self) -> Operator {
        Operator::from_fn(self.dim, self.dim, |r, c| self.vectors[r].amplitudes()[c])
    }

    /// `max |<v_i|v_j> - delta_ij|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let ip = a.inner(b).unwrap_or(C64::new(f64::INFINITY, 0.0));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }
}
