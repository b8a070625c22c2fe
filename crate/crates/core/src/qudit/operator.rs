use super::{QuditError, Result, C64};

/// Dense complex matrix, row-major, mapping a `dim_in` space to `dim_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim_out: usize,
    dim_in: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn from_fn(dim_out: usize, dim_in: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim_out * dim_in);
        for r in 0..dim_out {
            for c in 0..dim_in {
                entries.push(f(r, c));
            }
        }
        Self { dim_out, dim_in, entries }
    }

    /// Builds a matrix from its rows. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim_out = rows.len();
        let dim_in = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(dim_out * dim_in);
        for row in rows {
            if row.len() != dim_in {
                return Err(QuditError::DimensionMismatch { expected: dim_in, actual: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { dim_out, dim_in, entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { C64::new(0.0, 0.0) })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    /// Side length of a square operator.
    pub fn dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.dim_in)
        } else {
            Err(QuditError::NotSquare { rows: self.dim_out, cols: self.dim_in })
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim_in + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[C64] {
        &self.entries[row * self.dim_in..(row + 1) * self.dim_in]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim_in, self.dim_out, |r, c| self.get(c, r).conj())
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Operator) -> Result<Self> {
        if self.dim_in != rhs.dim_out {
            return Err(QuditError::DimensionMismatch { expected: self.dim_in, actual: rhs.dim_out });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim_out * rhs.dim_in];
        for r in 0..self.dim_out {
            for k in 0..self.dim_in {
                let a = self.get(r, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out[r * rhs.dim_in..(r + 1) * rhs.dim_in];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim_out: self.dim_out, dim_in: rhs.dim_in, entries: out })
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim_in {
            return Err(QuditError::DimensionMismatch { expected: self.dim_in, actual: v.len() });
        }
        Ok((0..self.dim_out)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { dim_out: self.dim_out, dim_in: self.dim_in, entries: self.entries.iter().map(|e| e * factor).collect() }
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |U^dagger U - I|`, infinite for non-square operators.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.adjoint().matmul(self).expect("square operator");
        gram.max_abs_diff(&Operator::identity(self.dim_in))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim_in.min(self.dim_out)).map(|i| self.get(i, i)).sum()
    }

    /// `<v| self |v>`.
    pub fn expectation(&self, v: &[C64]) -> Result<C64> {
        let w = self.apply(v)?;
        Ok(v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum())
    }

    pub(crate) fn add_assign(&mut self, other: &Operator) {
        debug_assert_eq!(self.entries.len(), other.entries.len());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    /// Zero matrix of the given square size.
    pub fn zeros(dim: usize) -> Self {
        Self { dim_out: dim, dim_in: dim, entries: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    /// Adds `weight * |v><v|` in place.
    pub fn add_outer(&mut self, v: &[C64], weight: f64) {
        debug_assert!(self.is_square() && v.len() == self.dim_in);
        let n = self.dim_in;
        for (row, &x) in self.entries.chunks_mut(n).zip(v) {
            let a = x * weight;
            for (e, y) in row.iter_mut().zip(v) {
                *e += a * y.conj();
            }
        }
    }
}
