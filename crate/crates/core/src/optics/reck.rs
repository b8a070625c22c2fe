use super::{BeamSplitter, Element, InterferometerNetwork, OpticsError, PhaseShifter, Result};
use crate::qudit::{Operator, C64, STRUCTURAL_TOL};

pub const MAX_RECK_DIM: usize = 16;

/// Triangular beam-splitter mesh for a unitary.
///
/// Columns are cleared left to right: for column `c` and each row `r > c`, a
/// `T^dagger` on modes `(c, r)` is applied from the left to null entry
/// `(r, c)`. What remains is diagonal, so `U = T_1 ... T_K D`. The network
/// lists the phases of `D` first (as input phase shifters, zero phases
/// omitted) followed by `T_K, ..., T_1`.
pub fn reck_decompose(u: &Operator) -> Result<InterferometerNetwork> {
    let dim = u.dim()?;
    if dim == 0 || dim > MAX_RECK_DIM {
        return Err(OpticsError::UnsupportedDimension(dim));
    }
    let dev = u.unitarity_deviation();
    if dev > STRUCTURAL_TOL {
        return Err(OpticsError::NotUnitary(dev));
    }
    let mut w: Vec<C64> = u.entries().to_vec();
    let at = |r: usize, c: usize| r * dim + c;
    let mut splitters = Vec::with_capacity(dim * (dim - 1) / 2);
    for c in 0..dim.saturating_sub(1) {
        for r in c + 1..dim {
            let a = w[at(c, c)];
            let b = w[at(r, c)];
            let omega = a.norm().atan2(b.norm());
            let phi = a.arg() - b.arg();
            let bs = BeamSplitter::new(r, c, omega, phi)?;
            // Apply the adjoint block to rows c and r.
            let blk = bs.block();
            let adj = [[blk[0][0].conj(), blk[1][0].conj()], [blk[0][1].conj(), blk[1][1].conj()]];
            for col in 0..dim {
                let x = w[at(c, col)];
                let y = w[at(r, col)];
                w[at(c, col)] = adj[0][0] * x + adj[0][1] * y;
                w[at(r, col)] = adj[1][0] * x + adj[1][1] * y;
            }
            w[at(r, c)] = C64::new(0.0, 0.0);
            splitters.push(bs);
        }
    }
    let mut elements: Vec<Element> = (0..dim)
        .filter_map(|j| {
            let theta = w[at(j, j)].arg();
            (theta != 0.0).then_some(Element::PhaseShifter(PhaseShifter::new(j, theta)))
        })
        .collect();
    elements.extend(splitters.into_iter().rev().map(Element::BeamSplitter));
    InterferometerNetwork::new(dim, elements)
}
