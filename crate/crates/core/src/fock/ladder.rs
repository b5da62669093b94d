use super::{FockBasis, FockError, ModeRegistry, OperatorMatrix};
use crate::linalg::{C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub dof: usize,
    pub kind: LadderKind,
}

impl LadderOp {
    pub fn create(dof: usize) -> Self {
        Self {
            dof,
            kind: LadderKind::Create,
        }
    }

    pub fn annihilate(dof: usize) -> Self {
        Self {
            dof,
            kind: LadderKind::Annihilate,
        }
    }

    pub fn dagger(self) -> Self {
        Self {
            dof: self.dof,
            kind: match self.kind {
                LadderKind::Create => LadderKind::Annihilate,
                LadderKind::Annihilate => LadderKind::Create,
            },
        }
    }

    /// Act on an occupation pattern. The sign is the parity of occupied dofs
    /// below `self.dof`.
    pub fn apply(self, state: u64) -> Option<(u64, f64)> {
        let bit = 1u64 << self.dof;
        let occupied = state & bit != 0;
        let next = match (self.kind, occupied) {
            (LadderKind::Create, false) => state | bit,
            (LadderKind::Annihilate, true) => state & !bit,
            _ => return None,
        };
        let parity = (state & (bit - 1)).count_ones() & 1;
        Some((next, if parity == 0 { 1.0 } else { -1.0 }))
    }
}

pub fn ladder(
    reg: &ModeRegistry,
    basis: &FockBasis,
    dof: usize,
    kind: LadderKind,
) -> Result<OperatorMatrix, FockError> {
    reg.dof(dof)?;
    let op = LadderOp { dof, kind };
    let cols = (0..basis.dim())
        .map(|j| {
            op.apply(basis.state(j))
                .and_then(|(s, sign)| basis.index_of(s).map(|i| vec![(i, C64::new(sign, 0.0))]))
                .unwrap_or_default()
        })
        .collect();
    Ok(OperatorMatrix::from_columns(basis.dim(), cols))
}

/// A product of ladder operators with a scalar, applied right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub ops: Vec<LadderOp>,
}

impl Term {
    pub fn new(coeff: C64, ops: Vec<LadderOp>) -> Self {
        Self { coeff, ops }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            coeff: self.coeff.conj(),
            ops: self.ops.iter().rev().map(|o| o.dagger()).collect(),
        }
    }

    pub fn apply(&self, state: u64) -> Option<(u64, C64)> {
        let mut s = state;
        let mut sign = 1.0;
        for op in self.ops.iter().rev() {
            let (next, sg) = op.apply(s)?;
            s = next;
            sign *= sg;
        }
        Some((s, self.coeff * sign))
    }
}

/// Sum of ladder products plus a multiple of the identity, projected onto a
/// basis: matrix elements leaving the basis are dropped.
pub fn terms_to_matrix(basis: &FockBasis, terms: &[Term], constant: C64) -> OperatorMatrix {
    let cols = (0..basis.dim())
        .map(|j| {
            let state = basis.state(j);
            let mut col: Vec<(usize, C64)> = Vec::new();
            if constant != ZERO {
                col.push((j, constant));
            }
            for t in terms {
                if t.coeff == ZERO {
                    continue;
                }
                if let Some((s, v)) = t.apply(state) {
                    if let Some(i) = basis.index_of(s) {
                        col.push((i, v));
                    }
                }
            }
            col
        })
        .collect();
    OperatorMatrix::from_columns(basis.dim(), cols)
}
