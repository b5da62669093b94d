//! Exact finite-mode fermionic Fock space.
//!
//! Every momentum mode carries four fermionic dofs (electron and positron,
//! two spins each). Ladder operators are sparse matrices over the
//! occupation-number basis with Jordan-Wigner signs, so the canonical
//! anticommutation relations hold exactly in floating point.

mod basis;
pub mod current;
mod ladder;
mod operator;
mod registry;
mod verify;

pub use basis::{charge_of, enumerate_basis, momentum_of, FockBasis, Sector, MAX_DOFS};
pub use current::{
    assemble_classical, assemble_current_direct, assemble_zb_longitudinal, assemble_zb_transverse,
    charge_operator, free_hamiltonian, momentum_operator, number_operator, Ordering,
    TransverseReading, VectorTerm,
};
pub use ladder::{ladder, terms_to_matrix, LadderKind, LadderOp, Term};
pub use operator::{OperatorMatrix, TimeDependence};
pub use registry::{Dof, ModeRegistry, Species};
pub use verify::{
    decomposition_residuals, verify_decomposition, ComponentResidual, DecompositionReport,
    DecompositionSetup,
};

use crate::kinematics::KinematicsError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("registry has {dofs} fermionic dofs; the exact engine is limited to {limit}")]
    TooLarge { dofs: usize, limit: usize },
    #[error("no fermionic dof with index {0}")]
    UnknownDof(usize),
    #[error("momentum set is not closed under k -> -k")]
    NotNegationClosed,
    #[error("spinor sets do not match the registry ({got} given for {expected} modes)")]
    InconsistentSpinors { expected: usize, got: usize },
    #[error("polarization bases do not match the registry ({got} given for {expected} modes)")]
    InconsistentPolarizations { expected: usize, got: usize },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}
