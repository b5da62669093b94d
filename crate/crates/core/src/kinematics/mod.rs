//! Single-mode kinematics of the free Dirac field in a box.
//!
//! A momentum lattice `k = kappa * n` (integer `n`), the Dirac-Pauli
//! matrices, the positive/negative-energy spinors at each `k`, the transverse
//! and longitudinal polarization triad and the pair coefficients
//! `C_i(s, s') = u(k,s)^dagger alpha_i v(k,s')` from which the many-body
//! current operators are assembled.
//!
//! Units are natural (`hbar = c = 1`); a 1D lattice lies along the x axis.

mod dirac;
mod pair;
mod polarization;

pub use dirac::{
    calibrated_spinors, dirac_hamiltonian, dirac_matrices, energy_projector, layout_target,
    make_spinors, rotate_spin_basis, DiracMatrices, DiracSpinorSet, SpinCalibration,
};
pub use pair::{
    classical_velocity, pair_coefficients, pair_coefficients_from, PairCoefficientTensor,
};
pub use polarization::{polarization_basis, polarization_basis_or_rest_axis, PolarizationBasis};

use crate::linalg::{norm3, Vec3};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("mode with zero energy (m = 0 and k = 0) is not allowed")]
    ZeroEnergyMode,
    #[error("polarization basis is undefined at k = 0")]
    ZeroMomentum,
    #[error("lattice spacing must be finite and positive, got {0}")]
    NonPositiveSpacing(f64),
    #[error("mass must be finite and non-negative, got {0}")]
    InvalidMass(f64),
    #[error("lattice dimensionality must be 1 or 3, got {0}")]
    InvalidDimension(u8),
}

/// Parameters of a cubic (or linear) momentum lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub mass: f64,
    /// Momentum spacing, `2 pi / L` for a box of side `L`.
    pub spacing: f64,
    pub half_extent: u32,
    pub dim: u8,
    /// Drop the `k = 0` point. The set stays closed under `k -> -k`.
    pub skip_origin: bool,
}

impl LatticeSpec {
    pub fn line(mass: f64, spacing: f64, half_extent: u32) -> Self {
        Self {
            mass,
            spacing,
            half_extent,
            dim: 1,
            skip_origin: false,
        }
    }

    pub fn without_origin(mut self) -> Self {
        self.skip_origin = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumMode {
    /// Integer lattice coordinates; `k = spacing * lattice`.
    pub lattice: [i32; 3],
    pub k: Vec3,
    pub omega: f64,
    pub index: usize,
}

impl MomentumMode {
    pub fn new(
        lattice: [i32; 3],
        spacing: f64,
        mass: f64,
        index: usize,
    ) -> Result<Self, KinematicsError> {
        let k = [
            spacing * lattice[0] as f64,
            spacing * lattice[1] as f64,
            spacing * lattice[2] as f64,
        ];
        let omega = energy(&k, mass)?;
        Ok(Self {
            lattice,
            k,
            omega,
            index,
        })
    }

    pub fn momentum_norm(&self) -> f64 {
        norm3(&self.k)
    }

    pub fn is_origin(&self) -> bool {
        self.lattice == [0, 0, 0]
    }
}

/// `omega = sqrt(k^2 + m^2)`, rejecting the massless rest mode.
pub fn energy(k: &Vec3, mass: f64) -> Result<f64, KinematicsError> {
    if !(mass.is_finite() && mass >= 0.0) {
        return Err(KinematicsError::InvalidMass(mass));
    }
    let omega = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt();
    if omega == 0.0 {
        return Err(KinematicsError::ZeroEnergyMode);
    }
    Ok(omega)
}

/// Enumerate the lattice in lexicographic order of the integer coordinates.
pub fn build_lattice(spec: &LatticeSpec) -> Result<Vec<MomentumMode>, KinematicsError> {
    if !(spec.spacing.is_finite() && spec.spacing > 0.0) {
        return Err(KinematicsError::NonPositiveSpacing(spec.spacing));
    }
    if !(spec.mass.is_finite() && spec.mass >= 0.0) {
        return Err(KinematicsError::InvalidMass(spec.mass));
    }
    let n = spec.half_extent as i32;
    let coords: Vec<[i32; 3]> = match spec.dim {
        1 => (-n..=n).map(|i| [i, 0, 0]).collect(),
        3 => {
            let mut out = Vec::new();
            for x in -n..=n {
                for y in -n..=n {
                    for z in -n..=n {
                        out.push([x, y, z]);
                    }
                }
            }
            out
        }
        d => return Err(KinematicsError::InvalidDimension(d)),
    };
    coords
        .into_iter()
        .filter(|l| !(spec.skip_origin && *l == [0, 0, 0]))
        .enumerate()
        .map(|(index, l)| MomentumMode::new(l, spec.spacing, spec.mass, index))
        .collect()
}

/// Index of the mode at `-k`, if present.
pub fn negated_index(modes: &[MomentumMode], mode: &MomentumMode) -> Option<usize> {
    let target = [-mode.lattice[0], -mode.lattice[1], -mode.lattice[2]];
    modes.iter().position(|m| m.lattice == target)
}

pub fn is_negation_closed(modes: &[MomentumMode]) -> bool {
    modes.iter().all(|m| negated_index(modes, m).is_some())
}
