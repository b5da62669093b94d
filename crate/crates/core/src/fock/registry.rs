use super::FockError;
use crate::kinematics::{build_lattice, negated_index, LatticeSpec, MomentumMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Species {
    Electron,
    Positron,
}

/// One fermionic degree of freedom. `spin` is 0 for `s = 1` and 1 for `s = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dof {
    pub mode: usize,
    pub spin: usize,
    pub species: Species,
}

/// Ordered fermionic modes `c(k,1), c(k,2), d(k,1), d(k,2)` for every
/// momentum in lattice order. The position in this order is the Jordan-Wigner
/// string position.
#[derive(Debug, Clone)]
pub struct ModeRegistry {
    modes: Vec<MomentumMode>,
    partners: Vec<usize>,
    dofs: Vec<Dof>,
    mass: f64,
}

impl ModeRegistry {
    pub fn new(modes: Vec<MomentumMode>, mass: f64) -> Result<Self, FockError> {
        let mut partners = Vec::with_capacity(modes.len());
        for m in &modes {
            partners.push(negated_index(&modes, m).ok_or(FockError::NotNegationClosed)?);
        }
        let mut dofs = Vec::with_capacity(4 * modes.len());
        for mode in 0..modes.len() {
            for species in [Species::Electron, Species::Positron] {
                for spin in 0..2 {
                    dofs.push(Dof {
                        mode,
                        spin,
                        species,
                    });
                }
            }
        }
        Ok(Self {
            modes,
            partners,
            dofs,
            mass,
        })
    }

    pub fn from_lattice(spec: &LatticeSpec) -> Result<Self, FockError> {
        Self::new(build_lattice(spec)?, spec.mass)
    }

    pub fn empty(mass: f64) -> Self {
        Self {
            modes: Vec::new(),
            partners: Vec::new(),
            dofs: Vec::new(),
            mass,
        }
    }

    pub fn modes(&self) -> &[MomentumMode] {
        &self.modes
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dofs(&self) -> &[Dof] {
        &self.dofs
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    /// Mode index of `-k`.
    pub fn partner(&self, mode: usize) -> usize {
        self.partners[mode]
    }

    pub fn dof_index(&self, mode: usize, spin: usize, species: Species) -> usize {
        debug_assert!(mode < self.modes.len() && spin < 2);
        let offset = match species {
            Species::Electron => 0,
            Species::Positron => 2,
        };
        4 * mode + offset + spin
    }

    pub fn dof(&self, index: usize) -> Result<Dof, FockError> {
        self.dofs
            .get(index)
            .copied()
            .ok_or(FockError::UnknownDof(index))
    }
}
