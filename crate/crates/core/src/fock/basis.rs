use super::{FockError, ModeRegistry, Species};

/// Largest registry the exact engine will enumerate.
pub const MAX_DOFS: usize = 24;

/// Sector constraints. `momentum` is in integer lattice units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Sector {
    pub charge: Option<i32>,
    pub momentum: Option<[i32; 3]>,
}

/// Occupation-number basis. A state is a bit pattern over the registry's
/// dof order; bit `j` set means dof `j` occupied.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_dof: usize,
    /// `None` for the full `2^n` basis, where index and bit pattern coincide.
    states: Option<Vec<u64>>,
    sector: Option<Sector>,
}

impl FockBasis {
    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn dim(&self) -> usize {
        match &self.states {
            None => 1usize << self.n_dof,
            Some(s) => s.len(),
        }
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    pub fn is_full(&self) -> bool {
        self.states.is_none()
    }

    pub fn state(&self, index: usize) -> u64 {
        match &self.states {
            None => index as u64,
            Some(s) => s[index],
        }
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        match &self.states {
            None => ((state >> self.n_dof) == 0).then_some(state as usize),
            Some(s) => s.binary_search(&state).ok(),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.dim()).map(|i| self.state(i))
    }
}

pub fn charge_of(reg: &ModeRegistry, state: u64) -> i32 {
    reg.dofs()
        .iter()
        .enumerate()
        .filter(|(j, _)| state >> j & 1 == 1)
        .map(|(_, d)| match d.species {
            Species::Electron => 1,
            Species::Positron => -1,
        })
        .sum()
}

pub fn momentum_of(reg: &ModeRegistry, state: u64) -> [i32; 3] {
    let mut p = [0; 3];
    for (j, d) in reg.dofs().iter().enumerate() {
        if state >> j & 1 == 1 {
            let l = reg.modes()[d.mode].lattice;
            for a in 0..3 {
                p[a] += l[a];
            }
        }
    }
    p
}

/// Enumerate the basis in ascending bit-pattern order.
pub fn enumerate_basis(reg: &ModeRegistry, filter: Option<Sector>) -> Result<FockBasis, FockError> {
    let n = reg.len();
    if n > MAX_DOFS {
        return Err(FockError::TooLarge {
            dofs: n,
            limit: MAX_DOFS,
        });
    }
    let states = filter.map(|sector| {
        (0..1u64 << n)
            .filter(|&s| sector.charge.is_none_or(|q| charge_of(reg, s) == q))
            .filter(|&s| sector.momentum.is_none_or(|p| momentum_of(reg, s) == p))
            .collect()
    });
    Ok(FockBasis {
        n_dof: n,
        states,
        sector: filter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::LatticeSpec;

    fn single_rest_mode() -> ModeRegistry {
        // half_extent 0 -> only k = 0
        ModeRegistry::from_lattice(&LatticeSpec::line(1.0, 1.0, 0)).unwrap()
    }

    #[test]
    fn one_mode_full_and_neutral() {
        let reg = single_rest_mode();
        assert_eq!(enumerate_basis(&reg, None).unwrap().dim(), 16);
        let neutral = Sector {
            charge: Some(0),
            momentum: None,
        };
        let b = enumerate_basis(&reg, Some(neutral)).unwrap();
        assert_eq!(b.dim(), 6);
        for s in b.states() {
            assert_eq!(charge_of(&reg, s), 0);
        }
    }

    #[test]
    fn empty_registry_is_vacuum() {
        let reg = ModeRegistry::empty(1.0);
        let b = enumerate_basis(&reg, None).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.state(0), 0);
    }

    #[test]
    fn guard_rejects_large_registry() {
        let reg = ModeRegistry::from_lattice(&LatticeSpec::line(1.0, 1.0, 3)).unwrap();
        assert_eq!(reg.len(), 28);
        assert!(matches!(
            enumerate_basis(&reg, None),
            Err(FockError::TooLarge { dofs: 28, .. })
        ));
    }

    #[test]
    fn filtered_index_lookup() {
        let reg =
            ModeRegistry::from_lattice(&LatticeSpec::line(1.0, 1.0, 1).without_origin()).unwrap();
        let sector = Sector {
            charge: Some(0),
            momentum: Some([0, 0, 0]),
        };
        let b = enumerate_basis(&reg, Some(sector)).unwrap();
        for (i, s) in b.states().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
            assert_eq!(momentum_of(&reg, s), [0, 0, 0]);
        }
        assert_eq!(b.index_of(1), None);
    }
}
