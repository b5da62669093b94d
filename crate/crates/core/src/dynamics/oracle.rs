use super::{DynamicsError, Spin};
use crate::kinematics::{dirac_matrices, make_spinors};
use crate::linalg::{sandwich4, CVec3, Vec3, C64, ZERO};

/// Closed-form `<j>(t)` of a plane-wave superposition
/// `w_plus u(k,s) e^{-i omega t} + w_minus v(k,s) e^{+i omega t}`:
///
/// ```text
/// j(t) = classical + 2 Re[interference e^{i frequency t}]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZbOracle {
    pub classical: Vec3,
    pub interference: CVec3,
    pub frequency: f64,
    pub omega: f64,
}

impl ZbOracle {
    pub fn current(&self, t: f64) -> Vec3 {
        let phase = C64::from_polar(1.0, self.frequency * t);
        std::array::from_fn(|i| self.classical[i] + 2.0 * (self.interference[i] * phase).re)
    }

    /// Peak-to-mean amplitude of each current component.
    pub fn current_amplitude(&self) -> Vec3 {
        std::array::from_fn(|i| 2.0 * self.interference[i].norm())
    }

    /// Amplitude of the position oscillation, `current_amplitude / frequency`.
    pub fn position_amplitude(&self) -> Vec3 {
        let a = self.current_amplitude();
        std::array::from_fn(|i| a[i] / self.frequency)
    }
}

pub fn analytic_zb_oracle(
    k: &Vec3,
    mass: f64,
    w_plus: C64,
    w_minus: C64,
    spin: Spin,
) -> Result<ZbOracle, DynamicsError> {
    let set = make_spinors(k, mass)?;
    let alpha = dirac_matrices().alpha;
    let s = spin.index();
    let weight = w_plus.norm_sqr() - w_minus.norm_sqr();
    let mut interference = [ZERO; 3];
    for (z, a) in interference.iter_mut().zip(&alpha) {
        *z = w_plus.conj() * w_minus * sandwich4(&set.u[s], a, &set.v[s]);
    }
    Ok(ZbOracle {
        classical: std::array::from_fn(|i| weight * k[i] / set.omega),
        interference,
        frequency: 2.0 * set.omega,
        omega: set.omega,
    })
}
