use super::{energy, make_spinors, DiracSpinorSet, KinematicsError};
use crate::kinematics::dirac_matrices;
use crate::linalg::{hermitian2_eigenvalues, mat2_adjoint, mat2_mul, norm3, Mat2, Vec3, ZERO};

/// Pair amplitudes `C_i(s, s') = u(k,s)^dagger alpha_i v(k,s')` split into a
/// longitudinal block `L = k_hat . C` and transverse remainder
/// `T_i = C_i - k_hat_i L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCoefficientTensor {
    pub coefficients: [Mat2; 3],
    pub longitudinal: Mat2,
    pub transverse: [Mat2; 3],
    pub k_hat: Vec3,
    pub omega: f64,
    pub mass: f64,
}

impl PairCoefficientTensor {
    pub fn frobenius_sq(&self) -> f64 {
        self.coefficients
            .iter()
            .flat_map(|m| m.iter().flatten())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Eigenvalues of `sum_i T_i^dagger T_i`.
    pub fn transverse_gram_eigenvalues(&self) -> [f64; 2] {
        let mut gram = [[ZERO; 2]; 2];
        for t in &self.transverse {
            let g = mat2_mul(&mat2_adjoint(t), t);
            for i in 0..2 {
                for j in 0..2 {
                    gram[i][j] += g[i][j];
                }
            }
        }
        hermitian2_eigenvalues(&gram)
    }

    /// Eigenvalues of `L^dagger L`.
    pub fn longitudinal_gram_eigenvalues(&self) -> [f64; 2] {
        hermitian2_eigenvalues(&mat2_mul(
            &mat2_adjoint(&self.longitudinal),
            &self.longitudinal,
        ))
    }

    /// `4 + 2 m^2 / omega^2`.
    pub fn expected_frobenius_sq(&self) -> f64 {
        let r = self.mass / self.omega;
        4.0 + 2.0 * r * r
    }
}

pub fn pair_coefficients(k: &Vec3, mass: f64) -> Result<PairCoefficientTensor, KinematicsError> {
    let set = make_spinors(k, mass)?;
    pair_coefficients_from(&set)
}

/// Pair tensor in whatever spin basis `set` carries.
pub fn pair_coefficients_from(
    set: &DiracSpinorSet,
) -> Result<PairCoefficientTensor, KinematicsError> {
    let kn = norm3(&set.k);
    if kn == 0.0 {
        return Err(KinematicsError::ZeroMomentum);
    }
    let k_hat = [set.k[0] / kn, set.k[1] / kn, set.k[2] / kn];
    let d = dirac_matrices();
    let coefficients = [
        set.uv(&d.alpha[0]),
        set.uv(&d.alpha[1]),
        set.uv(&d.alpha[2]),
    ];
    let mut longitudinal = [[ZERO; 2]; 2];
    for (ci, ki) in coefficients.iter().zip(&k_hat) {
        for s in 0..2 {
            for t in 0..2 {
                longitudinal[s][t] += ci[s][t] * *ki;
            }
        }
    }
    let mut transverse = coefficients;
    for (ti, ki) in transverse.iter_mut().zip(&k_hat) {
        for s in 0..2 {
            for t in 0..2 {
                ti[s][t] -= longitudinal[s][t] * *ki;
            }
        }
    }
    Ok(PairCoefficientTensor {
        coefficients,
        longitudinal,
        transverse,
        k_hat,
        omega: set.omega,
        mass: set.mass,
    })
}

/// Group velocity `k / omega` carried by one electron in the mode.
pub fn classical_velocity(k: &Vec3, mass: f64) -> Result<Vec3, KinematicsError> {
    let omega = energy(k, mass)?;
    Ok([k[0] / omega, k[1] / omega, k[2] / omega])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_at_pythagorean_point() {
        let p = pair_coefficients(&[3.0, 0.0, 0.0], 4.0).unwrap();
        assert!((p.frobenius_sq() - 5.28).abs() < 1e-10);
        let [a, b] = p.longitudinal_gram_eigenvalues();
        assert!((a - 0.64).abs() < 1e-10 && (b - 0.64).abs() < 1e-10);
    }

    #[test]
    fn massless_frobenius_is_four() {
        let p = pair_coefficients(&[0.2, -0.5, 0.1], 0.0).unwrap();
        assert!((p.frobenius_sq() - 4.0).abs() < 1e-10);
        let [a, b] = p.transverse_gram_eigenvalues();
        assert!((a - 2.0).abs() < 1e-10 && (b - 2.0).abs() < 1e-10);
        assert!(p.longitudinal_gram_eigenvalues()[1].abs() < 1e-12);
    }

    #[test]
    fn rest_mode_has_no_axis() {
        assert_eq!(
            pair_coefficients(&[0.0; 3], 1.0),
            Err(KinematicsError::ZeroMomentum)
        );
    }

    #[test]
    fn velocity_values() {
        assert_eq!(classical_velocity(&[0.0; 3], 1.0).unwrap(), [0.0; 3]);
        assert_eq!(
            classical_velocity(&[3.0, 0.0, 0.0], 4.0).unwrap(),
            [0.6, 0.0, 0.0]
        );
        assert_eq!(
            classical_velocity(&[0.0, 0.0, 5.0], 0.0).unwrap(),
            [0.0, 0.0, 1.0]
        );
        assert!(classical_velocity(&[0.0; 3], 0.0).is_err());
    }

    #[test]
    fn velocity_is_spinor_expectation() {
        let k = [0.7, -1.1, 0.4];
        let set = make_spinors(&k, 1.3).unwrap();
        let v = classical_velocity(&k, 1.3).unwrap();
        let d = dirac_matrices();
        for i in 0..3 {
            let m = set.uu(&d.alpha[i]);
            assert!((m[0][0].re - v[i]).abs() < 1e-12);
            assert!((m[1][1].re - v[i]).abs() < 1e-12);
            assert!(m[0][1].norm() < 1e-12);
        }
    }
}
