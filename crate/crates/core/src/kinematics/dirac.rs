//! Dirac-Pauli matrices and the u/v spinors.

use super::{energy, polarization_basis_or_rest_axis, KinematicsError};
use crate::linalg::{
    c, inner4, mat4_add, mat4_identity, mat4_scale, mat4_zero, norm3, outer4, sandwich4,
    spinor_add, spinor_scale, CVec3, Mat2, Mat4, Spinor, Vec3, I, ONE, ZERO,
};
use std::f64::consts::SQRT_2;

/// `alpha_1, alpha_2, alpha_3` and `beta` in the standard representation,
/// `beta = diag(1, 1, -1, -1)`, `alpha_i = [[0, sigma_i], [sigma_i, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrices {
    pub alpha: [Mat4; 3],
    pub beta: Mat4,
}

fn pauli() -> [Mat2; 3] {
    [
        [[ZERO, ONE], [ONE, ZERO]],
        [[ZERO, -I], [I, ZERO]],
        [[ONE, ZERO], [ZERO, -ONE]],
    ]
}

pub fn dirac_matrices() -> DiracMatrices {
    let mut alpha = [mat4_zero(); 3];
    for (a, s) in alpha.iter_mut().zip(pauli()) {
        for i in 0..2 {
            for j in 0..2 {
                a[i][j + 2] = s[i][j];
                a[i + 2][j] = s[i][j];
            }
        }
    }
    let mut beta = mat4_zero();
    beta[0][0] = ONE;
    beta[1][1] = ONE;
    beta[2][2] = -ONE;
    beta[3][3] = -ONE;
    DiracMatrices { alpha, beta }
}

/// `H(k) = alpha . k + beta m`.
pub fn dirac_hamiltonian(k: &Vec3, mass: f64) -> Mat4 {
    let d = dirac_matrices();
    let mut h = mat4_scale(&d.beta, c(mass, 0.0));
    for (a, ki) in d.alpha.iter().zip(k) {
        h = mat4_add(&h, &mat4_scale(a, c(*ki, 0.0)));
    }
    h
}

/// Spectral projector `(omega + sign * H(k)) / (2 omega)` onto the
/// positive (`sign = +1`) or negative (`sign = -1`) energy branch.
pub fn energy_projector(k: &Vec3, mass: f64, sign: f64) -> Result<Mat4, KinematicsError> {
    let omega = energy(k, mass)?;
    let h = dirac_hamiltonian(k, mass);
    let p = mat4_add(
        &mat4_scale(&mat4_identity(), c(omega, 0.0)),
        &mat4_scale(&h, c(sign, 0.0)),
    );
    Ok(mat4_scale(&p, c(0.5 / omega, 0.0)))
}

/// Spinors at fixed `(k, m)`, normalized to `u^dagger u = v^dagger v = 1`.
///
/// `u[s]` are the positive-energy eigenvectors of `H(k)`. `v[s]` are the
/// negative-energy eigenvectors of the same `H(k)`: in the field expansion
/// this is the spinor multiplying `d^dagger(-k, s)`, so a pair created by
/// `c^dagger(k,s) d^dagger(-k,s')` has amplitude `u[s]^dagger alpha v[s']`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSpinorSet {
    pub k: Vec3,
    pub mass: f64,
    pub omega: f64,
    pub u: [Spinor; 2],
    pub v: [Spinor; 2],
}

impl DiracSpinorSet {
    /// `u(k,s)^dagger M u(k,s')` as a 2x2 matrix over spins.
    pub fn uu(&self, m: &Mat4) -> Mat2 {
        bilinear(&self.u, m, &self.u)
    }

    pub fn vv(&self, m: &Mat4) -> Mat2 {
        bilinear(&self.v, m, &self.v)
    }

    pub fn uv(&self, m: &Mat4) -> Mat2 {
        bilinear(&self.u, m, &self.v)
    }

    /// Largest violation of orthonormality among all four spinors.
    pub fn orthonormality_defect(&self) -> f64 {
        let all = [self.u[0], self.u[1], self.v[0], self.v[1]];
        let mut worst = 0.0f64;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((inner4(a, b) - target).norm());
            }
        }
        worst
    }

    /// Largest `|H u - omega u|`, `|H v + omega v|`.
    pub fn eigen_defect(&self) -> f64 {
        let h = dirac_hamiltonian(&self.k, self.mass);
        let mut worst = 0.0f64;
        for (set, sign) in [(&self.u, 1.0), (&self.v, -1.0)] {
            for s in set {
                let hs = crate::linalg::mat4_apply(&h, s);
                for i in 0..4 {
                    worst = worst.max((hs[i] - s[i] * (sign * self.omega)).norm());
                }
            }
        }
        worst
    }

    /// `sum_s u u^dagger`.
    pub fn positive_projector(&self) -> Mat4 {
        mat4_add(
            &outer4(&self.u[0], &self.u[0]),
            &outer4(&self.u[1], &self.u[1]),
        )
    }
}

fn bilinear(a: &[Spinor; 2], m: &Mat4, b: &[Spinor; 2]) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for s in 0..2 {
        for t in 0..2 {
            out[s][t] = sandwich4(&a[s], m, &b[t]);
        }
    }
    out
}

fn spin_up_down() -> [[crate::linalg::C64; 2]; 2] {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// `sigma . a` for a complex 3-vector `a`.
fn sigma_dot(a: &[crate::linalg::C64; 3]) -> Mat2 {
    [[a[2], a[0] - I * a[1]], [a[0] + I * a[1], -a[2]]]
}

fn mat2_apply(m: &Mat2, v: &[crate::linalg::C64; 2]) -> [crate::linalg::C64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// Positive-energy spinor `N (chi, s_k chi / (omega + m))` with
/// `s_k = sigma . k`, `N = sqrt((omega + m) / 2 omega)`.
fn positive_spinor(k: &Vec3, mass: f64, omega: f64, chi: &[crate::linalg::C64; 2]) -> Spinor {
    let kc = [c(k[0], 0.0), c(k[1], 0.0), c(k[2], 0.0)];
    let lower = mat2_apply(&sigma_dot(&kc), chi);
    let n = ((omega + mass) / (2.0 * omega)).sqrt();
    let r = 1.0 / (omega + mass);
    [
        chi[0] * n,
        chi[1] * n,
        lower[0] * (n * r),
        lower[1] * (n * r),
    ]
}

/// Charge conjugate `i gamma^2 psi^*`.
fn charge_conjugate(psi: &Spinor) -> Spinor {
    // i gamma^2 = [[0, i sigma_2], [-i sigma_2, 0]],  i sigma_2 = [[0, 1], [-1, 0]]
    let p = [psi[0].conj(), psi[1].conj(), psi[2].conj(), psi[3].conj()];
    [p[3], -p[2], -p[1], p[0]]
}

/// The z-spin basis: `u[s]` built on `chi_s = (1,0), (0,1)` and
/// `v[s] = i gamma^2 u(-k, s)^*`.
pub fn make_spinors(k: &Vec3, mass: f64) -> Result<DiracSpinorSet, KinematicsError> {
    let omega = energy(k, mass)?;
    let chis = spin_up_down();
    let neg = [-k[0], -k[1], -k[2]];
    let u = [
        positive_spinor(k, mass, omega, &chis[0]),
        positive_spinor(k, mass, omega, &chis[1]),
    ];
    let v = [
        charge_conjugate(&positive_spinor(&neg, mass, omega, &chis[0])),
        charge_conjugate(&positive_spinor(&neg, mass, omega, &chis[1])),
    ];
    Ok(DiracSpinorSet {
        k: *k,
        mass,
        omega,
        u,
        v,
    })
}

/// Result of rotating the z-spin basis into the helicity basis whose pair
/// amplitudes take the layout
///
/// ```text
/// C_i(s, s') = (m/omega) eta_i(k,0) diag(1, -1)
///            + sqrt2 [[0, eta_i(k,-1)], [eta_i(k,+1), 0]]
/// ```
///
/// `electron[r][s] = <u_z(r)|u(s)>` and `positron[r][s] = <v_z(r)|v(s)>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCalibration {
    pub electron: Mat2,
    pub positron: Mat2,
    /// Helicity axis; `z` at the rest mode.
    pub axis: Vec3,
    /// `max |C_calibrated - layout|` over all entries.
    pub layout_residual: f64,
}

/// Target pair-amplitude layout for a given triad.
pub fn layout_target(
    mass_over_omega: f64,
    eta_zero: &CVec3,
    eta_plus: &CVec3,
    eta_minus: &CVec3,
) -> [Mat2; 3] {
    let mut out = [[[ZERO; 2]; 2]; 3];
    for i in 0..3 {
        out[i][0][0] = eta_zero[i] * mass_over_omega;
        out[i][1][1] = -eta_zero[i] * mass_over_omega;
        out[i][0][1] = eta_minus[i] * SQRT_2;
        out[i][1][0] = eta_plus[i] * SQRT_2;
    }
    out
}

/// Helicity spinors with the relative phase of the two helicities fixed so
/// that `chi_-^dagger sigma chi_+ = sqrt2 eta(k, +1)`.
///
/// Constructive: `chi_-` is taken as `(sigma . eta(k,+1)^*) chi_+ / sqrt2`.
pub fn calibrated_spinors(
    k: &Vec3,
    mass: f64,
) -> Result<(DiracSpinorSet, SpinCalibration), KinematicsError> {
    let omega = energy(k, mass)?;
    let basis = polarization_basis_or_rest_axis(k);
    let n = basis.axis();

    let chi_plus = if n[2] >= 0.0 {
        let d = (2.0 * (1.0 + n[2])).sqrt();
        [c((1.0 + n[2]) / d, 0.0), c(n[0] / d, n[1] / d)]
    } else {
        let d = (2.0 * (1.0 - n[2])).sqrt();
        [c(n[0] / d, -n[1] / d), c((1.0 - n[2]) / d, 0.0)]
    };
    let eta_conj = [
        basis.eta_plus[0].conj(),
        basis.eta_plus[1].conj(),
        basis.eta_plus[2].conj(),
    ];
    let lowered = mat2_apply(&sigma_dot(&eta_conj), &chi_plus);
    let chi_minus = [lowered[0] / SQRT_2, lowered[1] / SQRT_2];

    let kn = norm3(k);
    let nrm = ((omega + mass) / (2.0 * omega)).sqrt();
    let r = kn / (omega + mass);
    let helicity_spinor = |chi: &[crate::linalg::C64; 2], h: f64, upper: bool| -> Spinor {
        if upper {
            [
                chi[0] * nrm,
                chi[1] * nrm,
                chi[0] * (h * r * nrm),
                chi[1] * (h * r * nrm),
            ]
        } else {
            [
                chi[0] * (-h * r * nrm),
                chi[1] * (-h * r * nrm),
                chi[0] * nrm,
                chi[1] * nrm,
            ]
        }
    };
    let u = [
        helicity_spinor(&chi_plus, 1.0, true),
        helicity_spinor(&chi_minus, -1.0, true),
    ];
    let v = [
        helicity_spinor(&chi_plus, 1.0, false),
        helicity_spinor(&chi_minus, -1.0, false),
    ];
    let set = DiracSpinorSet {
        k: *k,
        mass,
        omega,
        u,
        v,
    };

    let z = make_spinors(k, mass)?;
    let mut electron = [[ZERO; 2]; 2];
    let mut positron = [[ZERO; 2]; 2];
    for rr in 0..2 {
        for s in 0..2 {
            electron[rr][s] = inner4(&z.u[rr], &set.u[s]);
            positron[rr][s] = inner4(&z.v[rr], &set.v[s]);
        }
    }

    let d = dirac_matrices();
    let target = layout_target(
        mass / omega,
        &basis.eta_zero,
        &basis.eta_plus,
        &basis.eta_minus,
    );
    let mut layout_residual = 0.0f64;
    for (a, t) in d.alpha.iter().zip(&target) {
        let got = set.uv(a);
        for s in 0..2 {
            for sp in 0..2 {
                layout_residual = layout_residual.max((got[s][sp] - t[s][sp]).norm());
            }
        }
    }
    Ok((
        set,
        SpinCalibration {
            electron,
            positron,
            axis: n,
            layout_residual,
        },
    ))
}

/// Re-express a spinor set in a rotated spin basis:
/// `u'(s) = sum_r u(r) e[r][s]`, `v'(s) = sum_r v(r) p[r][s]`.
pub fn rotate_spin_basis(set: &DiracSpinorSet, electron: &Mat2, positron: &Mat2) -> DiracSpinorSet {
    let mix = |vs: &[Spinor; 2], m: &Mat2, s: usize| -> Spinor {
        spinor_add(
            &spinor_scale(&vs[0], m[0][s]),
            &spinor_scale(&vs[1], m[1][s]),
        )
    };
    DiracSpinorSet {
        u: [mix(&set.u, electron, 0), mix(&set.u, electron, 1)],
        v: [mix(&set.v, positron, 0), mix(&set.v, positron, 1)],
        ..*set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat4_adjoint, mat4_max_abs_diff, mat4_mul, mat4_trace};

    fn anticomm(a: &Mat4, b: &Mat4) -> Mat4 {
        mat4_add(&mat4_mul(a, b), &mat4_mul(b, a))
    }

    #[test]
    fn clifford_relations_exact() {
        let d = dirac_matrices();
        let id = mat4_identity();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j {
                    mat4_scale(&id, c(2.0, 0.0))
                } else {
                    mat4_zero()
                };
                assert_eq!(anticomm(&d.alpha[i], &d.alpha[j]), expect);
            }
            assert_eq!(anticomm(&d.alpha[i], &d.beta), mat4_zero());
            assert_eq!(mat4_trace(&d.alpha[i]), ZERO);
            assert_eq!(mat4_adjoint(&d.alpha[i]), d.alpha[i]);
        }
        assert_eq!(mat4_mul(&d.beta, &d.beta), id);
        assert_eq!(mat4_mul(&d.alpha[0], &d.alpha[0]), id);
    }

    #[test]
    fn rest_frame_spinors_are_block_pure() {
        let s = make_spinors(&[0.0; 3], 1.0).unwrap();
        for u in &s.u {
            assert_eq!(u[2], ZERO);
            assert_eq!(u[3], ZERO);
        }
        for v in &s.v {
            assert_eq!(v[0], ZERO);
            assert_eq!(v[1], ZERO);
        }
    }

    #[test]
    fn pythagorean_eigenvalue() {
        let s = make_spinors(&[3.0, 0.0, 0.0], 4.0).unwrap();
        assert_eq!(s.omega, 5.0);
        assert!(s.eigen_defect() < 1e-12);
        assert!(inner4(&s.u[0], &s.u[1]).norm() < 1e-15);
        assert!(s.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn massless_zero_mode_rejected() {
        assert_eq!(
            make_spinors(&[0.0; 3], 0.0),
            Err(KinematicsError::ZeroEnergyMode)
        );
    }

    #[test]
    fn positive_projector_closed_form() {
        let k = [0.3, -0.8, 1.1];
        let s = make_spinors(&k, 0.6).unwrap();
        let expect = energy_projector(&k, 0.6, 1.0).unwrap();
        assert!(mat4_max_abs_diff(&s.positive_projector(), &expect) < 1e-12);
    }

    #[test]
    fn calibrated_layout_reproduced() {
        for (k, m) in [
            ([1.0, 0.0, 0.0], 1.0),
            ([0.0, 0.0, -2.0], 0.5),
            ([0.3, -0.2, 0.9], 0.0),
            ([0.0; 3], 2.0),
            ([-1.5, 0.4, -0.7], 3.0),
        ] {
            let (set, cal) = calibrated_spinors(&k, m).unwrap();
            assert!(
                cal.layout_residual < 1e-12,
                "{k:?} {m}: {}",
                cal.layout_residual
            );
            assert!(set.eigen_defect() < 1e-12);
            assert!(set.orthonormality_defect() < 1e-12);
            // rotating the z basis by the reported unitaries reproduces the set
            let z = make_spinors(&k, m).unwrap();
            let rotated = rotate_spin_basis(&z, &cal.electron, &cal.positron);
            for s in 0..2 {
                for i in 0..4 {
                    assert!((rotated.u[s][i] - set.u[s][i]).norm() < 1e-12);
                    assert!((rotated.v[s][i] - set.v[s][i]).norm() < 1e-12);
                }
            }
        }
    }
}
