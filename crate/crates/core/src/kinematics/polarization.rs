//! The polarization triad `eta(k, +1), eta(k, 0), eta(k, -1)`.
//!
//! `eta(k, 0) = k/|k|` and
//!
//! ```text
//! eta(k, +1) = 1/(sqrt2 |k|) * ( (k1 k3 - i k2 |k|)/(k1 - i k2),
//!                                (k2 k3 + i k1 |k|)/(k1 - i k2),
//!                                -(k1 + i k2) ),
//! eta(k, -1) = conj(eta(k, +1)).
//! ```
//!
//! The quotient by `k1 - i k2` is evaluated in a rearranged form that never
//! divides by a small number. With `z = k1 + i k2` and `k3 >= 0`:
//!
//! ```text
//! sqrt2 |k| eta1 = k3 - i k2 z / (|k| + k3)
//! sqrt2 |k| eta2 = i k3 + i k1 z / (|k| + k3)
//! ```
//!
//! which is continuous through the positive k3 axis and gives
//! `(1, i, 0)/sqrt2` there. For `k3 < 0` the triad carries the phase
//! `z / conj(z)`, which has no limit on the negative k3 axis; there the
//! limit `k1 -> 0+, k2 = 0` (phase 1) is used.

use super::KinematicsError;
use crate::linalg::{c, conj3, norm3, CVec3, Vec3, I, ZERO};
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationBasis {
    pub eta_plus: CVec3,
    pub eta_zero: CVec3,
    pub eta_minus: CVec3,
    /// Set when `k1 = k2 = 0` exactly and the axis limit was taken.
    pub axis_degenerate: bool,
}

impl PolarizationBasis {
    /// The triad in the order `(+1, 0, -1)`.
    pub fn triad(&self) -> [CVec3; 3] {
        [self.eta_plus, self.eta_zero, self.eta_minus]
    }

    /// Real unit vector `eta(k, 0)`.
    pub fn axis(&self) -> Vec3 {
        [
            self.eta_zero[0].re,
            self.eta_zero[1].re,
            self.eta_zero[2].re,
        ]
    }

    /// Largest violation, for the momentum `k` the triad was built from, of
    /// orthonormality `eta_a^* . eta_b = delta_ab`, completeness
    /// `sum_a eta_a,i eta_a,j^* = delta_ij`, transversality
    /// `k . eta(+-1) = 0`, `eta(0) = k/|k|` and `eta(-1) = eta(+1)^*`.
    pub fn triad_defect(&self, k: &Vec3) -> f64 {
        let triad = self.triad();
        let kn = norm3(k);
        let mut worst = 0.0f64;
        for (a, ea) in triad.iter().enumerate() {
            for (b, eb) in triad.iter().enumerate() {
                let d = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((crate::linalg::cdot3(ea, eb) - d).norm());
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                let sum: crate::linalg::C64 = triad.iter().map(|e| e[i] * e[j].conj()).sum();
                worst = worst.max((sum - d).norm());
            }
        }
        for e in [&self.eta_plus, &self.eta_minus] {
            worst = worst.max(crate::linalg::rdot3(k, e).norm() / kn);
        }
        for i in 0..3 {
            worst = worst.max((self.eta_zero[i] - k[i] / kn).norm());
            worst = worst.max((self.eta_minus[i] - self.eta_plus[i].conj()).norm());
        }
        worst
    }
}

pub fn polarization_basis(k: &Vec3) -> Result<PolarizationBasis, KinematicsError> {
    let kn = norm3(k);
    if kn == 0.0 || !kn.is_finite() {
        return Err(KinematicsError::ZeroMomentum);
    }
    let [k1, k2, k3] = *k;
    let z = c(k1, k2);
    let axis_degenerate = k1 == 0.0 && k2 == 0.0;
    let scale = 1.0 / (SQRT_2 * kn);

    let (e1, e2) = if k3 >= 0.0 {
        let q = z / (kn + k3);
        (c(k3, 0.0) - I * k2 * q, I * k3 + I * k1 * q)
    } else {
        // |k| - k3 > 0 here
        let q = z / (kn - k3);
        let phase = if axis_degenerate {
            c(1.0, 0.0)
        } else {
            let unit = z / z.norm();
            unit * unit
        };
        (k3 * phase - I * k2 * q, -I * k3 * phase + I * k1 * q)
    };
    let eta_plus = [e1 * scale, e2 * scale, -z * scale];
    let eta_zero = [c(k1 / kn, 0.0), c(k2 / kn, 0.0), c(k3 / kn, 0.0)];
    Ok(PolarizationBasis {
        eta_plus,
        eta_zero,
        eta_minus: conj3(&eta_plus),
        axis_degenerate,
    })
}

/// As [`polarization_basis`], but at `k = 0` returns the triad of the
/// `+k3` axis limit, `eta(0) = z-hat`, `eta(+1) = (1, i, 0)/sqrt2`.
///
/// The current assemblies need some triad at a massive rest mode; the pair
/// coefficients there are rotation invariant so any axis works.
pub fn polarization_basis_or_rest_axis(k: &Vec3) -> PolarizationBasis {
    if norm3(k) == 0.0 {
        let s = 1.0 / SQRT_2;
        let eta_plus = [c(s, 0.0), c(0.0, s), ZERO];
        return PolarizationBasis {
            eta_plus,
            eta_zero: [ZERO, ZERO, c(1.0, 0.0)],
            eta_minus: conj3(&eta_plus),
            axis_degenerate: true,
        };
    }
    polarization_basis(k).expect("nonzero momentum")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cdot3, rdot3};

    fn close(a: &CVec3, b: &CVec3, tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    /// The closed form evaluated literally, valid off the k3 axis.
    fn literal_eta_plus(k: &Vec3) -> CVec3 {
        let [k1, k2, k3] = *k;
        let kn = norm3(k);
        let den = c(k1, -k2);
        let s = 1.0 / (SQRT_2 * kn);
        [
            c(k1 * k3, -k2 * kn) / den * s,
            c(k2 * k3, k1 * kn) / den * s,
            -c(k1, k2) * s,
        ]
    }

    #[test]
    fn x_axis_value() {
        let b = polarization_basis(&[1.0, 0.0, 0.0]).unwrap();
        let s = 1.0 / SQRT_2;
        assert!(close(&b.eta_plus, &[ZERO, c(0.0, s), c(-s, 0.0)], 1e-15));
        assert!(close(&b.eta_zero, &[c(1.0, 0.0), ZERO, ZERO], 0.0 + 1e-300));
        assert!(!b.axis_degenerate);
    }

    #[test]
    fn positive_z_axis_limit() {
        let b = polarization_basis(&[0.0, 0.0, 1.0]).unwrap();
        let s = 1.0 / SQRT_2;
        assert!(close(&b.eta_plus, &[c(s, 0.0), c(0.0, s), ZERO], 1e-15));
        assert!(b.axis_degenerate);
        // approaching along k1 -> 0+ from the literal expression
        let near = literal_eta_plus(&[1e-9, 0.0, 1.0]);
        assert!(close(&near, &b.eta_plus, 1e-8));
    }

    #[test]
    fn negative_z_axis_uses_same_limit() {
        let b = polarization_basis(&[0.0, 0.0, -2.0]).unwrap();
        let near = literal_eta_plus(&[1e-9, 0.0, -2.0]);
        assert!(close(&near, &b.eta_plus, 1e-8));
    }

    #[test]
    fn matches_literal_formula_off_axis() {
        for k in [
            [0.3, -1.2, 0.7],
            [-2.0, 0.5, -1.5],
            [1.0, 1.0, 0.0],
            [0.2, 0.1, -3.0],
        ] {
            let b = polarization_basis(&k).unwrap();
            assert!(close(&b.eta_plus, &literal_eta_plus(&k), 1e-13), "{k:?}");
        }
    }

    #[test]
    fn zero_momentum_errors() {
        assert_eq!(
            polarization_basis(&[0.0; 3]),
            Err(KinematicsError::ZeroMomentum)
        );
        let rest = polarization_basis_or_rest_axis(&[0.0; 3]);
        assert_eq!(rest, polarization_basis(&[0.0, 0.0, 1.0]).unwrap());
    }

    #[test]
    fn triad_is_orthonormal_and_transverse() {
        let k = [0.4, -0.9, 1.3];
        let b = polarization_basis(&k).unwrap();
        let t = b.triad();
        for (i, a) in t.iter().enumerate() {
            for (j, bb) in t.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((cdot3(a, bb) - c(expect, 0.0)).norm() < 1e-14);
            }
        }
        assert!(rdot3(&k, &b.eta_plus).norm() < 1e-14);
        assert!(rdot3(&k, &b.eta_minus).norm() < 1e-14);
    }
}
