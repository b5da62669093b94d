//! Fixed-size complex vectors and matrices used by the single-mode kinematics.
//!
//! Everything here is 2-, 3- or 4-dimensional, so plain arrays beat a general
//! linear-algebra dependency.

use num_complex::Complex64;

pub type C64 = Complex64;
pub type Vec3 = [f64; 3];
pub type CVec3 = [C64; 3];
pub type Spinor = [C64; 4];
pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian inner product `a* . b` of complex 3-vectors.
pub fn cdot3(a: &CVec3, b: &CVec3) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Bilinear (non-conjugating) product of a real and a complex 3-vector.
pub fn rdot3(a: &Vec3, b: &CVec3) -> C64 {
    a.iter().zip(b).map(|(x, y)| y * *x).sum()
}

pub fn conj3(a: &CVec3) -> CVec3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

pub fn mat4_zero() -> Mat4 {
    [[ZERO; 4]; 4]
}

pub fn mat4_identity() -> Mat4 {
    let mut m = mat4_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat4_add(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mat4_scale(a: &Mat4, s: C64) -> Mat4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    out
}

pub fn mat4_adjoint(a: &Mat4) -> Mat4 {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn mat4_trace(a: &Mat4) -> C64 {
    (0..4).map(|i| a[i][i]).sum()
}

pub fn mat4_max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

pub fn mat4_apply(a: &Mat4, v: &Spinor) -> Spinor {
    let mut out = [ZERO; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

/// Outer product `a b†`.
pub fn outer4(a: &Spinor, b: &Spinor) -> Mat4 {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i] * b[j].conj();
        }
    }
    out
}

/// `a† b`.
pub fn inner4(a: &Spinor, b: &Spinor) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `a† M b`.
pub fn sandwich4(a: &Spinor, m: &Mat4, b: &Spinor) -> C64 {
    inner4(a, &mat4_apply(m, b))
}

pub fn spinor_scale(v: &Spinor, s: C64) -> Spinor {
    [v[0] * s, v[1] * s, v[2] * s, v[3] * s]
}

pub fn spinor_add(a: &Spinor, b: &Spinor) -> Spinor {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn spinor_norm(v: &Spinor) -> f64 {
    inner4(v, v).re.sqrt()
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Eigenvalues of a 2x2 hermitian matrix, ascending. Only the hermitian part
/// of `a` is read.
pub fn hermitian2_eigenvalues(a: &Mat2) -> [f64; 2] {
    let p = a[0][0].re;
    let q = a[1][1].re;
    let off = 0.5 * (a[0][1] + a[1][0].conj());
    let mean = 0.5 * (p + q);
    let half_gap = (0.25 * (p - q) * (p - q) + off.norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_eigenvalues_of_pauli_x() {
        let sx = [[ZERO, ONE], [ONE, ZERO]];
        let ev = hermitian2_eigenvalues(&sx);
        assert!((ev[0] + 1.0).abs() < 1e-15);
        assert!((ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_eigenvalues_general() {
        // [[2, 1-i], [1+i, 3]]: trace 5, det 6 - 2 = 4 -> roots (5 +- 3)/2
        let m = [[c(2.0, 0.0), c(1.0, -1.0)], [c(1.0, 1.0), c(3.0, 0.0)]];
        let ev = hermitian2_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 4.0).abs() < 1e-14);
    }
}
