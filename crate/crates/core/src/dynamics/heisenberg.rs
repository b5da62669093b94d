use super::DynamicsError;
use crate::fock::OperatorMatrix;
use crate::linalg::{c, C64};

/// Largest Fock-space dimension accepted for explicit time evolution.
pub const HEISENBERG_MAX_DIM: usize = 1 << 16;

/// Taylor steps are sized so that `||H|| dt` stays below this.
const STEP_NORM: f64 = 0.5;

fn check(h: &OperatorMatrix, state: &[C64]) -> Result<(), DynamicsError> {
    if h.dim() > HEISENBERG_MAX_DIM {
        return Err(DynamicsError::TooLarge {
            dim: h.dim(),
            limit: HEISENBERG_MAX_DIM,
        });
    }
    if state.len() != h.dim() {
        return Err(DynamicsError::DimensionMismatch(format!(
            "state of length {} for a {}-dimensional Hamiltonian",
            state.len(),
            h.dim()
        )));
    }
    Ok(())
}

fn row_norm(h: &OperatorMatrix) -> f64 {
    (0..h.dim())
        .map(|i| h.row(i).map(|(_, v)| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(-i H t) |state>`. Diagonal Hamiltonians are applied as exact phases;
/// otherwise a scaled Taylor series is summed to machine precision.
pub fn evolve_state(state: &[C64], h: &OperatorMatrix, t: f64) -> Result<Vec<C64>, DynamicsError> {
    check(h, state)?;
    if h.is_diagonal() {
        return Ok(h
            .diagonal()
            .iter()
            .zip(state)
            .map(|(e, x)| x * (c(0.0, -t) * e).exp())
            .collect());
    }
    let norm = row_norm(h);
    let steps = ((norm * t.abs()) / STEP_NORM).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut psi = state.to_vec();
    for _ in 0..steps {
        let mut term = psi.clone();
        let mut sum = psi.clone();
        for order in 1..64 {
            let hx = h.matvec(&term);
            let f = c(0.0, -dt / order as f64);
            term = hx.into_iter().map(|z| z * f).collect();
            let size = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (s, z) in sum.iter_mut().zip(&term) {
                *s += z;
            }
            if size < 1e-17 {
                break;
            }
        }
        psi = sum;
    }
    Ok(psi)
}

/// `<state| e^{iHt} O e^{-iHt} |state>`.
pub fn heisenberg_expectation(
    state: &[C64],
    op: &OperatorMatrix,
    h: &OperatorMatrix,
    t: f64,
) -> Result<C64, DynamicsError> {
    if op.dim() != h.dim() {
        return Err(DynamicsError::DimensionMismatch(format!(
            "operator of dimension {} for a {}-dimensional Hamiltonian",
            op.dim(),
            h.dim()
        )));
    }
    let psi = evolve_state(state, h, t)?;
    Ok(op.expectation(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};

    #[test]
    fn two_level_rabi() {
        // H = sigma_x: <sigma_z>(t) = cos(2t) from |0>
        let h = OperatorMatrix::from_rows(2, vec![vec![(1, ONE)], vec![(0, ONE)]]);
        let sz = OperatorMatrix::from_diagonal(&[ONE, -ONE]);
        for t in [0.0, 0.3, 1.7, -4.2, 25.0] {
            let v = heisenberg_expectation(&[ONE, ZERO], &sz, &h, t).unwrap();
            assert!((v.re - (2.0 * t).cos()).abs() < 1e-13, "t={t}");
            assert!(v.im.abs() < 1e-13);
        }
    }

    #[test]
    fn diagonal_phases_are_exact() {
        let h = OperatorMatrix::from_diagonal(&[c(1.0, 0.0), c(-2.0, 0.0)]);
        let psi = evolve_state(&[ONE, ONE], &h, 0.5).unwrap();
        assert_eq!(psi[0], (c(0.0, -0.5)).exp());
        assert_eq!(psi[1], (c(0.0, 1.0)).exp());
    }

    #[test]
    fn guards() {
        let h = OperatorMatrix::identity(3);
        assert!(matches!(
            evolve_state(&[ONE], &h, 1.0),
            Err(DynamicsError::DimensionMismatch(_))
        ));
        let big = OperatorMatrix::zeros(HEISENBERG_MAX_DIM + 1);
        let state = vec![ZERO; HEISENBERG_MAX_DIM + 1];
        assert!(matches!(
            evolve_state(&state, &big, 1.0),
            Err(DynamicsError::TooLarge { .. })
        ));
    }
}
