//! Current operator `V = integral psi^dagger alpha psi d^3x` on the Fock space.
//!
//! The field is
//!
//! ```text
//! psi(x) = V^{-1/2} sum_{p,s} [ c(p,s) u(p,s) e^{-i(E t - p.x)}
//!                             + d^dagger(p,s) v(p,s) e^{+i(E t - p.x)} ]
//! ```
//!
//! with `v(p,s)` the spinor stored as `DiracSpinorSet::v[s]` at `-p`. The
//! direct assembly multiplies out `psi^dagger alpha psi` term by term and
//! keeps the products whose plane waves integrate to a Kronecker delta on the
//! lattice. The piecewise assemblies build the classical, transverse and
//! longitudinal parts from `k/omega`, the polarization triad and `m/omega`
//! alone, without touching spinors.

use super::ladder::{terms_to_matrix, LadderOp, Term};
use super::{FockBasis, FockError, ModeRegistry, OperatorMatrix, Species, TimeDependence};
use crate::kinematics::{dirac_matrices, DiracSpinorSet, PolarizationBasis};
use crate::linalg::{c, CVec3, C64};
use std::f64::consts::SQRT_2;

/// Treatment of the `d d^dagger` products in the direct assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// Keep `d d^dagger` as written.
    Raw,
    /// Rewrite `d d^dagger -> -d^dagger d` and drop the c-number.
    Normal,
}

/// Which momentum labels the annihilation half of the transverse term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransverseReading {
    /// `c(-k,1) d(k,2)` exactly as printed.
    AsPrinted,
    /// `c(k,1) d(-k,2)`, the mirror image `k -> -k` of the annihilation term.
    Relabeled,
}

/// A vector-valued ladder product `coeff_i * ops * exp(i frequency t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTerm {
    pub coeff: CVec3,
    pub ops: Vec<LadderOp>,
    pub frequency: f64,
}

impl VectorTerm {
    fn adjoint(&self) -> Self {
        Self {
            coeff: [
                self.coeff[0].conj(),
                self.coeff[1].conj(),
                self.coeff[2].conj(),
            ],
            ops: self.ops.iter().rev().map(|o| o.dagger()).collect(),
            frequency: -self.frequency,
        }
    }

    fn scalar(&self, component: usize, t: f64) -> Term {
        let phase = C64::from_polar(1.0, self.frequency * t);
        Term::new(self.coeff[component] * phase, self.ops.clone())
    }
}

fn with_adjoints(terms: Vec<VectorTerm>) -> Vec<VectorTerm> {
    let adj: Vec<_> = terms.iter().map(VectorTerm::adjoint).collect();
    terms.into_iter().chain(adj).collect()
}

fn pair_frequencies(reg: &ModeRegistry) -> Vec<f64> {
    let mut f: Vec<f64> = reg.modes().iter().map(|m| 2.0 * m.omega).collect();
    f.sort_by(f64::total_cmp);
    f.dedup();
    f
}

fn to_matrices(
    basis: &FockBasis,
    terms: &[VectorTerm],
    constant: [f64; 3],
    t: f64,
    time: TimeDependence,
) -> [OperatorMatrix; 3] {
    std::array::from_fn(|i| {
        let scalars: Vec<Term> = terms.iter().map(|vt| vt.scalar(i, t)).collect();
        let mut m = terms_to_matrix(basis, &scalars, c(constant[i], 0.0));
        m.hermitian = true;
        m.time = time.clone();
        m
    })
}

fn check_spinors(reg: &ModeRegistry, spinors: &[DiracSpinorSet]) -> Result<(), FockError> {
    if spinors.len() != reg.modes().len() {
        return Err(FockError::InconsistentSpinors {
            expected: reg.modes().len(),
            got: spinors.len(),
        });
    }
    for (m, s) in reg.modes().iter().zip(spinors) {
        if m.k != s.k {
            return Err(FockError::InconsistentSpinors {
                expected: reg.modes().len(),
                got: spinors.len(),
            });
        }
    }
    Ok(())
}

fn check_polarizations(reg: &ModeRegistry, pols: &[PolarizationBasis]) -> Result<(), FockError> {
    if pols.len() != reg.modes().len() {
        return Err(FockError::InconsistentPolarizations {
            expected: reg.modes().len(),
            got: pols.len(),
        });
    }
    Ok(())
}

fn neg(l: [i32; 3]) -> [i32; 3] {
    [-l[0], -l[1], -l[2]]
}

/// Vector terms of `psi^dagger alpha psi` integrated over the box.
///
/// Returns the terms and, for [`Ordering::Normal`], the c-number that normal
/// ordering removed (per component).
pub fn direct_current_terms(
    reg: &ModeRegistry,
    spinors: &[DiracSpinorSet],
    ordering: Ordering,
) -> Result<(Vec<VectorTerm>, [f64; 3]), FockError> {
    check_spinors(reg, spinors)?;
    let alpha = dirac_matrices().alpha;
    let modes = reg.modes();
    // spinor multiplying d^dagger(p, s) is the v stored at -p
    let v_of = |a: usize| &spinors[reg.partner(a)].v;
    let u_of = |a: usize| &spinors[a].u;
    let bil = |x: &crate::linalg::Spinor, i: usize, y: &crate::linalg::Spinor| {
        crate::linalg::sandwich4(x, &alpha[i], y)
    };

    let mut terms = Vec::new();
    let mut removed = [0.0; 3];
    for (a, pa) in modes.iter().enumerate() {
        for (b, pb) in modes.iter().enumerate() {
            let same = pa.lattice == pb.lattice;
            let opposite = pa.lattice == neg(pb.lattice);
            for s in 0..2 {
                for sp in 0..2 {
                    let ca = reg.dof_index(a, s, Species::Electron);
                    let cb = reg.dof_index(b, sp, Species::Electron);
                    let da = reg.dof_index(a, s, Species::Positron);
                    let db = reg.dof_index(b, sp, Species::Positron);
                    if same {
                        // c^dag(p,s) c(p',s') u^dag alpha u, phase e^{i(E - E')t}
                        let coeff = std::array::from_fn(|i| bil(&u_of(a)[s], i, &u_of(b)[sp]));
                        terms.push(VectorTerm {
                            coeff,
                            ops: vec![LadderOp::create(ca), LadderOp::annihilate(cb)],
                            frequency: pa.omega - pb.omega,
                        });
                        // d(p,s) d^dag(p',s') v^dag alpha v, phase e^{-i(E - E')t}
                        let coeff: CVec3 =
                            std::array::from_fn(|i| bil(&v_of(a)[s], i, &v_of(b)[sp]));
                        match ordering {
                            Ordering::Raw => terms.push(VectorTerm {
                                coeff,
                                ops: vec![LadderOp::annihilate(da), LadderOp::create(db)],
                                frequency: -(pa.omega - pb.omega),
                            }),
                            Ordering::Normal => {
                                if da == db {
                                    for i in 0..3 {
                                        removed[i] += coeff[i].re;
                                    }
                                }
                                terms.push(VectorTerm {
                                    coeff: coeff.map(|z| -z),
                                    ops: vec![LadderOp::create(db), LadderOp::annihilate(da)],
                                    frequency: -(pa.omega - pb.omega),
                                });
                            }
                        }
                    }
                    if opposite {
                        // c^dag(p,s) d^dag(p',s') u^dag alpha v, phase e^{i(E + E')t}
                        let coeff = std::array::from_fn(|i| bil(&u_of(a)[s], i, &v_of(b)[sp]));
                        terms.push(VectorTerm {
                            coeff,
                            ops: vec![LadderOp::create(ca), LadderOp::create(db)],
                            frequency: pa.omega + pb.omega,
                        });
                        // d(p,s) c(p',s') v^dag alpha u, phase e^{-i(E + E')t}
                        let coeff = std::array::from_fn(|i| bil(&v_of(a)[s], i, &u_of(b)[sp]));
                        terms.push(VectorTerm {
                            coeff,
                            ops: vec![LadderOp::annihilate(da), LadderOp::annihilate(cb)],
                            frequency: -(pa.omega + pb.omega),
                        });
                    }
                }
            }
        }
    }
    Ok((terms, removed))
}

/// `V_i(t)` assembled from the field products.
pub fn assemble_current_direct(
    reg: &ModeRegistry,
    basis: &FockBasis,
    spinors: &[DiracSpinorSet],
    t: f64,
    ordering: Ordering,
) -> Result<[OperatorMatrix; 3], FockError> {
    let (terms, _) = direct_current_terms(reg, spinors, ordering)?;
    let time = TimeDependence::PairPhases {
        pair_frequencies: pair_frequencies(reg),
        t,
    };
    Ok(to_matrices(basis, &terms, [0.0; 3], t, time))
}

pub fn classical_terms(reg: &ModeRegistry) -> Vec<VectorTerm> {
    let mut terms = Vec::new();
    for (a, mode) in reg.modes().iter().enumerate() {
        let vel = mode.k.map(|x| c(x / mode.omega, 0.0));
        for s in 0..2 {
            let ce = reg.dof_index(a, s, Species::Electron);
            let dp = reg.dof_index(a, s, Species::Positron);
            terms.push(VectorTerm {
                coeff: vel,
                ops: vec![LadderOp::create(ce), LadderOp::annihilate(ce)],
                frequency: 0.0,
            });
            terms.push(VectorTerm {
                coeff: vel.map(|z| -z),
                ops: vec![LadderOp::create(dp), LadderOp::annihilate(dp)],
                frequency: 0.0,
            });
        }
    }
    terms
}

/// `V_classic = sum_{k,s} (k/omega) [c^dag c - d^dag d]`.
pub fn assemble_classical(
    reg: &ModeRegistry,
    basis: &FockBasis,
    spinors: &[DiracSpinorSet],
) -> Result<[OperatorMatrix; 3], FockError> {
    check_spinors(reg, spinors)?;
    Ok(to_matrices(
        basis,
        &classical_terms(reg),
        [0.0; 3],
        0.0,
        TimeDependence::Static,
    ))
}

/// Terms of the transverse current, hermitian conjugates included:
///
/// ```text
/// Z_perp = sum_k { sqrt2 eta(k,+1) [ c^dag(k,2) d^dag(-k,1) e^{2i omega t}
///                                  - c(q,1) d(-q,2) e^{-2i omega t} ] + h.c. }
/// ```
///
/// with `q = -k` for [`TransverseReading::AsPrinted`] and `q = k` for
/// [`TransverseReading::Relabeled`].
pub fn zb_transverse_terms(
    reg: &ModeRegistry,
    pols: &[PolarizationBasis],
    reading: TransverseReading,
) -> Result<Vec<VectorTerm>, FockError> {
    check_polarizations(reg, pols)?;
    let mut terms = Vec::new();
    for (a, mode) in reg.modes().iter().enumerate() {
        let b = reg.partner(a);
        let w2 = 2.0 * mode.omega;
        let coeff = pols[a].eta_plus.map(|z| z * SQRT_2);
        terms.push(VectorTerm {
            coeff,
            ops: vec![
                LadderOp::create(reg.dof_index(a, 1, Species::Electron)),
                LadderOp::create(reg.dof_index(b, 0, Species::Positron)),
            ],
            frequency: w2,
        });
        let (ce, dp) = match reading {
            TransverseReading::AsPrinted => (b, a),
            TransverseReading::Relabeled => (a, b),
        };
        terms.push(VectorTerm {
            coeff: coeff.map(|z| -z),
            ops: vec![
                LadderOp::annihilate(reg.dof_index(ce, 0, Species::Electron)),
                LadderOp::annihilate(reg.dof_index(dp, 1, Species::Positron)),
            ],
            frequency: -w2,
        });
    }
    Ok(with_adjoints(terms))
}

/// Terms of the longitudinal current, hermitian conjugates included:
///
/// ```text
/// Z_par = sum_k (m/omega) eta(k,0) { [ c^dag(k,1) d^dag(-k,1)
///                                    - c^dag(k,2) d^dag(-k,2) ] e^{2i omega t} + h.c. }
/// ```
pub fn zb_longitudinal_terms(
    reg: &ModeRegistry,
    pols: &[PolarizationBasis],
) -> Result<Vec<VectorTerm>, FockError> {
    check_polarizations(reg, pols)?;
    let mut terms = Vec::new();
    for (a, mode) in reg.modes().iter().enumerate() {
        let b = reg.partner(a);
        let r = reg.mass() / mode.omega;
        for (s, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            terms.push(VectorTerm {
                coeff: pols[a].eta_zero.map(|z| z * (r * sign)),
                ops: vec![
                    LadderOp::create(reg.dof_index(a, s, Species::Electron)),
                    LadderOp::create(reg.dof_index(b, s, Species::Positron)),
                ],
                frequency: 2.0 * mode.omega,
            });
        }
    }
    Ok(with_adjoints(terms))
}

pub fn assemble_zb_transverse(
    reg: &ModeRegistry,
    basis: &FockBasis,
    pols: &[PolarizationBasis],
    reading: TransverseReading,
    t: f64,
) -> Result<[OperatorMatrix; 3], FockError> {
    let terms = zb_transverse_terms(reg, pols, reading)?;
    let time = TimeDependence::PairPhases {
        pair_frequencies: pair_frequencies(reg),
        t,
    };
    Ok(to_matrices(basis, &terms, [0.0; 3], t, time))
}

pub fn assemble_zb_longitudinal(
    reg: &ModeRegistry,
    basis: &FockBasis,
    pols: &[PolarizationBasis],
    t: f64,
) -> Result<[OperatorMatrix; 3], FockError> {
    let terms = zb_longitudinal_terms(reg, pols)?;
    let time = TimeDependence::PairPhases {
        pair_frequencies: pair_frequencies(reg),
        t,
    };
    Ok(to_matrices(basis, &terms, [0.0; 3], t, time))
}

fn number_weighted(
    reg: &ModeRegistry,
    basis: &FockBasis,
    weight: impl Fn(usize, Species) -> f64,
) -> OperatorMatrix {
    let diag: Vec<C64> = basis
        .states()
        .map(|s| {
            reg.dofs()
                .iter()
                .enumerate()
                .filter(|(j, _)| s >> j & 1 == 1)
                .map(|(_, d)| weight(d.mode, d.species))
                .sum::<f64>()
        })
        .map(|x| c(x, 0.0))
        .collect();
    OperatorMatrix::from_diagonal(&diag)
}

/// `H = sum omega (c^dag c + d^dag d)`.
pub fn free_hamiltonian(reg: &ModeRegistry, basis: &FockBasis) -> OperatorMatrix {
    number_weighted(reg, basis, |a, _| reg.modes()[a].omega)
}

/// `Q = sum (c^dag c - d^dag d)`.
pub fn charge_operator(reg: &ModeRegistry, basis: &FockBasis) -> OperatorMatrix {
    number_weighted(reg, basis, |_, sp| match sp {
        Species::Electron => 1.0,
        Species::Positron => -1.0,
    })
}

/// `P_i = sum k_i (c^dag c + d^dag d)`.
pub fn momentum_operator(reg: &ModeRegistry, basis: &FockBasis) -> [OperatorMatrix; 3] {
    std::array::from_fn(|i| number_weighted(reg, basis, |a, _| reg.modes()[a].k[i]))
}

/// Number operator of one species.
pub fn number_operator(reg: &ModeRegistry, basis: &FockBasis, species: Species) -> OperatorMatrix {
    number_weighted(reg, basis, |_, sp| if sp == species { 1.0 } else { 0.0 })
}

/// Sum of three piece matrices, for residual checks.
pub fn sum3(a: &OperatorMatrix, b: &OperatorMatrix, c3: &OperatorMatrix) -> OperatorMatrix {
    a.add(b).add(c3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::DecompositionSetup;
    use crate::kinematics::LatticeSpec;
    use crate::linalg::{ONE, ZERO};

    fn setup(mass: f64, spacing: f64) -> DecompositionSetup {
        DecompositionSetup::from_lattice(&LatticeSpec::line(mass, spacing, 1).without_origin())
            .unwrap()
    }

    fn basis_vector(s: &DecompositionSetup, state: u64) -> Vec<C64> {
        let mut v = vec![ZERO; s.basis.dim()];
        v[s.basis.index_of(state).unwrap()] = ONE;
        v
    }

    fn all_pieces(s: &DecompositionSetup, t: f64) -> Vec<OperatorMatrix> {
        let mut out = Vec::new();
        out.extend(
            assemble_current_direct(&s.registry, &s.basis, &s.spinors, t, Ordering::Normal)
                .unwrap(),
        );
        out.extend(assemble_classical(&s.registry, &s.basis, &s.spinors).unwrap());
        out.extend(
            assemble_zb_transverse(
                &s.registry,
                &s.basis,
                &s.polarizations,
                TransverseReading::Relabeled,
                t,
            )
            .unwrap(),
        );
        out.extend(assemble_zb_longitudinal(&s.registry, &s.basis, &s.polarizations, t).unwrap());
        out
    }

    #[test]
    fn pieces_are_hermitian_and_vanish_on_vacuum() {
        let s = setup(1.3, 0.8);
        let vac = basis_vector(&s, 0);
        for op in all_pieces(&s, 0.37) {
            assert!(op.hermiticity_defect() < 1e-12);
            assert!(op.expectation(&vac).norm() < 1e-14);
        }
    }

    #[test]
    fn one_particle_currents() {
        let s = setup(1.0, 0.75);
        let v = assemble_current_direct(&s.registry, &s.basis, &s.spinors, 1.1, Ordering::Normal)
            .unwrap();
        for (a, mode) in s.registry.modes().iter().enumerate() {
            for spin in 0..2 {
                for (species, sign) in [(Species::Electron, 1.0), (Species::Positron, -1.0)] {
                    let dof = s.registry.dof_index(a, spin, species);
                    let psi = basis_vector(&s, 1 << dof);
                    for i in 0..3 {
                        let got = v[i].expectation(&psi);
                        assert!((got.re - sign * mode.k[i] / mode.omega).abs() < 1e-12);
                        assert!(got.im.abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn normal_ordering_shifts_by_the_removed_constant() {
        let s = setup(0.6, 1.0);
        let (_, removed) = direct_current_terms(&s.registry, &s.spinors, Ordering::Normal).unwrap();
        assert!(removed.iter().all(|x| x.abs() < 1e-14), "{removed:?}");
        let raw =
            assemble_current_direct(&s.registry, &s.basis, &s.spinors, 0.2, Ordering::Raw).unwrap();
        let nor = assemble_current_direct(&s.registry, &s.basis, &s.spinors, 0.2, Ordering::Normal)
            .unwrap();
        for i in 0..3 {
            let shift = OperatorMatrix::identity(s.basis.dim()).scale(c(removed[i], 0.0));
            assert!(raw[i].sub(&nor[i]).max_abs_diff(&shift) < 1e-13);
        }
    }

    #[test]
    fn transverse_part_is_orthogonal_to_the_momentum() {
        let s = setup(1.0, 0.9);
        let z = assemble_zb_transverse(
            &s.registry,
            &s.basis,
            &s.polarizations,
            TransverseReading::Relabeled,
            0.4,
        )
        .unwrap();
        // lattice along x: the longitudinal direction is +-x per mode, and
        // the x component of each transverse pair term vanishes
        assert!(z[0].max_abs() < 1e-13);
        assert!(z[1].max_abs() > 0.5);
    }

    #[test]
    fn longitudinal_part_scales_with_mass() {
        let massless = setup(0.0, 0.9);
        let z = assemble_zb_longitudinal(
            &massless.registry,
            &massless.basis,
            &massless.polarizations,
            0.3,
        )
        .unwrap();
        assert!(z.iter().all(|m| m.max_abs() < 1e-15));
        // k = 0.75, m = 1: m/omega = 0.8 on the pair amplitude
        let s = setup(1.0, 0.75);
        let z = assemble_zb_longitudinal(&s.registry, &s.basis, &s.polarizations, 0.0).unwrap();
        assert!((z[0].max_abs() - 0.8).abs() < 1e-12);
        assert!(z[1].max_abs() < 1e-15 && z[2].max_abs() < 1e-15);
    }

    #[test]
    fn pieces_conserve_charge_and_pairs_conserve_momentum() {
        let s = setup(1.0, 1.0);
        let q = charge_operator(&s.registry, &s.basis);
        let p = momentum_operator(&s.registry, &s.basis);
        let pieces = all_pieces(&s, 0.9);
        for op in &pieces {
            assert!(op.commutator(&q).max_abs() < 1e-12);
        }
        for op in &pieces[6..] {
            for pi in &p {
                assert!(op.commutator(pi).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn free_evolution_generates_the_pair_phases() {
        // e^{iHt} Z(0) e^{-iHt} = Z(t), with a dense matrix exponential as
        // the oracle
        use nalgebra::DMatrix;
        let s = setup(1.0, 0.5);
        let h = free_hamiltonian(&s.registry, &s.basis);
        let dim = s.basis.dim();
        let dense = |m: &OperatorMatrix| DMatrix::from_fn(dim, dim, |i, j| m.get(i, j));
        let t = 0.83;
        let u = (dense(&h) * C64::new(0.0, -t)).exp();
        let ud = u.adjoint();
        let z0 = assemble_zb_transverse(
            &s.registry,
            &s.basis,
            &s.polarizations,
            TransverseReading::Relabeled,
            0.0,
        )
        .unwrap();
        let zt = assemble_zb_transverse(
            &s.registry,
            &s.basis,
            &s.polarizations,
            TransverseReading::Relabeled,
            t,
        )
        .unwrap();
        for i in 0..3 {
            let evolved = &ud * dense(&z0[i]) * &u;
            let diff = (evolved - dense(&zt[i]))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-10, "component {i}: {diff}");
        }
    }

    #[test]
    fn free_hamiltonian_spectrum() {
        let s = setup(2.0, 1.5);
        let h = free_hamiltonian(&s.registry, &s.basis);
        assert!(h.is_diagonal());
        let omega = s.registry.modes()[0].omega;
        let top = 8.0 * omega;
        let diag = h.diagonal();
        assert_eq!(diag[0], ZERO);
        assert!((diag[s.basis.dim() - 1].re - top).abs() < 1e-12);
    }

    #[test]
    fn corrupted_triad_breaks_the_decomposition() {
        let mut s = setup(1.0, 1.0);
        assert!(s.verify(&[0.0, 0.7], 1e-10).unwrap().passed());
        s.polarizations[0].eta_plus = s.polarizations[0].eta_plus.map(|z| z * c(0.0, 1.0));
        let report = s.verify(&[0.0, 0.7], 1e-10).unwrap();
        assert!(!report.passed());
        assert!(report.worst(TransverseReading::Relabeled).unwrap() > 0.1);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let s = setup(1.0, 1.0);
        let err = assemble_classical(&s.registry, &s.basis, &s.spinors[..1]).unwrap_err();
        assert!(matches!(err, FockError::InconsistentSpinors { .. }));
        let err = zb_longitudinal_terms(&s.registry, &[]).unwrap_err();
        assert!(matches!(err, FockError::InconsistentPolarizations { .. }));
    }
}
