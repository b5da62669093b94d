use super::{CliError, RunConfig};
use crate::fock::{
    assemble_classical, assemble_current_direct, assemble_zb_longitudinal, assemble_zb_transverse,
    charge_operator, ladder, momentum_operator, DecompositionSetup, LadderKind, OperatorMatrix,
    Ordering, Species, TransverseReading,
};
use crate::kinematics::{
    calibrated_spinors, dirac_matrices, energy_projector, make_spinors, pair_coefficients,
    polarization_basis,
};
use crate::linalg::{
    c, mat4_add, mat4_identity, mat4_max_abs_diff, mat4_mul, mat4_trace, mat4_zero, Vec3, C64, ONE,
    ZERO,
};
use crate::report::{Check, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_momentum(rng: &mut ChaCha8Rng) -> Vec3 {
    std::array::from_fn(|_| rng.random_range(-5.0..5.0))
}

fn check(report: &mut Report, cfg: &RunConfig, name: &str, tolerance: &str, measured: f64) {
    report.check(Check::new(name, measured, cfg.tolerance(tolerance)));
}

fn clifford() -> f64 {
    let d = dirac_matrices();
    let mut all = d.alpha.to_vec();
    all.push(d.beta);
    let mut worst = 0.0f64;
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let anti = mat4_add(&mat4_mul(a, b), &mat4_mul(b, a));
            let target = if i == j {
                crate::linalg::mat4_scale(&mat4_identity(), c(2.0, 0.0))
            } else {
                mat4_zero()
            };
            worst = worst.max(mat4_max_abs_diff(&anti, &target));
        }
    }
    worst
}

/// Checks on single-mode kinematics over random `(k, m)`.
fn kinematic_sweep(
    report: &mut Report,
    cfg: &RunConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(), CliError> {
    let alpha = dirac_matrices().alpha;
    let (mut spinor, mut cal, mut trace, mut gram, mut pol) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.sweep {
        let k = random_momentum(rng);
        let m = rng.random_range(0.0..3.0);
        let set = make_spinors(&k, m).map_err(CliError::physics)?;
        spinor = spinor
            .max(set.orthonormality_defect())
            .max(set.eigen_defect());
        let (_, calibration) = calibrated_spinors(&k, m).map_err(CliError::physics)?;
        cal = cal.max(calibration.layout_residual);

        let pair = pair_coefficients(&k, m).map_err(CliError::physics)?;
        let plus = energy_projector(&k, m, 1.0).map_err(CliError::physics)?;
        let minus = energy_projector(&k, m, -1.0).map_err(CliError::physics)?;
        let projector_trace: f64 = alpha
            .iter()
            .map(|a| mat4_trace(&mat4_mul(&mat4_mul(&plus, a), &mat4_mul(&minus, a))).re)
            .sum();
        let fro = pair.frobenius_sq();
        trace = trace
            .max((fro - pair.expected_frobenius_sq()).abs())
            .max((fro - projector_trace).abs());
        let r2 = (pair.mass / pair.omega).powi(2);
        for e in pair.transverse_gram_eigenvalues() {
            gram = gram.max((e - 2.0).abs());
        }
        for e in pair.longitudinal_gram_eigenvalues() {
            gram = gram.max((e - r2).abs());
        }

        // near-axis momenta stress the triad
        let tiny = rng.random_range(-1e-9..1e-9);
        for q in [k, [tiny, -tiny * 0.5, k[2]]] {
            let b = polarization_basis(&q).map_err(CliError::physics)?;
            pol = pol.max(b.triad_defect(&q));
        }
    }
    check(report, cfg, "spinor", "spinor", spinor);
    check(report, cfg, "calibration", "calibration", cal);
    check(report, cfg, "trace", "trace", trace);
    check(report, cfg, "gram", "gram", gram);
    check(report, cfg, "polarization", "polarization", pol);
    Ok(())
}

fn car(setup: &DecompositionSetup) -> Result<f64, CliError> {
    let (reg, basis) = (&setup.registry, &setup.basis);
    let n = reg.len();
    let mut ann = Vec::with_capacity(n);
    for d in 0..n {
        ann.push(ladder(reg, basis, d, LadderKind::Annihilate).map_err(CliError::physics)?);
    }
    let cre: Vec<OperatorMatrix> = ann.iter().map(OperatorMatrix::adjoint).collect();
    let identity = OperatorMatrix::identity(basis.dim());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mixed = ann[i].anticommutator(&cre[j]);
            worst = worst.max(if i == j {
                mixed.max_abs_diff(&identity)
            } else {
                mixed.max_abs()
            });
            worst = worst.max(ann[i].anticommutator(&ann[j]).max_abs());
        }
    }
    Ok(worst)
}

pub fn run_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.require_mass()?;
    let mut report = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    check(&mut report, cfg, "clifford", "clifford", clifford());
    kinematic_sweep(&mut report, cfg, &mut rng)?;

    let setup = DecompositionSetup::from_lattice(&cfg.lattice).map_err(CliError::physics)?;
    check(&mut report, cfg, "car", "car", car(&setup)?);
    let (reg, basis) = (&setup.registry, &setup.basis);

    let times: Vec<f64> = (0..cfg.verify_times)
        .map(|_| rng.random_range(0.0..10.0))
        .collect();
    let decomposition = setup
        .verify(&times, cfg.tolerance("decomposition"))
        .map_err(CliError::physics)?;
    let reading = decomposition
        .passed_reading
        .unwrap_or(TransverseReading::Relabeled);
    let worst = decomposition.worst(reading).unwrap_or(f64::NAN);
    let mut detail = format!(
        "modes={} dimension={} times={} reading={}",
        decomposition.modes,
        decomposition.dimension,
        times.len(),
        serde_json::to_value(reading)
            .expect("reading serializes")
            .as_str()
            .unwrap_or_default()
    );
    if let Some(printed) = decomposition.worst(TransverseReading::AsPrinted) {
        if reading != TransverseReading::AsPrinted {
            detail.push_str(&format!(" as_printed_residual={printed:e}"));
        }
    }
    report.check(
        Check::new("decomposition", worst, cfg.tolerance("decomposition")).with_detail(detail),
    );

    let q = charge_operator(reg, basis);
    let p = momentum_operator(reg, basis);
    let (mut herm, mut comm_q, mut comm_p) = (0.0f64, 0.0f64, 0.0f64);
    let classic = assemble_classical(reg, basis, &setup.spinors).map_err(CliError::physics)?;
    for &t in &times {
        let direct = assemble_current_direct(reg, basis, &setup.spinors, t, Ordering::Normal)
            .map_err(CliError::physics)?;
        let perp = assemble_zb_transverse(reg, basis, &setup.polarizations, reading, t)
            .map_err(CliError::physics)?;
        let par = assemble_zb_longitudinal(reg, basis, &setup.polarizations, t)
            .map_err(CliError::physics)?;
        for op in direct.iter().chain(&classic).chain(&perp).chain(&par) {
            herm = herm.max(op.hermiticity_defect());
            comm_q = comm_q.max(op.commutator(&q).max_abs());
        }
        for op in perp.iter().chain(&par) {
            for pi in &p {
                comm_p = comm_p.max(op.commutator(pi).max_abs());
            }
        }
    }
    check(&mut report, cfg, "hermiticity", "hermiticity", herm);
    check(&mut report, cfg, "commutator_charge", "commutator", comm_q);
    check(
        &mut report,
        cfg,
        "commutator_momentum",
        "commutator",
        comm_p,
    );

    // one-particle expectation values of the direct current
    let direct = assemble_current_direct(reg, basis, &setup.spinors, 0.0, Ordering::Normal)
        .map_err(CliError::physics)?;
    let mut classical = 0.0f64;
    for (a, mode) in reg.modes().iter().enumerate() {
        for spin in 0..2 {
            for (species, sign) in [(Species::Electron, 1.0), (Species::Positron, -1.0)] {
                let dof = reg.dof_index(a, spin, species);
                let mut psi = vec![ZERO; basis.dim()];
                if let Some(i) = basis.index_of(1 << dof) {
                    psi[i] = ONE;
                } else {
                    continue;
                }
                for i in 0..3 {
                    let got: C64 = direct[i].expectation(&psi);
                    classical = classical.max((got - sign * mode.k[i] / mode.omega).norm());
                }
            }
        }
    }
    check(&mut report, cfg, "classical", "classical", classical);
    Ok(report)
}
