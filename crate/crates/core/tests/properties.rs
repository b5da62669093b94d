use proptest::prelude::*;
use zblab::horizon::{scenario_timeline, validate_scenario, HorizonScenario};
use zblab::kinematics::{calibrated_spinors, make_spinors, pair_coefficients, polarization_basis};

fn momentum() -> impl Strategy<Value = [f64; 3]> {
    proptest::array::uniform3(-20.0f64..20.0)
        .prop_filter("nonzero", |k| k.iter().any(|x| x.abs() > 1e-6))
}

proptest! {
    #[test]
    fn spinors_are_orthonormal_eigenvectors(k in momentum(), m in 0.0f64..10.0) {
        let s = make_spinors(&k, m).unwrap();
        prop_assert!(s.orthonormality_defect() < 1e-12);
        prop_assert!(s.eigen_defect() < 1e-12 * (1.0 + s.omega));
    }

    #[test]
    fn calibration_hits_the_layout(k in momentum(), m in 0.0f64..10.0) {
        let (s, cal) = calibrated_spinors(&k, m).unwrap();
        prop_assert!(s.orthonormality_defect() < 1e-12);
        prop_assert!(cal.layout_residual < 1e-10);
    }

    #[test]
    fn pair_norm_depends_only_on_mass_ratio(k in momentum(), m in 0.0f64..10.0) {
        let p = pair_coefficients(&k, m).unwrap();
        prop_assert!((p.frobenius_sq() - p.expected_frobenius_sq()).abs() < 1e-10);
        let [a, b] = p.transverse_gram_eigenvalues();
        prop_assert!((a - 2.0).abs() < 1e-9 && (b - 2.0).abs() < 1e-9);
    }

    #[test]
    fn triad_is_orthonormal_and_transverse(k in momentum()) {
        let b = polarization_basis(&k).unwrap();
        prop_assert!(b.triad_defect(&k) < 1e-12);
    }

    #[test]
    fn triad_is_scale_invariant(k in momentum(), s in 0.01f64..100.0) {
        let a = polarization_basis(&k).unwrap();
        let b = polarization_basis(&[k[0] * s, k[1] * s, k[2] * s]).unwrap();
        for i in 0..3 {
            prop_assert!((a.eta_plus[i] - b.eta_plus[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn near_axis_triad_stays_regular(e1 in -1e-9f64..1e-9, e2 in -1e-9f64..1e-9, k3 in prop_oneof![0.1f64..10.0, -10.0f64..-0.1]) {
        let k = [e1, e2, k3];
        let b = polarization_basis(&k).unwrap();
        prop_assert!(b.triad_defect(&k) < 1e-12);
    }

    #[test]
    fn valid_scenarios_always_draw(rg in 0.1f64..10.0, f in proptest::array::uniform4(0.01f64..0.99), escape in 1.01f64..5.0) {
        let r1 = rg * (1.0 + f[0]);
        let (lo, hi) = if f[1] < f[2] { (f[1], f[2]) } else { (f[2], f[1]) };
        prop_assume!(hi - lo > 1e-6);
        let (r, r2) = if f[3] < 0.5 { (rg * lo, rg * hi) } else { (rg * hi, rg * lo) };
        let s = HorizonScenario::new(rg, r, r1, r2, r1 * escape);
        prop_assert!(validate_scenario(&s).unwrap().is_ok());
        let t = scenario_timeline(&s).unwrap();
        prop_assert!(t.positions_finite());
        prop_assert_eq!(t.inward_crossings().len(), 1);
        prop_assert!(t.outward_crossings().is_empty());
    }

    #[test]
    fn non_positive_radii_are_rejected(bad in prop_oneof![Just(0.0f64), -10.0f64..0.0, Just(f64::NAN), Just(f64::INFINITY)], slot in 0usize..5) {
        let mut v = [1.0, 0.5, 1.5, 0.7, 10.0];
        v[slot] = bad;
        let s = HorizonScenario::new(v[0], v[1], v[2], v[3], v[4]);
        prop_assert!(validate_scenario(&s).is_err());
    }
}
