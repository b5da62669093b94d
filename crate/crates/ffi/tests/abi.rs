use std::ffi::CStr;
use std::ptr;
use zblab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(zblab_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(zblab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn spinors_at_rest() {
    let mut out = ZblabSpinorSet::default();
    let k = [0.0; 3];
    assert_eq!(
        unsafe { zblab_spinors(k.as_ptr(), 1.0, false, &mut out) },
        ZblabStatus::Ok
    );
    assert_eq!(out.omega, 1.0);
    assert_eq!(out.u[0][0], ZblabComplex { re: 1.0, im: 0.0 });
    // massless at rest has no energy
    let st = unsafe { zblab_spinors(k.as_ptr(), 0.0, false, &mut out) };
    assert_eq!(st, ZblabStatus::ZeroEnergyMode);
    assert!(!last_error().is_empty());
}

#[test]
fn null_pointers_are_reported() {
    let k = [1.0, 0.0, 0.0];
    assert_eq!(
        unsafe { zblab_spinors(ptr::null(), 1.0, false, ptr::null_mut()) },
        ZblabStatus::NullPointer
    );
    assert_eq!(
        unsafe { zblab_polarization(k.as_ptr(), ptr::null_mut()) },
        ZblabStatus::NullPointer
    );
    assert!(last_error().contains("NULL"));
    unsafe {
        zblab_decomposition_free(ptr::null_mut());
        zblab_trajectory_free(ptr::null_mut());
    }
}

#[test]
fn polarization_and_pair_spectra() {
    let k = [0.0, 0.0, 2.0];
    let mut p = ZblabPolarization::default();
    assert_eq!(
        unsafe { zblab_polarization(k.as_ptr(), &mut p) },
        ZblabStatus::Ok
    );
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((p.eta_plus[0].re - s).abs() < 1e-15 && (p.eta_plus[1].im - s).abs() < 1e-15);
    let zero = [0.0; 3];
    assert_eq!(
        unsafe { zblab_polarization(zero.as_ptr(), &mut p) },
        ZblabStatus::ZeroMomentum
    );

    let k = [3.0, 0.0, 0.0];
    let mut g = ZblabPairSpectra::default();
    assert_eq!(
        unsafe { zblab_pair_spectra(k.as_ptr(), 4.0, &mut g) },
        ZblabStatus::Ok
    );
    assert!((g.frobenius_sq - (4.0 + 2.0 * 0.64)).abs() < 1e-12);
    assert!(g.transverse_gram.iter().all(|e| (e - 2.0).abs() < 1e-12));
    assert!(g.longitudinal_gram.iter().all(|e| (e - 0.64).abs() < 1e-12));
}

#[test]
fn decomposition_handle_lifecycle() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { zblab_decomposition_new(1.0, 1.0, 1, true, &mut h) },
        ZblabStatus::Ok
    );
    let mut dim = 0usize;
    assert_eq!(
        unsafe { zblab_decomposition_dimension(h, &mut dim) },
        ZblabStatus::Ok
    );
    assert_eq!(dim, 256);
    let times = [0.0, 0.4, 1.3];
    let mut r = ZblabDecompositionResult {
        reading: ZblabReading::None,
        worst_as_printed: 0.0,
        worst_relabeled: 0.0,
        calibration_residual: 0.0,
    };
    let st = unsafe { zblab_decomposition_verify(h, times.as_ptr(), times.len(), 1e-10, &mut r) };
    assert_eq!(st, ZblabStatus::Ok);
    assert_eq!(r.reading, ZblabReading::Relabeled);
    assert!(r.worst_relabeled < 1e-10);
    assert!(r.worst_as_printed > 1.0);
    let st = unsafe { zblab_decomposition_verify(h, times.as_ptr(), times.len(), 0.0, &mut r) };
    assert_eq!(st, ZblabStatus::InvalidArgument);
    unsafe { zblab_decomposition_free(h) };

    let st = unsafe { zblab_decomposition_new(1.0, 1.0, 3, false, &mut h) };
    assert_eq!(st, ZblabStatus::TooLarge);
}

#[test]
fn trajectory_handle_lifecycle() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let packet = ZblabPacketParams {
        k0: [0.0; 3],
        center: [0.0; 3],
        sigma: 4.0,
        w_plus: ZblabComplex { re: h, im: 0.0 },
        w_minus: ZblabComplex { re: h, im: 0.0 },
        spin: 0,
        mass: 1.0,
    };
    let grid = ZblabGridParams {
        points: 512,
        length: 64.0,
        dim: 1,
    };
    let times: Vec<f64> = (0..256)
        .map(|i| i as f64 * 8.0 * std::f64::consts::PI / 2.0 / 256.0)
        .collect();
    let mut t = ptr::null_mut();
    let st = unsafe { zblab_packet_simulate(&packet, &grid, times.as_ptr(), times.len(), &mut t) };
    assert_eq!(st, ZblabStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { zblab_trajectory_len(t, &mut n) }, ZblabStatus::Ok);
    assert_eq!(n, 256);
    let mut s = ZblabSample::default();
    assert_eq!(
        unsafe { zblab_trajectory_sample(t, 10, &mut s) },
        ZblabStatus::Ok
    );
    assert!((s.norm - 1.0).abs() < 1e-12);
    assert_eq!(
        unsafe { zblab_trajectory_sample(t, 256, &mut s) },
        ZblabStatus::InvalidArgument
    );
    let mut spec = ZblabSpectrum::default();
    assert_eq!(
        unsafe { zblab_trajectory_spectrum(t, &mut spec) },
        ZblabStatus::Ok
    );
    assert!((spec.dominant_frequency - 2.0).abs() < 0.02);

    let dir = tempfile::tempdir().unwrap();
    let path = std::ffi::CString::new(dir.path().join("t.csv").to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { zblab_trajectory_write_csv(t, path.as_ptr()) },
        ZblabStatus::Ok
    );
    let text = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(text.starts_with("t,x1,x2,x3,j1,j2,j3,norm\n"));
    assert_eq!(text.lines().count(), 257);
    unsafe { zblab_trajectory_free(t) };

    let coarse = ZblabGridParams {
        points: 100,
        ..grid
    };
    let st =
        unsafe { zblab_packet_simulate(&packet, &coarse, times.as_ptr(), times.len(), &mut t) };
    assert_eq!(st, ZblabStatus::InvalidArgument);
    let narrow = ZblabPacketParams {
        sigma: 0.2,
        ..packet
    };
    let st = unsafe { zblab_packet_simulate(&narrow, &grid, times.as_ptr(), times.len(), &mut t) };
    assert_eq!(st, ZblabStatus::UnresolvedPacket);
}

#[test]
fn horizon_validation_and_rendering() {
    let ok = ZblabScenario {
        r_g: 1.0,
        r: 0.5,
        r1: 1.5,
        r2: 0.7,
        r_prime: 10.0,
    };
    let (mut mask, mut variant) = (99u32, 99i32);
    assert_eq!(
        unsafe { zblab_horizon_validate(&ok, &mut mask, &mut variant) },
        ZblabStatus::Ok
    );
    assert_eq!((mask, variant), (0, ZBLAB_VARIANT_R_INSIDE_R2));
    let bad = ZblabScenario {
        r1: 0.9,
        r2: 1.2,
        ..ok
    };
    assert_eq!(
        unsafe { zblab_horizon_validate(&bad, &mut mask, &mut variant) },
        ZblabStatus::Ok
    );
    assert_eq!(
        mask,
        ZBLAB_VIOLATION_R1_OUTSIDE | ZBLAB_VIOLATION_R2_INSIDE | ZBLAB_VIOLATION_VARIANT
    );
    let neg = ZblabScenario { r: -1.0, ..ok };
    assert_eq!(
        unsafe { zblab_horizon_validate(&neg, &mut mask, &mut variant) },
        ZblabStatus::NonPositiveRadius
    );

    let mut needed = 0usize;
    let st =
        unsafe { zblab_horizon_render(&ok, ZBLAB_FORMAT_SVG, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, ZblabStatus::BufferTooSmall);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    let st = unsafe {
        zblab_horizon_render(
            &ok,
            ZBLAB_FORMAT_SVG,
            buf.as_mut_ptr(),
            buf.len(),
            &mut needed,
        )
    };
    assert_eq!(st, ZblabStatus::Ok);
    let svg = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
    assert_eq!(
        unsafe {
            zblab_horizon_render(
                &bad,
                ZBLAB_FORMAT_SVG,
                buf.as_mut_ptr(),
                buf.len(),
                &mut needed,
            )
        },
        ZblabStatus::InvalidScenario
    );
    assert_eq!(
        unsafe { zblab_horizon_render(&ok, 7, buf.as_mut_ptr(), buf.len(), &mut needed) },
        ZblabStatus::UnsupportedFormat
    );

    let st = unsafe {
        zblab_flat_render(
            0.0,
            0.4,
            0.1,
            0.5,
            ZBLAB_FORMAT_ASCII,
            ptr::null_mut(),
            0,
            &mut needed,
        )
    };
    assert_eq!(st, ZblabStatus::BufferTooSmall);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    let st = unsafe {
        zblab_flat_render(
            0.0,
            0.4,
            0.1,
            0.5,
            ZBLAB_FORMAT_ASCII,
            buf.as_mut_ptr(),
            needed,
            &mut needed,
        )
    };
    assert_eq!(st, ZblabStatus::Ok);
    let txt = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert!(txt.contains("pair-positron"));
}
