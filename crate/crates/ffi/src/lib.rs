//! C ABI over `zblab-core`.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`ZblabStatus`]; results go through
//!   out-pointers that are written only on success.
//! * Heavy objects are opaque handles created by `*_new` / `*_simulate` and
//!   released with the matching `*_free`. Freeing NULL is a no-op.
//! * A human-readable message for the most recent failure on the calling
//!   thread is available from [`zblab_last_error`].
//! * Panics never cross the boundary; they surface as
//!   `ZBLAB_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use zblab::dynamics::{
    evolve_packet, zb_spectrum, DynamicsError, GridSpec, PacketSpec, Spin, TrajectoryRecord,
};
use zblab::fock::{DecompositionSetup, FockError, TransverseReading};
use zblab::horizon::{
    emit_diagram, flat_space_analogue, scenario_timeline, validate_scenario, DiagramFormat,
    HorizonError, HorizonScenario, Variant, ESCAPE_BEYOND_CREATION, R1_OUTSIDE, R2_INSIDE,
    R_INSIDE,
};
use zblab::kinematics::{
    calibrated_spinors, make_spinors, pair_coefficients, polarization_basis, KinematicsError,
    LatticeSpec,
};
use zblab::linalg::{c, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZblabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ZeroEnergyMode = 3,
    ZeroMomentum = 4,
    TooLarge = 5,
    UnresolvedPacket = 6,
    InsufficientSamples = 7,
    NonPositiveRadius = 8,
    InvalidScenario = 9,
    UnsupportedFormat = 10,
    BufferTooSmall = 11,
    Io = 12,
    Internal = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZblabComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ZblabComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ZblabComplex> for C64 {
    fn from(z: ZblabComplex) -> Self {
        c(z.re, z.im)
    }
}

/// Spinors at one momentum: `u[s]` positive energy, `v[s]` negative energy.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZblabSpinorSet {
    pub omega: f64,
    pub u: [[ZblabComplex; 4]; 2],
    pub v: [[ZblabComplex; 4]; 2],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZblabPolarization {
    pub eta_plus: [ZblabComplex; 3],
    pub eta_zero: [ZblabComplex; 3],
    pub eta_minus: [ZblabComplex; 3],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZblabPairSpectra {
    pub frobenius_sq: f64,
    pub transverse_gram: [f64; 2],
    pub longitudinal_gram: [f64; 2],
}

/// Reading of the transverse annihilation term that passed, or
/// `ZBLAB_READING_NONE`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZblabReading {
    None = -1,
    AsPrinted = 0,
    Relabeled = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ZblabDecompositionResult {
    pub reading: ZblabReading,
    /// Worst residual with the term as printed.
    pub worst_as_printed: f64,
    /// Worst residual with the mirrored labels; NaN when not evaluated.
    pub worst_relabeled: f64,
    pub calibration_residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ZblabPacketParams {
    pub k0: [f64; 3],
    pub center: [f64; 3],
    pub sigma: f64,
    pub w_plus: ZblabComplex,
    pub w_minus: ZblabComplex,
    /// 0 = up, 1 = down.
    pub spin: u32,
    pub mass: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ZblabGridParams {
    pub points: usize,
    pub length: f64,
    /// 1 or 3.
    pub dim: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZblabSample {
    pub t: f64,
    pub x: [f64; 3],
    pub j: [f64; 3],
    pub norm: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZblabSpectrum {
    pub dominant_frequency: f64,
    pub amplitude: f64,
    pub component: u32,
    pub fit_residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ZblabScenario {
    pub r_g: f64,
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub r_prime: f64,
}

pub const ZBLAB_VIOLATION_R1_OUTSIDE: u32 = 1;
pub const ZBLAB_VIOLATION_R2_INSIDE: u32 = 2;
pub const ZBLAB_VIOLATION_R_INSIDE: u32 = 4;
pub const ZBLAB_VIOLATION_ESCAPE: u32 = 8;
pub const ZBLAB_VIOLATION_VARIANT: u32 = 16;

pub const ZBLAB_VARIANT_NONE: i32 = -1;
pub const ZBLAB_VARIANT_R_INSIDE_R2: i32 = 0;
pub const ZBLAB_VARIANT_R2_INSIDE_R: i32 = 1;

pub const ZBLAB_FORMAT_SVG: u32 = 0;
pub const ZBLAB_FORMAT_ASCII: u32 = 1;

/// Opaque decomposition setup for one lattice.
pub struct ZblabDecomposition(DecompositionSetup);

/// Opaque sampled packet trajectory.
pub struct ZblabTrajectory(TrajectoryRecord);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(ZblabStatus, String);

impl Failure {
    fn new(status: ZblabStatus, msg: impl Into<String>) -> Self {
        Self(status, msg.into())
    }
}

impl From<KinematicsError> for Failure {
    fn from(e: KinematicsError) -> Self {
        let status = match e {
            KinematicsError::ZeroEnergyMode => ZblabStatus::ZeroEnergyMode,
            KinematicsError::ZeroMomentum => ZblabStatus::ZeroMomentum,
            _ => ZblabStatus::InvalidArgument,
        };
        Self(status, e.to_string())
    }
}

impl From<FockError> for Failure {
    fn from(e: FockError) -> Self {
        match e {
            FockError::TooLarge { .. } => Self(ZblabStatus::TooLarge, e.to_string()),
            FockError::Kinematics(k) => k.into(),
            _ => Self(ZblabStatus::InvalidArgument, e.to_string()),
        }
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        let status = match &e {
            DynamicsError::UnresolvedPacket(_) | DynamicsError::Aliasing(_) => {
                ZblabStatus::UnresolvedPacket
            }
            DynamicsError::InsufficientSamples(_) => ZblabStatus::InsufficientSamples,
            DynamicsError::TooLarge { .. } => ZblabStatus::TooLarge,
            DynamicsError::Io(_) | DynamicsError::Format(_) => ZblabStatus::Io,
            DynamicsError::Kinematics(KinematicsError::ZeroEnergyMode) => {
                ZblabStatus::ZeroEnergyMode
            }
            _ => ZblabStatus::InvalidArgument,
        };
        Self(status, e.to_string())
    }
}

impl From<HorizonError> for Failure {
    fn from(e: HorizonError) -> Self {
        let status = match e {
            HorizonError::NonPositiveRadius { .. } => ZblabStatus::NonPositiveRadius,
            HorizonError::UnsupportedFormat(_) => ZblabStatus::UnsupportedFormat,
            HorizonError::Invalid(_) => ZblabStatus::InvalidScenario,
            HorizonError::Parse(_) => ZblabStatus::InvalidArgument,
        };
        Self(status, e.to_string())
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ZblabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ZblabStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ZblabStatus::Internal
        }
    }
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(ZblabStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::new(
            ZblabStatus::NullPointer,
            format!("{what} is NULL"),
        ));
    }
    p.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::new(
            ZblabStatus::NullPointer,
            format!("{what} is NULL"),
        ));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn spinor(s: &zblab::linalg::Spinor) -> [ZblabComplex; 4] {
    s.map(ZblabComplex::from)
}

fn cvec(v: &zblab::linalg::CVec3) -> [ZblabComplex; 3] {
    v.map(ZblabComplex::from)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zblab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread (empty after a success).
/// The pointer stays valid until the next call into the library on this
/// thread.
#[no_mangle]
pub extern "C" fn zblab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Spinors at momentum `k[3]` and mass `mass`. With `helicity` nonzero the
/// calibrated helicity basis is returned, otherwise the z-spin basis.
///
/// # Safety
/// `k` must point to 3 doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn zblab_spinors(
    k: *const f64,
    mass: f64,
    helicity: bool,
    out: *mut ZblabSpinorSet,
) -> ZblabStatus {
    guard(|| {
        let k = *read(k.cast::<[f64; 3]>(), "k")?;
        let set = if helicity {
            calibrated_spinors(&k, mass)?.0
        } else {
            make_spinors(&k, mass)?
        };
        write(
            out,
            ZblabSpinorSet {
                omega: set.omega,
                u: [spinor(&set.u[0]), spinor(&set.u[1])],
                v: [spinor(&set.v[0]), spinor(&set.v[1])],
            },
            "out",
        )
    })
}

/// Polarization triad of a nonzero momentum.
///
/// # Safety
/// `k` must point to 3 doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn zblab_polarization(
    k: *const f64,
    out: *mut ZblabPolarization,
) -> ZblabStatus {
    guard(|| {
        let k = *read(k.cast::<[f64; 3]>(), "k")?;
        let b = polarization_basis(&k)?;
        write(
            out,
            ZblabPolarization {
                eta_plus: cvec(&b.eta_plus),
                eta_zero: cvec(&b.eta_zero),
                eta_minus: cvec(&b.eta_minus),
            },
            "out",
        )
    })
}

/// Frobenius norm and Gram spectra of the pair amplitudes at `(k, mass)`.
///
/// # Safety
/// `k` must point to 3 doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn zblab_pair_spectra(
    k: *const f64,
    mass: f64,
    out: *mut ZblabPairSpectra,
) -> ZblabStatus {
    guard(|| {
        let k = *read(k.cast::<[f64; 3]>(), "k")?;
        let p = pair_coefficients(&k, mass)?;
        write(
            out,
            ZblabPairSpectra {
                frobenius_sq: p.frobenius_sq(),
                transverse_gram: p.transverse_gram_eigenvalues(),
                longitudinal_gram: p.longitudinal_gram_eigenvalues(),
            },
            "out",
        )
    })
}

/// Build the Fock-space setup for a 1D lattice of integer momenta
/// `-n_max..n_max` times `spacing`.
///
/// # Safety
/// `out` must be writable; the handle is released with
/// [`zblab_decomposition_free`].
#[no_mangle]
pub unsafe extern "C" fn zblab_decomposition_new(
    mass: f64,
    spacing: f64,
    n_max: u32,
    skip_origin: bool,
    out: *mut *mut ZblabDecomposition,
) -> ZblabStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::new(ZblabStatus::NullPointer, "out is NULL"));
        }
        let mut spec = LatticeSpec::line(mass, spacing, n_max);
        spec.skip_origin = skip_origin;
        let setup = DecompositionSetup::from_lattice(&spec)?;
        out.write(Box::into_raw(Box::new(ZblabDecomposition(setup))));
        Ok(())
    })
}

/// Fock-space dimension of the setup.
///
/// # Safety
/// `handle` must come from [`zblab_decomposition_new`].
#[no_mangle]
pub unsafe extern "C" fn zblab_decomposition_dimension(
    handle: *const ZblabDecomposition,
    out: *mut usize,
) -> ZblabStatus {
    guard(|| {
        let h = read(handle, "handle")?;
        write(out, h.0.basis.dim(), "out")
    })
}

/// Compare the direct current with its three pieces at `n_times` times.
///
/// # Safety
/// `handle` must come from [`zblab_decomposition_new`]; `times` must point
/// to `n_times` doubles.
#[no_mangle]
pub unsafe extern "C" fn zblab_decomposition_verify(
    handle: *const ZblabDecomposition,
    times: *const f64,
    n_times: usize,
    tolerance: f64,
    out: *mut ZblabDecompositionResult,
) -> ZblabStatus {
    guard(|| {
        let h = read(handle, "handle")?;
        let times = slice(times, n_times, "times")?;
        if !(tolerance > 0.0) {
            return Err(Failure::new(
                ZblabStatus::InvalidArgument,
                "tolerance must be positive",
            ));
        }
        let report = h.0.verify(times, tolerance)?;
        let reading = match report.passed_reading {
            Some(TransverseReading::AsPrinted) => ZblabReading::AsPrinted,
            Some(TransverseReading::Relabeled) => ZblabReading::Relabeled,
            None => ZblabReading::None,
        };
        write(
            out,
            ZblabDecompositionResult {
                reading,
                worst_as_printed: report
                    .worst(TransverseReading::AsPrinted)
                    .unwrap_or(f64::NAN),
                worst_relabeled: report
                    .worst(TransverseReading::Relabeled)
                    .unwrap_or(f64::NAN),
                calibration_residual: report.calibration_residual,
            },
            "out",
        )
    })
}

/// # Safety
/// `handle` must come from [`zblab_decomposition_new`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn zblab_decomposition_free(handle: *mut ZblabDecomposition) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Propagate a packet and sample it at `n_times` non-decreasing times.
///
/// # Safety
/// Pointers must be valid; `times` must hold `n_times` doubles. The handle
/// is released with [`zblab_trajectory_free`].
#[no_mangle]
pub unsafe extern "C" fn zblab_packet_simulate(
    packet: *const ZblabPacketParams,
    grid: *const ZblabGridParams,
    times: *const f64,
    n_times: usize,
    out: *mut *mut ZblabTrajectory,
) -> ZblabStatus {
    guard(|| {
        let p = read(packet, "packet")?;
        let g = read(grid, "grid")?;
        let times = slice(times, n_times, "times")?;
        if out.is_null() {
            return Err(Failure::new(ZblabStatus::NullPointer, "out is NULL"));
        }
        let spin = match p.spin {
            0 => Spin::Up,
            1 => Spin::Down,
            other => {
                return Err(Failure::new(
                    ZblabStatus::InvalidArgument,
                    format!("spin {other}"),
                ))
            }
        };
        let spec = PacketSpec {
            k0: p.k0,
            center: p.center,
            sigma: p.sigma,
            w_plus: p.w_plus.into(),
            w_minus: p.w_minus.into(),
            spin,
            mass: p.mass,
        };
        let grid = GridSpec {
            points: g.points,
            length: g.length,
            dim: g.dim,
        };
        let record = evolve_packet(&spec, &grid, times)?;
        out.write(Box::into_raw(Box::new(ZblabTrajectory(record))));
        Ok(())
    })
}

/// Number of samples in a trajectory.
///
/// # Safety
/// `handle` must come from [`zblab_packet_simulate`].
#[no_mangle]
pub unsafe extern "C" fn zblab_trajectory_len(
    handle: *const ZblabTrajectory,
    out: *mut usize,
) -> ZblabStatus {
    guard(|| write(out, read(handle, "handle")?.0.len(), "out"))
}

/// Sample `index` of a trajectory.
///
/// # Safety
/// `handle` must come from [`zblab_packet_simulate`].
#[no_mangle]
pub unsafe extern "C" fn zblab_trajectory_sample(
    handle: *const ZblabTrajectory,
    index: usize,
    out: *mut ZblabSample,
) -> ZblabStatus {
    guard(|| {
        let r = &read(handle, "handle")?.0;
        if index >= r.len() {
            return Err(Failure::new(
                ZblabStatus::InvalidArgument,
                format!("index {index} out of range ({} samples)", r.len()),
            ));
        }
        write(
            out,
            ZblabSample {
                t: r.times[index],
                x: r.position[index],
                j: r.current[index],
                norm: r.norm[index],
            },
            "out",
        )
    })
}

/// Dominant oscillation of the trajectory's current.
///
/// # Safety
/// `handle` must come from [`zblab_packet_simulate`].
#[no_mangle]
pub unsafe extern "C" fn zblab_trajectory_spectrum(
    handle: *const ZblabTrajectory,
    out: *mut ZblabSpectrum,
) -> ZblabStatus {
    guard(|| {
        let s = zb_spectrum(&read(handle, "handle")?.0)?;
        write(
            out,
            ZblabSpectrum {
                dominant_frequency: s.dominant_frequency,
                amplitude: s.amplitude,
                component: s.component as u32,
                fit_residual: s.fit_residual,
            },
            "out",
        )
    })
}

/// Write the trajectory as CSV to `path`.
///
/// # Safety
/// `handle` must come from [`zblab_packet_simulate`]; `path` must be a
/// NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn zblab_trajectory_write_csv(
    handle: *const ZblabTrajectory,
    path: *const c_char,
) -> ZblabStatus {
    guard(|| {
        let r = &read(handle, "handle")?.0;
        if path.is_null() {
            return Err(Failure::new(ZblabStatus::NullPointer, "path is NULL"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure::new(ZblabStatus::InvalidArgument, "path is not UTF-8"))?;
        let file = std::fs::File::create(path)
            .map_err(|e| Failure::new(ZblabStatus::Io, e.to_string()))?;
        r.write_csv(std::io::BufWriter::new(file))?;
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`zblab_packet_simulate`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn zblab_trajectory_free(handle: *mut ZblabTrajectory) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn scenario(s: &ZblabScenario) -> HorizonScenario {
    HorizonScenario::new(s.r_g, s.r, s.r1, s.r2, s.r_prime)
}

/// Check the orderings of a horizon scenario. `violations` receives a
/// bitmask of `ZBLAB_VIOLATION_*` (0 when valid) and `variant` one of
/// `ZBLAB_VARIANT_*`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn zblab_horizon_validate(
    s: *const ZblabScenario,
    violations: *mut u32,
    variant: *mut i32,
) -> ZblabStatus {
    guard(|| {
        let v = validate_scenario(&scenario(read(s, "scenario")?))?;
        let mask = v.violations.iter().fold(0u32, |m, name| {
            m | match *name {
                n if n == R1_OUTSIDE => ZBLAB_VIOLATION_R1_OUTSIDE,
                n if n == R2_INSIDE => ZBLAB_VIOLATION_R2_INSIDE,
                n if n == R_INSIDE => ZBLAB_VIOLATION_R_INSIDE,
                n if n == ESCAPE_BEYOND_CREATION => ZBLAB_VIOLATION_ESCAPE,
                _ => ZBLAB_VIOLATION_VARIANT,
            }
        });
        let code = match v.variant {
            Some(Variant::RInsideR2) => ZBLAB_VARIANT_R_INSIDE_R2,
            Some(Variant::R2InsideR) => ZBLAB_VARIANT_R2_INSIDE_R,
            None => ZBLAB_VARIANT_NONE,
        };
        write(violations, mask, "violations")?;
        write(variant, code, "variant")
    })
}

fn format_of(code: u32) -> Result<DiagramFormat, Failure> {
    match code {
        ZBLAB_FORMAT_SVG => Ok(DiagramFormat::Svg),
        ZBLAB_FORMAT_ASCII => Ok(DiagramFormat::Ascii),
        other => Err(Failure::new(
            ZblabStatus::UnsupportedFormat,
            format!("format code {other}"),
        )),
    }
}

/// Copy `doc` plus a NUL into `buf`; `needed` always receives the full size.
unsafe fn deliver(
    doc: &str,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> Result<(), Failure> {
    let size = doc.len() + 1;
    write(needed, size, "needed")?;
    if buf.is_null() || capacity < size {
        return Err(Failure::new(
            ZblabStatus::BufferTooSmall,
            format!("diagram needs {size} bytes, buffer has {capacity}"),
        ));
    }
    std::ptr::copy_nonoverlapping(doc.as_ptr(), buf.cast::<u8>(), doc.len());
    *buf.add(doc.len()) = 0;
    Ok(())
}

/// Render the exchange diagram of a valid scenario into `buf`
/// (NUL-terminated). `needed` receives the required size including the NUL;
/// call with `capacity = 0` to query it.
///
/// # Safety
/// `buf` must have room for `capacity` bytes; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn zblab_horizon_render(
    s: *const ZblabScenario,
    format: u32,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> ZblabStatus {
    guard(|| {
        let timeline = scenario_timeline(&scenario(read(s, "scenario")?))?;
        let doc = emit_diagram(&timeline, format_of(format)?)?;
        deliver(&doc, buf, capacity, needed)
    })
}

/// Render the horizon-free exchange at positions `x, x1, x2, x_prime`.
///
/// # Safety
/// As [`zblab_horizon_render`].
#[no_mangle]
pub unsafe extern "C" fn zblab_flat_render(
    x: f64,
    x1: f64,
    x2: f64,
    x_prime: f64,
    format: u32,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> ZblabStatus {
    guard(|| {
        let doc = emit_diagram(&flat_space_analogue(x, x1, x2, x_prime), format_of(format)?)?;
        deliver(&doc, buf, capacity, needed)
    })
}
