use super::current::{
    assemble_classical, assemble_current_direct, assemble_zb_longitudinal, assemble_zb_transverse,
    Ordering, TransverseReading,
};
use super::{enumerate_basis, FockBasis, FockError, ModeRegistry};
use crate::kinematics::{
    calibrated_spinors, polarization_basis_or_rest_axis, DiracSpinorSet, LatticeSpec,
    PolarizationBasis, SpinCalibration,
};
use serde::Serialize;

/// Everything the assemblies need for one lattice, in the calibrated spin
/// basis.
#[derive(Debug, Clone)]
pub struct DecompositionSetup {
    pub registry: ModeRegistry,
    pub basis: FockBasis,
    pub spinors: Vec<DiracSpinorSet>,
    pub polarizations: Vec<PolarizationBasis>,
    pub calibrations: Vec<SpinCalibration>,
}

impl DecompositionSetup {
    pub fn from_registry(registry: ModeRegistry) -> Result<Self, FockError> {
        let basis = enumerate_basis(&registry, None)?;
        let mut spinors = Vec::new();
        let mut calibrations = Vec::new();
        let mut polarizations = Vec::new();
        for m in registry.modes() {
            let (set, cal) = calibrated_spinors(&m.k, registry.mass())?;
            spinors.push(set);
            calibrations.push(cal);
            polarizations.push(polarization_basis_or_rest_axis(&m.k));
        }
        Ok(Self {
            registry,
            basis,
            spinors,
            polarizations,
            calibrations,
        })
    }

    pub fn from_lattice(spec: &LatticeSpec) -> Result<Self, FockError> {
        Self::from_registry(ModeRegistry::from_lattice(spec)?)
    }

    /// Worst per-mode mismatch between calibrated pair amplitudes and the
    /// target channel layout.
    pub fn calibration_residual(&self) -> f64 {
        self.calibrations
            .iter()
            .map(|c| c.layout_residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentResidual {
    pub reading: TransverseReading,
    pub t: f64,
    pub component: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub modes: usize,
    pub dofs: usize,
    pub dimension: usize,
    pub tolerance: f64,
    pub calibration_residual: f64,
    /// `max |V_direct - (V_classic + Z_perp + Z_par)|` for every reading
    /// tried, time and component.
    pub residuals: Vec<ComponentResidual>,
    /// Reading for which every residual is within tolerance.
    pub passed_reading: Option<TransverseReading>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.passed_reading.is_some()
    }

    pub fn worst(&self, reading: TransverseReading) -> Option<f64> {
        self.residuals
            .iter()
            .filter(|r| r.reading == reading)
            .map(|r| r.residual)
            .reduce(f64::max)
    }
}

/// Per component: `max |V_direct(t) - (V_classic + Z_perp(t) + Z_par(t))|`.
pub fn decomposition_residuals(
    reg: &ModeRegistry,
    basis: &FockBasis,
    spinors: &[DiracSpinorSet],
    pols: &[PolarizationBasis],
    reading: TransverseReading,
    t: f64,
) -> Result<[f64; 3], FockError> {
    let direct = assemble_current_direct(reg, basis, spinors, t, Ordering::Normal)?;
    let classic = assemble_classical(reg, basis, spinors)?;
    let perp = assemble_zb_transverse(reg, basis, pols, reading, t)?;
    let par = assemble_zb_longitudinal(reg, basis, pols, t)?;
    Ok(std::array::from_fn(|i| {
        let pieces = classic[i].add(&perp[i]).add(&par[i]);
        direct[i].max_abs_diff(&pieces)
    }))
}

/// Compare the direct current with the sum of its three pieces. The
/// transverse term is first taken as printed; if that fails anywhere the
/// mirrored labeling is tried as well. Both outcomes are in the report.
pub fn verify_decomposition(
    reg: &ModeRegistry,
    basis: &FockBasis,
    spinors: &[DiracSpinorSet],
    pols: &[PolarizationBasis],
    times: &[f64],
    tolerance: f64,
) -> Result<DecompositionReport, FockError> {
    let mut residuals = Vec::new();
    let mut passed_reading = None;
    for reading in [TransverseReading::AsPrinted, TransverseReading::Relabeled] {
        let mut ok = true;
        for &t in times {
            let r = decomposition_residuals(reg, basis, spinors, pols, reading, t)?;
            for (component, residual) in r.into_iter().enumerate() {
                ok &= residual <= tolerance;
                residuals.push(ComponentResidual {
                    reading,
                    t,
                    component,
                    residual,
                });
            }
        }
        if ok {
            passed_reading = Some(reading);
            break;
        }
    }
    Ok(DecompositionReport {
        modes: reg.modes().len(),
        dofs: reg.len(),
        dimension: basis.dim(),
        tolerance,
        calibration_residual: 0.0,
        residuals,
        passed_reading,
    })
}

impl DecompositionSetup {
    pub fn verify(&self, times: &[f64], tolerance: f64) -> Result<DecompositionReport, FockError> {
        let mut report = verify_decomposition(
            &self.registry,
            &self.basis,
            &self.spinors,
            &self.polarizations,
            times,
            tolerance,
        )?;
        report.calibration_residual = self.calibration_residual();
        Ok(report)
    }
}
