use super::{DynamicsError, TrajectoryRecord};
use crate::linalg::{C64, ZERO};
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

/// Fewer samples than this are rejected.
pub const MIN_SAMPLES: usize = 64;
/// Only frequencies completing at least this many cycles over the record
/// are searched.
const MIN_CYCLES: f64 = 4.0;
const ZERO_PAD: usize = 16;
/// Secondary peaks weaker than this fraction of the dominant one are dropped
/// (Hann sidelobes sit near 0.027).
const SECONDARY_FLOOR: f64 = 0.05;
const MAX_SECONDARY: usize = 3;

/// Angular frequency and amplitude of one spectral line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub frequency: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    /// Angular frequency of the strongest line.
    pub dominant_frequency: f64,
    pub amplitude: f64,
    /// Current component (0, 1, 2) carrying the strongest line.
    pub component: usize,
    pub secondary_peaks: Vec<Peak>,
    /// RMS residual of a single-sinusoid least-squares fit, relative to the
    /// RMS of the detrended signal.
    pub fit_residual: f64,
    pub samples: usize,
}

struct LineSearch {
    peak: Peak,
    secondary: Vec<Peak>,
}

fn uniform_step(times: &[f64]) -> Result<f64, DynamicsError> {
    if times.len() < MIN_SAMPLES {
        return Err(DynamicsError::InsufficientSamples(format!(
            "{} samples (need at least {MIN_SAMPLES})",
            times.len()
        )));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(DynamicsError::InsufficientSamples(
            "samples do not span a positive time".into(),
        ));
    }
    for (i, t) in times.iter().enumerate() {
        if (t - times[0] - i as f64 * dt).abs() > 1e-9 * dt.max(1.0) * (i as f64 + 1.0) {
            return Err(DynamicsError::InsufficientSamples(
                "samples are not uniformly spaced".into(),
            ));
        }
    }
    Ok(dt)
}

fn search(signal: &[f64], dt: f64) -> Result<LineSearch, DynamicsError> {
    let n = signal.len();
    let mean = signal.iter().sum::<f64>() / n as f64;
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos())
        .collect();
    let gain: f64 = window.iter().sum();
    let m = n.next_power_of_two() * ZERO_PAD;
    let mut buf = vec![ZERO; m];
    for i in 0..n {
        buf[i] = C64::new((signal[i] - mean) * window[i], 0.0);
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let mag: Vec<f64> = buf[..=m / 2].iter().map(|z| z.norm()).collect();

    let bin_width = 2.0 * PI / (m as f64 * dt);
    let span = (n - 1) as f64 * dt;
    let lo = ((MIN_CYCLES * 2.0 * PI / span) / bin_width).ceil().max(1.0) as usize;
    let hi = m / 2 - 1;
    if lo >= hi {
        return Err(DynamicsError::InsufficientSamples(format!(
            "record of {n} samples leaves no frequency with {MIN_CYCLES} cycles below Nyquist"
        )));
    }
    let refine = |b: usize| -> Peak {
        let (a, c0, d) = (mag[b - 1], mag[b], mag[b + 1]);
        let denom = a - 2.0 * c0 + d;
        let delta = if denom != 0.0 {
            0.5 * (a - d) / denom
        } else {
            0.0
        };
        let height = c0 - 0.25 * (a - d) * delta;
        Peak {
            frequency: (b as f64 + delta) * bin_width,
            amplitude: 2.0 * height / gain,
        }
    };
    let best = (lo..=hi)
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
        .unwrap();
    let peak = refine(best);

    // local maxima outside the Hann main lobe of the dominant line
    let lobe = 2 * m / n + 1;
    let mut secondary: Vec<Peak> = (lo..=hi)
        .filter(|&b| b.abs_diff(best) > lobe && mag[b] > mag[b - 1] && mag[b] >= mag[b + 1])
        .map(refine)
        .filter(|p| p.amplitude > SECONDARY_FLOOR * peak.amplitude)
        .collect();
    secondary.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
    secondary.truncate(MAX_SECONDARY);
    Ok(LineSearch { peak, secondary })
}

/// Least-squares fit `c + a cos(w t) + b sin(w t)`; relative RMS residual.
fn fit_residual(times: &[f64], signal: &[f64], w: f64) -> f64 {
    let n = signal.len() as f64;
    let mean = signal.iter().sum::<f64>() / n;
    let t0 = times[0];
    // normal equations for the three basis functions
    let basis = |t: f64| [1.0, (w * (t - t0)).cos(), (w * (t - t0)).sin()];
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (&t, &y) in times.iter().zip(signal) {
        let f = basis(t);
        for i in 0..3 {
            aty[i] += f[i] * y;
            for j in 0..3 {
                ata[i][j] += f[i] * f[j];
            }
        }
    }
    let Some(coef) = solve3(ata, aty) else {
        return f64::NAN;
    };
    let mut res = 0.0;
    let mut tot = 0.0;
    for (&t, &y) in times.iter().zip(signal) {
        let f = basis(t);
        let model: f64 = (0..3).map(|i| coef[i] * f[i]).sum();
        res += (y - model).powi(2);
        tot += (y - mean).powi(2);
    }
    if tot == 0.0 {
        0.0
    } else {
        (res / tot).sqrt()
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for k in col..3 {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Strongest line of a uniformly sampled real signal.
pub fn dominant_frequency(times: &[f64], signal: &[f64]) -> Result<Peak, DynamicsError> {
    if times.len() != signal.len() {
        return Err(DynamicsError::DimensionMismatch(format!(
            "{} times for {} samples",
            times.len(),
            signal.len()
        )));
    }
    let dt = uniform_step(times)?;
    Ok(search(signal, dt)?.peak)
}

/// Dominant oscillation of `<j>(t)`, taken from whichever component carries
/// the strongest line.
pub fn zb_spectrum(record: &TrajectoryRecord) -> Result<SpectrumReport, DynamicsError> {
    let dt = uniform_step(&record.times)?;
    let mut best: Option<(usize, LineSearch, Vec<f64>)> = None;
    for comp in 0..3 {
        let signal: Vec<f64> = record.current.iter().map(|j| j[comp]).collect();
        let found = search(&signal, dt)?;
        if best
            .as_ref()
            .is_none_or(|b| found.peak.amplitude > b.1.peak.amplitude)
        {
            best = Some((comp, found, signal));
        }
    }
    let (component, found, signal) = best.expect("three components searched");
    Ok(SpectrumReport {
        dominant_frequency: found.peak.frequency,
        amplitude: found.peak.amplitude,
        component,
        fit_residual: fit_residual(&record.times, &signal, found.peak.frequency),
        secondary_peaks: found.secondary,
        samples: record.len(),
    })
}
