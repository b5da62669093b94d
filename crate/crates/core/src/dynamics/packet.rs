use super::{DynamicsError, TrajectoryRecord};
use crate::kinematics::{dirac_hamiltonian, dirac_matrices, energy, make_spinors};
use crate::linalg::{c, mat4_apply, sandwich4, spinor_add, spinor_scale, Spinor, Vec3, C64, ZERO};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Periodic position grid with `points` samples per axis on `[-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub length: f64,
    pub dim: u8,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 512,
            length: 64.0,
            dim: 1,
        }
    }
}

impl GridSpec {
    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn momentum_step(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Axes along which the grid resolves position.
    pub fn resolved_axes(&self) -> usize {
        self.dim as usize
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        if self.dim != 1 && self.dim != 3 {
            return Err(DynamicsError::InvalidGrid(format!(
                "dimension {} (expected 1 or 3)",
                self.dim
            )));
        }
        if self.points < 8 || !self.points.is_power_of_two() {
            return Err(DynamicsError::InvalidGrid(format!(
                "{} points per axis (need a power of two >= 8)",
                self.points
            )));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(DynamicsError::InvalidGrid(format!(
                "box length {}",
                self.length
            )));
        }
        Ok(())
    }

    /// Signed integer frequency of FFT bin `b`.
    fn frequency_index(&self, b: usize) -> i64 {
        let n = self.points as i64;
        let b = b as i64;
        if b < n / 2 {
            b
        } else {
            b - n
        }
    }

    fn position(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Gaussian packet `exp(-|x - x0|^2 / 4 sigma^2) exp(i k0 x)` carrying
/// amplitude `w_plus` on the positive-energy branch and `w_minus` on the
/// negative-energy branch of every momentum component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub k0: Vec3,
    pub sigma: f64,
    pub w_plus: C64,
    pub w_minus: C64,
    pub spin: Spin,
    pub mass: f64,
    pub center: Vec3,
}

impl Default for PacketSpec {
    fn default() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            k0: [0.0; 3],
            sigma: 4.0,
            w_plus: c(h, 0.0),
            w_minus: c(h, 0.0),
            spin: Spin::Up,
            mass: 1.0,
            center: [0.0; 3],
        }
    }
}

impl PacketSpec {
    pub fn pure_positive(mut self) -> Self {
        self.w_plus = c(1.0, 0.0);
        self.w_minus = ZERO;
        self
    }

    fn validate(&self, grid: &GridSpec) -> Result<(), DynamicsError> {
        let wsum = self.w_plus.norm_sqr() + self.w_minus.norm_sqr();
        if (wsum - 1.0).abs() > 1e-12 {
            return Err(DynamicsError::InvalidPacket(format!(
                "branch weights not normalized (|w+|^2 + |w-|^2 = {wsum})"
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(DynamicsError::InvalidPacket(format!(
                "width {}",
                self.sigma
            )));
        }
        if grid.dim == 1
            && (self.k0[1] != 0.0
                || self.k0[2] != 0.0
                || self.center[1] != 0.0
                || self.center[2] != 0.0)
        {
            return Err(DynamicsError::InvalidPacket(
                "1D packets live on the x axis; y and z components must be zero".into(),
            ));
        }
        energy(&self.k0, self.mass)?;
        if self.sigma < 4.0 * grid.spacing() {
            return Err(DynamicsError::UnresolvedPacket(format!(
                "sigma {} is below 4 grid spacings ({})",
                self.sigma,
                4.0 * grid.spacing()
            )));
        }
        let scale = crate::linalg::norm3(&self.k0) + 1.0 / self.sigma;
        if grid.nyquist() <= 4.0 * scale {
            return Err(DynamicsError::UnresolvedPacket(format!(
                "Nyquist momentum {} does not exceed 4 x packet momentum scale {}",
                grid.nyquist(),
                scale
            )));
        }
        if grid.length < 15.0 * self.sigma {
            return Err(DynamicsError::Aliasing(format!(
                "box length {} is below 15 sigma ({})",
                grid.length,
                15.0 * self.sigma
            )));
        }
        Ok(())
    }
}

/// `samples` uniform times covering `periods` oscillations at `2 omega(k0)`.
pub fn default_times(
    k0: &Vec3,
    mass: f64,
    samples: usize,
    periods: f64,
) -> Result<Vec<f64>, DynamicsError> {
    let omega = energy(k0, mass)?;
    let span = periods * PI / omega;
    let dt = span / samples as f64;
    Ok((0..samples).map(|i| i as f64 * dt).collect())
}

struct MomentumGrid {
    /// Momentum of every stored point, in storage order.
    momenta: Vec<Vec3>,
    /// Spinor amplitudes at t = 0.
    amplitudes: Vec<Spinor>,
}

fn prepare(packet: &PacketSpec, grid: &GridSpec) -> Result<MomentumGrid, DynamicsError> {
    let n = grid.points;
    let dk = grid.momentum_step();
    let total = match grid.dim {
        1 => n,
        _ => n * n * n,
    };
    let mut momenta = Vec::with_capacity(total);
    let mut amplitudes = Vec::with_capacity(total);
    let s = packet.spin.index();
    for idx in 0..total {
        let k = match grid.dim {
            1 => [dk * grid.frequency_index(idx) as f64, 0.0, 0.0],
            _ => {
                let (a, b, cc) = (idx / (n * n), (idx / n) % n, idx % n);
                [
                    dk * grid.frequency_index(a) as f64,
                    dk * grid.frequency_index(b) as f64,
                    dk * grid.frequency_index(cc) as f64,
                ]
            }
        };
        let d2: f64 = (0..3).map(|i| (k[i] - packet.k0[i]).powi(2)).sum();
        let shift: f64 = (0..3).map(|i| k[i] * packet.center[i]).sum();
        let envelope = C64::from_polar((-packet.sigma * packet.sigma * d2).exp(), -shift);
        let set = make_spinors(&k, packet.mass)?;
        let branch = spinor_add(
            &spinor_scale(&set.u[s], packet.w_plus),
            &spinor_scale(&set.v[s], packet.w_minus),
        );
        momenta.push(k);
        amplitudes.push(spinor_scale(&branch, envelope));
    }
    let norm: f64 = amplitudes
        .iter()
        .map(|a| a.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt();
    for a in amplitudes.iter_mut() {
        *a = spinor_scale(a, c(1.0 / norm, 0.0));
    }
    Ok(MomentumGrid {
        momenta,
        amplitudes,
    })
}

struct PositionProbe {
    grid: GridSpec,
    fft: Arc<dyn Fft<f64>>,
    center: Vec3,
}

impl PositionProbe {
    fn new(grid: GridSpec, center: Vec3) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(grid.points);
        Self { grid, fft, center }
    }

    /// Transform one spinor component to position space in place (unitary).
    fn to_position(&self, data: &mut [C64]) {
        let n = self.grid.points;
        // phase e^{-i k L/2} from x_0 = -L/2
        let dk = self.grid.momentum_step();
        let half = 0.5 * self.grid.length;
        let phase =
            |b: usize| C64::from_polar(1.0, -dk * self.grid.frequency_index(b) as f64 * half);
        match self.grid.dim {
            1 => {
                for (b, z) in data.iter_mut().enumerate() {
                    *z *= phase(b);
                }
                self.fft.process(data);
                let s = 1.0 / (n as f64).sqrt();
                data.iter_mut().for_each(|z| *z *= s);
            }
            _ => {
                for (idx, z) in data.iter_mut().enumerate() {
                    *z *= phase(idx / (n * n)) * phase((idx / n) % n) * phase(idx % n);
                }
                let mut line = vec![ZERO; n];
                for stride in [1, n, n * n] {
                    for start in 0..n * n * n {
                        if (start / stride) % n != 0 {
                            continue;
                        }
                        for (i, l) in line.iter_mut().enumerate() {
                            *l = data[start + i * stride];
                        }
                        self.fft.process(&mut line);
                        for (i, l) in line.iter().enumerate() {
                            data[start + i * stride] = *l;
                        }
                    }
                }
                let s = 1.0 / ((n * n * n) as f64).sqrt();
                data.iter_mut().for_each(|z| *z *= s);
            }
        }
    }

    /// Center of charge, unwrapped relative to the previous center.
    fn measure(&mut self, amplitudes: &[Spinor]) -> Vec3 {
        let total = amplitudes.len();
        let mut density = vec![0.0; total];
        let mut buf = vec![ZERO; total];
        for comp in 0..4 {
            for (b, a) in buf.iter_mut().zip(amplitudes) {
                *b = a[comp];
            }
            self.to_position(&mut buf);
            for (d, z) in density.iter_mut().zip(&buf) {
                *d += z.norm_sqr();
            }
        }
        let n = self.grid.points;
        let l = self.grid.length;
        let wrap = |d: f64| d - l * (d / l).round();
        let mut out = self.center;
        let axes = if self.grid.dim == 1 { 1 } else { 3 };
        for (axis, o) in out.iter_mut().enumerate().take(axes) {
            let mut acc = 0.0;
            for (idx, rho) in density.iter().enumerate() {
                let j = match (self.grid.dim, axis) {
                    (1, _) => idx,
                    (_, 0) => idx / (n * n),
                    (_, 1) => (idx / n) % n,
                    _ => idx % n,
                };
                acc += rho * wrap(self.grid.position(j) - self.center[axis]);
            }
            *o = self.center[axis] + acc;
        }
        self.center = out;
        out
    }
}

/// Propagate exactly and record `<x>`, `<j> = <alpha>` and the norm at each
/// requested time. Times must be non-decreasing for the position unwrap.
pub fn evolve_packet(
    packet: &PacketSpec,
    grid: &GridSpec,
    times: &[f64],
) -> Result<TrajectoryRecord, DynamicsError> {
    grid.validate()?;
    packet.validate(grid)?;
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(DynamicsError::InvalidPacket(
            "sample times must be non-decreasing".into(),
        ));
    }
    let start = prepare(packet, grid)?;
    let alpha = dirac_matrices().alpha;
    let hamiltonians: Vec<_> = start
        .momenta
        .iter()
        .map(|k| dirac_hamiltonian(k, packet.mass))
        .collect();
    let omegas: Vec<f64> = start
        .momenta
        .iter()
        .map(|k| energy(k, packet.mass))
        .collect::<Result<_, _>>()?;
    let mut probe = PositionProbe::new(*grid, packet.center);

    let mut record = TrajectoryRecord::default();
    let mut current = vec![[ZERO; 4]; start.amplitudes.len()];
    for &t in times {
        for (((out, a0), h), w) in current
            .iter_mut()
            .zip(&start.amplitudes)
            .zip(&hamiltonians)
            .zip(&omegas)
        {
            let (sn, cs) = (w * t).sin_cos();
            let ha = mat4_apply(h, a0);
            for i in 0..4 {
                out[i] = a0[i] * cs - ha[i] * c(0.0, sn / w);
            }
        }
        let mut j = [0.0; 3];
        let mut norm = 0.0;
        for a in &current {
            norm += a.iter().map(|z| z.norm_sqr()).sum::<f64>();
            for (ji, al) in j.iter_mut().zip(&alpha) {
                *ji += sandwich4(a, al, a).re;
            }
        }
        let x = probe.measure(&current);
        record.push(t, x, j, norm);
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        let mut g = GridSpec::default();
        assert!(g.validate().is_ok());
        g.points = 100;
        assert!(matches!(g.validate(), Err(DynamicsError::InvalidGrid(_))));
        g.points = 4;
        assert!(g.validate().is_err());
        g = GridSpec {
            dim: 2,
            ..GridSpec::default()
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn packet_guards() {
        let g = GridSpec::default();
        let mut p = PacketSpec::default();
        assert!(p.validate(&g).is_ok());
        p.sigma = 0.3;
        assert!(matches!(
            p.validate(&g),
            Err(DynamicsError::UnresolvedPacket(_))
        ));
        p.sigma = 8.0;
        assert!(matches!(p.validate(&g), Err(DynamicsError::Aliasing(_))));
        p = PacketSpec {
            k0: [10.0, 0.0, 0.0],
            ..PacketSpec::default()
        };
        assert!(matches!(
            p.validate(&g),
            Err(DynamicsError::UnresolvedPacket(_))
        ));
        p = PacketSpec {
            w_plus: c(1.0, 0.0),
            ..PacketSpec::default()
        };
        assert!(matches!(
            p.validate(&g),
            Err(DynamicsError::InvalidPacket(_))
        ));
    }

    #[test]
    fn free_translation_of_position() {
        // pure positive branch moves at the group velocity
        let grid = GridSpec::default();
        let packet = PacketSpec {
            k0: [1.0, 0.0, 0.0],
            ..PacketSpec::default()
        }
        .pure_positive();
        let rec = evolve_packet(&packet, &grid, &[0.0, 10.0, 20.0]).unwrap();
        assert!(rec.position[0][0].abs() < 1e-10);
        let v = (rec.position[2][0] - rec.position[1][0]) / 10.0;
        assert!(
            (v - rec.current[1][0]).abs() < 1e-3,
            "{v} vs {}",
            rec.current[1][0]
        );
    }

    #[test]
    fn unwrap_crosses_the_box_edge() {
        // packet starts near the right edge and moves right through it
        let grid = GridSpec::default();
        let packet = PacketSpec {
            k0: [2.0, 0.0, 0.0],
            center: [28.0, 0.0, 0.0],
            ..PacketSpec::default()
        }
        .pure_positive();
        let times: Vec<f64> = (0..40).map(|i| i as f64 * 0.5).collect();
        let rec = evolve_packet(&packet, &grid, &times).unwrap();
        let last = rec.position.last().unwrap()[0];
        let expect = 28.0 + rec.current[0][0] * 19.5;
        assert!(last > 32.0, "unwrapped position should exceed L/2: {last}");
        assert!((last - expect).abs() < 0.05, "{last} vs {expect}");
    }
}
