//! First-quantized free Dirac wave packets.
//!
//! A packet is prepared in momentum space as a Gaussian envelope times a
//! superposition of the positive- and negative-energy eigenvectors of
//! `H(k) = alpha . k + beta m` at every grid momentum. Evolution is exact per
//! mode, `exp(-i H t) = cos(omega t) - i sin(omega t) H / omega`, so the only
//! error is floating point. The interference between the two branches
//! oscillates at `2 omega`.

mod heisenberg;
mod oracle;
mod packet;
mod spectrum;
mod trajectory;

pub use heisenberg::{evolve_state, heisenberg_expectation, HEISENBERG_MAX_DIM};
pub use oracle::{analytic_zb_oracle, ZbOracle};
pub use packet::{default_times, evolve_packet, GridSpec, PacketSpec, Spin};
pub use spectrum::{dominant_frequency, zb_spectrum, Peak, SpectrumReport, MIN_SAMPLES};
pub use trajectory::TrajectoryRecord;

use crate::kinematics::KinematicsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("packet not resolved by the grid: {0}")]
    UnresolvedPacket(String),
    #[error("packet too wide for the periodic box: {0}")]
    Aliasing(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("state dimension {dim} exceeds the limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("trajectory file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}
