//! Numerical laboratory for the zitterbewegung of the free Dirac field.
//!
//! * [`kinematics`]: momentum lattice, Dirac spinors, polarization triad.
//! * [`fock`]: exact finite-mode Fock space and the current operator, both
//!   assembled directly from the field and as classical + transverse +
//!   longitudinal pieces.
//! * [`dynamics`]: first-quantized wave-packet evolution and spectral
//!   detection of the `2 omega` oscillation.
//! * [`horizon`]: the pair-exchange picture near a Schwarzschild horizon,
//!   scenario validation and diagrams.
//! * [`cli`]: the `zblab` batch driver.

pub mod cli;
pub mod dynamics;
pub mod fock;
pub mod horizon;
pub mod kinematics;
pub mod linalg;
pub mod report;
