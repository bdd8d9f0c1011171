//! Discrete fractional optimal control: problem definition, discrete cost,
//! state and shifted adjoint solves, directional derivatives, and the sweep
//! solver for the shifted discrete Pontryagin system.

mod anderson;
mod problem;
mod sweep;

pub use problem::{ControlSystem, ElResidual, OcpProblem};
pub use sweep::{stationary_control, PontryaginSolution, SweepOpts};
