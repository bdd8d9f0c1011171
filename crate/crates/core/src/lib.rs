//! Variational integrator for discrete fractional optimal-control problems.
//!
//! The crate discretizes a fractional optimal-control problem with
//! Grünwald-Letnikov operators, solves the resulting shifted discrete
//! Pontryagin system with a forward-backward sweep, and evaluates the
//! discrete Noether conserved quantity for problems with a symmetry.
//!
//! * [`gl_ops`]: coefficients, discrete left/right fractional derivatives, shifts.
//! * [`frac_cauchy`]: forward and backward discrete fractional Cauchy solvers.
//! * [`pontryagin`]: problem definition, cost, adjoint, sweep solver.
//! * [`noether`]: transfer matrices, conserved quantity, invariance checks.
//! * [`reference`]: closed-form reference controls and convergence fits.
//! * [`harness`]: built-in examples and CSV experiment drivers.

pub mod error;
pub mod frac_cauchy;
pub mod gl_ops;
pub mod noether;
pub mod reference;

pub use error::{Error, Result};
pub use frac_cauchy::{
    solve_left_cauchy, solve_left_cauchy_indexed, solve_right_cauchy, CauchyRhs, CauchySolution,
    FixedPointOpts, StepStats,
};
pub use gl_ops::{gl_coefficients, shift, Convention, FracCalculus, FracCoeffs, FracOrder, Grid, TimeSeq};
pub mod harness;
pub mod pontryagin;

pub use pontryagin::{ControlSystem, ElResidual, OcpProblem, PontryaginSolution, SweepOpts};
