//! A user-defined nonlinear problem without a closed-form control update:
//! `L = (x^2 + v^2)/2 + v^4/4`, `f = sin(x) + v`, `x(0) = 1`.

use frac_pontryagin::{ControlSystem, FracOrder, Grid, OcpProblem, Result, SweepOpts};
use nalgebra::DMatrix;

struct SineQuartic;

impl ControlSystem for SineQuartic {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], _t: f64) -> f64 {
        0.5 * (x[0] * x[0] + v[0] * v[0]) + 0.25 * v[0].powi(4)
    }
    fn lagrangian_dx(&self, x: &[f64], _v: &[f64], _t: f64) -> Vec<f64> {
        vec![x[0]]
    }
    fn lagrangian_dv(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        vec![v[0] + v[0].powi(3)]
    }
    fn dynamics(&self, x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        vec![x[0].sin() + v[0]]
    }
    fn dynamics_dx(&self, x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, x[0].cos())
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(1, 1)
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
}

fn main() -> Result<()> {
    let problem = OcpProblem::new(SineQuartic, FracOrder::new(0.6)?, Grid::unit(100)?, vec![1.0])?;
    let sol = problem.solve_pontryagin(None, &SweepOpts::default())?;
    println!("sweeps={}  cost={:.8}  stationarity={:.1e}", sol.outer_iters, sol.cost, sol.stationarity_residual);
    for k in (0..=100).step_by(20) {
        println!("t={:.1}  u={:+.6}  q={:+.6}  p={:+.6}", problem.grid().t(k), sol.u.scalar(k), sol.q.scalar(k), sol.p.scalar(k));
    }
    Ok(())
}
