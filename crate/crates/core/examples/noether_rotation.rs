//! Conserved quantity of a rotation-invariant problem. The built-in rotation
//! example gives `I = 0`; adding a spin term gives a nonzero constant.

use frac_pontryagin::harness::{noether_summary, ExampleName, RunConfig, ROTATION_GROUPS};
use frac_pontryagin::noether::{conserved_quantity, generator_values, invariance_residual, DEFAULT_S_SAMPLES};
use frac_pontryagin::{ControlSystem, FracOrder, Grid, OcpProblem, Result, SweepOpts};
use nalgebra::DMatrix;

struct Spinning(f64);

impl ControlSystem for Spinning {
    fn state_dim(&self) -> usize {
        2
    }
    fn control_dim(&self) -> usize {
        2
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], _t: f64) -> f64 {
        0.5 * (x[0] * x[0] + x[1] * x[1] + v[0] * v[0] + v[1] * v[1])
    }
    fn lagrangian_dx(&self, x: &[f64], _v: &[f64], _t: f64) -> Vec<f64> {
        x.to_vec()
    }
    fn lagrangian_dv(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn dynamics(&self, x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        vec![x[0] - self.0 * x[1] + v[0], x[1] + self.0 * x[0] + v[1]]
    }
    fn dynamics_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, -self.0, self.0, 1.0])
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(2, 2)
    }
    fn lipschitz(&self) -> f64 {
        1.0 + self.0.abs()
    }
    fn control_update(&self, _x: &[f64], w: &[f64], _t: f64) -> Option<Vec<f64>> {
        Some(vec![-w[0], -w[1]])
    }
}

fn main() -> Result<()> {
    let (g1, g2, g3) = ROTATION_GROUPS;
    for alpha in [0.5, 0.75, 1.0] {
        let s = noether_summary(&RunConfig::new(ExampleName::Rotation, alpha, 100, "unused.csv"), false)?;
        print!("alpha={alpha:<4}  rotation: max|I|={:.1e}", s.max_abs);

        let problem = OcpProblem::new(Spinning(0.3), FracOrder::new(alpha)?, Grid::unit(100)?, vec![1.0, 2.0])?;
        let sol = problem.solve_pontryagin(None, &SweepOpts::default())?;
        let inv = invariance_residual(&problem, (&g1, &g2, &g3), &sol, &DEFAULT_S_SAMPLES)?;
        let i = conserved_quantity(problem.calculus(), &generator_values(&g1, &sol.q)?, &sol.p)?;
        let drift = (0..=100).map(|k| (i.scalar(k) - i.scalar(0)).abs()).fold(0.0, f64::max);
        println!("  spinning: I={:+.6} drift={drift:.1e} invariance={inv:.1e}", i.scalar(0));
    }
    Ok(())
}
