#![allow(dead_code)]

use frac_pontryagin::{ControlSystem, FracOrder, Grid, OcpProblem, TimeSeq};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_seq(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> TimeSeq {
    TimeSeq::from_fn(n, dim, |_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

pub fn problem<S: ControlSystem>(system: S, alpha: f64, n: usize, a0: Vec<f64>) -> OcpProblem<S> {
    OcpProblem::new(system, FracOrder::new(alpha).unwrap(), Grid::unit(n).unwrap(), a0).unwrap()
}

/// Prints a line that bypasses the test harness's output capture.
pub fn report(line: &str) {
    use std::io::Write;
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

/// `L = (x^2 + v^2) / 2 + v^4 / 4`, `f = sin(x) + v`. No closed-form control
/// update, so the sweep uses the monotone root finder.
#[derive(Debug, Clone, Copy)]
pub struct SineQuartic;

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
        DMatrix::from_element(1, 1, 1.0)
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
}

/// `L = (|x|^2 + |v|^2) / 2`, `f = x + spin J x + v` with `J` the planar
/// quarter turn. Rotations commute with `J`, so the rotation symmetry of
/// the plain linear-quadratic problem survives while the state trajectory
/// leaves the line through the initial point.
#[derive(Debug, Clone, Copy)]
pub struct SpinningLq {
    pub spin: f64,
}

impl ControlSystem for SpinningLq {
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
        vec![x[0] - self.spin * x[1] + v[0], x[1] + self.spin * x[0] + v[1]]
    }
    fn dynamics_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, -self.spin, self.spin, 1.0])
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(2, 2)
    }
    fn lipschitz(&self) -> f64 {
        1.0 + self.spin.abs()
    }
    fn control_update(&self, _x: &[f64], w: &[f64], _t: f64) -> Option<Vec<f64>> {
        Some(vec![-w[0], -w[1]])
    }
}
