//! Built-in problems with analytic derivatives.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::Error;
use crate::gl_ops::dot;
use crate::pontryagin::ControlSystem;

/// `L = (|x|^2 + |v|^2) / 2`, `f = x + v` in `R^dim`.
///
/// With `dim = 1` this is the linear-quadratic tracking example; with
/// `dim = 2` its Hamiltonian is invariant under matched rotations.
#[derive(Debug, Clone, Copy)]
pub struct LinearQuadratic {
    pub dim: usize,
}

impl ControlSystem for LinearQuadratic {
    fn state_dim(&self) -> usize {
        self.dim
    }
    fn control_dim(&self) -> usize {
        self.dim
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], _t: f64) -> f64 {
        0.5 * (dot(x, x) + dot(v, v))
    }
    fn lagrangian_dx(&self, x: &[f64], _v: &[f64], _t: f64) -> Vec<f64> {
        x.to_vec()
    }
    fn lagrangian_dv(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn dynamics(&self, x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        x.iter().zip(v).map(|(a, b)| a + b).collect()
    }
    fn dynamics_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
    fn control_update(&self, _x: &[f64], w: &[f64], _t: f64) -> Option<Vec<f64>> {
        Some(w.iter().map(|c| -c).collect())
    }
}

/// `L = (1 - t) sum_i x_i + |v|^2 / 2`, `f = x + v` in `R^dim`.
///
/// For `dim = 1` the continuous critical point is known in closed form for
/// every order (see [`crate::reference::solved_example_exact_control`]).
#[derive(Debug, Clone, Copy)]
pub struct SolvedExample {
    pub dim: usize,
}

impl ControlSystem for SolvedExample {
    fn state_dim(&self) -> usize {
        self.dim
    }
    fn control_dim(&self) -> usize {
        self.dim
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], t: f64) -> f64 {
        (1.0 - t) * x.iter().sum::<f64>() + 0.5 * dot(v, v)
    }
    fn lagrangian_dx(&self, _x: &[f64], _v: &[f64], t: f64) -> Vec<f64> {
        vec![1.0 - t; self.dim]
    }
    fn lagrangian_dv(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn dynamics(&self, x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        x.iter().zip(v).map(|(a, b)| a + b).collect()
    }
    fn dynamics_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
    fn control_update(&self, _x: &[f64], w: &[f64], _t: f64) -> Option<Vec<f64>> {
        Some(w.iter().map(|c| -c).collect())
    }
}

/// `L = v^2 / 2`, `f = 0`: the unique critical point is `U = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroExample;

impl ControlSystem for ZeroExample {
    fn state_dim(&self) -> usize {
        1
    }
    fn control_dim(&self) -> usize {
        1
    }
    fn lagrangian(&self, _x: &[f64], v: &[f64], _t: f64) -> f64 {
        0.5 * v[0] * v[0]
    }
    fn lagrangian_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> Vec<f64> {
        vec![0.0]
    }
    fn lagrangian_dv(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn dynamics(&self, _x: &[f64], _v: &[f64], _t: f64) -> Vec<f64> {
        vec![0.0]
    }
    fn dynamics_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::zeros(1, 1)
    }
    fn lipschitz(&self) -> f64 {
        0.0
    }
    fn control_update(&self, _x: &[f64], _w: &[f64], _t: f64) -> Option<Vec<f64>> {
        Some(vec![0.0])
    }
}

/// `L = (|x|^2 + |v|^2) / 2`, `f = v`: the discrete Pontryagin system reduces
/// to a discrete fractional Euler-Lagrange equation.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticEulerLagrange {
    pub dim: usize,
}

impl ControlSystem for QuadraticEulerLagrange {
    fn state_dim(&self) -> usize {
        self.dim
    }
    fn control_dim(&self) -> usize {
        self.dim
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], _t: f64) -> f64 {
        0.5 * (dot(x, x) + dot(v, v))
    }
    fn lagrangian_dx(&self, x: &[f64], _v: &[f64], _t: f64) -> Vec<f64> {
        x.to_vec()
    }
    fn lagrangian_dv(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn dynamics(&self, _x: &[f64], v: &[f64], _t: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn dynamics_dx(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::zeros(self.dim, self.dim)
    }
    fn dynamics_dv(&self, _x: &[f64], _v: &[f64], _t: f64) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }
    fn lipschitz(&self) -> f64 {
        0.0
    }
    fn control_update(&self, _x: &[f64], w: &[f64], _t: f64) -> Option<Vec<f64>> {
        Some(w.iter().map(|c| -c).collect())
    }
}

/// Names accepted by the command-line harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleName {
    /// Scalar linear-quadratic problem.
    Lq,
    /// Scalar problem with a Mittag-Leffler closed-form control.
    Solved,
    /// Two-dimensional linear-quadratic problem with rotational symmetry.
    Rotation,
    /// `L = v^2 / 2`, `f = 0`.
    Zero,
}

impl ExampleName {
    pub const ALL: [ExampleName; 4] = [Self::Lq, Self::Solved, Self::Rotation, Self::Zero];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Lq => "lq",
            Self::Solved => "solved",
            Self::Rotation => "rotation",
            Self::Zero => "zero",
        }
    }

    /// Default initial state.
    pub fn initial_state(self) -> Vec<f64> {
        match self {
            Self::Rotation => vec![1.0, 2.0],
            _ => vec![1.0],
        }
    }

    pub fn system(self) -> Box<dyn ControlSystem + Send + Sync> {
        match self {
            Self::Lq => Box::new(LinearQuadratic { dim: 1 }),
            Self::Solved => Box::new(SolvedExample { dim: 1 }),
            Self::Rotation => Box::new(LinearQuadratic { dim: 2 }),
            Self::Zero => Box::new(ZeroExample),
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown example '{s}' (expected lq, solved, rotation or zero)")))
    }
}
