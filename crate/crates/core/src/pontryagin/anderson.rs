//! Anderson mixing for the fixed point `U = G(U)` of the sweep map.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

/// Type-II Anderson acceleration with damping `beta`.
///
/// With `depth == 0` the update is the relaxed step `x + beta (g - x)`.
#[derive(Debug)]
pub(crate) struct AndersonMixer {
    depth: usize,
    beta: f64,
    prev: Option<(Vec<f64>, Vec<f64>)>,
    dx: VecDeque<Vec<f64>>,
    df: VecDeque<Vec<f64>>,
}

impl AndersonMixer {
    pub(crate) fn new(depth: usize, beta: f64) -> Self {
        Self { depth, beta, prev: None, dx: VecDeque::new(), df: VecDeque::new() }
    }

    /// Drops the stored history; the next step is a plain relaxed step.
    pub(crate) fn reset(&mut self) {
        self.prev = None;
        self.dx.clear();
        self.df.clear();
    }

    /// Next iterate from the current iterate `x` and its image `g = G(x)`.
    pub(crate) fn step(&mut self, x: &[f64], g: &[f64]) -> Vec<f64> {
        let f: Vec<f64> = g.iter().zip(x).map(|(a, b)| a - b).collect();
        if self.depth > 0 {
            if let Some((px, pf)) = &self.prev {
                self.dx.push_back(x.iter().zip(px).map(|(a, b)| a - b).collect());
                self.df.push_back(f.iter().zip(pf).map(|(a, b)| a - b).collect());
                if self.dx.len() > self.depth {
                    self.dx.pop_front();
                    self.df.pop_front();
                }
            }
            self.prev = Some((x.to_vec(), f.clone()));
        }

        let mut next: Vec<f64> = x.iter().zip(&f).map(|(a, b)| a + self.beta * b).collect();
        let cols = self.df.len();
        if cols == 0 {
            return next;
        }
        let rows = f.len();
        let df = DMatrix::from_fn(rows, cols, |i, j| self.df[j][i]);
        let rhs = DVector::from_column_slice(&f);
        let svd = df.svd(true, true);
        let cutoff = svd.singular_values.max() * 1e-12;
        let gamma = match svd.solve(&rhs, cutoff) {
            Ok(g) if g.iter().all(|v| v.is_finite()) => g,
            _ => return next,
        };
        for (j, gj) in gamma.iter().enumerate() {
            for ((n, dx), df) in next.iter_mut().zip(&self.dx[j]).zip(&self.df[j]) {
                *n -= gj * (dx + self.beta * df);
            }
        }
        next
    }
}
