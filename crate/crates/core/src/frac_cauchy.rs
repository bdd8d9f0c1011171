//! Forward and backward discrete fractional Cauchy problems.
//!
//! Both solvers march node by node. At each node the unknown satisfies a
//! fixed-point equation `x = h^alpha F(x) + history`, whose map is a
//! contraction with factor `h^alpha K` when `F` is `K`-Lipschitz. The history
//! term collects the already-computed nodes, so a full solve costs `O(N^2)`
//! plus the per-node iterations.

use crate::error::{Error, Result};
use crate::gl_ops::{max_abs_diff, Convention, FracCalculus, TimeSeq};

/// Stopping rule for the per-node fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOpts {
    /// Stop once successive iterates differ by at most `tol` (max norm).
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for FixedPointOpts {
    fn default() -> Self {
        Self { tol: 1e-12, max_iters: 100 }
    }
}

impl FixedPointOpts {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("fixed-point tol must be > 0, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::Domain("fixed-point max_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// Right-hand side `F(x, t)` of a forward problem with its Lipschitz bound in `x`.
pub struct CauchyRhs<F> {
    eval: F,
    lipschitz: f64,
}

impl<F> CauchyRhs<F>
where
    F: Fn(&[f64], f64) -> Vec<f64>,
{
    pub fn new(eval: F, lipschitz: f64) -> Result<Self> {
        if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
            return Err(Error::Domain(format!("Lipschitz bound must be finite and >= 0, got {lipschitz}")));
        }
        Ok(Self { eval, lipschitz })
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Vec<f64> {
        (self.eval)(x, t)
    }
}

/// Per-node fixed-point diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub iterations: usize,
    /// Distance between the warm start and the first iterate.
    pub initial_gap: f64,
}

#[derive(Debug, Clone)]
pub struct CauchySolution {
    pub values: TimeSeq,
    /// Indexed by node; the boundary node has zero iterations.
    pub steps: Vec<StepStats>,
}

fn check_contraction(calc: &FracCalculus, lipschitz: f64) -> Result<f64> {
    let factor = calc.h_pow() * lipschitz;
    if factor >= 1.0 {
        return Err(Error::Precondition(format!(
            "contraction needs h^alpha K < 1, got {factor} (h = {}, K = {lipschitz})",
            calc.grid().h()
        )));
    }
    Ok(factor)
}

fn iterate_node<M>(
    step: usize,
    start: &[f64],
    history: &[f64],
    h_pow: f64,
    opts: &FixedPointOpts,
    map: M,
) -> Result<(Vec<f64>, StepStats)>
where
    M: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = start.to_vec();
    let mut stats = StepStats { iterations: 0, initial_gap: 0.0 };
    loop {
        let fx = map(&x);
        if fx.len() != x.len() {
            return Err(Error::Usage(format!(
                "right-hand side returned dimension {} at node {step}, expected {}",
                fx.len(),
                x.len()
            )));
        }
        let next: Vec<f64> = fx.iter().zip(history).map(|(f, hist)| h_pow * f + hist).collect();
        let gap = max_abs_diff(&next, &x);
        stats.iterations += 1;
        if stats.iterations == 1 {
            stats.initial_gap = gap;
        }
        x = next;
        if !gap.is_finite() {
            return Err(Error::FixedPoint { step, iterations: stats.iterations, increment: gap });
        }
        if gap <= opts.tol {
            return Ok((x, stats));
        }
        if stats.iterations >= opts.max_iters {
            return Err(Error::FixedPoint { step, iterations: stats.iterations, increment: gap });
        }
    }
}

/// Solves `cDelta^alpha_- Q = F(Q, T)`, `Q_0 = initial`.
pub fn solve_left_cauchy<F>(
    calc: &FracCalculus,
    rhs: &CauchyRhs<F>,
    initial: &[f64],
    opts: &FixedPointOpts,
) -> Result<CauchySolution>
where
    F: Fn(&[f64], f64) -> Vec<f64>,
{
    let grid = *calc.grid();
    solve_left_cauchy_indexed(calc, |x, k| rhs.eval(x, grid.t(k)), rhs.lipschitz, initial, opts)
}

/// Forward solve with a right-hand side addressed by node index `k = 1..=N`.
pub fn solve_left_cauchy_indexed<G>(
    calc: &FracCalculus,
    rhs_at: G,
    lipschitz: f64,
    initial: &[f64],
    opts: &FixedPointOpts,
) -> Result<CauchySolution>
where
    G: Fn(&[f64], usize) -> Vec<f64>,
{
    opts.validate()?;
    if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
        return Err(Error::Domain(format!("Lipschitz bound must be finite and >= 0, got {lipschitz}")));
    }
    check_contraction(calc, lipschitz)?;
    let n = calc.grid().n();
    let dim = initial.len();
    if dim == 0 {
        return Err(Error::Usage("initial value must be non-empty".into()));
    }
    let coeffs = calc.coeffs();
    let h_pow = calc.h_pow();

    let mut q = TimeSeq::zeros(n, dim);
    q.set(0, initial);
    let mut steps = vec![StepStats { iterations: 0, initial_gap: 0.0 }; n + 1];
    let mut history = vec![0.0; dim];
    for k in 1..=n {
        history.copy_from_slice(initial);
        for r in 1..k {
            let w = coeffs.coeff(r);
            for ((hist, x), x0) in history.iter_mut().zip(q.slot(k - r)).zip(initial) {
                *hist -= w * (x - x0);
            }
        }
        let start = q.slot(k - 1).to_vec();
        let (x, stats) = iterate_node(k, &start, &history, h_pow, opts, |x| rhs_at(x, k))?;
        q.set(k, &x);
        steps[k] = stats;
    }
    Ok(CauchySolution { values: q, steps })
}

/// Solves `cDelta^alpha_+ P_k = G(P_k, k)` for `k = 0..=N-1`, `P_N = terminal`.
///
/// `rhs_at` receives the node index rather than a time so callers can feed
/// shifted data (values taken at `k + 1`) directly.
pub fn solve_right_cauchy<G>(
    calc: &FracCalculus,
    rhs_at: G,
    lipschitz: f64,
    terminal: &[f64],
    opts: &FixedPointOpts,
) -> Result<CauchySolution>
where
    G: Fn(&[f64], usize) -> Vec<f64>,
{
    opts.validate()?;
    if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
        return Err(Error::Domain(format!("Lipschitz bound must be finite and >= 0, got {lipschitz}")));
    }
    check_contraction(calc, lipschitz)?;
    let n = calc.grid().n();
    let dim = terminal.len();
    if dim == 0 {
        return Err(Error::Usage("terminal value must be non-empty".into()));
    }
    let coeffs = calc.coeffs();
    let h_pow = calc.h_pow();

    let mut p = TimeSeq::zeros(n, dim);
    p.set(n, terminal);
    let mut steps = vec![StepStats { iterations: 0, initial_gap: 0.0 }; n + 1];
    let mut history = vec![0.0; dim];
    for k in (0..n).rev() {
        history.copy_from_slice(terminal);
        for r in 1..(n - k) {
            let w = coeffs.coeff(r);
            for ((hist, x), xn) in history.iter_mut().zip(p.slot(k + r)).zip(terminal) {
                *hist -= w * (x - xn);
            }
        }
        let start = p.slot(k + 1).to_vec();
        let (x, stats) = iterate_node(k, &start, &history, h_pow, opts, |x| rhs_at(x, k))?;
        p.set(k, &x);
        steps[k] = stats;
    }
    Ok(CauchySolution { values: p, steps })
}

/// `max_k ||(cDelta_- Q)_k - F(Q_k, t_k)||_inf` over `k = 1..=N`.
pub fn left_cauchy_residual<F>(calc: &FracCalculus, q: &TimeSeq, rhs: F) -> Result<f64>
where
    F: Fn(&[f64], f64) -> Vec<f64>,
{
    let d = calc.delta_minus(q, Convention::Caputo)?;
    let grid = calc.grid();
    Ok((1..=grid.n())
        .map(|k| max_abs_diff(&d[k], &rhs(&q[k], grid.t(k))))
        .fold(0.0, f64::max))
}

/// `max_k ||(cDelta_+ P)_k - G(P_k, k)||_inf` over `k = 0..=N-1`.
pub fn right_cauchy_residual<G>(calc: &FracCalculus, p: &TimeSeq, rhs_at: G) -> Result<f64>
where
    G: Fn(&[f64], usize) -> Vec<f64>,
{
    let d = calc.delta_plus(p, Convention::Caputo)?;
    Ok((0..calc.grid().n())
        .map(|k| max_abs_diff(&d[k], &rhs_at(&p[k], k)))
        .fold(0.0, f64::max))
}
