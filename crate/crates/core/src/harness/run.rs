//! Experiment drivers behind the `solve`, `converge` and `noether` commands.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gl_ops::{FracOrder, Grid, TimeSeq};
use crate::noether::{conserved_quantity, generator_values, invariance_residual, Rotation2, DEFAULT_S_SAMPLES};
use crate::pontryagin::{OcpProblem, PontryaginSolution, SweepOpts};
use crate::reference::{convergence_order, lq_exact_control, max_control_error, solved_example_exact_control, ConvergenceReport};

use super::registry::ExampleName;

/// Parameters shared by the three drivers.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub example: ExampleName,
    pub alpha: f64,
    /// Number of steps for `solve` and `noether`.
    pub n: usize,
    /// Step counts for `converge`.
    pub n_list: Vec<usize>,
    pub a: f64,
    pub b: f64,
    pub sweep: SweepOpts,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(example: ExampleName, alpha: f64, n: usize, out: impl Into<PathBuf>) -> Self {
        Self {
            example,
            alpha,
            n,
            n_list: Vec::new(),
            a: 0.0,
            b: 1.0,
            sweep: SweepOpts::default(),
            out: out.into(),
        }
    }

    fn problem(&self, n: usize) -> Result<OcpProblem<Box<dyn crate::ControlSystem + Send + Sync>>> {
        let order = FracOrder::new(self.alpha)?;
        let grid = Grid::new(self.a, self.b, n)?;
        OcpProblem::new(self.example.system(), order, grid, self.example.initial_state())
    }
}

/// Solves one built-in example.
pub fn solve_example(cfg: &RunConfig, n: usize) -> Result<PontryaginSolution> {
    cfg.sweep.validate()?;
    cfg.problem(n)?.solve_pontryagin(None, &cfg.sweep)
}

pub(crate) fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?)
}

/// Writes `k,t,u_1..u_m,q_1..q_d,p_1..p_d` for `k = 0..=N`.
pub fn write_solution_csv(path: &Path, grid: &Grid, sol: &PontryaginSolution) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["k".to_string(), "t".to_string()];
    header.extend((1..=sol.u.dim()).map(|i| format!("u_{i}")));
    header.extend((1..=sol.q.dim()).map(|i| format!("q_{i}")));
    header.extend((1..=sol.p.dim()).map(|i| format!("p_{i}")));
    w.write_record(&header)?;
    for k in 0..=grid.n() {
        let mut row = vec![k.to_string(), fmt_num(grid.t(k))];
        for seq in [&sol.u, &sol.q, &sol.p] {
            row.extend(seq[k].iter().map(|&x| fmt_num(x)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Summary printed by `solve`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveSummary {
    pub stationarity: f64,
    pub cost: f64,
    pub outer_iters: usize,
}

/// Solves `cfg.example` on `cfg.n` steps and writes the solution table.
/// Nothing is written when the sweep fails.
pub fn run_solve(cfg: &RunConfig) -> Result<(SolveSummary, PontryaginSolution)> {
    let sol = solve_example(cfg, cfg.n)?;
    let grid = Grid::new(cfg.a, cfg.b, cfg.n)?;
    write_solution_csv(&cfg.out, &grid, &sol)?;
    let summary =
        SolveSummary { stationarity: sol.stationarity_residual, cost: sol.cost, outer_iters: sol.outer_iters };
    Ok((summary, sol))
}

/// Exact control of a built-in example on `[0, 1]`, where one is known.
pub fn exact_control(example: ExampleName, alpha: f64) -> Result<Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>> {
    match example {
        ExampleName::Lq if alpha == 1.0 => Ok(Box::new(|t| vec![lq_exact_control(t).unwrap_or(f64::NAN)])),
        ExampleName::Lq => Err(Error::UnsupportedReference(format!(
            "the lq example has no known exact control for alpha = {alpha} < 1"
        ))),
        ExampleName::Solved => {
            solved_example_exact_control(alpha, 0.0)?;
            Ok(Box::new(move |t| vec![solved_example_exact_control(alpha, t).unwrap_or(f64::NAN)]))
        }
        ExampleName::Zero => Ok(Box::new(|_| vec![0.0])),
        ExampleName::Rotation => {
            Err(Error::UnsupportedReference("the rotation example has no closed-form control".into()))
        }
    }
}

/// How `converge` obtains its reference control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMode {
    /// Closed-form control of the example.
    Exact,
    /// Compare each run with itself; every error is zero.
    SelfTest,
}

/// Rows `(N, h, max_error)` in ascending `N`, solving the cases in parallel.
pub fn convergence_rows(cfg: &RunConfig, mode: ReferenceMode) -> Result<Vec<(usize, f64, f64)>> {
    if cfg.n_list.len() < 3 {
        return Err(Error::Usage(format!("converge needs at least 3 values of N, got {}", cfg.n_list.len())));
    }
    let exact = match mode {
        ReferenceMode::Exact => {
            if cfg.a != 0.0 || cfg.b != 1.0 {
                return Err(Error::UnsupportedReference("reference controls are known on [0, 1] only".into()));
            }
            Some(exact_control(cfg.example, cfg.alpha)?)
        }
        ReferenceMode::SelfTest => None,
    };
    let mut ns = cfg.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            let sol = solve_example(cfg, n)?;
            let grid = Grid::new(cfg.a, cfg.b, n)?;
            let err = match &exact {
                Some(f) => max_control_error(&sol.u, f, &grid)?,
                None => max_control_error(&sol.u, |t| sol.u[grid_index(&grid, t)].to_vec(), &grid)?,
            };
            Ok((n, grid.h(), err))
        })
        .collect()
}

fn grid_index(grid: &Grid, t: f64) -> usize {
    (((t - grid.a()) / grid.h()).round() as usize).min(grid.n())
}

/// Writes `N,h,max_error,pairwise_order` and a trailing `# fitted_order=` line.
pub fn write_convergence_csv(path: &Path, rows: &[(usize, f64, f64)], fit: &Result<ConvergenceReport>) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["N", "h", "max_error", "pairwise_order"])?;
    for (i, &(n, h, e)) in rows.iter().enumerate() {
        let order = match fit {
            Ok(rep) if i > 0 => fmt_num(rep.pairwise_orders[i - 1]),
            _ => String::new(),
        };
        w.write_record([n.to_string(), fmt_num(h), fmt_num(e), order])?;
    }
    w.flush()?;
    let mut file = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    match fit {
        Ok(rep) => writeln!(file, "# fitted_order={}", fmt_num(rep.fitted_order))?,
        Err(e) => writeln!(file, "# fitted_order=degenerate ({e})")?,
    }
    Ok(())
}

/// Runs the convergence study and writes its table. A degenerate fit is
/// still written (marked in the trailing comment) and returned as an error.
pub fn run_converge(cfg: &RunConfig, mode: ReferenceMode) -> Result<ConvergenceReport> {
    let rows = convergence_rows(cfg, mode)?;
    let fit = convergence_order(&rows);
    write_convergence_csv(&cfg.out, &rows, &fit)?;
    fit
}

/// Result of the `noether` driver.
#[derive(Debug, Clone)]
pub struct NoetherSummary {
    /// Conserved quantity on `k = 0..=N`.
    pub quantity: TimeSeq,
    /// `max_k |I_k - I_0|`.
    pub max_drift: f64,
    /// `max_k |I_k|`.
    pub max_abs: f64,
    /// Invariance residual of the Hamiltonian at the computed solution.
    pub invariance: f64,
    pub solution: PontryaginSolution,
}

/// Rotation angles used by the `noether` driver: `theta_1 = theta_2 = -theta_3 = 1`.
pub const ROTATION_GROUPS: (Rotation2, Rotation2, Rotation2) =
    (Rotation2 { theta: 1.0 }, Rotation2 { theta: 1.0 }, Rotation2 { theta: -1.0 });

/// Solves the rotation example and evaluates its conserved quantity.
/// With `zero_generator` the generator is replaced by zero.
pub fn noether_summary(cfg: &RunConfig, zero_generator: bool) -> Result<NoetherSummary> {
    if cfg.example != ExampleName::Rotation {
        return Err(Error::Usage(format!(
            "noether needs an example with a known symmetry; '{}' has none (use 'rotation')",
            cfg.example
        )));
    }
    cfg.sweep.validate()?;
    let problem = cfg.problem(cfg.n)?;
    let sol = problem.solve_pontryagin(None, &cfg.sweep)?;
    let (g1, g2, g3) = ROTATION_GROUPS;
    let gen = if zero_generator { TimeSeq::zeros(cfg.n, 2) } else { generator_values(&g1, &sol.q)? };
    let quantity = conserved_quantity(problem.calculus(), &gen, &sol.p)?;
    let i0 = quantity.scalar(0);
    let max_drift = (0..=cfg.n).map(|k| (quantity.scalar(k) - i0).abs()).fold(0.0, f64::max);
    let max_abs = quantity.max_abs();
    let invariance = invariance_residual(&problem, (&g1, &g2, &g3), &sol, &DEFAULT_S_SAMPLES)?;
    Ok(NoetherSummary { quantity, max_drift, max_abs, invariance, solution: sol })
}

/// Writes `k,t,I_k` for `k = 0..=N`.
pub fn write_noether_csv(path: &Path, grid: &Grid, quantity: &TimeSeq) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["k", "t", "I_k"])?;
    for k in 0..=grid.n() {
        w.write_record([k.to_string(), fmt_num(grid.t(k)), fmt_num(quantity.scalar(k))])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs [`noether_summary`] and writes the conserved quantity.
pub fn run_noether(cfg: &RunConfig, zero_generator: bool) -> Result<NoetherSummary> {
    let summary = noether_summary(cfg, zero_generator)?;
    let grid = Grid::new(cfg.a, cfg.b, cfg.n)?;
    write_noether_csv(&cfg.out, &grid, &summary.quantity)?;
    Ok(summary)
}
