//! The sweep solution of `L = (x^2 + v^2)/2`, `f = v` satisfies the discrete
//! fractional Euler-Lagrange equation.

use frac_pontryagin::harness::QuadraticEulerLagrange;
use frac_pontryagin::{FracOrder, Grid, OcpProblem, Result, SweepOpts};

fn main() -> Result<()> {
    let opts = SweepOpts { tol_stationarity: 1e-12, tol_control: 1e-12, ..SweepOpts::default() };
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let problem =
            OcpProblem::new(QuadraticEulerLagrange { dim: 1 }, FracOrder::new(alpha)?, Grid::unit(100)?, vec![1.0])?;
        let sol = problem.solve_pontryagin(None, &opts)?;
        let el = problem.euler_lagrange_residual(&sol.q, &sol.u, &sol.p)?;
        println!(
            "alpha={alpha:<4}  q(1)={:.6}  EL residual={:.1e}  control mismatch={:.1e}",
            sol.q.scalar(100),
            el.max(),
            el.control_mismatch
        );
    }
    Ok(())
}
