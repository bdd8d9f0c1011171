//! Linear-quadratic problem at several orders, compared with the classical
//! closed-form control at `alpha = 1`.

use frac_pontryagin::harness::LinearQuadratic;
use frac_pontryagin::reference::{lq_exact_control, max_control_error};
use frac_pontryagin::{FracOrder, Grid, OcpProblem, Result, SweepOpts};

fn main() -> Result<()> {
    let n = 200;
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let grid = Grid::unit(n)?;
        let problem = OcpProblem::new(LinearQuadratic { dim: 1 }, FracOrder::new(alpha)?, grid.clone(), vec![1.0])?;
        let sol = problem.solve_pontryagin(None, &SweepOpts::default())?;
        print!(
            "alpha={alpha:<4}  cost={:.8}  u(0+)={:+.6}  sweeps={}  stationarity={:.1e}",
            sol.cost,
            sol.u.scalar(1),
            sol.outer_iters,
            sol.stationarity_residual
        );
        if alpha == 1.0 {
            let err = max_control_error(&sol.u, |t| vec![lq_exact_control(t).unwrap()], &grid)?;
            print!("  error vs exact={err:.3e}");
        }
        println!();
    }
    Ok(())
}
