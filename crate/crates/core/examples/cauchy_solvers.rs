//! Forward and backward discrete fractional Cauchy problems for `x' = -x`.

use frac_pontryagin::frac_cauchy::left_cauchy_residual;
use frac_pontryagin::{
    solve_left_cauchy, solve_right_cauchy, CauchyRhs, FixedPointOpts, FracCalculus, FracOrder, Grid, Result,
};

fn main() -> Result<()> {
    let opts = FixedPointOpts::default();
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let calc = FracCalculus::new(FracOrder::new(alpha)?, Grid::unit(50)?);
        let rhs = CauchyRhs::new(|x: &[f64], _t| vec![-x[0]], 1.0)?;
        let fwd = solve_left_cauchy(&calc, &rhs, &[1.0], &opts)?;
        let res = left_cauchy_residual(&calc, &fwd.values, |x, t| rhs.eval(x, t))?;
        let iters: usize = fwd.steps.iter().map(|s| s.iterations).sum();

        let bwd = solve_right_cauchy(&calc, |x, _k| vec![-x[0]], 1.0, &[1.0], &opts)?;
        println!(
            "alpha={alpha:<4}  x(1)={:.6}  residual={res:.1e}  iterations={iters}  backward x(0)={:.6}",
            fwd.values.scalar(50),
            bwd.values.scalar(0),
        );
    }
    Ok(())
}
