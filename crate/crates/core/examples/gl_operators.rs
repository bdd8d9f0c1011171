//! Grünwald-Letnikov coefficients and the discrete left/right derivatives of
//! `t^2` on `[0, 1]`, with the summation-by-parts residual.

use frac_pontryagin::{gl_coefficients, Convention, FracCalculus, FracOrder, Grid, Result, TimeSeq};

fn main() -> Result<()> {
    let order = FracOrder::new(0.5)?;
    let coeffs = gl_coefficients(order, 6)?;
    println!("alpha_r: {:?}", coeffs.coeffs());
    println!("beta_r:  {:?}", coeffs.partial_sums());

    let grid = Grid::unit(10)?;
    let calc = FracCalculus::new(order, grid.clone());
    let g = TimeSeq::from_fn(10, 1, |k| vec![grid.t(k).powi(2)]);
    let left = calc.delta_minus(&g, Convention::Caputo)?;
    let right = calc.delta_plus(&g, Convention::Caputo)?;
    for k in 0..=10 {
        let fmt = |s: &TimeSeq| s.get(k).map_or("-".to_string(), |v| format!("{:+.6}", v[0]));
        println!("t={:.1}  left={:>10}  right={:>10}", grid.t(k), fmt(&left), fmt(&right));
    }

    let mut w = TimeSeq::from_fn(10, 1, |k| vec![(3.0 * grid.t(k)).sin()]);
    w.set(10, &[0.0]);
    println!("summation by parts residual: {:e}", calc.dfibp_residual(&g, &w)?);
    Ok(())
}
