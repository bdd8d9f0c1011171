//! First-order convergence of the control for the example with a known
//! Mittag-Leffler solution.

use frac_pontryagin::harness::{convergence_rows, ExampleName, ReferenceMode, RunConfig};
use frac_pontryagin::reference::convergence_order;
use frac_pontryagin::Result;

fn main() -> Result<()> {
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let mut cfg = RunConfig::new(ExampleName::Solved, alpha, 0, "unused.csv");
        cfg.n_list = vec![50, 100, 200, 400];
        let rows = convergence_rows(&cfg, ReferenceMode::Exact)?;
        let report = convergence_order(&rows)?;
        println!("alpha={alpha}");
        for (n, h, err) in &report.rows {
            println!("  N={n:<4} h={h:.2e} error={err:.3e}");
        }
        println!("  fitted order {:.3}", report.fitted_order);
    }
    Ok(())
}
