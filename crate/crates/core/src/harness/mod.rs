//! Built-in example registry and CSV experiment drivers behind the `fracpont`
//! command-line tool.

pub mod registry;
pub mod run;

pub use registry::{ExampleName, LinearQuadratic, QuadraticEulerLagrange, SolvedExample, ZeroExample};
pub use run::{
    convergence_rows, exact_control, noether_summary, run_converge, run_noether, run_solve, solve_example,
    write_convergence_csv, write_noether_csv, write_solution_csv, NoetherSummary, ReferenceMode, RunConfig,
    SolveSummary, ROTATION_GROUPS,
};
