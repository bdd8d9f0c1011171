use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frac_pontryagin::harness::{run_converge, run_noether, run_solve, ExampleName, ReferenceMode, RunConfig};
use frac_pontryagin::{Error, SweepOpts};

#[derive(Parser)]
#[command(name = "fracpont", version, about = "Discrete fractional optimal control experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one example and write k,t,u,q,p.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Measure the order of convergence against a closed-form control.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Comma-separated step counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Compare each run with itself; the fit is reported as degenerate.
        #[arg(long)]
        self_test: bool,
    },
    /// Evaluate the conserved quantity of the rotation example.
    Noether {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Replace the symmetry generator by zero.
        #[arg(long)]
        zero_generator: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    example: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_stat: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_control: f64,
    #[arg(long, default_value_t = 200)]
    max_outer: usize,
    #[arg(long, default_value_t = 1.0)]
    relax: f64,
    /// History length of the Anderson mixing; 0 gives the plain relaxed sweep.
    #[arg(long, default_value_t = 8)]
    anderson: usize,
}

impl Common {
    fn config(&self, n: usize) -> Result<RunConfig, Error> {
        let example: ExampleName = self.example.parse()?;
        let mut cfg = RunConfig::new(example, self.alpha, n, &self.out);
        cfg.a = self.a;
        cfg.b = self.b;
        cfg.sweep = SweepOpts {
            tol_stationarity: self.tol_stat,
            tol_control: self.tol_control,
            max_outer_iters: self.max_outer,
            relaxation: self.relax,
            anderson_depth: self.anderson,
            ..SweepOpts::default()
        };
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve { common, n } => {
            let (s, _) = run_solve(&common.config(n)?)?;
            println!("stationarity_residual={:e}", s.stationarity);
            println!("cost={:.16e}", s.cost);
            println!("outer_iterations={}", s.outer_iters);
        }
        Command::Converge { common, n_list, self_test } => {
            let mut cfg = common.config(0)?;
            cfg.n_list = n_list;
            let mode = if self_test { ReferenceMode::SelfTest } else { ReferenceMode::Exact };
            let rep = run_converge(&cfg, mode)?;
            for (n, h, e) in &rep.rows {
                println!("N={n} h={h:e} max_error={e:e}");
            }
            println!("fitted_order={}", rep.fitted_order);
        }
        Command::Noether { common, n, zero_generator } => {
            let s = run_noether(&common.config(n)?, zero_generator)?;
            println!("max_drift={:e}", s.max_drift);
            println!("max_abs={:e}", s.max_abs);
            println!("invariance_residual={:e}", s.invariance);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
