mod common;

use std::time::Instant;

use common::{problem, random_seq, report, rng, SineQuartic, ALPHAS};
use frac_pontryagin::harness::{convergence_rows, noether_summary, ExampleName, QuadraticEulerLagrange, ReferenceMode, RunConfig};
use frac_pontryagin::noether::{transfer_residual, MatrixKind, NoetherMatrices};
use frac_pontryagin::reference::convergence_order;
use frac_pontryagin::{
    solve_left_cauchy_indexed, solve_right_cauchy, FixedPointOpts, FracCalculus, FracOrder, Grid, SweepOpts, TimeSeq,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

const N_LIST: [usize; 5] = [25, 50, 100, 200, 400];

fn verdict(id: u32, pass: bool, detail: &str) {
    report(&format!("acceptance {id}: {} ({detail})", if pass { "PASS" } else { "FAIL" }));
    assert!(pass, "acceptance criterion {id} failed: {detail}");
}

fn converge_cfg(example: ExampleName, alpha: f64) -> RunConfig {
    let mut cfg = RunConfig::new(example, alpha, 0, "unused.csv");
    cfg.n_list = N_LIST.to_vec();
    cfg
}

#[test]
fn criterion_1_lq_convergence() {
    let start = Instant::now();
    let rows = convergence_rows(&converge_cfg(ExampleName::Lq, 1.0), ReferenceMode::Exact).unwrap();
    let rep = convergence_order(&rows).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = (0.8..=1.2).contains(&rep.fitted_order) && secs < 10.0;
    verdict(1, pass, &format!("fitted_order = {:.4}, runtime {secs:.2} s", rep.fitted_order));
}

#[test]
fn criterion_2_solved_example_convergence() {
    let mut orders = Vec::new();
    for alpha in [1.0, 0.75, 0.5, 0.25] {
        let rows = convergence_rows(&converge_cfg(ExampleName::Solved, alpha), ReferenceMode::Exact).unwrap();
        orders.push((alpha, convergence_order(&rows).unwrap().fitted_order));
    }
    let pass = orders.iter().all(|(_, o)| (0.8..=1.2).contains(o));
    let detail: Vec<String> = orders.iter().map(|(a, o)| format!("alpha {a}: {o:.4}")).collect();
    verdict(2, pass, &detail.join(", "));
}

#[test]
fn criterion_3_noether_conservation() {
    let mut pass = true;
    let mut detail = Vec::new();
    for alpha in [1.0, 0.75, 0.5, 0.25] {
        let cfg = RunConfig::new(ExampleName::Rotation, alpha, 100, "unused.csv");
        let s = noether_summary(&cfg, false).unwrap();
        let scale = 1.0 + s.solution.p.max_abs() * s.solution.q.max_abs();
        pass &= s.max_drift <= 1e-8 * (1.0 + s.max_abs) && s.max_abs <= 1e-6 * scale;
        detail.push(format!("alpha {alpha}: drift {:.1e}, max|I| {:.1e}", s.max_drift, s.max_abs));
    }
    verdict(3, pass, &detail.join(", "));
}

#[test]
fn criterion_4_identity_suites() {
    let mut rng = rng(4);
    let mut worst_dfibp = 0.0f64;
    let mut worst_transfer = 0.0f64;
    for n in [2usize, 5, 17, 64] {
        for alpha in ALPHAS {
            for _ in 0..100 {
                let a = rng.gen_range(-2.0..2.0);
                let b = a + rng.gen_range(0.1..3.0);
                let calc = FracCalculus::new(FracOrder::new(alpha).unwrap(), Grid::new(a, b, n).unwrap());
                let h = calc.grid().h();
                let dim = rng.gen_range(1..=3);
                let mut g1 = random_seq(&mut rng, n, dim);
                let mut g2 = random_seq(&mut rng, n, dim);
                g2.set(n, &vec![0.0; dim]);

                let scale = g1.max_abs() * g2.max_abs() * (b - a) / h;
                worst_transfer = worst_transfer.max(transfer_residual(&calc, &g1, &g2).unwrap() / scale);

                g1.set(0, &vec![0.0; dim]);
                let scale = g1.max_abs() * g2.max_abs() * (b - a) * h.powf(-alpha);
                worst_dfibp = worst_dfibp.max(calc.dfibp_residual(&g1, &g2).unwrap() / scale);
            }
        }
    }
    let pass = worst_dfibp <= 1e-10 && worst_transfer <= 1e-10;
    verdict(4, pass, &format!("relative dfibp {worst_dfibp:.1e}, relative transfer {worst_transfer:.1e}"));
}

/// Entries of `A_1..A_5` for `N = 5` as laid out in the published tables:
/// `a` = alpha_r, `b` = beta_r, `d` = beta_r - alpha_r, `.` = 0.
const GOLDEN: [[&str; 6]; 5] = [
    ["a.....", "ba....", "b.a...", "b..a..", "b...a.", "b....a"],
    ["......", ".a....", "daa...", "d.aa..", "d..a..", "d....."],
    ["......", ".a....", ".aa...", "daa...", "d.a...", "d....."],
    ["......", ".a....", ".a....", ".a....", "da....", "d....."],
    ["......", "......", "......", "......", "......", "d....."],
];

#[test]
fn criterion_5_golden_matrices() {
    // Independent coefficients from the product formula alpha_r = prod_{j<r} (j - alpha) / (j + 1).
    let alpha = 0.5;
    let coeff = |r: usize| (0..r).map(|j| (j as f64 - alpha) / (j as f64 + 1.0)).product::<f64>();
    let beta = |r: usize| (0..=r).map(coeff).sum::<f64>();
    let mats = NoetherMatrices::new(FracOrder::new(alpha).unwrap(), 5).unwrap();
    let mut worst = 0.0f64;
    let mut pattern_ok = true;
    for r in 1..=5 {
        let dense = mats.dense(MatrixKind::A, r).unwrap();
        for i in 0..=5 {
            for j in 0..=5 {
                let sym = GOLDEN[r - 1][i].as_bytes()[j];
                let expect = match sym {
                    b'a' => coeff(r),
                    b'b' => beta(r),
                    b'd' => beta(r) - coeff(r),
                    _ => 0.0,
                };
                if (sym == b'.') != (dense[(i, j)] == 0.0) {
                    pattern_ok = false;
                }
                worst = worst.max((dense[(i, j)] - expect).abs());
            }
        }
    }
    verdict(5, pattern_ok && worst <= 1e-15, &format!("pattern match {pattern_ok}, max entry gap {worst:.1e}"));
}

fn local_coeffs(alpha: f64, n: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for r in 1..=n {
        c.push(c[r - 1] * (r as f64 - 1.0 - alpha) / r as f64);
    }
    c
}

/// Block-triangular oracle for `cDelta_- Q_k = M_k Q_k + c_k`.
fn left_oracle(alpha: f64, h: f64, mats: &[DMatrix<f64>], forcing: &[DVector<f64>], q0: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = mats.len() - 1;
    let d = q0.len();
    let w = local_coeffs(alpha, n);
    let hp = h.powf(-alpha);
    let mut a = DMatrix::zeros(n * d, n * d);
    let mut rhs = DVector::zeros(n * d);
    for k in 1..=n {
        let row = (k - 1) * d;
        let diag = DMatrix::identity(d, d) * hp - &mats[k];
        a.view_mut((row, row), (d, d)).copy_from(&diag);
        for r in 1..k {
            let col = (k - r - 1) * d;
            a.view_mut((row, col), (d, d)).copy_from(&(DMatrix::identity(d, d) * (hp * w[r])));
        }
        let weight: f64 = w[..k].iter().sum();
        rhs.rows_mut(row, d).copy_from(&(&forcing[k] + q0 * (hp * weight)));
    }
    let sol = a.lu().solve(&rhs).unwrap();
    let mut out = vec![q0.clone()];
    out.extend((0..n).map(|k| sol.rows(k * d, d).into_owned()));
    out
}

/// Block-triangular oracle for `cDelta_+ P_k = M_k P_k + c_k`, `P_N = pn`.
fn right_oracle(alpha: f64, h: f64, mats: &[DMatrix<f64>], forcing: &[DVector<f64>], pn: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = mats.len() - 1;
    let d = pn.len();
    let w = local_coeffs(alpha, n);
    let hp = h.powf(-alpha);
    let mut a = DMatrix::zeros(n * d, n * d);
    let mut rhs = DVector::zeros(n * d);
    for k in 0..n {
        let row = k * d;
        let diag = DMatrix::identity(d, d) * hp - &mats[k];
        a.view_mut((row, row), (d, d)).copy_from(&diag);
        for r in 1..(n - k) {
            let col = (k + r) * d;
            a.view_mut((row, col), (d, d)).copy_from(&(DMatrix::identity(d, d) * (hp * w[r])));
        }
        let weight: f64 = w[..(n - k)].iter().sum();
        rhs.rows_mut(row, d).copy_from(&(&forcing[k] + pn * (hp * weight)));
    }
    let sol = a.lu().solve(&rhs).unwrap();
    let mut out: Vec<DVector<f64>> = (0..n).map(|k| sol.rows(k * d, d).into_owned()).collect();
    out.push(pn.clone());
    out
}

fn gap(values: &TimeSeq, oracle: &[DVector<f64>]) -> f64 {
    oracle
        .iter()
        .enumerate()
        .flat_map(|(k, o)| values[k].iter().zip(o.iter()).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_6_cauchy_oracles() {
    let mut rng = rng(6);
    let opts = FixedPointOpts::default();
    let (mut worst_left, mut worst_right, mut worst_euler) = (0.0f64, 0.0f64, 0.0f64);
    for n in [1usize, 2, 5, 17, 64] {
        for alpha in ALPHAS {
            for _ in 0..5 {
                let d = 2;
                let calc = FracCalculus::new(FracOrder::new(alpha).unwrap(), Grid::unit(n).unwrap());
                let h = calc.grid().h();
                let k_bound = 0.5 / calc.h_pow();
                let mats: Vec<DMatrix<f64>> = (0..=n)
                    .map(|_| DMatrix::from_fn(d, d, |_, _| rng.gen_range(-0.5..0.5) * k_bound))
                    .collect();
                let forcing: Vec<DVector<f64>> =
                    (0..=n).map(|_| DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0))).collect();
                let boundary = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
                let rhs = |x: &[f64], k: usize| -> Vec<f64> {
                    (&mats[k] * DVector::from_column_slice(x) + &forcing[k]).iter().copied().collect()
                };

                let left = solve_left_cauchy_indexed(&calc, rhs, k_bound, boundary.as_slice(), &opts).unwrap();
                worst_left = worst_left.max(gap(&left.values, &left_oracle(alpha, h, &mats, &forcing, &boundary)));

                let right = solve_right_cauchy(&calc, rhs, k_bound, boundary.as_slice(), &opts).unwrap();
                worst_right = worst_right.max(gap(&right.values, &right_oracle(alpha, h, &mats, &forcing, &boundary)));

                if alpha == 1.0 {
                    let tight = FixedPointOpts { tol: 1e-14, ..opts };
                    let left = solve_left_cauchy_indexed(&calc, rhs, k_bound, boundary.as_slice(), &tight).unwrap();
                    let mut euler = vec![boundary.clone()];
                    for k in 1..=n {
                        let lhs = DMatrix::identity(d, d) - &mats[k] * h;
                        let next = lhs.lu().solve(&(&euler[k - 1] + &forcing[k] * h)).unwrap();
                        euler.push(next);
                    }
                    worst_euler = worst_euler.max(gap(&left.values, &euler));
                }
            }
        }
    }
    let pass = worst_left <= 1e-9 && worst_right <= 1e-9 && worst_euler <= 1e-12;
    verdict(
        6,
        pass,
        &format!("left {worst_left:.1e}, right {worst_right:.1e}, implicit Euler {worst_euler:.1e}"),
    );
}

#[test]
fn criterion_7_variational_structure() {
    let mut rng = rng(7);
    let opts = SweepOpts::default();
    let mut worst_gateaux = 0.0f64;
    let mut worst_ratio = 0.0f64;

    let mut check = |gateaux: &dyn Fn(&TimeSeq) -> f64, n: usize, dim: usize, rng: &mut rand_chacha::ChaCha8Rng| {
        for _ in 0..20 {
            let ubar = random_seq(rng, n, dim);
            worst_gateaux = worst_gateaux.max(gateaux(&ubar).abs() / ubar.max_abs());
        }
    };
    for alpha in [1.0, 0.5] {
        let p = problem(frac_pontryagin::harness::LinearQuadratic { dim: 1 }, alpha, 50, vec![1.0]);
        let sol = p.solve_pontryagin(None, &opts).unwrap();
        check(&|ub| p.gateaux_derivative(&sol.u, ub).unwrap(), 50, 1, &mut rng);
    }
    for alpha in [0.75, 0.25] {
        let p = problem(frac_pontryagin::harness::SolvedExample { dim: 1 }, alpha, 50, vec![1.0]);
        let sol = p.solve_pontryagin(None, &opts).unwrap();
        check(&|ub| p.gateaux_derivative(&sol.u, ub).unwrap(), 50, 1, &mut rng);
    }
    for alpha in [1.0, 0.5] {
        let p = problem(frac_pontryagin::harness::LinearQuadratic { dim: 2 }, alpha, 40, vec![1.0, 2.0]);
        let sol = p.solve_pontryagin(None, &opts).unwrap();
        check(&|ub| p.gateaux_derivative(&sol.u, ub).unwrap(), 40, 2, &mut rng);
    }
    for alpha in [1.0, 0.5] {
        let p = problem(SineQuartic, alpha, 50, vec![0.8]);
        let sol = p.solve_pontryagin(None, &opts).unwrap();
        check(&|ub| p.gateaux_derivative(&sol.u, ub).unwrap(), 50, 1, &mut rng);

        let q = p.state_solve(&sol.u).unwrap();
        for _ in 0..3 {
            let ubar = random_seq(&mut rng, 50, 1);
            let qbar = p.linearized_state(&sol.u, &q, &ubar).unwrap();
            let defect = |eps: f64| {
                let pert = sol.u.lin_comb(1.0, &ubar, eps).unwrap();
                let qe = p.state_solve(&pert).unwrap();
                (0..=50).map(|k| (qe.scalar(k) - q.scalar(k) - eps * qbar.scalar(k)).abs()).fold(0.0, f64::max)
            };
            for eps in [1e-2, 1e-3] {
                worst_ratio = worst_ratio.max(defect(eps / 2.0) / defect(eps));
            }
        }
    }
    let pass = worst_gateaux <= 1e-6 && worst_ratio <= 0.3;
    verdict(
        7,
        pass,
        &format!("max |DL(U)(Ubar)| / |Ubar| = {worst_gateaux:.1e}, max defect ratio {worst_ratio:.3}"),
    );
}

#[test]
fn criterion_8_euler_lagrange() {
    let opts = SweepOpts { tol_stationarity: 1e-12, tol_control: 1e-12, ..SweepOpts::default() };
    let mut worst = 0.0f64;
    for alpha in [0.5, 1.0] {
        let p = problem(QuadraticEulerLagrange { dim: 1 }, alpha, 100, vec![1.0]);
        let sol = p.solve_pontryagin(None, &opts).unwrap();
        let el = p.euler_lagrange_residual(&sol.q, &sol.u, &sol.p).unwrap();
        worst = worst.max(el.max()).max(el.control_mismatch).max(el.adjoint_mismatch);
    }
    verdict(8, worst <= 1e-7, &format!("max residual {worst:.1e}"));
}
