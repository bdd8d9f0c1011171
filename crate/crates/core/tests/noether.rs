mod common;

use common::{problem, random_seq, rng, SpinningLq, ALPHAS};
use frac_pontryagin::harness::{LinearQuadratic, SolvedExample, ROTATION_GROUPS};
use frac_pontryagin::noether::{
    conserved_quantity, conserved_quantity_dense, generator_defect, generator_values, invariance_residual,
    transfer_residual, Rotation2, DEFAULT_S_SAMPLES,
};
use frac_pontryagin::{Error, FracCalculus, FracOrder, Grid, SweepOpts, TimeSeq};

fn drift(i: &TimeSeq) -> f64 {
    (0..=i.n()).map(|k| (i.scalar(k) - i.scalar(0)).abs()).fold(0.0, f64::max)
}

#[test]
fn spinning_problem_conserves_a_nonzero_quantity() {
    let opts = SweepOpts { tol_stationarity: 1e-12, tol_control: 1e-12, ..SweepOpts::default() };
    let (g1, g2, g3) = ROTATION_GROUPS;
    for alpha in ALPHAS {
        let p = problem(SpinningLq { spin: 0.3 }, alpha, 80, vec![1.0, 2.0]);
        let s = p.solve_pontryagin(None, &opts).unwrap();
        assert!(invariance_residual(&p, (&g1, &g2, &g3), &s, &DEFAULT_S_SAMPLES).unwrap() <= 1e-8);
        let gen = generator_values(&g1, &s.q).unwrap();
        let i = conserved_quantity(p.calculus(), &gen, &s.p).unwrap();
        let size = i.max_abs();
        if alpha < 1.0 {
            assert!(size > 1e-3, "alpha {alpha}: quantity is trivially zero");
        } else {
            // Classical angular momentum, pinned to zero by the terminal condition.
            assert!(size <= 1e-10);
        }
        assert!(drift(&i) <= 1e-8 * (1.0 + size), "alpha {alpha}: drift {}", drift(&i));
    }
}

#[test]
fn quantity_drifts_when_the_symmetry_is_broken() {
    let (g1, g2, g3) = ROTATION_GROUPS;
    let p = problem(SolvedExample { dim: 2 }, 0.5, 60, vec![1.0, 2.0]);
    let s = p.solve_pontryagin(None, &SweepOpts::default()).unwrap();
    assert!(invariance_residual(&p, (&g1, &g2, &g3), &s, &DEFAULT_S_SAMPLES).unwrap() > 1e-3);
    let gen = generator_values(&g1, &s.q).unwrap();
    let i = conserved_quantity(p.calculus(), &gen, &s.p).unwrap();
    assert!(drift(&i) > 1e-3);
}

#[test]
fn rotation_example_is_invariant() {
    let (g1, g2, g3) = ROTATION_GROUPS;
    for alpha in ALPHAS {
        let p = problem(LinearQuadratic { dim: 2 }, alpha, 50, vec![1.0, 2.0]);
        let s = p.solve_pontryagin(None, &SweepOpts::default()).unwrap();
        let scale = 1.0 + s.q.max_abs() * (1.0 + s.p.max_abs());
        assert!(invariance_residual(&p, (&g1, &g2, &g3), &s, &DEFAULT_S_SAMPLES).unwrap() <= 1e-8 * scale);
        assert_eq!(invariance_residual(&p, (&g1, &g2, &g3), &s, &[0.0]).unwrap(), 0.0);
    }
}

#[test]
fn mismatched_state_and_control_rotations_break_invariance() {
    let groups = (&Rotation2 { theta: 1.0 }, &Rotation2 { theta: 0.3 }, &Rotation2 { theta: -1.0 });
    // The state stays on the line through A, so use a spinning solution instead.
    let sp = problem(SpinningLq { spin: 0.8 }, 0.75, 40, vec![1.0, 2.0]);
    let ss = sp.solve_pontryagin(None, &SweepOpts::default()).unwrap();
    assert!(invariance_residual(&sp, groups, &ss, &DEFAULT_S_SAMPLES).unwrap() > 1e-3);
    let wrong_dim = (&Rotation2 { theta: 1.0 }, &Rotation2 { theta: 1.0 }, &Rotation2 { theta: 1.0 });
    let p1 = problem(LinearQuadratic { dim: 1 }, 0.75, 40, vec![1.0]);
    let s1 = p1.solve_pontryagin(None, &SweepOpts::default()).unwrap();
    assert!(matches!(invariance_residual(&p1, wrong_dim, &s1, &[0.5]), Err(Error::Usage(_))));
}

#[test]
fn generator_matches_finite_difference() {
    let mut r = rng(5);
    for theta in [-1.0, 0.4, 2.0] {
        let g = Rotation2 { theta };
        let x = random_seq(&mut r, 0, 2);
        let mut last = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let d = generator_defect(&g, &x[0], eps);
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-5);
    }
}

#[test]
fn fast_quantity_matches_dense_matrices() {
    let mut r = rng(9);
    for n in [1usize, 2, 7, 33] {
        for alpha in ALPHAS {
            let c = FracCalculus::new(FracOrder::new(alpha).unwrap(), Grid::unit(n).unwrap());
            let g = random_seq(&mut r, n, 3);
            let p = random_seq(&mut r, n, 3);
            let fast = conserved_quantity(&c, &g, &p).unwrap();
            let dense = conserved_quantity_dense(&c, &g, &p).unwrap();
            for k in 0..=n {
                assert!((fast.scalar(k) - dense.scalar(k)).abs() <= 1e-12 * (1.0 + dense.scalar(k).abs()));
            }
        }
    }
}

#[test]
fn transfer_holds_for_zero_first_argument_and_checks_shapes() {
    let c = FracCalculus::new(FracOrder::new(0.3).unwrap(), Grid::unit(6).unwrap());
    let mut r = rng(2);
    let mut g2 = random_seq(&mut r, 6, 2);
    g2.set(6, &[0.0, 0.0]);
    assert_eq!(transfer_residual(&c, &TimeSeq::zeros(6, 2), &g2).unwrap(), 0.0);
    assert!(matches!(transfer_residual(&c, &TimeSeq::zeros(6, 1), &g2), Err(Error::Usage(_))));
    assert!(matches!(conserved_quantity(&c, &TimeSeq::zeros(5, 2), &g2), Err(Error::Usage(_))));
}
