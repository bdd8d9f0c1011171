use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frac_cauchy::{solve_left_cauchy_indexed, solve_right_cauchy, FixedPointOpts};
use crate::gl_ops::{dot, norm2, Convention, FracCalculus, FracOrder, Grid, TimeSeq};

/// Lagrangian `L(x, v, t)`, constraint `f(x, v, t)` and their analytic
/// derivatives for a state in `R^d` and a control in `R^m`.
///
/// The Hamiltonian is `H(x, v, w, t) = L(x, v, t) + w . f(x, v, t)`.
pub trait ControlSystem {
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;

    fn lagrangian(&self, x: &[f64], v: &[f64], t: f64) -> f64;
    fn lagrangian_dx(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64>;
    fn lagrangian_dv(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64>;

    fn dynamics(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64>;
    /// `d x d` Jacobian of `f` in `x`.
    fn dynamics_dx(&self, x: &[f64], v: &[f64], t: f64) -> DMatrix<f64>;
    /// `d x m` Jacobian of `f` in `v`.
    fn dynamics_dv(&self, x: &[f64], v: &[f64], t: f64) -> DMatrix<f64>;

    /// Global Lipschitz constant of `f` in `x`.
    fn lipschitz(&self) -> f64;

    /// Closed-form `v` solving `dH/dv(x, v, w, t) = 0`, when one is known.
    fn control_update(&self, _x: &[f64], _w: &[f64], _t: f64) -> Option<Vec<f64>> {
        None
    }

    fn hamiltonian(&self, x: &[f64], v: &[f64], w: &[f64], t: f64) -> f64 {
        self.lagrangian(x, v, t) + dot(w, &self.dynamics(x, v, t))
    }

    fn hamiltonian_dx(&self, x: &[f64], v: &[f64], w: &[f64], t: f64) -> Vec<f64> {
        let fx = self.dynamics_dx(x, v, t);
        let wt = fx.tr_mul(&DVector::from_column_slice(w));
        self.lagrangian_dx(x, v, t).iter().zip(wt.iter()).map(|(a, b)| a + b).collect()
    }

    fn hamiltonian_dv(&self, x: &[f64], v: &[f64], w: &[f64], t: f64) -> Vec<f64> {
        let fv = self.dynamics_dv(x, v, t);
        let wt = fv.tr_mul(&DVector::from_column_slice(w));
        self.lagrangian_dv(x, v, t).iter().zip(wt.iter()).map(|(a, b)| a + b).collect()
    }

    fn hamiltonian_dw(&self, x: &[f64], v: &[f64], _w: &[f64], t: f64) -> Vec<f64> {
        self.dynamics(x, v, t)
    }
}

impl<S: ControlSystem + ?Sized> ControlSystem for &S {
    fn state_dim(&self) -> usize {
        (**self).state_dim()
    }
    fn control_dim(&self) -> usize {
        (**self).control_dim()
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], t: f64) -> f64 {
        (**self).lagrangian(x, v, t)
    }
    fn lagrangian_dx(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        (**self).lagrangian_dx(x, v, t)
    }
    fn lagrangian_dv(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        (**self).lagrangian_dv(x, v, t)
    }
    fn dynamics(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        (**self).dynamics(x, v, t)
    }
    fn dynamics_dx(&self, x: &[f64], v: &[f64], t: f64) -> DMatrix<f64> {
        (**self).dynamics_dx(x, v, t)
    }
    fn dynamics_dv(&self, x: &[f64], v: &[f64], t: f64) -> DMatrix<f64> {
        (**self).dynamics_dv(x, v, t)
    }
    fn lipschitz(&self) -> f64 {
        (**self).lipschitz()
    }
    fn control_update(&self, x: &[f64], w: &[f64], t: f64) -> Option<Vec<f64>> {
        (**self).control_update(x, w, t)
    }
}

impl<S: ControlSystem + ?Sized> ControlSystem for Box<S> {
    fn state_dim(&self) -> usize {
        (**self).state_dim()
    }
    fn control_dim(&self) -> usize {
        (**self).control_dim()
    }
    fn lagrangian(&self, x: &[f64], v: &[f64], t: f64) -> f64 {
        (**self).lagrangian(x, v, t)
    }
    fn lagrangian_dx(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        (**self).lagrangian_dx(x, v, t)
    }
    fn lagrangian_dv(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        (**self).lagrangian_dv(x, v, t)
    }
    fn dynamics(&self, x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        (**self).dynamics(x, v, t)
    }
    fn dynamics_dx(&self, x: &[f64], v: &[f64], t: f64) -> DMatrix<f64> {
        (**self).dynamics_dx(x, v, t)
    }
    fn dynamics_dv(&self, x: &[f64], v: &[f64], t: f64) -> DMatrix<f64> {
        (**self).dynamics_dv(x, v, t)
    }
    fn lipschitz(&self) -> f64 {
        (**self).lipschitz()
    }
    fn control_update(&self, x: &[f64], w: &[f64], t: f64) -> Option<Vec<f64>> {
        (**self).control_update(x, w, t)
    }
}

/// A discrete fractional optimal-control problem: a [`ControlSystem`] on a
/// grid, with fractional order and initial state.
pub struct OcpProblem<S> {
    system: S,
    calc: FracCalculus,
    initial_state: Vec<f64>,
    fixed_point: FixedPointOpts,
}

impl<S: ControlSystem> OcpProblem<S> {
    /// Checks dimensions and the step condition `2 h^alpha M < 1`.
    pub fn new(system: S, order: FracOrder, grid: Grid, initial_state: Vec<f64>) -> Result<Self> {
        let d = system.state_dim();
        if d == 0 || system.control_dim() == 0 {
            return Err(Error::Usage("state and control dimensions must be positive".into()));
        }
        if initial_state.len() != d {
            return Err(Error::Usage(format!(
                "initial state has dimension {}, system has d = {d}",
                initial_state.len()
            )));
        }
        let m = system.lipschitz();
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!("Lipschitz constant must be finite and >= 0, got {m}")));
        }
        let calc = FracCalculus::new(order, grid);
        let bound = 2.0 * calc.h_pow() * m;
        if bound >= 1.0 {
            return Err(Error::Precondition(format!(
                "step condition 2 h^alpha M < 1 fails: 2 h^alpha M = {bound} (N = {})",
                grid.n()
            )));
        }
        Ok(Self { system, calc, initial_state, fixed_point: FixedPointOpts::default() })
    }

    /// Replaces the options used by the per-node fixed-point solves.
    pub fn with_fixed_point(mut self, opts: FixedPointOpts) -> Result<Self> {
        opts.validate()?;
        self.fixed_point = opts;
        Ok(self)
    }

    pub fn system(&self) -> &S {
        &self.system
    }

    pub fn calculus(&self) -> &FracCalculus {
        &self.calc
    }

    pub fn grid(&self) -> &Grid {
        self.calc.grid()
    }

    pub fn order(&self) -> FracOrder {
        self.calc.order()
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.initial_state
    }

    pub fn fixed_point(&self) -> &FixedPointOpts {
        &self.fixed_point
    }

    pub fn state_dim(&self) -> usize {
        self.system.state_dim()
    }

    pub fn control_dim(&self) -> usize {
        self.system.control_dim()
    }

    pub(crate) fn check_control(&self, u: &TimeSeq, what: &str) -> Result<()> {
        let n = self.grid().n();
        if u.n() != n || u.dim() != self.control_dim() {
            return Err(Error::Usage(format!(
                "{what}: control sequence must have N = {n}, m = {}; got N = {}, m = {}",
                self.control_dim(),
                u.n(),
                u.dim()
            )));
        }
        let r = u.valid_range();
        if *r.start() > 1 || *r.end() < n {
            return Err(Error::Usage(format!("{what}: control must be valid on 1..={n}")));
        }
        Ok(())
    }

    pub(crate) fn check_state(&self, q: &TimeSeq, what: &str) -> Result<()> {
        if q.n() != self.grid().n() || q.dim() != self.state_dim() {
            return Err(Error::Usage(format!("{what}: state-shaped sequence has wrong shape")));
        }
        q.require_full(what)
    }

    /// Discrete state `Q^U`: `cDelta_- Q = f(Q, U, T)`, `Q_0 = A`.
    pub fn state_solve(&self, u: &TimeSeq) -> Result<TimeSeq> {
        self.state_solve_with(u, &self.fixed_point)
    }

    pub(crate) fn state_solve_with(&self, u: &TimeSeq, opts: &FixedPointOpts) -> Result<TimeSeq> {
        self.check_control(u, "state_solve")?;
        let grid = *self.grid();
        let sol = solve_left_cauchy_indexed(
            &self.calc,
            |x, k| self.system.dynamics(x, &u[k], grid.t(k)),
            self.system.lipschitz(),
            &self.initial_state,
            opts,
        )?;
        Ok(sol.values)
    }

    /// Discrete adjoint `P^U`: `cDelta_+ P_k = dH/dx(Q_{k+1}, U_{k+1}, P_k, t_{k+1})`
    /// for `k = 0..=N-1`, `P_N = 0`.
    pub fn adjoint_solve(&self, u: &TimeSeq, q: &TimeSeq) -> Result<TimeSeq> {
        self.adjoint_solve_with(u, q, &self.fixed_point)
    }

    pub(crate) fn adjoint_solve_with(&self, u: &TimeSeq, q: &TimeSeq, opts: &FixedPointOpts) -> Result<TimeSeq> {
        self.check_control(u, "adjoint_solve")?;
        self.check_state(q, "adjoint_solve")?;
        let grid = *self.grid();
        let n = grid.n();
        // Shifted data, frozen once per solve.
        let shifted: Vec<(Vec<f64>, DMatrix<f64>)> = (0..n)
            .map(|k| {
                let t = grid.t(k + 1);
                let (x, v) = (&q[k + 1], &u[k + 1]);
                (self.system.lagrangian_dx(x, v, t), self.system.dynamics_dx(x, v, t))
            })
            .collect();
        let sol = solve_right_cauchy(
            &self.calc,
            |p, k| {
                let (lx, fx) = &shifted[k];
                let wt = fx.tr_mul(&DVector::from_column_slice(p));
                lx.iter().zip(wt.iter()).map(|(a, b)| a + b).collect()
            },
            self.system.lipschitz(),
            &vec![0.0; self.state_dim()],
            opts,
        )?;
        Ok(sol.values)
    }

    /// Discrete cost `h sum_{k=1}^{N} L(Q_k, U_k, t_k)`; `U_0` is never read.
    pub fn cost(&self, u: &TimeSeq) -> Result<f64> {
        let q = self.state_solve(u)?;
        Ok(self.cost_given_state(u, &q))
    }

    pub(crate) fn cost_given_state(&self, u: &TimeSeq, q: &TimeSeq) -> f64 {
        let grid = self.grid();
        let sum: f64 = (1..=grid.n()).map(|k| self.system.lagrangian(&q[k], &u[k], grid.t(k))).sum();
        grid.h() * sum
    }

    /// Solution of the linearized state problem along `Ubar`:
    /// `cDelta_- Qbar = f_x Qbar + f_v Ubar`, `Qbar_0 = 0`.
    pub fn linearized_state(&self, u: &TimeSeq, q: &TimeSeq, ubar: &TimeSeq) -> Result<TimeSeq> {
        self.check_control(u, "linearized_state")?;
        self.check_control(ubar, "linearized_state")?;
        self.check_state(q, "linearized_state")?;
        let grid = *self.grid();
        let n = grid.n();
        let data: Vec<(DMatrix<f64>, DVector<f64>)> = (0..=n)
            .map(|k| {
                if k == 0 {
                    return (DMatrix::zeros(0, 0), DVector::zeros(0));
                }
                let t = grid.t(k);
                let fx = self.system.dynamics_dx(&q[k], &u[k], t);
                let fv = self.system.dynamics_dv(&q[k], &u[k], t);
                let forcing = fv * DVector::from_column_slice(&ubar[k]);
                (fx, forcing)
            })
            .collect();
        let sol = solve_left_cauchy_indexed(
            &self.calc,
            |y, k| {
                let (fx, forcing) = &data[k];
                (fx * DVector::from_column_slice(y) + forcing).iter().copied().collect()
            },
            self.system.lipschitz(),
            &vec![0.0; self.state_dim()],
            &self.fixed_point,
        )?;
        Ok(sol.values)
    }

    /// Directional derivative of the discrete cost at `U` along `Ubar`,
    /// evaluated through the linearized state.
    pub fn gateaux_derivative(&self, u: &TimeSeq, ubar: &TimeSeq) -> Result<f64> {
        let q = self.state_solve(u)?;
        let qbar = self.linearized_state(u, &q, ubar)?;
        let grid = self.grid();
        let sum: f64 = (1..=grid.n())
            .map(|k| {
                let t = grid.t(k);
                dot(&self.system.lagrangian_dx(&q[k], &u[k], t), &qbar[k])
                    + dot(&self.system.lagrangian_dv(&q[k], &u[k], t), &ubar[k])
            })
            .sum();
        Ok(grid.h() * sum)
    }

    /// `||dH/dv(Q_k, U_k, P_{k-1}, t_k)||` for `k = 1..=N` (scalar sequence).
    pub fn stationarity_residual(&self, q: &TimeSeq, u: &TimeSeq, p: &TimeSeq) -> Result<TimeSeq> {
        self.check_control(u, "stationarity_residual")?;
        self.check_state(q, "stationarity_residual")?;
        self.check_state(p, "stationarity_residual")?;
        let grid = self.grid();
        let n = grid.n();
        let mut out = TimeSeq::zeros(n, 1);
        for k in 1..=n {
            let g = self.system.hamiltonian_dv(&q[k], &u[k], &p[k - 1], grid.t(k));
            out.set(k, &[norm2(&g)]);
        }
        out.with_range(1..=n)
    }

    /// Residual of the discrete Euler-Lagrange form for problems with
    /// `f(x, v, t) = v`.
    ///
    /// With `D = cDelta_- Q` and `M_k = -dL/dv(Q_{k+1}, D_{k+1}, t_{k+1})`
    /// (`M_N = 0`), the residual at `k = 0..=N-1` is
    /// `||(Delta_+ M)_k - dL/dx(Q_{k+1}, D_{k+1}, t_{k+1})||`.
    pub fn euler_lagrange_residual(&self, q: &TimeSeq, u: &TimeSeq, p: &TimeSeq) -> Result<ElResidual> {
        self.check_control(u, "euler_lagrange_residual")?;
        self.check_state(q, "euler_lagrange_residual")?;
        self.check_state(p, "euler_lagrange_residual")?;
        let d = self.state_dim();
        if self.control_dim() != d {
            return Err(Error::Usage("Euler-Lagrange form needs f(x, v, t) = v with m = d".into()));
        }
        let grid = *self.grid();
        let n = grid.n();
        let eye = DMatrix::<f64>::identity(d, d);
        for k in 1..=n {
            let (x, v, t) = (&q[k], &u[k], grid.t(k));
            let f = self.system.dynamics(x, v, t);
            let fx = self.system.dynamics_dx(x, v, t);
            let fv = self.system.dynamics_dv(x, v, t);
            let identity_in_v = f.iter().zip(v).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + b.abs()))
                && fx.amax() <= 1e-12
                && (fv - &eye).amax() <= 1e-12;
            if !identity_in_v {
                return Err(Error::Usage(format!(
                    "Euler-Lagrange form needs f(x, v, t) = v; fails at node {k}"
                )));
            }
        }
        let dq = self.calc.delta_minus(q, Convention::Caputo)?;
        let mut mult = TimeSeq::zeros(n, d);
        for k in 0..n {
            let lv = self.system.lagrangian_dv(&q[k + 1], &dq[k + 1], grid.t(k + 1));
            mult.set(k, &lv.iter().map(|x| -x).collect::<Vec<_>>());
        }
        let dm = self.calc.delta_plus(&mult, Convention::RiemannLiouville)?;
        let mut residual = TimeSeq::zeros(n, 1);
        let mut adjoint_mismatch = 0.0f64;
        for k in 0..n {
            let lx = self.system.lagrangian_dx(&q[k + 1], &dq[k + 1], grid.t(k + 1));
            let r: Vec<f64> = dm[k].iter().zip(&lx).map(|(a, b)| a - b).collect();
            residual.set(k, &[norm2(&r)]);
            let diff: Vec<f64> = p[k].iter().zip(&mult[k]).map(|(a, b)| a - b).collect();
            adjoint_mismatch = adjoint_mismatch.max(norm2(&diff));
        }
        let control_mismatch = (1..=n)
            .map(|k| {
                let diff: Vec<f64> = u[k].iter().zip(&dq[k]).map(|(a, b)| a - b).collect();
                norm2(&diff)
            })
            .fold(0.0, f64::max);
        Ok(ElResidual { residual: residual.with_range(0..=n - 1)?, control_mismatch, adjoint_mismatch })
    }
}

/// Output of [`OcpProblem::euler_lagrange_residual`].
#[derive(Debug, Clone)]
pub struct ElResidual {
    /// Scalar sequence on `0..=N-1`.
    pub residual: TimeSeq,
    /// `max_{k=1..N} ||U_k - (cDelta_- Q)_k||`.
    pub control_mismatch: f64,
    /// `max_{k=0..N-1} ||P_k - M_k||`, zero along a converged solution.
    pub adjoint_mismatch: f64,
}

impl ElResidual {
    pub fn max(&self) -> f64 {
        self.residual.max_abs()
    }
}
