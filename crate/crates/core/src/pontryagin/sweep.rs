use crate::error::{Error, Result};
use crate::frac_cauchy::{right_cauchy_residual, FixedPointOpts};
use crate::gl_ops::{max_abs_diff, Convention, TimeSeq};

use super::anderson::AndersonMixer;
use super::problem::{ControlSystem, OcpProblem};

/// Options for the forward-backward sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOpts {
    /// Bound on `max_k ||dH/dv(Q_k, U_k, P_{k-1}, t_k)||`.
    pub tol_stationarity: f64,
    /// Bound on `max_k |U*_k - U_k|` where `U*` is the nodewise control update.
    pub tol_control: f64,
    pub max_outer_iters: usize,
    /// Damping of the mixing step, in `(0, 1]`.
    pub relaxation: f64,
    /// Number of past iterates used for Anderson mixing; `0` gives the
    /// plain relaxed sweep `U <- (1 - lambda) U + lambda U*`.
    pub anderson_depth: usize,
    pub inner: FixedPointOpts,
}

impl Default for SweepOpts {
    fn default() -> Self {
        Self {
            tol_stationarity: 1e-9,
            tol_control: 1e-9,
            max_outer_iters: 200,
            relaxation: 1.0,
            anderson_depth: 8,
            inner: FixedPointOpts::default(),
        }
    }
}

impl SweepOpts {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_stationarity > 0.0 && self.tol_control > 0.0) {
            return Err(Error::Domain("sweep tolerances must be > 0".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::Domain(format!("relaxation must lie in (0, 1], got {}", self.relaxation)));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::Domain("max_outer_iters must be >= 1".into()));
        }
        self.inner.validate()
    }
}

/// Converged triple of the shifted discrete Pontryagin system with diagnostics.
#[derive(Debug, Clone)]
pub struct PontryaginSolution {
    pub q: TimeSeq,
    pub u: TimeSeq,
    pub p: TimeSeq,
    pub stationarity_residual: f64,
    pub control_increment: f64,
    /// `max_k ||(cDelta_- Q)_k - f(Q_k, U_k, t_k)||_inf`.
    pub state_residual: f64,
    /// `max_k ||(cDelta_+ P)_k - dH/dx(Q_{k+1}, U_{k+1}, P_k, t_{k+1})||_inf`.
    pub adjoint_residual: f64,
    /// Number of state/adjoint sweeps performed.
    pub outer_iters: usize,
    pub cost: f64,
}

const COMPONENT_TOL: f64 = 1e-15;

/// Root of `g` assumed monotone, by bracket expansion and Illinois false position.
fn monotone_root<G: Fn(f64) -> f64>(g: G, start: f64) -> std::result::Result<f64, String> {
    let g0 = g(start);
    if !g0.is_finite() {
        return Err(format!("dH/dv not finite at v = {start}"));
    }
    if g0 == 0.0 {
        return Ok(start);
    }
    let mut step = 1e-3 * start.abs().max(1.0);
    let slope_probe = g(start + step);
    let increasing = slope_probe > g0;
    // Move against the sign of g along the increasing direction.
    let dir = if (g0 > 0.0) == increasing { -1.0 } else { 1.0 };
    let (mut lo, mut glo) = (start, g0);
    let mut hi = start;
    let mut ghi = g0;
    let mut found = false;
    for _ in 0..200 {
        hi = start + dir * step;
        ghi = g(hi);
        if !ghi.is_finite() {
            return Err(format!("dH/dv not finite at v = {hi}"));
        }
        if ghi == 0.0 {
            return Ok(hi);
        }
        if ghi.signum() != g0.signum() {
            found = true;
            break;
        }
        lo = hi;
        glo = ghi;
        step *= 2.0;
    }
    if !found {
        return Err("no sign change found; dH/dv is not monotone in this control component".into());
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let mid = (lo * ghi - hi * glo) / (ghi - glo);
        let mid = if mid.is_finite() && mid != lo && mid != hi { mid } else { 0.5 * (lo + hi) };
        let gm = g(mid);
        if gm == 0.0 || (hi - lo).abs() <= COMPONENT_TOL * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            ghi = gm;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Nodewise solve of `dH/dv(x, v, w, t) = 0` by coordinate-wise monotone root
/// finding, starting from `v0`.
pub fn stationary_control<S: ControlSystem + ?Sized>(
    system: &S,
    x: &[f64],
    w: &[f64],
    t: f64,
    v0: &[f64],
) -> std::result::Result<Vec<f64>, String> {
    let mut v = v0.to_vec();
    let m = v.len();
    for _ in 0..100 {
        for i in 0..m {
            let g = |s: f64| {
                let mut trial = v.clone();
                trial[i] = s;
                system.hamiltonian_dv(x, &trial, w, t)[i]
            };
            v[i] = monotone_root(g, v[i])?;
        }
        if m == 1 {
            break;
        }
        let grad = system.hamiltonian_dv(x, &v, w, t);
        let scale = 1.0 + v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if grad.iter().all(|g| g.abs() <= 1e-14 * scale) {
            break;
        }
    }
    Ok(v)
}

impl<S: ControlSystem> OcpProblem<S> {
    fn control_image(&self, q: &TimeSeq, p: &TimeSeq, u: &TimeSeq) -> Result<Vec<f64>> {
        let grid = self.grid();
        let m = self.control_dim();
        let mut out = Vec::with_capacity(grid.n() * m);
        for k in 1..=grid.n() {
            let (x, w, t) = (&q[k], &p[k - 1], grid.t(k));
            let v = match self.system().control_update(x, w, t) {
                Some(v) => v,
                None => stationary_control(self.system(), x, w, t, &u[k])
                    .map_err(|reason| Error::ControlUpdate { node: k, reason })?,
            };
            if v.len() != m || v.iter().any(|c| !c.is_finite()) {
                return Err(Error::ControlUpdate { node: k, reason: format!("update returned {v:?}") });
            }
            out.extend_from_slice(&v);
        }
        Ok(out)
    }

    fn unpack_control(&self, flat: &[f64]) -> TimeSeq {
        let m = self.control_dim();
        let n = self.grid().n();
        let mut u = TimeSeq::zeros(n, m);
        for k in 1..=n {
            u.set(k, &flat[(k - 1) * m..k * m]);
        }
        u.set(0, &flat[0..m]);
        u
    }

    /// Solves the shifted discrete Pontryagin system
    /// (state equation, shifted adjoint equation, shifted stationarity,
    /// `Q_0 = A`, `P_N = 0`) by a forward-backward sweep.
    ///
    /// Each outer iteration solves the state forward, the adjoint backward,
    /// updates the control nodewise from `dH/dv = 0` and mixes the result into
    /// the iterate. `U_0` is free in the system and is set to `U_1` on return.
    pub fn solve_pontryagin(&self, u_init: Option<&TimeSeq>, opts: &SweepOpts) -> Result<PontryaginSolution> {
        opts.validate()?;
        let n = self.grid().n();
        let m = self.control_dim();
        let mut x: Vec<f64> = match u_init {
            Some(u) => {
                self.check_control(u, "solve_pontryagin")?;
                (1..=n).flat_map(|k| u[k].to_vec()).collect()
            }
            None => vec![0.0; n * m],
        };
        let mut mixer = AndersonMixer::new(opts.anderson_depth, opts.relaxation);
        let mut best = f64::INFINITY;
        let mut last = (f64::INFINITY, f64::INFINITY);
        for iter in 1..=opts.max_outer_iters {
            let u = self.unpack_control(&x);
            let q = self.state_solve_with(&u, &opts.inner)?;
            let p = self.adjoint_solve_with(&u, &q, &opts.inner)?;
            let stationarity = self.stationarity_residual(&q, &u, &p)?.max_abs();
            let image = self.control_image(&q, &p, &u)?;
            let increment = max_abs_diff(&image, &x);
            last = (stationarity, increment);
            if !(stationarity.is_finite() && increment.is_finite()) {
                break;
            }
            if stationarity <= opts.tol_stationarity && increment <= opts.tol_control {
                return self.finish(q, u, p, stationarity, increment, iter);
            }
            // A blow-up of the fixed-point residual means the stored
            // secant information is misleading; start over from here.
            if increment > 1e3 * best {
                mixer.reset();
            }
            best = best.min(increment);
            x = mixer.step(&x, &image);
        }
        Err(Error::Sweep { iterations: opts.max_outer_iters, stationarity: last.0, increment: last.1 })
    }

    fn finish(
        &self,
        q: TimeSeq,
        mut u: TimeSeq,
        p: TimeSeq,
        stationarity: f64,
        increment: f64,
        outer_iters: usize,
    ) -> Result<PontryaginSolution> {
        let u1 = u[1].to_vec();
        u.set(0, &u1);
        let grid = *self.grid();
        let sys = self.system();
        let dq = self.calculus().delta_minus(&q, Convention::Caputo)?;
        let state_residual = (1..=grid.n())
            .map(|k| max_abs_diff(&dq[k], &sys.dynamics(&q[k], &u[k], grid.t(k))))
            .fold(0.0, f64::max);
        let adjoint_residual = right_cauchy_residual(self.calculus(), &p, |w, k| {
            sys.hamiltonian_dx(&q[k + 1], &u[k + 1], w, grid.t(k + 1))
        })?;
        let cost = self.cost_given_state(&u, &q);
        Ok(PontryaginSolution {
            q,
            u,
            p,
            stationarity_residual: stationarity,
            control_increment: increment,
            state_residual,
            adjoint_residual,
            outer_iters,
            cost,
        })
    }
}
