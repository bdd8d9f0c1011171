//! Discrete symmetries: the transfer matrices `B_r`, `C_r`, `A_r`, the
//! discrete transfer formula and the conserved quantity of a symmetric
//! Pontryagin system.
//!
//! For sequences `G1`, `G2` with `G2_N = 0` the transfer formula reads
//!
//! ```text
//! G1_k . (Delta_+ G2)_{k-1} - (cDelta_- G1)_k . G2_{k-1} = h^(1-alpha) (Delta^1_- S)_k,
//! S = sum_{r=1}^{N} A_r (G1 . sigma^(r-1) G2),
//! ```
//!
//! where `sigma^(r-1) G2` is zero-padded past `N`. The conserved quantity
//! [`conserved_quantity`] is `S` with `G1` the generator of the state
//! symmetry and `G2 = P`; the factor `h^(1-alpha)` does not affect constancy
//! and is left out.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gl_ops::{dot, Convention, FracCalculus, FracCoeffs, FracOrder, TimeSeq};
use crate::pontryagin::{ControlSystem, OcpProblem, PontryaginSolution};

/// Which transfer matrix to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    B,
    C,
    A,
}

fn ind(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Entrywise access to the `(N+1) x (N+1)` matrices `B_r`, `C_r` and
/// `A_r = alpha_r B_r + beta_r C_r` for `r = 1..=N`.
#[derive(Debug, Clone)]
pub struct NoetherMatrices {
    coeffs: FracCoeffs,
    n: usize,
}

impl NoetherMatrices {
    pub fn new(order: FracOrder, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be >= 1".into()));
        }
        Ok(Self { coeffs: FracCoeffs::new(order, n)?, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &FracCoeffs {
        &self.coeffs
    }

    /// Entry `(i, j)` of the requested matrix with index `r`.
    pub fn entry(&self, kind: MatrixKind, r: usize, i: usize, j: usize) -> Result<f64> {
        let n = self.n;
        if r == 0 || r > n || i > n || j > n {
            return Err(Error::Usage(format!("matrix index (r, i, j) = ({r}, {i}, {j}) out of range for N = {n}")));
        }
        let b = || {
            if r == 1 {
                ind(i == j)
            } else {
                let band = i >= j && i - j < r;
                ind((1..n).contains(&i) && j >= 1 && j + r <= n && band) - ind(j == 0 && r <= i)
            }
        };
        let c = || ind(r <= i && j == 0);
        Ok(match kind {
            MatrixKind::B => b(),
            MatrixKind::C => c(),
            MatrixKind::A => self.coeffs.coeff(r) * b() + self.coeffs.partial_sum(r) * c(),
        })
    }

    /// Dense `(N+1) x (N+1)` form, meant for inspection and tests.
    pub fn dense(&self, kind: MatrixKind, r: usize) -> Result<DMatrix<f64>> {
        let size = self.n + 1;
        let mut m = DMatrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                m[(i, j)] = self.entry(kind, r, i, j)?;
            }
        }
        Ok(m)
    }
}

/// Single matrix entry; see [`NoetherMatrices::entry`].
pub fn matrix_entry(kind: MatrixKind, r: usize, i: usize, j: usize, order: FracOrder, n: usize) -> Result<f64> {
    NoetherMatrices::new(order, n)?.entry(kind, r, i, j)
}

/// `S = sum_r A_r (G1 . sigma^(r-1) G2)` in `O(N^2)` without forming the matrices.
fn transfer_sum(coeffs: &FracCoeffs, g1: &TimeSeq, g2: &TimeSeq) -> TimeSeq {
    let n = g1.n();
    let mut s = vec![0.0; n + 1];
    let mut prefix = vec![0.0; n + 2];
    for r in 1..=n {
        // g_r(j) = G1_j . G2_{j+r-1}, zero when j + r - 1 > N.
        let g = |j: usize| if j + r - 1 <= n { dot(g1.slot(j), g2.slot(j + r - 1)) } else { 0.0 };
        let (ar, br) = (coeffs.coeff(r), coeffs.partial_sum(r));
        let g0 = g(0);
        if r == 1 {
            for (i, si) in s.iter_mut().enumerate() {
                *si += ar * g(i) + if i >= 1 { br * g0 } else { 0.0 };
            }
            continue;
        }
        for j in 0..=n {
            prefix[j + 1] = prefix[j] + if j >= 1 && j + r <= n { g(j) } else { 0.0 };
        }
        for (i, si) in s.iter_mut().enumerate() {
            if (1..n).contains(&i) {
                let lo = (i + 1).saturating_sub(r).max(1);
                *si += ar * (prefix[i + 1] - prefix[lo]);
            }
            if i >= r {
                *si += (br - ar) * g0;
            }
        }
    }
    TimeSeq::from_scalars(&s)
}

fn check_pair(calc: &FracCalculus, g1: &TimeSeq, g2: &TimeSeq, what: &str) -> Result<()> {
    let n = calc.grid().n();
    if g1.dim() != g2.dim() {
        return Err(Error::Usage(format!("{what}: dimension mismatch ({} vs {})", g1.dim(), g2.dim())));
    }
    for g in [g1, g2] {
        if g.n() != n {
            return Err(Error::Usage(format!("{what}: sequence has N = {}, grid has N = {n}", g.n())));
        }
        g.require_full(what)?;
    }
    Ok(())
}

/// `h^alpha`-free left-hand side of the transfer formula divided by
/// `h^(1-alpha)`: `(G1_k . (Delta_+ G2)_{k-1} - (cDelta_- G1)_k . G2_{k-1}) / h^(1-alpha)`
/// for `k = 1..=N`.
pub fn transfer_lhs(calc: &FracCalculus, g1: &TimeSeq, g2: &TimeSeq) -> Result<TimeSeq> {
    check_pair(calc, g1, g2, "transfer_lhs")?;
    let n = calc.grid().n();
    let h = calc.grid().h();
    let scale = h.powf(1.0 - calc.order().value());
    let dp = calc.delta_plus(g2, Convention::RiemannLiouville)?;
    let dm = calc.delta_minus(g1, Convention::Caputo)?;
    let mut out = TimeSeq::zeros(n, 1);
    for k in 1..=n {
        let v = dot(g1.slot(k), &dp[k - 1]) - dot(&dm[k], g2.slot(k - 1));
        out.set(k, &[v / scale]);
    }
    out.with_range(1..=n)
}

/// Backward difference `(I_k - I_{k-1}) / h` of a scalar sequence, `k = 1..=N`.
pub fn backward_difference(seq: &TimeSeq, h: f64) -> Result<TimeSeq> {
    seq.require_full("backward_difference")?;
    let n = seq.n();
    let mut out = TimeSeq::zeros(n, seq.dim());
    for k in 1..=n {
        let d: Vec<f64> = seq.slot(k).iter().zip(seq.slot(k - 1)).map(|(a, b)| (a - b) / h).collect();
        out.set(k, &d);
    }
    out.with_range(1..=n)
}

/// Largest gap over `k = 1..=N` between the two sides of the transfer
/// formula. Requires `G2_N = 0`.
pub fn transfer_residual(calc: &FracCalculus, g1: &TimeSeq, g2: &TimeSeq) -> Result<f64> {
    check_pair(calc, g1, g2, "transfer_residual")?;
    let n = calc.grid().n();
    if g2.slot(n).iter().any(|&x| x != 0.0) {
        return Err(Error::Precondition("transfer_residual needs G2_N = 0".into()));
    }
    let lhs = transfer_lhs(calc, g1, g2)?;
    let s = transfer_sum(calc.coeffs(), g1, g2);
    let ds = backward_difference(&s, calc.grid().h())?;
    Ok((1..=n).map(|k| (lhs.scalar(k) - ds.scalar(k)).abs()).fold(0.0, f64::max))
}

/// Discrete conserved quantity `I = sum_{r=1}^{N} A_r (G . sigma^(r-1) P)`
/// on `k = 0..=N`, where `G_k` is the generator of the state symmetry at `Q_k`.
pub fn conserved_quantity(calc: &FracCalculus, g: &TimeSeq, p: &TimeSeq) -> Result<TimeSeq> {
    check_pair(calc, g, p, "conserved_quantity")?;
    Ok(transfer_sum(calc.coeffs(), g, p))
}

/// Same quantity from dense matrices, `O(N^3)`.
pub fn conserved_quantity_dense(calc: &FracCalculus, g: &TimeSeq, p: &TimeSeq) -> Result<TimeSeq> {
    check_pair(calc, g, p, "conserved_quantity_dense")?;
    let n = calc.grid().n();
    let mats = NoetherMatrices::new(calc.order(), n)?;
    let mut total = nalgebra::DVector::zeros(n + 1);
    for r in 1..=n {
        let v = nalgebra::DVector::from_fn(n + 1, |j, _| {
            if j + r - 1 <= n {
                dot(g.slot(j), p.slot(j + r - 1))
            } else {
                0.0
            }
        });
        total += mats.dense(MatrixKind::A, r)? * v;
    }
    Ok(TimeSeq::from_scalars(total.as_slice()))
}

/// A one-parameter group of diffeomorphisms `phi(s, .)` of `R^dim`.
pub trait OneParamGroup {
    fn dim(&self) -> usize;
    fn map(&self, s: f64, x: &[f64]) -> Vec<f64>;
    /// `d phi / ds (0, x)`.
    fn generator(&self, x: &[f64]) -> Vec<f64>;
}

/// Planar rotation by angle `s * theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation2 {
    pub theta: f64,
}

impl OneParamGroup for Rotation2 {
    fn dim(&self) -> usize {
        2
    }
    fn map(&self, s: f64, x: &[f64]) -> Vec<f64> {
        let (sn, cs) = (s * self.theta).sin_cos();
        vec![cs * x[0] - sn * x[1], sn * x[0] + cs * x[1]]
    }
    fn generator(&self, x: &[f64]) -> Vec<f64> {
        vec![-self.theta * x[1], self.theta * x[0]]
    }
}

/// `max |phi(s, phi(s2, x)) - phi(s + s2, x)|`.
pub fn group_law_defect<G: OneParamGroup + ?Sized>(group: &G, s: f64, s2: f64, x: &[f64]) -> f64 {
    let lhs = group.map(s, &group.map(s2, x));
    crate::gl_ops::max_abs_diff(&lhs, &group.map(s + s2, x))
}

/// `max |(phi(eps, x) - phi(-eps, x)) / (2 eps) - generator(x)|`.
pub fn generator_defect<G: OneParamGroup + ?Sized>(group: &G, x: &[f64], eps: f64) -> f64 {
    let fd: Vec<f64> = group
        .map(eps, x)
        .iter()
        .zip(group.map(-eps, x))
        .map(|(a, b)| (a - b) / (2.0 * eps))
        .collect();
    crate::gl_ops::max_abs_diff(&fd, &group.generator(x))
}

/// Generator sequence `G_k = d phi / ds (0, Q_k)` for `k = 0..=N`.
pub fn generator_values<G: OneParamGroup + ?Sized>(group: &G, q: &TimeSeq) -> Result<TimeSeq> {
    q.require_full("generator_values")?;
    if group.dim() != q.dim() {
        return Err(Error::Usage("generator_values: group and state dimensions differ".into()));
    }
    Ok(TimeSeq::from_fn(q.n(), q.dim(), |k| group.generator(q.slot(k))))
}

/// Sample points used when none are given.
pub const DEFAULT_S_SAMPLES: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

/// Largest violation, over `s` in `s_samples` and `k = 1..=N`, of
///
/// ```text
/// H(phi1(s, Q), phi2(s, U), phi3(s, sigma^-1 P), T) - phi3(s, sigma^-1 P) . cDelta_-(phi1(s, Q))
///   = H(Q, U, sigma^-1 P, T) - sigma^-1 P . cDelta_- Q
/// ```
///
/// evaluated along `solution`.
pub fn invariance_residual<S, G1, G2, G3>(
    problem: &OcpProblem<S>,
    groups: (&G1, &G2, &G3),
    solution: &PontryaginSolution,
    s_samples: &[f64],
) -> Result<f64>
where
    S: ControlSystem,
    G1: OneParamGroup + ?Sized,
    G2: OneParamGroup + ?Sized,
    G3: OneParamGroup + ?Sized,
{
    let (d, m) = (problem.state_dim(), problem.control_dim());
    if groups.0.dim() != d || groups.1.dim() != m || groups.2.dim() != d {
        return Err(Error::Usage(format!(
            "group dimensions ({}, {}, {}) do not match (d, m, d) = ({d}, {m}, {d})",
            groups.0.dim(),
            groups.1.dim(),
            groups.2.dim()
        )));
    }
    let (q, u, p) = (&solution.q, &solution.u, &solution.p);
    let grid = *problem.grid();
    let n = grid.n();
    if q.n() != n || p.n() != n || u.n() != n {
        return Err(Error::Usage("solution does not match the problem grid".into()));
    }
    let calc = problem.calculus();
    let sys = problem.system();
    let side = |s: f64| -> Result<Vec<f64>> {
        let qs = TimeSeq::from_fn(n, d, |k| groups.0.map(s, q.slot(k)));
        let dqs = calc.delta_minus(&qs, Convention::Caputo)?;
        Ok((1..=n)
            .map(|k| {
                let us = groups.1.map(s, &u[k]);
                let ws = groups.2.map(s, &p[k - 1]);
                sys.hamiltonian(&qs[k], &us, &ws, grid.t(k)) - dot(&ws, &dqs[k])
            })
            .collect())
    };
    let base = side(0.0)?;
    let mut worst = 0.0f64;
    for &s in s_samples {
        let vals = side(s)?;
        worst = worst.max(crate::gl_ops::max_abs_diff(&vals, &base));
    }
    Ok(worst)
}
