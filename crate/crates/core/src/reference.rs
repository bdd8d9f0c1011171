//! Closed-form reference controls, error metrics and convergence fits.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::gl_ops::{max_abs_diff, Grid, TimeSeq};

const MAX_TERMS: usize = 200;

/// Two-parameter Mittag-Leffler function `E_{a,b}(z) = sum_k z^k / Gamma(a k + b)`
/// by direct summation, for `|z| <= 2`.
///
/// Terms are formed through `ln Gamma`; the series stops once a term falls
/// below `tol * |sum|` or after 200 terms.
pub fn mittag_leffler(a: f64, b: f64, z: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("Mittag-Leffler parameters must be > 0, got ({a}, {b})")));
    }
    if !(z.abs() <= 2.0) {
        return Err(Error::Domain(format!("Mittag-Leffler argument must satisfy |z| <= 2, got {z}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let mut sum = 0.0;
    for k in 0..MAX_TERMS {
        let gam = ln_gamma(a * k as f64 + b);
        let term = if k == 0 {
            (-gam).exp()
        } else if z == 0.0 {
            break;
        } else {
            z.signum().powi(k as i32) * (k as f64 * z.abs().ln() - gam).exp()
        };
        sum += term;
        if term.abs() <= tol * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

fn check_unit_time(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("reference controls are defined on [0, 1], got t = {t}")));
    }
    Ok(())
}

/// Optimal control of the scalar linear-quadratic problem for `alpha = 1`:
/// `u(t) = (cosh(s) sinh(s t) - sinh(s) cosh(s t)) / R` with `s = sqrt 2`,
/// `R = s cosh(s) - sinh(s)`.
pub fn lq_exact_control(t: f64) -> Result<f64> {
    check_unit_time(t)?;
    let s = std::f64::consts::SQRT_2;
    let r = s * s.cosh() - s.sinh();
    Ok((s.cosh() * (s * t).sinh() - s.sinh() * (s * t).cosh()) / r)
}

/// Critical control of the solved example,
/// `u(t) = -(1 - t)^(alpha + 1) E_{alpha, alpha + 2}((1 - t)^alpha)`.
pub fn solved_example_exact_control(alpha: f64, t: f64) -> Result<f64> {
    check_unit_time(t)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let s = 1.0 - t;
    if s == 0.0 {
        return Ok(0.0);
    }
    let e = mittag_leffler(alpha, alpha + 2.0, s.powf(alpha), 1e-17)?;
    Ok(-s.powf(alpha + 1.0) * e)
}

/// `max_{k=1..N} ||exact(t_k) - U_k||_inf`; index 0 is not compared.
pub fn max_control_error<F>(u: &TimeSeq, exact: F, grid: &Grid) -> Result<f64>
where
    F: Fn(f64) -> Vec<f64>,
{
    if u.n() != grid.n() {
        return Err(Error::Usage(format!("control has N = {}, grid has N = {}", u.n(), grid.n())));
    }
    let mut worst = 0.0f64;
    for k in 1..=grid.n() {
        let uk = u.try_get(k)?;
        let ek = exact(grid.t(k));
        if ek.len() != uk.len() {
            return Err(Error::Usage("exact control has the wrong dimension".into()));
        }
        worst = worst.max(max_abs_diff(&ek, uk));
    }
    Ok(worst)
}

/// Error table with fitted and pairwise convergence orders.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `(N, h, max_error)`, sorted by `N` ascending.
    pub rows: Vec<(usize, f64, f64)>,
    /// Least-squares slope of `ln(error)` against `ln(h)`.
    pub fitted_order: f64,
    /// `ln(e_i / e_{i+1}) / ln(h_i / h_{i+1})` for consecutive rows.
    pub pairwise_orders: Vec<f64>,
}

/// Fits the observed order of convergence to `(N, h, error)` rows.
pub fn convergence_order(rows: &[(usize, f64, f64)]) -> Result<ConvergenceReport> {
    if rows.len() < 3 {
        return Err(Error::Degenerate(format!("need at least 3 rows, got {}", rows.len())));
    }
    if let Some(&(n, _, e)) = rows.iter().find(|r| !(r.2 > 0.0 && r.2.is_finite())) {
        return Err(Error::Degenerate(format!("error at N = {n} is {e}; need positive finite errors")));
    }
    if rows.iter().any(|r| !(r.1 > 0.0)) {
        return Err(Error::Degenerate("step sizes must be positive".into()));
    }
    let mut rows = rows.to_vec();
    rows.sort_by_key(|r| r.0);

    let xs: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.2.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Degenerate("all step sizes are equal".into()));
    }
    let fitted_order = sxy / sxx;
    let pairwise_orders = rows
        .windows(2)
        .map(|w| (w[0].2 / w[1].2).ln() / (w[0].1 / w[1].1).ln())
        .collect();
    Ok(ConvergenceReport { rows, fitted_order, pairwise_orders })
}
