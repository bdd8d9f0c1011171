//! Grünwald-Letnikov coefficients and the discrete left/right fractional
//! derivatives on a uniform grid.
//!
//! Sequences are stored as [`TimeSeq`]: `N + 1` slots of `dim`-vectors plus the
//! inclusive index range on which the values are defined. Operators keep the
//! slot layout aligned with the node labels `k = 0..=N` and only narrow the
//! valid range, so `delta_minus` is defined on `1..=N` and `delta_plus` on
//! `0..=N-1`.

use std::ops::{Index, RangeInclusive};

use crate::error::{Error, Result};

/// Uniform partition `t_k = a + k h` of `[a, b]` into `n` subintervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::Domain(format!("grid needs a < b, got [{a}, {b}]")));
        }
        if n == 0 {
            return Err(Error::Domain("grid needs at least one subinterval".into()));
        }
        Ok(Self { a, b, n, h: (b - a) / n as f64 })
    }

    /// Grid on the unit interval.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of subintervals `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node time `t_k`; the last node is pinned to `b` exactly.
    pub fn t(&self, k: usize) -> f64 {
        debug_assert!(k <= self.n);
        if k == self.n {
            self.b
        } else {
            self.a + k as f64 * self.h
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.t(k)).collect()
    }
}

/// Fractional order `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!("fractional order must lie in (0, 1], got {alpha}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `h^alpha` for the given grid.
    pub fn h_pow(self, grid: &Grid) -> f64 {
        grid.h().powf(self.0)
    }
}

/// Grünwald-Letnikov weights `alpha_r` and their partial sums `beta_r`,
/// `r = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracCoeffs {
    order: FracOrder,
    coeffs: Vec<f64>,
    partial_sums: Vec<f64>,
}

impl FracCoeffs {
    /// Weights by the recurrence `alpha_r = alpha_{r-1} (r - 1 - alpha) / r`.
    pub fn new(order: FracOrder, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("coefficient horizon must be at least 1".into()));
        }
        let alpha = order.value();
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(1.0);
        for r in 1..=n {
            let prev = coeffs[r - 1];
            coeffs.push(prev * ((r as f64 - 1.0 - alpha) / r as f64));
        }
        let partial_sums = coeffs
            .iter()
            .scan(0.0, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        Ok(Self { order, coeffs, partial_sums })
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    /// Largest index `N` for which weights are stored.
    pub fn horizon(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, r: usize) -> f64 {
        self.coeffs[r]
    }

    pub fn partial_sum(&self, r: usize) -> f64 {
        self.partial_sums[r]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }
}

/// Free-function form of [`FracCoeffs::new`].
pub fn gl_coefficients(order: FracOrder, n: usize) -> Result<FracCoeffs> {
    FracCoeffs::new(order, n)
}

/// A sequence of `dim`-vectors indexed `k = 0..=N` with an explicit range of
/// defined indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeq {
    dim: usize,
    n: usize,
    valid: (usize, usize),
    data: Vec<f64>,
}

impl TimeSeq {
    /// Zero sequence valid on `0..=n`.
    pub fn zeros(n: usize, dim: usize) -> Self {
        assert!(dim > 0, "sequence dimension must be positive");
        Self { dim, n, valid: (0, n), data: vec![0.0; (n + 1) * dim] }
    }

    /// Constant sequence valid on `0..=n`.
    pub fn constant(n: usize, value: &[f64]) -> Self {
        let mut seq = Self::zeros(n, value.len());
        for k in 0..=n {
            seq.set(k, value);
        }
        seq
    }

    /// Builds every slot `0..=n` from `f(k)`.
    pub fn from_fn<F>(n: usize, dim: usize, mut f: F) -> Self
    where
        F: FnMut(usize) -> Vec<f64>,
    {
        let mut seq = Self::zeros(n, dim);
        for k in 0..=n {
            let v = f(k);
            assert_eq!(v.len(), dim, "from_fn: slot {k} has wrong dimension");
            seq.set(k, &v);
        }
        seq
    }

    /// Scalar sequence from `n + 1` values.
    pub fn from_scalars(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "scalar sequence needs at least one value");
        Self { dim: 1, n: values.len() - 1, valid: (0, values.len() - 1), data: values.to_vec() }
    }

    /// Sequence from one vector per slot.
    pub fn from_vecs(values: &[Vec<f64>]) -> Result<Self> {
        let dim = values.first().map(Vec::len).unwrap_or(0);
        if values.len() < 2 || dim == 0 || values.iter().any(|v| v.len() != dim) {
            return Err(Error::Usage("from_vecs needs >= 2 slots of equal positive dimension".into()));
        }
        Ok(Self::from_fn(values.len() - 1, dim, |k| values[k].clone()))
    }

    /// Same data restricted to a narrower valid range.
    pub fn with_range(mut self, range: RangeInclusive<usize>) -> Result<Self> {
        let (lo, hi) = (*range.start(), *range.end());
        if lo > hi || hi > self.n {
            return Err(Error::Usage(format!("range {lo}..={hi} outside 0..={}", self.n)));
        }
        self.valid = (lo, hi);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the last slot, `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn valid_range(&self) -> RangeInclusive<usize> {
        self.valid.0..=self.valid.1
    }

    pub fn is_valid(&self, k: usize) -> bool {
        k >= self.valid.0 && k <= self.valid.1
    }

    /// Value at `k`, or `None` outside the valid range.
    pub fn get(&self, k: usize) -> Option<&[f64]> {
        self.is_valid(k).then(|| self.slot(k))
    }

    /// Value at `k`, erroring outside the valid range.
    pub fn try_get(&self, k: usize) -> Result<&[f64]> {
        self.get(k).ok_or_else(|| {
            Error::Usage(format!("index {k} outside valid range {}..={}", self.valid.0, self.valid.1))
        })
    }

    /// First component at `k`; convenient for scalar sequences.
    pub fn scalar(&self, k: usize) -> f64 {
        self[k][0]
    }

    /// Writes slot `k`. Writing does not change the valid range.
    pub fn set(&mut self, k: usize, value: &[f64]) {
        assert!(k <= self.n, "slot {k} beyond N = {}", self.n);
        assert_eq!(value.len(), self.dim, "dimension mismatch writing slot {k}");
        let start = k * self.dim;
        self.data[start..start + self.dim].copy_from_slice(value);
    }

    pub(crate) fn slot(&self, k: usize) -> &[f64] {
        let start = k * self.dim;
        &self.data[start..start + self.dim]
    }

    pub(crate) fn slot_mut(&mut self, k: usize) -> &mut [f64] {
        let start = k * self.dim;
        &mut self.data[start..start + self.dim]
    }

    /// Max over valid indices of the Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        self.valid_range().map(|k| norm2(self.slot(k))).fold(0.0, f64::max)
    }

    /// Max over valid indices of the largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.valid_range()
            .flat_map(|k| self.slot(k).iter().map(|x| x.abs()))
            .fold(0.0, f64::max)
    }

    /// Slot-wise `c1 * self + c2 * other` over the common valid range.
    pub fn lin_comb(&self, c1: f64, other: &TimeSeq, c2: f64) -> Result<TimeSeq> {
        if self.dim != other.dim || self.n != other.n {
            return Err(Error::Usage("lin_comb: shape mismatch".into()));
        }
        let lo = self.valid.0.max(other.valid.0);
        let hi = self.valid.1.min(other.valid.1);
        if lo > hi {
            return Err(Error::Usage("lin_comb: disjoint valid ranges".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(x, y)| c1 * x + c2 * y).collect();
        Ok(TimeSeq { dim: self.dim, n: self.n, valid: (lo, hi), data })
    }

    /// Slot-wise dot product with `other`, producing a scalar sequence.
    pub fn dot(&self, other: &TimeSeq) -> Result<TimeSeq> {
        if self.dim != other.dim || self.n != other.n {
            return Err(Error::Usage("dot: shape mismatch".into()));
        }
        let lo = self.valid.0.max(other.valid.0);
        let hi = self.valid.1.min(other.valid.1);
        if lo > hi {
            return Err(Error::Usage("dot: disjoint valid ranges".into()));
        }
        let data = (0..=self.n).map(|k| dot(self.slot(k), other.slot(k))).collect();
        Ok(TimeSeq { dim: 1, n: self.n, valid: (lo, hi), data })
    }

    /// Values of the valid slots, one `Vec` per index.
    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.valid_range().map(|k| self.slot(k).to_vec()).collect()
    }

    pub(crate) fn require_full(&self, what: &str) -> Result<()> {
        if self.valid != (0, self.n) {
            return Err(Error::Usage(format!(
                "{what} must be valid on 0..={}, got {}..={}",
                self.n, self.valid.0, self.valid.1
            )));
        }
        Ok(())
    }
}

impl Index<usize> for TimeSeq {
    type Output = [f64];

    fn index(&self, k: usize) -> &[f64] {
        assert!(
            self.is_valid(k),
            "index {k} outside valid range {}..={}",
            self.valid.0,
            self.valid.1
        );
        self.slot(k)
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Whether the boundary value is subtracted before differencing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    RiemannLiouville,
    Caputo,
}

/// Discrete fractional calculus of a fixed order on a fixed grid.
#[derive(Debug, Clone)]
pub struct FracCalculus {
    grid: Grid,
    coeffs: FracCoeffs,
    h_pow: f64,
}

impl FracCalculus {
    pub fn new(order: FracOrder, grid: Grid) -> Self {
        let coeffs = FracCoeffs::new(order, grid.n()).expect("grid has n >= 1");
        Self { h_pow: order.h_pow(&grid), grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> FracOrder {
        self.coeffs.order()
    }

    pub fn coeffs(&self) -> &FracCoeffs {
        &self.coeffs
    }

    /// `h^alpha`.
    pub fn h_pow(&self) -> f64 {
        self.h_pow
    }

    fn check_input(&self, g: &TimeSeq, what: &str) -> Result<()> {
        if g.n() != self.grid.n() {
            return Err(Error::Usage(format!(
                "{what}: sequence has N = {}, grid has N = {}",
                g.n(),
                self.grid.n()
            )));
        }
        g.require_full(what)
    }

    /// Left operator: `h^-alpha sum_{r=0}^{k} alpha_r G_{k-r}` for `k = 1..=N`.
    pub fn delta_minus(&self, g: &TimeSeq, conv: Convention) -> Result<TimeSeq> {
        self.check_input(g, "delta_minus")?;
        let n = self.grid.n();
        let dim = g.dim();
        let base: Vec<f64> = match conv {
            Convention::Caputo => g.slot(0).to_vec(),
            Convention::RiemannLiouville => vec![0.0; dim],
        };
        let mut out = TimeSeq::zeros(n, dim);
        let mut acc = vec![0.0; dim];
        for k in 1..=n {
            acc.iter_mut().for_each(|a| *a = 0.0);
            for r in 0..=k {
                let w = self.coeffs.coeff(r);
                for ((a, x), b) in acc.iter_mut().zip(g.slot(k - r)).zip(&base) {
                    *a += w * (x - b);
                }
            }
            for (o, a) in out.slot_mut(k).iter_mut().zip(&acc) {
                *o = a / self.h_pow;
            }
        }
        out.with_range(1..=n)
    }

    /// Right operator: `h^-alpha sum_{r=0}^{N-k} alpha_r G_{k+r}` for `k = 0..=N-1`.
    pub fn delta_plus(&self, g: &TimeSeq, conv: Convention) -> Result<TimeSeq> {
        self.check_input(g, "delta_plus")?;
        let n = self.grid.n();
        let dim = g.dim();
        let base: Vec<f64> = match conv {
            Convention::Caputo => g.slot(n).to_vec(),
            Convention::RiemannLiouville => vec![0.0; dim],
        };
        let mut out = TimeSeq::zeros(n, dim);
        let mut acc = vec![0.0; dim];
        for k in 0..n {
            acc.iter_mut().for_each(|a| *a = 0.0);
            for r in 0..=(n - k) {
                let w = self.coeffs.coeff(r);
                for ((a, x), b) in acc.iter_mut().zip(g.slot(k + r)).zip(&base) {
                    *a += w * (x - b);
                }
            }
            for (o, a) in out.slot_mut(k).iter_mut().zip(&acc) {
                *o = a / self.h_pow;
            }
        }
        out.with_range(0..=n - 1)
    }

    /// Absolute gap between the two sides of the discrete fractional
    /// integration-by-parts identity. Requires `G1_0 = 0` and `G2_N = 0`.
    pub fn dfibp_residual(&self, g1: &TimeSeq, g2: &TimeSeq) -> Result<f64> {
        if g1.dim() != g2.dim() {
            return Err(Error::Usage("dfibp_residual: dimension mismatch".into()));
        }
        self.check_input(g1, "dfibp_residual")?;
        self.check_input(g2, "dfibp_residual")?;
        let n = self.grid.n();
        if g1.slot(0).iter().any(|&x| x != 0.0) {
            return Err(Error::Precondition("dfibp_residual needs G1_0 = 0".into()));
        }
        if g2.slot(n).iter().any(|&x| x != 0.0) {
            return Err(Error::Precondition("dfibp_residual needs G2_N = 0".into()));
        }
        let h = self.grid.h();
        let left_d = self.delta_minus(g1, Convention::Caputo)?;
        let right_d = self.delta_plus(g2, Convention::Caputo)?;
        let lhs: f64 = (1..=n).map(|k| dot(&left_d[k], g2.slot(k - 1))).sum::<f64>() * h;
        let rhs: f64 = (0..n).map(|k| dot(g1.slot(k + 1), &right_d[k])).sum::<f64>() * h;
        Ok((lhs - rhs).abs())
    }
}

/// Shift `sigma^k`: `out_j = G_{j+k}`.
///
/// Unpadded, the valid range moves with the data. Padded, the output is valid
/// on `0..=N` and slots whose source index falls outside the input's valid
/// range read as zero.
pub fn shift(g: &TimeSeq, k: isize, pad_with_zero: bool) -> Result<TimeSeq> {
    let n = g.n();
    if k.unsigned_abs() > n {
        return Err(Error::Usage(format!("shift by {k} exceeds N = {n}")));
    }
    let mut out = TimeSeq::zeros(n, g.dim());
    let source = |j: usize| -> Option<usize> {
        let s = j as isize + k;
        (s >= 0 && g.is_valid(s as usize)).then_some(s as usize)
    };
    let mut lo = usize::MAX;
    let mut hi = 0;
    for j in 0..=n {
        if let Some(s) = source(j) {
            out.set(j, g.slot(s));
            lo = lo.min(j);
            hi = hi.max(j);
        }
    }
    if pad_with_zero {
        return Ok(out);
    }
    if lo > hi {
        return Err(Error::Usage(format!("shift by {k} leaves no valid index")));
    }
    out.with_range(lo..=hi)
}
