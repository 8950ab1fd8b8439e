//! Asymptotics of the denominator `D_n`.
//!
//! For `x` strictly between nodes, `D_n(x) ≈ (-1)^iota n A(rho²)` where
//!
//! ```text
//! A(x) = Σ_{k>=0} (-1)^k (4k + 2) / ((2k + 1)² - x),     0 <= x < 1,
//! ```
//!
//! is increasing from `A(0) = π/2` to `A(1) = +∞`, and
//! `-1/2 <= A(x) - 2/(1 - x) <= (π - 4)/2`.
//!
//! `A` is evaluated as `2/(1 - x) + h(x)` with the bounded tail
//! `h(x) = Σ_{k>=1} (-1)^k (4k + 2)/((2k + 1)² - x)`. The terms of `h` are
//! moments of a positive measure on `[0, 1]`, so the Cohen–Rodriguez
//! Villegas–Zagier acceleration converges like `(3 + √8)^-m` after `m` terms.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::barycentric::denominator_unchecked;
use crate::error::{Error, Result};
use crate::grid::{ExtendedReal, UniformGrid};

/// `(π - 4)/2`, the value of `h(0)` and the upper bound of `A(x) - 2/(1 - x)`.
pub const OFFSET_AT_ZERO: f64 = (PI - 4.0) / 2.0;
/// `h(1)`, the lower bound of `A(x) - 2/(1 - x)`.
pub const OFFSET_AT_ONE: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ASeriesConfig {
    tol: f64,
    max_terms: usize,
}

impl ASeriesConfig {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if tol.is_nan() || tol < 1e-15 {
            return Err(Error::InvalidArgument(format!("series tolerance {tol} is below 1e-15")));
        }
        if max_terms < 8 {
            return Err(Error::InvalidArgument(format!("max_terms = {max_terms} is below 8")));
        }
        Ok(Self { tol, max_terms })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Terms needed so that the acceleration error `2 a_0 / (3 + √8)^m` is
    /// below the tolerance; `a_0 <= 3/4` for the tail of `A`.
    fn terms(&self) -> usize {
        let rate = (3.0 + 8f64.sqrt()).ln();
        let m = ((2.0 * 0.75 / self.tol).ln() / rate).ceil() as usize;
        m.clamp(1, self.max_terms)
    }
}

impl Default for ASeriesConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 64,
        }
    }
}

/// `Σ_{k>=0} (-1)^k a_k` for a totally monotone sequence `a_k`, using
/// algorithm 1 of Cohen, Rodriguez Villegas and Zagier with `m` terms.
fn accelerated_alternating_sum(m: usize, a: impl Fn(usize) -> f64) -> f64 {
    let mf = m as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(mf);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..m {
        let kf = k as f64;
        c = b - c;
        s += c * a(k);
        b = (kf + mf) * (kf - mf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("A is defined on [0, 1], got {x}")))
    }
}

/// `h(x) = A(x) - 2/(1 - x)` on `[0, 1]`, extended continuously to `h(1) = -1/2`.
pub fn a_offset(x: f64) -> Result<f64> {
    a_offset_with(x, &ASeriesConfig::default())
}

pub fn a_offset_with(x: f64, cfg: &ASeriesConfig) -> Result<f64> {
    check_unit(x)?;
    Ok(offset_unchecked(x, cfg))
}

fn offset_unchecked(x: f64, cfg: &ASeriesConfig) -> f64 {
    // h(x) = -Σ_{j>=0} (-1)^j c_{j+1},  c_k = (4k + 2)/((2k + 1)² - x).
    -accelerated_alternating_sum(cfg.terms(), |j| {
        let k = (j + 1) as f64;
        let odd = 2.0 * k + 1.0;
        (4.0 * k + 2.0) / (odd * odd - x)
    })
}

/// `A(x)` for `x ∈ [0, 1]`, with `A(1) = +∞`.
pub fn a(x: f64) -> Result<ExtendedReal> {
    a_with(x, &ASeriesConfig::default())
}

pub fn a_with(x: f64, cfg: &ASeriesConfig) -> Result<ExtendedReal> {
    check_unit(x)?;
    if x == 1.0 {
        return Ok(ExtendedReal::PosInfinity);
    }
    Ok(ExtendedReal::Finite(2.0 / (1.0 - x) + offset_unchecked(x, cfg)))
}

/// `A(1 - t)` for `t ∈ (0, 1]`. Taking the complement as input keeps full
/// relative accuracy when `x` is within roundoff of 1.
pub fn a_of_complement(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!("complement {t} outside (0, 1]")));
    }
    Ok(2.0 / t + offset_unchecked(1.0 - t, &ASeriesConfig::default()))
}

/// Inverse of `A`: the `x ∈ [0, 1]` with `A(x) = y`, for `y >= π/2`.
///
/// Bisection on `u = 1 - x` inside the bracket implied by the offset bounds,
/// `2/(y + 1/2) <= u <= 2/(y + (4 - π)/2)`.
pub fn a_inverse(y: ExtendedReal) -> Result<f64> {
    let y = match y {
        ExtendedReal::PosInfinity => return Ok(1.0),
        ExtendedReal::NegInfinity => return Err(Error::InvalidArgument("A^-1 is defined on [π/2, +∞]".into())),
        ExtendedReal::Finite(y) => y,
    };
    if y < FRAC_PI_2 - 1e-12 {
        return Err(Error::InvalidArgument(format!("A^-1({y}) is undefined below π/2")));
    }
    let cfg = ASeriesConfig::default();
    let a_of_u = |u: f64| 2.0 / u + offset_unchecked(1.0 - u, &cfg);
    if y <= a_of_u(1.0) * (1.0 + 4.0 * f64::EPSILON) {
        return Ok(0.0);
    }
    let mut lo = (2.0 / (y - OFFSET_AT_ONE)).min(1.0);
    let mut hi = (2.0 / (y - OFFSET_AT_ZERO)).min(1.0);
    // A is decreasing in u: A(lo) >= y >= A(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if a_of_u(mid) >= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(1.0 - 0.5 * (lo + hi))
}

/// `1/(4(1 + iota)) + 1/(4(n - iota))`.
///
/// This quarter bound is the commonly quoted size of [`residual`], but it is
/// not a true upper bound. The residual is a signed sum of two alternating
/// tails, and when both have the same sign the tail next to the nearer
/// endpoint alone can exceed its quarter term. For example, at `n = 1001`,
/// `x = 1/π` the residual is `1.110272e-3` against `1.109782e-3`, and for
/// `iota = n - 1`, `rho -> 1` it approaches `ln(2)/2 > 1/4`.
/// [`residual_bound_proven`] is the rigorous version.
pub fn residual_bound(n: usize, iota: usize) -> f64 {
    0.25 / (1 + iota) as f64 + 0.25 / (n - iota) as f64
}

/// `1/(2(1 + iota)) + 1/(2(n - iota))`: each alternating tail is at most its
/// first term, `1/(2 iota + 3 + rho)` and `1/(2(n - iota) + 1 - rho)`.
pub fn residual_bound_proven(n: usize, iota: usize) -> f64 {
    0.5 / (1 + iota) as f64 + 0.5 / (n - iota) as f64
}

/// Pieces of the comparison between `|D_n(x)|/n` and `A(rho²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenominatorComparison {
    pub iota: usize,
    pub rho: f64,
    /// `D_n(x)/n`.
    pub scaled_denominator: f64,
    /// `A(rho_n(x)²)`.
    pub a_value: f64,
    /// `||D_n(x)|/n - A(rho²)|`.
    pub residual: f64,
    /// [`residual_bound`].
    pub bound: f64,
    /// [`residual_bound_proven`].
    pub proven_bound: f64,
}

pub fn compare_denominator(n: usize, x: f64) -> Result<DenominatorComparison> {
    let grid = UniformGrid::new(n)?;
    let pos = grid.decompose(x)?;
    if pos.is_node {
        return Err(Error::NodeSingularity { n, x });
    }
    let scaled = denominator_unchecked(&grid, x) / n as f64;
    let a_value = a_of_complement(pos.one_minus_rho_sq().min(1.0))?;
    Ok(DenominatorComparison {
        iota: pos.iota,
        rho: pos.rho,
        scaled_denominator: scaled,
        a_value,
        residual: (scaled.abs() - a_value).abs(),
        bound: residual_bound(n, pos.iota),
        proven_bound: residual_bound_proven(n, pos.iota),
    })
}

/// `||D_n(x)|/n - A(rho_n(x)²)|` for `x` not a node.
pub fn residual(n: usize, x: f64) -> Result<f64> {
    Ok(compare_denominator(n, x)?.residual)
}
