//! Limit points of `n (B_n f(x) - f(x))`.
//!
//! Writing the error as `(Δ_n(f, x) + bias)/D_n(x)` with `Δ_n -> 0`, the
//! limits along sequences of one parity are `bias / L` where `L` ranges over
//! the limits of `D_n(x)/n`. For `x + 1 = a/b` those are the finitely many
//! values `(-1)^iota A(rho²)` with `rho = m/b`, which depend only on `n mod 2b`.
//! For irrational `x` every `|L| >= π/2` is attained, so the errors fill
//! `[-2|bias|/π, 2|bias|/π]`.

use std::f64::consts::PI;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::asymptotics::{a, a_inverse};
use crate::barycentric::{denominator_unchecked, evaluate_unchecked, SampledFunction, WeightScheme};
use crate::error::{Error, Result};
use crate::grid::{ExtendedReal, Parity, RationalClass, RationalPoint, UniformGrid};
use crate::model::FunctionModel;

/// The odd and even bias functions at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasPair {
    /// `O(f, x) = (f(x) - f(1))/(2(x - 1)) - (f(x) - f(-1))/(2(x + 1))`.
    pub odd_bias: f64,
    /// `E(f, x) = (f(1) - f(x))/(2(x - 1)) + (f(-1) - f(x))/(2(x + 1))`.
    pub even_bias: f64,
}

impl BiasPair {
    pub fn for_parity(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Odd => self.odd_bias,
            Parity::Even => self.even_bias,
        }
    }
}

/// Bias functions at `x ∈ (-1, 1)`; the endpoints are rejected since the
/// difference quotients degenerate there.
pub fn bias(model: &FunctionModel, x: f64) -> Result<BiasPair> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::OutOfDomain(x));
    }
    let fx = model.eval(x);
    let f_right = model.eval(1.0);
    let f_left = model.eval(-1.0);
    let right = (fx - f_right) / (2.0 * (x - 1.0));
    let left = (fx - f_left) / (2.0 * (x + 1.0));
    Ok(BiasPair {
        odd_bias: right - left,
        even_bias: -right - left,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum LimitSetKind {
    /// Sorted, without duplicates.
    FiniteSet(Vec<ExtendedReal>),
    /// Closed interval `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitSet {
    pub parity: Parity,
    pub kind: LimitSetKind,
}

impl LimitSet {
    /// Distance from `value` to the set.
    pub fn distance(&self, value: f64) -> f64 {
        match &self.kind {
            LimitSetKind::FiniteSet(vals) => vals
                .iter()
                .map(|v| match v {
                    ExtendedReal::Finite(v) => (v - value).abs(),
                    _ => f64::INFINITY,
                })
                .fold(f64::INFINITY, f64::min),
            LimitSetKind::Interval { lo, hi } => (lo - value).max(value - hi).max(0.0),
        }
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.distance(value) <= tol
    }

    /// Element closest to `value`, for finite sets.
    pub fn nearest(&self, value: f64) -> Option<f64> {
        let LimitSetKind::FiniteSet(vals) = &self.kind else {
            return None;
        };
        vals.iter()
            .filter_map(|v| v.finite())
            .min_by(|p, q| (p - value).abs().total_cmp(&(q - value).abs()))
    }

    pub fn values(&self) -> Option<&[ExtendedReal]> {
        match &self.kind {
            LimitSetKind::FiniteSet(v) => Some(v),
            LimitSetKind::Interval { .. } => None,
        }
    }
}

/// One limit of `D_n(x)/n`: `sign · A(arg)` with `arg = m²/b²` exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenominatorLimit {
    pub sign: i32,
    pub arg: Ratio<i64>,
}

impl DenominatorLimit {
    fn new(sign: i32, m: i64, q2: i64) -> Self {
        Self {
            sign,
            arg: Ratio::new(m * m, q2),
        }
    }

    pub fn value(&self) -> Result<f64> {
        let arg = *self.arg.numer() as f64 / *self.arg.denom() as f64;
        Ok(self.sign as f64 * a(arg)?.to_f64())
    }
}

fn pm(out: &mut Vec<DenominatorLimit>, m: i64, q2: i64) {
    out.push(DenominatorLimit::new(1, m, q2));
    out.push(DenominatorLimit::new(-1, m, q2));
}

/// Exact limits of `D_n(x)/n` along `parity`, sorted and deduplicated.
pub fn denominator_limits(x: RationalPoint, parity: Parity) -> Vec<DenominatorLimit> {
    let mut out = Vec::new();
    match (x.class(), parity) {
        (RationalClass::BothOdd { q, .. }, Parity::Odd) => {
            for l in 0..=(q - 1) / 2 {
                pm(&mut out, 2 * l, q * q);
            }
        }
        (RationalClass::BothOdd { q, .. }, Parity::Even) => {
            for l in 0..=(q - 3) / 2 {
                if q >= 3 {
                    pm(&mut out, 2 * l + 1, q * q);
                }
            }
        }
        (RationalClass::EvenNumerator { p, q }, parity) => {
            for s in 0..2i64 {
                let sign = if s == 0 { 1 } else { -1 };
                // Integers l with lo <= 2l <= hi.
                let (lo, hi) = match parity {
                    Parity::Odd => (s - p + 1, s - p + q - 1),
                    Parity::Even => (s + 1, s + q - 1),
                };
                for l in lo.div_euclid(2) - 1..=hi.div_euclid(2) + 1 {
                    if lo <= 2 * l && 2 * l <= hi {
                        let m = match parity {
                            Parity::Odd => 4 * l + 2 * p - 2 * s - q,
                            Parity::Even => 4 * l - 2 * s - q,
                        };
                        out.push(DenominatorLimit::new(sign, m, q * q));
                    }
                }
            }
        }
        (RationalClass::EvenDenominator { q, .. }, Parity::Odd) => {
            for l in 0..q {
                pm(&mut out, 2 * l + 1, 4 * q * q);
            }
        }
        (RationalClass::EvenDenominator { q, .. }, Parity::Even) => {
            for l in 0..q {
                pm(&mut out, l, q * q);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The pairs `(sign, rho²)` met by `n` of the given parity over one period
/// `n ∈ [4b + 1, 8b]`, read directly off the exact position decomposition.
/// Both depend only on `n mod 2b`, so this is the full set of limits.
pub fn period_limits(x: RationalPoint, parity: Parity) -> Vec<DenominatorLimit> {
    let b = x.den() as usize;
    let start = 4 * b + 1 + usize::from(parity == Parity::Even);
    let mut out: Vec<DenominatorLimit> = (start..start + 4 * b)
        .step_by(2)
        .filter_map(|n| {
            let d = UniformGrid { n }.decompose_rational(x);
            if d.is_node {
                return None;
            }
            let r = Ratio::new(*d.rho.numer() as i64, *d.rho.denom() as i64);
            Some(DenominatorLimit {
                sign: d.sign(),
                arg: r * r,
            })
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn sorted_dedup(mut vals: Vec<f64>) -> Vec<ExtendedReal> {
    vals.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(vals.len());
    for v in vals {
        match out.last() {
            Some(&last) if (v - last).abs() <= 1e-12 * last.abs().max(1.0) => {}
            _ => out.push(v),
        }
    }
    out.into_iter().map(ExtendedReal::Finite).collect()
}

/// The finite set of limits of `D_n(x)/n` along `parity`.
pub fn denominator_limit_set(x: RationalPoint, parity: Parity) -> Result<LimitSet> {
    let vals = denominator_limits(x, parity)
        .iter()
        .map(DenominatorLimit::value)
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSet {
        parity,
        kind: LimitSetKind::FiniteSet(sorted_dedup(vals)),
    })
}

/// Rationality cannot be read off a float, so callers say which case applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Rational(RationalPoint),
    /// A float standing for an irrational number.
    Irrational(f64),
}

impl Point {
    pub fn value(&self) -> f64 {
        match self {
            Point::Rational(r) => r.value(),
            Point::Irrational(x) => *x,
        }
    }
}

/// Limits of `n (B_n f(x) - f(x))` along `parity`.
pub fn error_limit_set(model: &FunctionModel, x: Point, parity: Parity) -> Result<LimitSet> {
    let b = bias(model, x.value())?.for_parity(parity);
    let kind = match x {
        Point::Rational(r) => {
            let vals = denominator_limits(r, parity)
                .iter()
                .map(|l| Ok(b / l.value()?))
                .collect::<Result<Vec<_>>>()?;
            LimitSetKind::FiniteSet(sorted_dedup(vals))
        }
        Point::Irrational(_) => {
            let r = 2.0 * b.abs() / PI;
            LimitSetKind::Interval { lo: -r, hi: r }
        }
    };
    Ok(LimitSet { parity, kind })
}

fn scan_range(x: f64, parity: Parity, n_min: usize, n_max: usize) -> Result<Vec<usize>> {
    if n_min == 0 || n_min >= n_max {
        return Err(Error::InvalidArgument(format!(
            "scan range [{n_min}, {n_max}] must satisfy 1 <= n_min < n_max"
        )));
    }
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::OutOfDomain(x));
    }
    Ok((n_min..=n_max)
        .filter(|&n| parity.matches(n))
        .filter(|&n| !UniformGrid { n }.is_node(x))
        .collect())
}

/// `(n, n (B_n f(x) - f(x)))` for every `n` of the given parity in
/// `[n_min, n_max]` for which `x` is not a node, ordered by `n`.
pub fn accumulation_scan(
    model: &FunctionModel,
    x: f64,
    parity: Parity,
    n_min: usize,
    n_max: usize,
) -> Result<Vec<(usize, f64)>> {
    let fx = model.eval(x);
    scan_range(x, parity, n_min, n_max)?
        .into_par_iter()
        .map(|n| {
            let samples = SampledFunction::from_model(model, n)?;
            let b = evaluate_unchecked(&samples, &WeightScheme::Berrut, x);
            Ok((n, n as f64 * (b - fx)))
        })
        .collect()
}

/// `(n, D_n(x)/n)` over the same index set as [`accumulation_scan`].
pub fn denominator_scan(x: f64, parity: Parity, n_min: usize, n_max: usize) -> Result<Vec<(usize, f64)>> {
    scan_range(x, parity, n_min, n_max)?
        .into_par_iter()
        .map(|n| Ok((n, denominator_unchecked(&UniformGrid { n }, x) / n as f64)))
        .collect()
}

/// Agreement of a denominator scan at a rational point with the
/// characterisation of convergent subsequences: along each `n`, the nearest
/// limit `L` has sign `(-1)^iota` and `A^-1(|L|) = rho²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCheck {
    pub samples: usize,
    /// Largest `|D_n/n - L|` with `L` the nearest set element.
    pub max_value_gap: f64,
    /// Largest `|A^-1(|L|) - rho_n²|`.
    pub max_rho_gap: f64,
    pub sign_mismatches: usize,
}

pub fn convergence_check(x: RationalPoint, parity: Parity, n_min: usize, n_max: usize) -> Result<ConvergenceCheck> {
    let set = denominator_limit_set(x, parity)?;
    let scan = denominator_scan(x.value(), parity, n_min, n_max)?;
    let mut out = ConvergenceCheck {
        samples: scan.len(),
        max_value_gap: 0.0,
        max_rho_gap: 0.0,
        sign_mismatches: 0,
    };
    for (n, d) in scan {
        let l = set
            .nearest(d)
            .ok_or_else(|| Error::InvalidArgument("empty limit set".into()))?;
        let pos = UniformGrid { n }.decompose_rational(x);
        let sign = if pos.iota.is_multiple_of(2) { 1.0 } else { -1.0 };
        if sign != l.signum() {
            out.sign_mismatches += 1;
        }
        let rho = pos.rho_f64();
        let inv = a_inverse(ExtendedReal::Finite(l.abs()))?;
        out.max_value_gap = out.max_value_gap.max((d - l).abs());
        out.max_rho_gap = out.max_rho_gap.max((inv - rho * rho).abs());
    }
    Ok(out)
}
