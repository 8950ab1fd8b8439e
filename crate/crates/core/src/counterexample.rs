//! A Lipschitz function whose interpolation error decays no faster than
//! `log(n)/n` along `n_j = 2^(2^j)`.
//!
//! The building block is the sawtooth `f_m`, defined for `m = (4r)²`. It
//! vanishes outside `[1/m, (√m - 3)/m]`, rises with slope 1 from `1/m` to
//! `2/m`, then alternates falls and raises of slope ±1 between `±1/m`, and
//! finally returns to 0 at `(√m - 3)/m`. At the grid of `n = m` nodes it
//! alternates `(-1)^(k+1)/m` right of `t_m = 1/m`, so the numerator
//! `N_m(f_m, t_m)` collects a harmonic sum of size `ln(m)/4` while
//! `f_m(t_m) = 0`. Summing `f_{n_j}` over `j >= 100` gives the full function.
//! The supports are disjoint, and the other terms perturb the error at
//! `t_{n_j}` by `O(j/n_j)`.
//!
//! Values at the rational points that matter are computed exactly with
//! `Ratio<i128>`, then summed in `f64` with compensated summation.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

pub type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `m = (4r)²` with `r >= 2`. For `r = 1` the last rise overlaps the first
/// and the support collapses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SawtoothParams {
    m: u64,
    sqrt_m: u64,
}

impl SawtoothParams {
    pub fn new(m: u64) -> Result<Self> {
        let s = (m as f64).sqrt().round() as u64;
        let root = (s.saturating_sub(2)..=s + 2).find(|r| r.checked_mul(*r) == Some(m));
        match root {
            Some(r) if r % 4 == 0 && r >= 8 => Ok(Self { m, sqrt_m: r }),
            _ => Err(Error::InvalidSawtooth(m)),
        }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn sqrt_m(&self) -> u64 {
        self.sqrt_m
    }

    /// Number of full hats, `h = (√m - 8)/4`; hats are indexed `1..=h`.
    pub fn hats(&self) -> u64 {
        (self.sqrt_m - 8) / 4
    }

    /// Evaluates the five-case definition directly.
    pub fn eval_exact(&self, x: &Q) -> Q {
        let m = self.m as i128;
        let s = self.sqrt_m as i128;
        let one_over_m = q(1, m);
        if *x < one_over_m || *x >= q(s - 3, m) {
            return Q::zero();
        }
        if *x < q(2, m) {
            return x - one_over_m;
        }
        if *x >= q(s - 4, m) {
            return x - q(s - 3, m);
        }
        // 2 <= m x < √m - 4: x lies in a fall [4p+2, 4p+4) or a raise [4p, 4p+2).
        let t = x * Q::from_integer(m);
        let p = (t / Q::from_integer(4)).floor().to_integer();
        if t - Q::from_integer(4 * p) >= Q::from_integer(2) {
            q(4 * p + 3, m) - x
        } else {
            x - q(4 * p + 1, m)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.m as f64;
        let s = self.sqrt_m as f64;
        if x < 1.0 / m || x >= (s - 3.0) / m {
            return 0.0;
        }
        let t = x * m;
        if t < 2.0 {
            return x - 1.0 / m;
        }
        if t >= s - 4.0 {
            return x - (s - 3.0) / m;
        }
        let p = (t / 4.0).floor();
        if t - 4.0 * p >= 2.0 {
            (4.0 * p + 3.0) / m - x
        } else {
            x - (4.0 * p + 1.0) / m
        }
    }

    /// The same function as an explicit list of breakpoints.
    pub fn piecewise(&self) -> PiecewiseLinear {
        let m = self.m as i128;
        let s = self.sqrt_m as i128;
        let mut pts = vec![(q(1, m), Q::zero()), (q(2, m), q(1, m))];
        let mut j = 4;
        let mut sign = -1;
        while j <= s - 4 {
            pts.push((q(j, m), q(sign, m)));
            sign = -sign;
            j += 2;
        }
        pts.push((q(s - 3, m), Q::zero()));
        PiecewiseLinear::new(pts).expect("sawtooth breakpoints are increasing")
    }

    /// `f_m(2k/m - 1)` from the alternation law: `(-1)^(k+1)/m` for
    /// `k = m/2 + 1, ..., m/2 + (√m - 4)/2` and 0 otherwise.
    pub fn node_value_law(&self, k: u64) -> Q {
        let half = self.m / 2;
        if k > half && k <= half + (self.sqrt_m - 4) / 2 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            q(sign, self.m as i128)
        } else {
            Q::zero()
        }
    }
}

/// Continuous piecewise-linear function, zero outside its breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<Q>,
    ys: Vec<Q>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        if points.len() < 2 || points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("breakpoints must be strictly increasing".into()));
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(Self { xs, ys })
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.xs
    }

    pub fn values(&self) -> &[Q] {
        &self.ys
    }

    /// Slopes of the segments between consecutive breakpoints.
    pub fn slopes(&self) -> Vec<Q> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    pub fn eval_exact(&self, x: &Q) -> Q {
        let last = self.xs.len() - 1;
        if *x <= self.xs[0] || *x >= self.xs[last] {
            // Outside the support; the end values are part of the data.
            return if *x == self.xs[0] {
                self.ys[0]
            } else if *x == self.xs[last] {
                self.ys[last]
            } else {
                Q::zero()
            };
        }
        let i = self.xs.partition_point(|b| b <= x) - 1;
        let slope = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + slope * (x - self.xs[i])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        let x0 = to_f64(&self.xs[0]);
        let x1 = to_f64(&self.xs[last]);
        if !(x > x0 && x < x1) {
            return if x == x0 {
                to_f64(&self.ys[0])
            } else if x == x1 {
                to_f64(&self.ys[last])
            } else {
                0.0
            };
        }
        let i = self.xs.partition_point(|b| to_f64(b) <= x).max(1) - 1;
        let (xa, xb) = (to_f64(&self.xs[i]), to_f64(&self.xs[i + 1]));
        let (ya, yb) = (to_f64(&self.ys[i]), to_f64(&self.ys[i + 1]));
        ya + (yb - ya) / (xb - xa) * (x - xa)
    }
}

/// `Σ f_m(x)` over several sawtooth terms.
pub fn series_eval(terms: &[SawtoothParams], x: f64) -> f64 {
    terms.iter().map(|t| t.eval(x)).sum()
}

/// `Σ_{j<l} 1/(a + j)` against `ln(a + l) - ln(a) + 1/(2a) - 1/(2(a + l))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicBound {
    pub sum: f64,
    pub lower_bound: f64,
}

impl HarmonicBound {
    pub fn holds(&self) -> bool {
        self.sum >= self.lower_bound - 1e-12
    }
}

pub fn shifted_harmonic_bound(a: f64, l: u64) -> Result<HarmonicBound> {
    if a.is_nan() || a <= 0.0 || l == 0 {
        return Err(Error::InvalidArgument(format!(
            "need a > 0 and l >= 1, got a={a}, l={l}"
        )));
    }
    let sum = (0..l).map(|j| 1.0 / (a + j as f64)).sum::<CompensatedSum>().value();
    let al = a + l as f64;
    Ok(HarmonicBound {
        sum,
        lower_bound: (al.ln() - a.ln()) + 0.5 / a - 0.5 / al,
    })
}

/// A direct alternating sum and its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumPair {
    pub direct: f64,
    pub closed: f64,
}

impl SumPair {
    pub fn rel_gap(&self) -> f64 {
        (self.direct - self.closed).abs() / self.closed.abs().max(f64::MIN_POSITIVE)
    }
}

/// Sums over one raise and one fall of `f_m` sampled at `x = k/(2qm)`,
/// the points the nodes of `n = 4qm` land on after shifting by `2qm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatSums {
    pub q: u64,
    pub p: u64,
    /// `R_p`; absent for `p = 0`, whose raise starts inside the zero region.
    pub raise: Option<SumPair>,
    /// `F_p`.
    pub fall: SumPair,
}

impl HatSums {
    /// `H_p = R_p + F_p` from the direct sums.
    pub fn hat(&self) -> Option<f64> {
        self.raise.map(|r| r.direct + self.fall.direct)
    }
}

/// `Σ_{k=lo}^{hi} (-1)^(k+1) f_m(k/(2qm)) / (2k - 1)`.
fn header_sum(params: &SawtoothParams, qq: u64, lo: u64, hi: u64) -> f64 {
    let denom = 2 * qq as i128 * params.m as i128;
    let mut acc = CompensatedSum::new();
    for k in lo..=hi {
        let v = to_f64(&params.eval_exact(&q(k as i128, denom)));
        let term = v / (2.0 * k as f64 - 1.0);
        acc += if k % 2 == 1 { term } else { -term };
    }
    acc.value()
}

/// `Σ_{l=lo}^{hi} 1/(16 l² - 1)`.
fn quarter_sum(lo: u64, hi: u64) -> f64 {
    (lo..=hi)
        .map(|l| {
            let l = l as f64;
            1.0 / (16.0 * l * l - 1.0)
        })
        .sum::<CompensatedSum>()
        .value()
}

fn check_q(qq: u64) -> Result<()> {
    if qq < 16 {
        return Err(Error::InvalidArgument(format!("q = {qq} must be at least 16")));
    }
    Ok(())
}

/// Raise and fall sums of hat `p`, `0 <= p <= h`, with their closed forms
///
/// ```text
/// R_p =  (16pq + 4q - 1)/(2qm)  Σ_{l=4pq}^{4pq+2q-1}      1/(16l² - 1)
/// F_p = -(16pq + 12q - 1)/(2qm) Σ_{l=4pq+2q}^{4(p+1)q-1}  1/(16l² - 1)
/// ```
pub fn hat_sums(qq: u64, params: &SawtoothParams, p: u64) -> Result<HatSums> {
    check_q(qq)?;
    if p > params.hats() {
        return Err(Error::InvalidArgument(format!(
            "hat index {p} exceeds h = {} for m = {}",
            params.hats(),
            params.m
        )));
    }
    let (pf, qf, mf) = (p as f64, qq as f64, params.m as f64);
    let raise = (p >= 1).then(|| SumPair {
        direct: header_sum(params, qq, 8 * p * qq, 8 * p * qq + 4 * qq - 1),
        closed: (16.0 * pf * qf + 4.0 * qf - 1.0) / (2.0 * qf * mf) * quarter_sum(4 * p * qq, 4 * p * qq + 2 * qq - 1),
    });
    let fall = SumPair {
        direct: header_sum(params, qq, 8 * p * qq + 4 * qq, 8 * (p + 1) * qq - 1),
        closed: -(16.0 * pf * qf + 12.0 * qf - 1.0) / (2.0 * qf * mf)
            * quarter_sum(4 * p * qq + 2 * qq, 4 * (p + 1) * qq - 1),
    };
    Ok(HatSums { q: qq, p, raise, fall })
}

/// The split of `N_{4qm}(f_m, t_{4qm}) / (4qm)` into the partial first raise
/// `R_-`, the first fall `F_0`, the full hats `H_1..H_h` and the partial
/// last raise `R_+`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeaderSplit {
    pub r_minus: f64,
    pub f0: f64,
    pub hats: Vec<f64>,
    pub r_plus: f64,
    /// The same sum over `k = 2q, ..., 2q(√m - 3) - 1` in one pass.
    pub total: f64,
}

impl HeaderSplit {
    pub fn parts_sum(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        acc += self.r_minus;
        acc += self.f0;
        for h in &self.hats {
            acc += *h;
        }
        acc += self.r_plus;
        acc.value()
    }
}

pub fn header_split(qq: u64, params: &SawtoothParams) -> Result<HeaderSplit> {
    check_q(qq)?;
    let s = params.sqrt_m;
    let hats = (1..=params.hats())
        .into_par_iter()
        .map(|p| hat_sums(qq, params, p).map(|h| h.hat().expect("p >= 1 has a raise")))
        .collect::<Result<Vec<_>>>()?;
    Ok(HeaderSplit {
        r_minus: header_sum(params, qq, 2 * qq, 4 * qq - 1),
        f0: hat_sums(qq, params, 0)?.fall.direct,
        hats,
        r_plus: header_sum(params, qq, 2 * qq * (s - 4), 2 * qq * (s - 3) - 1),
        total: header_sum(params, qq, 2 * qq, 2 * qq * (s - 3) - 1),
    })
}

/// `N_n(f_m, t_n)` and `B_n(f_m, t_n)` for `n = 4qm` and `t_n = 1/n`, summed
/// over all nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeaderCheck {
    pub n: u64,
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
    /// `f_m(t_n)`, exact.
    pub f_at_t: f64,
}

impl HeaderCheck {
    /// `N >= -3/4`, `B >= -9/(8n)` and `f_m(t_n) = 0`.
    pub fn holds(&self) -> bool {
        self.numerator >= -0.75 && self.value >= -9.0 / (8.0 * self.n as f64) && self.f_at_t == 0.0
    }
}

pub fn header_check(qq: u64, params: &SawtoothParams) -> Result<HeaderCheck> {
    check_q(qq)?;
    let n = 4u64
        .checked_mul(qq)
        .and_then(|v| v.checked_mul(params.m))
        .filter(|&n| n <= 1 << 26)
        .ok_or(Error::Overflow("4qm above 2^26 nodes"))?;
    let nn = n as i128;
    let t = q(1, nn);
    // Terms are collected in index order so the compensated sums, and hence
    // every printed digit, do not depend on thread scheduling.
    let terms: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let xk = q(2 * k as i128 - nn, nn);
            let d = to_f64(&(t - xk));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let fk = params.eval_exact(&xk);
            let a = if fk.is_zero() { 0.0 } else { sign * to_f64(&fk) / d };
            (a, sign / d)
        })
        .collect();
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (a, b) in terms {
        num += a;
        den += b;
    }
    let (numerator, denominator) = (num.value(), den.value());
    Ok(HeaderCheck {
        n,
        numerator,
        denominator,
        value: numerator / denominator,
        f_at_t: to_f64(&params.eval_exact(&t)),
    })
}

/// The two polynomial forms of the numerator of `a_k = R-term - F-term` at
/// `k = 4pq + ξq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UkForms {
    /// `(16pq + 4q - 1)(16(k + 2q)² - 1) - (16pq + 12q - 1)(16k² - 1)`.
    pub direct: f64,
    /// `8q(256p²q² + 256pq² - 32pq - 16q²ξ² + 32q² + 32q²ξ - 8qξ - 8q + 1)`.
    pub expanded: f64,
}

impl UkForms {
    pub fn rel_gap(&self) -> f64 {
        (self.direct - self.expanded).abs() / self.expanded.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn uk_forms(qq: u64, p: u64, xi: f64) -> Result<UkForms> {
    check_q(qq)?;
    if p == 0 || !(0.0..2.0).contains(&xi) {
        return Err(Error::InvalidArgument(format!(
            "need p >= 1 and ξ in [0, 2), got p={p}, ξ={xi}"
        )));
    }
    let (q, p) = (qq as f64, p as f64);
    let k = 4.0 * p * q + xi * q;
    let direct = (16.0 * p * q + 4.0 * q - 1.0) * (16.0 * (k + 2.0 * q).powi(2) - 1.0)
        - (16.0 * p * q + 12.0 * q - 1.0) * (16.0 * k * k - 1.0);
    let expanded = 8.0
        * q
        * (256.0 * p * p * q * q + 256.0 * p * q * q - 32.0 * p * q - 16.0 * q * q * xi * xi
            + 32.0 * q * q
            + 32.0 * q * q * xi
            - 8.0 * q * xi
            - 8.0 * q
            + 1.0);
    Ok(UkForms { direct, expanded })
}

/// `N_m(f_m, 1/m)` three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTerm {
    pub m: u64,
    /// Summed over all `m + 1` nodes.
    pub direct: f64,
    /// `Σ_{i=1}^{(√m-4)/2} 1/(2i - 1)`.
    pub harmonic: f64,
    /// `ln(m)/4 + δ_m/2`.
    pub formula: f64,
    /// `δ_m = 1 + ln(1 - 3/√m) - 1/(√m - 3)`.
    pub delta: f64,
}

impl MainTerm {
    /// `|direct - formula| <= tol`.
    pub fn identity_holds(&self, tol: f64) -> bool {
        (self.direct - self.formula).abs() <= tol
    }

    /// `direct >= formula`, which is what the shifted harmonic bound gives.
    pub fn lower_bound_holds(&self) -> bool {
        self.direct >= self.formula - 1e-12
    }
}

pub fn main_term(params: &SawtoothParams) -> Result<MainTerm> {
    let m = params.m;
    if m > 1 << 26 {
        return Err(Error::Overflow("m above 2^26 nodes"));
    }
    let mm = m as i128;
    let t = q(1, mm);
    let direct = (0..=m)
        .into_par_iter()
        .filter_map(|k| {
            let xk = q(2 * k as i128 - mm, mm);
            let fk = params.eval_exact(&xk);
            (!fk.is_zero()).then(|| {
                let v = to_f64(&fk) / to_f64(&(t - xk));
                if k % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum::<CompensatedSum>()
        .value();
    let s = params.sqrt_m as f64;
    let harmonic = (1..=(params.sqrt_m - 4) / 2)
        .map(|i| 1.0 / (2.0 * i as f64 - 1.0))
        .sum::<CompensatedSum>()
        .value();
    let delta = 1.0 + (1.0 - 3.0 / s).ln() - 1.0 / (s - 3.0);
    Ok(MainTerm {
        m,
        direct,
        harmonic,
        formula: (m as f64).ln() / 4.0 + delta / 2.0,
        delta,
    })
}

/// `n_j = 2^(2^j)` while it fits in `u128`.
pub fn tower(j: u32) -> Result<u128> {
    if j > 6 {
        return Err(Error::Overflow("2^(2^j) exceeds u128 for j > 6"));
    }
    Ok(1u128 << (1u32 << j))
}

/// Whether `(√n_{j+1} - 3)/n_{j+1} < 1/n_j` for `j = 2, ..., j_max - 1`, so
/// that the supports of consecutive terms are disjoint.
pub fn support_disjointness(j_max: u32) -> Result<bool> {
    tower(j_max)?;
    for j in 2..j_max {
        let (nj, nk) = (tower(j)?, tower(j + 1)?);
        // √n_{j+1} = n_j.
        let lhs = (nj - 3).checked_mul(nj).ok_or(Error::Overflow("support product"))?;
        if lhs >= nk {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vanishing claims at machine scale: for sawtooth sizes `ms` (ascending),
/// every larger term vanishes at `t_n = 1/n` and at every node of the smaller
/// grid, and every smaller term vanishes at `t_n` of the larger grid.
/// Returns the number of exact evaluations that were nonzero.
pub fn cross_term_violations(ms: &[u64]) -> Result<usize> {
    let params = ms.iter().map(|&m| SawtoothParams::new(m)).collect::<Result<Vec<_>>>()?;
    let mut bad = 0;
    for (a, small) in params.iter().enumerate() {
        for large in &params[a + 1..] {
            let (ns, nl) = (small.m as i128, large.m as i128);
            if !large.eval_exact(&q(1, ns)).is_zero() {
                bad += 1;
            }
            if !small.eval_exact(&q(1, nl)).is_zero() {
                bad += 1;
            }
            if small.m > 1 << 26 {
                return Err(Error::Overflow("node sweep above 2^26"));
            }
            bad += (0..=small.m)
                .into_par_iter()
                .filter(|&k| !large.eval_exact(&q(2 * k as i128 - ns, ns)).is_zero())
                .count();
        }
    }
    Ok(bad)
}

/// `1/16 - (9/8) j / ln(n_j) >= 1/20` for `j` in the range, with
/// `ln(n_j) = 2^j ln 2`. This is the final inequality turning the component
/// bounds into `B_{n_j}(f, t_{n_j}) >= ln(n_j)/(20 n_j)`. Returns the
/// smallest margin `1/16 - 1/20 - (9/8) j/ln(n_j)`.
pub fn assembly_margin(j_min: u32, j_max: u32) -> Result<f64> {
    if j_min > j_max || j_max > 1000 {
        return Err(Error::InvalidArgument(format!("invalid j range {j_min}..={j_max}")));
    }
    Ok((j_min..=j_max)
        .map(|j| {
            let ln_n = 2f64.powi(j as i32) * std::f64::consts::LN_2;
            1.0 / 16.0 - 1.0 / 20.0 - 1.125 * j as f64 / ln_n
        })
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn saw(m: u64) -> SawtoothParams {
        SawtoothParams::new(m).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SawtoothParams::new(256).is_ok());
        assert!(SawtoothParams::new(1 << 32).is_ok());
        assert_eq!(SawtoothParams::new(144).unwrap().sqrt_m(), 12);
        for bad in [0, 16, 36, 100, 255, 2 * 256] {
            assert!(SawtoothParams::new(bad).is_err(), "{bad}");
        }
        assert_eq!(saw(256).hats(), 2);
    }

    #[test]
    fn eval_examples() {
        for m in [64, 256, 4096] {
            assert_eq!(saw(m).eval(0.0), 0.0);
        }
        let s = saw(256);
        assert!((s.eval(1.5 / 256.0) - 0.5 / 256.0).abs() < 1e-18);
        assert_eq!(s.eval_exact(&q(3, 256)), Q::zero());
        assert_eq!(s.eval_exact(&q(3, 512)), q(1, 512));
        assert_eq!(s.eval_exact(&q(13, 256)), Q::zero());
        assert_eq!(s.eval_exact(&q(12, 256)), q(-1, 256));
    }

    #[test]
    fn five_cases_match_breakpoints() {
        for m in [64, 256, 4096] {
            let s = saw(m);
            let pw = s.piecewise();
            assert!(pw
                .slopes()
                .iter()
                .all(|sl| *sl == Q::from_integer(1) || *sl == Q::from_integer(-1)));
            let mm = m as i128;
            for j in -8 * mm..=8 * mm {
                let x = q(j, 8 * mm);
                assert_eq!(s.eval_exact(&x), pw.eval_exact(&x), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn node_value_law_matches() {
        for m in [256, 4096] {
            let s = saw(m);
            let mm = m as i128;
            for k in 0..=m {
                let x = q(2 * k as i128 - mm, mm);
                assert_eq!(s.eval_exact(&x), s.node_value_law(k), "m={m} k={k}");
            }
        }
    }

    proptest! {
        #[test]
        fn float_paths_agree(r in 2u64..40, x in -1.0f64..1.0) {
            let s = saw((4 * r) * (4 * r));
            let pw = s.piecewise();
            let a = s.eval(x);
            prop_assert!((a - pw.eval(x)).abs() <= 1e-15);
            prop_assert!(a.abs() <= 1.0 / s.m() as f64 + 1e-18);
        }

        #[test]
        fn one_lipschitz(r in 2u64..40, x in 0.0f64..0.2, h in 1e-9f64..1e-2) {
            let s = saw((4 * r) * (4 * r));
            prop_assert!((s.eval(x + h) - s.eval(x)).abs() <= h * (1.0 + 1e-9));
        }
    }

    #[test]
    fn harmonic_examples() {
        let b = shifted_harmonic_bound(1.0, 1).unwrap();
        assert_eq!(b.sum, 1.0);
        assert!((b.lower_bound - (2f64.ln() + 0.25)).abs() < 1e-15 && b.holds());
        let b = shifted_harmonic_bound(0.5, 1).unwrap();
        assert_eq!(b.sum, 2.0);
        assert!((b.lower_bound - (3f64.ln() + 1.0 - 1.0 / 3.0)).abs() < 1e-15 && b.holds());
        let b = shifted_harmonic_bound(3.7, 1000).unwrap();
        let direct: f64 = (0..1000).map(|j| 1.0 / (3.7 + j as f64)).sum();
        assert!((b.sum - direct).abs() < 1e-12 && b.holds());
        assert!(shifted_harmonic_bound(0.0, 3).is_err());
    }

    #[test]
    fn hat_sum_closed_forms() {
        for m in [256, 4096] {
            let s = saw(m);
            for p in 0..=s.hats() {
                let h = hat_sums(16, &s, p).unwrap();
                assert!(h.fall.rel_gap() <= 1e-12, "m={m} p={p} {h:?}");
                if let Some(r) = h.raise {
                    assert!(r.rel_gap() <= 1e-12 && r.closed > 0.0, "m={m} p={p} {h:?}");
                    assert!(h.hat().unwrap() > 0.0);
                } else {
                    assert_eq!(p, 0);
                    assert!(h.fall.direct >= -3.0 / (16.0 * 16.0 * m as f64));
                }
            }
        }
        assert!(hat_sums(15, &saw(256), 1).is_err());
        assert!(hat_sums(16, &saw(256), 3).is_err());
    }

    #[test]
    fn header_split_adds_up() {
        for (qq, m) in [(16, 256), (16, 4096), (64, 256)] {
            let split = header_split(qq, &saw(m)).unwrap();
            assert!(split.r_minus > 0.0 && split.r_plus > 0.0);
            assert!(split.hats.iter().all(|&h| h > 0.0));
            assert!((split.parts_sum() - split.total).abs() <= 1e-15 * split.total.abs().max(1e-300) + 1e-18);
        }
    }

    #[test]
    fn header_bound() {
        for (qq, m) in [(16, 256), (64, 256), (16, 4096)] {
            let h = header_check(qq, &saw(m)).unwrap();
            assert!(h.holds(), "{h:?}");
            let split = header_split(qq, &saw(m)).unwrap();
            let scaled = split.total * h.n as f64;
            assert!(
                (h.numerator - scaled).abs() <= 1e-9 * scaled.abs().max(1.0),
                "{h:?} {scaled}"
            );
        }
    }

    #[test]
    fn uk_examples_and_samples() {
        for (qq, p, xi) in [(16, 1, 0.0), (16, 1, 1.999), (100, 7, 0.5)] {
            let u = uk_forms(qq, p, xi).unwrap();
            assert!(u.rel_gap() <= 1e-10 && u.direct > 0.0 && u.expanded > 0.0, "{u:?}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let u = uk_forms(rng.gen_range(16..2000), rng.gen_range(1..200), rng.gen_range(0.0..2.0)).unwrap();
            assert!(u.rel_gap() <= 1e-10 && u.direct > 0.0);
        }
        assert!(uk_forms(16, 0, 0.5).is_err());
        assert!(uk_forms(16, 1, 2.0).is_err());
    }

    #[test]
    fn main_term_is_the_odd_harmonic_sum() {
        for m in [256, 4096, 65536] {
            let t = main_term(&saw(m)).unwrap();
            assert!((t.direct - t.harmonic).abs() <= 1e-12 * t.harmonic, "{t:?}");
            assert!(t.lower_bound_holds(), "{t:?}");
            assert!(t.delta > 0.0);
        }
        // The closed form is a lower bound, not an identity: at m = 256 the
        // sum is 1 + 1/3 + ... + 1/11 while ln(256)/4 + δ/2 ≈ 1.7441.
        let t = main_term(&saw(256)).unwrap();
        assert!((t.direct - 1.878_210_678_210_678).abs() < 1e-14);
        assert!((t.direct - t.formula - 0.134).abs() < 1e-3, "{t:?}");
    }

    #[test]
    fn support_and_cross_terms() {
        assert!(support_disjointness(5).unwrap());
        assert!(support_disjointness(6).unwrap());
        assert!(support_disjointness(7).is_err());
        assert_eq!(tower(3).unwrap(), 256);
        assert_eq!(cross_term_violations(&[256, 65536, 1 << 32]).unwrap(), 0);
    }

    #[test]
    fn assembly_chain() {
        assert!(assembly_margin(100, 1000).unwrap() > 0.0);
        assert!(assembly_margin(5, 5).unwrap() < 0.0);
        assert!(assembly_margin(10, 5).is_err());
    }

    #[test]
    fn series_is_a_sum_of_disjoint_terms() {
        let terms = [saw(256), saw(65536)];
        for &x in &[1.5 / 256.0, 1.5 / 65536.0, 0.5, -0.2] {
            let parts: f64 = terms.iter().map(|t| t.eval(x)).sum();
            assert_eq!(series_eval(&terms, x), parts);
            assert!(terms.iter().filter(|t| t.eval(x) != 0.0).count() <= 1);
        }
    }
}
