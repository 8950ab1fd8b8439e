//! The numerator remainder and the error decomposition
//!
//! ```text
//! B_n f(x) - f(x) = (Δ_n(f, x) + bias_n(f, x)) / D_n(x),
//! ```
//!
//! where `bias_n` is the odd bias `O(f, x)` for odd `n` and the even bias
//! `E(f, x)` for even `n`, and
//!
//! ```text
//! Δ_n(f, x) = (f(-1) - f(x))/(2(x + 1)) + (-1)^n (f(1) - f(x))/(2(x - 1))
//!           + Σ_{k=1}^{n-1} (-1)^k (f(x_k) - f(x))/(x - x_k).
//! ```
//!
//! For `f'` of bounded variation `|Δ_n| <= TV(f')/2`, which gives
//! `n ||B_n f - f|| <= TV(f')/2 + max(||O||, ||E||)`.

use rayon::prelude::*;

use crate::barycentric::{denominator_unchecked, evaluate_unchecked, probe_points, SampledFunction, WeightScheme};
use crate::error::{Error, Result};
use crate::grid::{Parity, UniformGrid};
use crate::limits::bias;
use crate::model::FunctionModel;
use crate::summation::CompensatedSum;

/// Δ_n from precomputed samples and `f(x)`. Zero at nodes.
pub(crate) fn delta_from_samples(samples: &SampledFunction, fx: f64, x: f64) -> f64 {
    let grid = samples.grid();
    if grid.is_node(x) {
        return 0.0;
    }
    let n = grid.n();
    let v = samples.values();
    let mut acc = CompensatedSum::new();
    acc += (v[0] - fx) / (2.0 * (x + 1.0));
    let end = (v[n] - fx) / (2.0 * (x - 1.0));
    acc += if n.is_multiple_of(2) { end } else { -end };
    for (k, &vk) in v.iter().enumerate().take(n).skip(1) {
        let term = (vk - fx) / (x - grid.node(k));
        acc += if k % 2 == 0 { term } else { -term };
    }
    acc.value()
}

/// `Δ_n(f, x)` for `x ∈ [-1, 1]`; exactly 0 at the nodes.
pub fn delta(model: &FunctionModel, n: usize, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    let samples = SampledFunction::from_model(model, n)?;
    Ok(delta_from_samples(&samples, model.eval(x), x))
}

/// `max_j |Δ_n(f, t_j)|` over `probes` midpoints `t_j = -1 + (2j + 1)/probes`.
pub fn delta_sup(model: &FunctionModel, n: usize, probes: usize) -> Result<f64> {
    let samples = SampledFunction::from_model(model, n)?;
    Ok((0..probes)
        .into_par_iter()
        .map(|j| {
            let x = -1.0 + (2 * j + 1) as f64 / probes as f64;
            delta_from_samples(&samples, model.eval(x), x).abs()
        })
        .reduce(|| 0.0, f64::max))
}

/// The three terms of `B_n f - f = Δ_n/D_n + bias/D_n` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    /// `f(x)`, which sets the roundoff level of the error.
    pub value: f64,
    /// `B_n f(x) - f(x)`.
    pub error: f64,
    /// `Δ_n(f, x)/D_n(x)`.
    pub remainder_term: f64,
    /// `bias/D_n(x)` with the bias of the parity of `n`.
    pub bias_term: f64,
}

impl Decomposition {
    pub fn gap(&self) -> f64 {
        (self.error - (self.remainder_term + self.bias_term)).abs()
    }

    /// [`gap`](Self::gap) relative to the largest of `|f(x)|` and the three
    /// terms; 0 when all of them vanish.
    pub fn relative_gap(&self) -> f64 {
        let scale = self
            .value
            .abs()
            .max(self.error.abs())
            .max(self.remainder_term.abs())
            .max(self.bias_term.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.gap() / scale
        }
    }
}

pub fn decompose_error(model: &FunctionModel, n: usize, x: f64) -> Result<Decomposition> {
    let grid = UniformGrid::new(n)?;
    let pos = grid.decompose(x)?;
    if pos.is_node {
        return Err(Error::NodeSingularity { n, x });
    }
    let samples = SampledFunction::from_model(model, n)?;
    let fx = model.eval(x);
    let d = denominator_unchecked(&grid, x);
    Ok(Decomposition {
        value: fx,
        error: evaluate_unchecked(&samples, &WeightScheme::Berrut, x) - fx,
        remainder_term: delta_from_samples(&samples, fx, x) / d,
        bias_term: bias(model, x)?.for_parity(Parity::of(n)) / d,
    })
}

/// `|(B_n f(x) - f(x)) - (Δ_n(f, x) + bias)/D_n(x)|` with the bias of the
/// parity of `n`.
pub fn decomposition_check(model: &FunctionModel, n: usize, x: f64) -> Result<f64> {
    Ok(decompose_error(model, n, x)?.gap())
}

/// Sup norms of the two bias functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasNorms {
    pub odd: f64,
    pub even: f64,
}

impl BiasNorms {
    pub fn max(&self) -> f64 {
        self.odd.max(self.even)
    }
}

/// Bias sup norms over `points` equispaced points of
/// `[-(1 - 1e-6), 1 - 1e-6]` together with any `extra` interior points.
pub fn bias_norms(model: &FunctionModel, points: usize, extra: &[f64]) -> Result<BiasNorms> {
    let edge = 1.0 - 1e-6;
    let points = points.max(2);
    let grid = (0..points).map(|j| -edge + 2.0 * edge * j as f64 / (points - 1) as f64);
    let mut norms = BiasNorms { odd: 0.0, even: 0.0 };
    for x in grid.chain(extra.iter().copied()) {
        let b = bias(model, x)?;
        norms.odd = norms.odd.max(b.odd_bias.abs());
        norms.even = norms.even.max(b.even_bias.abs());
    }
    Ok(norms)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub n: usize,
    /// `max |B_n f - f|` over the probes.
    pub sup_err: f64,
    /// `n * sup_err`.
    pub scaled_err: f64,
    /// `n * max |B_n f - f - bias/D_n|` over the probes.
    pub bias_corrected: f64,
}

fn record(model: &FunctionModel, n: usize, probes: usize) -> Result<ConvergenceRecord> {
    let grid = UniformGrid::new(n)?;
    let samples = SampledFunction::from_model(model, n)?;
    let parity = Parity::of(n);
    let pts = probe_points(probes, n);
    let (sup_err, corrected) = pts
        .par_iter()
        .map(|&x| {
            let err = evaluate_unchecked(&samples, &WeightScheme::Berrut, x) - model.eval(x);
            let b = bias(model, x)?.for_parity(parity);
            let d = denominator_unchecked(&grid, x);
            Ok((err.abs(), (err - b / d).abs()))
        })
        .try_reduce(|| (0.0, 0.0), |p, q| Ok((p.0.max(q.0), p.1.max(q.1))))?;
    let nf = n as f64;
    Ok(ConvergenceRecord {
        n,
        sup_err,
        scaled_err: nf * sup_err,
        bias_corrected: nf * corrected,
    })
}

/// One [`ConvergenceRecord`] per `n`, in the order given. The list must be
/// ascending and of a single parity.
pub fn uniform_study(
    model: &FunctionModel,
    n_list: &[usize],
    parity: Parity,
    probes: usize,
) -> Result<Vec<ConvergenceRecord>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n list must be strictly ascending".into()));
    }
    if let Some(&n) = n_list.iter().find(|&&n| !parity.matches(n)) {
        return Err(Error::InvalidArgument(format!("n = {n} is not {parity}")));
    }
    if probes < 2 {
        return Err(Error::InvalidArgument("need at least 2 probes".into()));
    }
    n_list.par_iter().map(|&n| record(model, n, probes)).collect()
}

/// Both sides of `n ||B_n f - f|| <= TV(f')/2 + max(||O||, ||E||)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvCheck {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl BvCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-6
    }
}

/// The error bound for `f'` of bounded variation on `probes` midpoints, with
/// the bias norms estimated on 2001 points plus the same probes.
pub fn bv_bound_check(model: &FunctionModel, n: usize, probes: usize) -> Result<BvCheck> {
    let tv = model.tv()?;
    let pts = probe_points(probes, n);
    let samples = SampledFunction::from_model(model, n)?;
    let sup = pts
        .par_iter()
        .map(|&x| (evaluate_unchecked(&samples, &WeightScheme::Berrut, x) - model.eval(x)).abs())
        .reduce(|| 0.0, f64::max);
    let norms = bias_norms(model, 2001, &pts)?;
    Ok(BvCheck {
        n,
        lhs: n as f64 * sup,
        rhs: tv / 2.0 + norms.max(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::library;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct oracle: `n (B - f)` rebuilt from separately summed `N` and `D`
    /// and the textbook bias formula, without the shared helpers.
    fn error_by_parts(model: &FunctionModel, n: usize, x: f64) -> (f64, f64) {
        let fx = model.eval(x);
        let mut num = 0.0;
        let mut den = 0.0;
        let mut delta = 0.0;
        for k in 0..=n {
            let xk = 2.0 * k as f64 / n as f64 - 1.0;
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            let fk = model.eval(xk);
            num += s * fk / (x - xk);
            den += s / (x - xk);
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            delta += w * s * (fk - fx) / (x - xk);
        }
        let odd = n % 2 == 1;
        let fm = model.eval(-1.0);
        let fp = model.eval(1.0);
        let b = if odd {
            (fx - fp) / (2.0 * (x - 1.0)) - (fx - fm) / (2.0 * (x + 1.0))
        } else {
            (fp - fx) / (2.0 * (x - 1.0)) + (fm - fx) / (2.0 * (x + 1.0))
        };
        (num / den - fx, (delta + b) / den)
    }

    #[test]
    fn delta_examples() {
        let c = library::const1();
        assert!(delta(&c, 37, 0.123).unwrap().abs() < 1e-14);
        let e = library::exp();
        for k in 0..=10 {
            assert_eq!(delta(&e, 10, 2.0 * k as f64 / 10.0 - 1.0).unwrap(), 0.0);
        }
        let xa = library::xabsx();
        for n in [1, 2, 7, 100, 999, 2000] {
            assert!(delta_sup(&xa, n, 1000).unwrap() <= 1.0 + 1e-9);
        }
        assert!(delta(&e, 10, 1.5).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let q = library::quadratic();
        assert!(decomposition_check(&q, 101, 0.3).unwrap() <= 1e-10);
        let e = library::exp();
        assert!(decomposition_check(&e, 64, -0.77).unwrap() <= 1e-10);
        assert!(matches!(
            decomposition_check(&e, 4, 0.5),
            Err(Error::NodeSingularity { .. })
        ));
        let (lhs, rhs) = error_by_parts(&q, 101, 0.3);
        assert!((lhs - rhs).abs() < 1e-12);
        let parts = decompose_error(&q, 101, 0.3).unwrap();
        assert!((parts.error - lhs).abs() < 1e-15);
        assert!(parts.relative_gap() <= 1e-12);
        let c = decompose_error(&library::const1(), 10, 0.05).unwrap();
        assert_eq!((c.remainder_term, c.bias_term, c.relative_gap()), (0.0, 0.0, 0.0));
        let z = Decomposition {
            value: 0.0,
            error: 0.0,
            remainder_term: 0.0,
            bias_term: 0.0,
        };
        assert_eq!(z.relative_gap(), 0.0);
    }

    #[test]
    fn decomposition_identity_on_random_points() {
        let models = library::all();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let m = &models[rng.gen_range(0..models.len())];
            let n = rng.gen_range(1..=2000);
            let x: f64 = rng.gen_range(-0.9999..0.9999);
            let Ok(r) = decomposition_check(m, n, x) else { continue };
            let samples = SampledFunction::from_model(m, n).unwrap();
            let b = evaluate_unchecked(&samples, &WeightScheme::Berrut, x);
            assert!(r <= 1e-10 * (1.0 + b.abs()), "{} n={n} x={x} r={r}", m.name);
        }
    }

    #[test]
    fn delta_bv_bound() {
        for m in library::bv1() {
            let tv = m.tv().unwrap();
            for n in [3, 10, 64, 257] {
                assert!(delta_sup(&m, n, 997).unwrap() <= tv / 2.0 + 1e-9, "{} n={n}", m.name);
            }
        }
    }

    #[test]
    fn delta_decays() {
        for m in library::ac1() {
            let early = delta_sup(&m, 100, 1000).unwrap();
            let late = delta_sup(&m, 3200, 1000).unwrap();
            assert!(late <= 0.5 * early || late < 1e-10, "{}: {early} {late}", m.name);
        }
    }

    #[test]
    fn bias_norms_below_derivative_sup() {
        for m in library::ac1() {
            let norms = bias_norms(&m, 2001, &[]).unwrap();
            let d = m.derivative_sup(20001).unwrap();
            assert!(norms.odd <= d + 1e-9 && norms.even <= d + 1e-9, "{}", m.name);
        }
    }

    #[test]
    fn study_examples() {
        let c = library::const1();
        for r in uniform_study(&c, &[11, 101], Parity::Odd, 501).unwrap() {
            assert!(r.sup_err <= 1e-13 && r.bias_corrected <= 1e-13 * r.n as f64);
        }
        let e = library::exp();
        let ns = [51, 201, 801, 3201];
        let recs = uniform_study(&e, &ns, Parity::Odd, 2001).unwrap();
        assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), ns);
        assert!(
            recs.windows(2).all(|w| w[1].bias_corrected < w[0].bias_corrected),
            "{recs:?}"
        );
        assert!(recs[3].bias_corrected <= recs[0].bias_corrected / 3.0);
        let rhs = e.tv().unwrap() / 2.0 + bias_norms(&e, 2001, &[]).unwrap().max() + 0.05;
        assert!(recs.iter().all(|r| r.scaled_err <= rhs));

        assert!(uniform_study(&e, &[51, 50], Parity::Odd, 11).is_err());
        assert!(uniform_study(&e, &[50], Parity::Odd, 11).is_err());
    }

    #[test]
    fn bv_bound_examples() {
        let xa = library::xabsx();
        for n in [10, 100, 1000] {
            assert!(bv_bound_check(&xa, n, 2001).unwrap().holds());
        }
        assert!(bv_bound_check(&library::linear(), 17, 2001).unwrap().holds());
        assert!(bv_bound_check(&library::exp(), 500, 2001).unwrap().holds());
        assert!(bv_bound_check(&library::abs(), 10, 101).is_err());
    }
}
