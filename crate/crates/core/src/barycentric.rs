//! Berrut's interpolant and the general second barycentric form on an
//! equispaced grid.
//!
//! ```text
//! N_n(f, x) = Σ (-1)^k f(x_k) / (x - x_k),    D_n(x) = Σ (-1)^k / (x - x_k),
//! B_n(f, x) = N_n(f, x) / D_n(x),             B_n(f, x_k) = f(x_k).
//! ```

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::model::FunctionModel;
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightScheme {
    /// `w_k = (-1)^k`.
    Berrut,
    /// `w_k = (-1)^k` with `|w_0| = |w_n| = 1/2`; the Floater–Hormann `d = 1` weights.
    EndpointHalved,
    /// Arbitrary nonzero weights, one per node.
    Custom(Vec<f64>),
}

impl WeightScheme {
    pub fn weight(&self, n: usize, k: usize) -> f64 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            WeightScheme::Berrut => sign,
            WeightScheme::EndpointHalved if k == 0 || k == n => 0.5 * sign,
            WeightScheme::EndpointHalved => sign,
            WeightScheme::Custom(w) => w[k],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if let WeightScheme::Custom(w) = self {
            if w.len() != n + 1 {
                return Err(Error::InvalidWeights(format!(
                    "expected {} weights, got {}",
                    n + 1,
                    w.len()
                )));
            }
            if let Some(k) = w.iter().position(|&v| v == 0.0 || !v.is_finite()) {
                return Err(Error::InvalidWeights(format!("weight {k} is zero or not finite")));
            }
        }
        Ok(())
    }

    pub fn weights(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|k| self.weight(n, k)).collect()
    }
}

/// Values of a function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a grid with {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = UniformGrid::new(n)?;
        let values = (0..=n).map(|k| f(grid.node(k))).collect();
        Ok(Self { grid, values })
    }

    pub fn from_model(model: &FunctionModel, n: usize) -> Result<Self> {
        Self::from_fn(n, |x| model.eval(x))
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_regular(grid: &UniformGrid, x: f64) -> Result<()> {
    if grid.is_node(x) {
        Err(Error::NodeSingularity { n: grid.n(), x })
    } else {
        Ok(())
    }
}

/// `D_n(x)`. Its sign is `(-1)^iota` and `|D_n(x)| >= n`.
pub fn denominator(n: usize, x: f64) -> Result<f64> {
    let grid = UniformGrid::new(n)?;
    check_regular(&grid, x)?;
    Ok(denominator_unchecked(&grid, x))
}

pub(crate) fn denominator_unchecked(grid: &UniformGrid, x: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for k in 0..=grid.n() {
        let t = 1.0 / (x - grid.node(k));
        acc += if k % 2 == 0 { t } else { -t };
    }
    acc.value()
}

/// `N_n(f, x)`.
pub fn numerator(samples: &SampledFunction, x: f64) -> Result<f64> {
    check_regular(&samples.grid, x)?;
    let grid = samples.grid;
    let mut acc = CompensatedSum::new();
    for (k, &fk) in samples.values.iter().enumerate() {
        let t = fk / (x - grid.node(k));
        acc += if k % 2 == 0 { t } else { -t };
    }
    Ok(acc.value())
}

/// Numerator and denominator of the second barycentric form.
fn barycentric_sums(samples: &SampledFunction, weights: &WeightScheme, x: f64) -> (f64, f64) {
    let grid = samples.grid;
    let n = grid.n();
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (k, &fk) in samples.values.iter().enumerate() {
        // Same term order and rounding as `numerator`/`denominator`, so the
        // Berrut scheme reproduces N_n / D_n exactly.
        let w = weights.weight(n, k);
        let d = x - grid.node(k);
        num += w * (fk / d);
        den += w * (1.0 / d);
    }
    (num.value(), den.value())
}

/// The interpolant at `x ∈ [-1, 1]`. At a node the stored sample is returned.
pub fn evaluate(samples: &SampledFunction, weights: &WeightScheme, x: f64) -> Result<f64> {
    weights.validate(samples.n())?;
    Ok(evaluate_unchecked(samples, weights, x))
}

pub(crate) fn evaluate_unchecked(samples: &SampledFunction, weights: &WeightScheme, x: f64) -> f64 {
    if let Some(k) = samples.grid.node_index(x) {
        return samples.values[k];
    }
    let (num, den) = barycentric_sums(samples, weights, x);
    num / den
}

/// Berrut's interpolant `B_n(f, x)`.
pub fn berrut(samples: &SampledFunction, x: f64) -> f64 {
    evaluate_unchecked(samples, &WeightScheme::Berrut, x)
}

/// `x_j = -1 + (2j + 1)/P`, `j = 0..P`, minus any point that is a node of
/// the grid with `n` intervals.
pub fn probe_points(probes: usize, n: usize) -> Vec<f64> {
    let grid = UniformGrid::new(n.max(1)).expect("n >= 1");
    (0..probes)
        .map(|j| -1.0 + (2 * j + 1) as f64 / probes as f64)
        .filter(|&x| !grid.is_node(x))
        .collect()
}

/// `max |B f - f|` over the probe grid.
pub fn sup_error(model: &FunctionModel, n: usize, weights: &WeightScheme, probes: usize) -> Result<f64> {
    if probes < 2 {
        return Err(Error::InvalidArgument("at least two probe points are needed".into()));
    }
    let samples = SampledFunction::from_model(model, n)?;
    weights.validate(n)?;
    Ok(probe_points(probes, n)
        .par_iter()
        .map(|&x| (evaluate_unchecked(&samples, weights, x) - model.eval(x)).abs())
        .reduce(|| 0.0, f64::max))
}
