//! Berrut's barycentric rational interpolant at the equispaced nodes
//! `x_k = 2k/n - 1` together with the machinery that describes its error:
//! the asymptotics of the denominator `D_n`, the parity-dependent bias
//! functions, the limit sets of `n (B_n f - f)(x)`, the numerator remainder
//! `Δ_n`, and the piecewise-linear construction that produces
//! `log(n)/n`-sized errors for Lipschitz functions.
//!
//! Every evaluation is a pure function of its arguments. Long sums are
//! accumulated with compensated summation so that alternating sums with
//! millions of terms keep their leading digits.
//!
//! ```
//! use berrut_core::barycentric::{evaluate, SampledFunction, WeightScheme};
//!
//! let samples = SampledFunction::from_fn(20, |x| x.exp()).unwrap();
//! let y = evaluate(&samples, &WeightScheme::Berrut, 0.3).unwrap();
//! assert!((y - 0.3f64.exp()).abs() < 0.05);
//! ```

pub mod asymptotics;
pub mod barycentric;
pub mod counterexample;
pub mod error;
pub mod error_analysis;
pub mod grid;
pub mod limits;
pub mod model;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{ExtendedReal, Parity, PositionDecomposition, RationalPoint, UniformGrid};
pub use model::FunctionModel;
