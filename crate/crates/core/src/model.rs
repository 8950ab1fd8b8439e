//! Analytic test functions with the metadata the error bounds need.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Regularity classes on `[-1, 1]`. `Ac1` and `Bv1` require `f'` to exist at
/// every point, one-sided at the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionClass {
    /// `f` is Lipschitz.
    Lip1,
    /// `f'` is absolutely continuous.
    Ac1,
    /// `f'` has bounded variation.
    Bv1,
}

#[derive(Clone)]
pub struct FunctionModel {
    pub name: String,
    pub f: RealFn,
    pub f_prime: Option<RealFn>,
    pub f_second: Option<RealFn>,
    /// Total variation of `f'` on `[-1, 1]`.
    pub tv_fprime: Option<f64>,
    pub classes: Vec<FunctionClass>,
}

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel")
            .field("name", &self.name)
            .field("tv_fprime", &self.tv_fprime)
            .field("classes", &self.classes)
            .finish_non_exhaustive()
    }
}

impl FunctionModel {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
            f_prime: None,
            f_second: None,
            tv_fprime: None,
            classes: vec![],
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f_prime = Some(Arc::new(df));
        self
    }

    pub fn with_second_derivative(mut self, d2f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f_second = Some(Arc::new(d2f));
        self
    }

    pub fn with_tv(mut self, tv: f64) -> Self {
        self.tv_fprime = Some(tv);
        self
    }

    pub fn with_classes(mut self, classes: &[FunctionClass]) -> Self {
        self.classes = classes.to_vec();
        self.classes.sort();
        self.classes.dedup();
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> Option<f64> {
        self.f_prime.as_ref().map(|df| df(x))
    }

    pub fn has_class(&self, class: FunctionClass) -> bool {
        self.classes.contains(&class)
    }

    pub fn tv(&self) -> Result<f64> {
        self.tv_fprime.ok_or_else(|| Error::MissingMetadata {
            model: self.name.clone(),
            what: "total variation of f'",
        })
    }

    /// Checks the metadata invariants: variation dominates the endpoint jump
    /// of `f'`, and `AC1`/`BV1` models carry a derivative and its variation.
    pub fn validate(&self) -> Result<()> {
        let needs_tv = self.has_class(FunctionClass::Ac1) || self.has_class(FunctionClass::Bv1);
        if needs_tv && (self.tv_fprime.is_none() || self.f_prime.is_none()) {
            return Err(Error::MissingMetadata {
                model: self.name.clone(),
                what: "AC1/BV1 models need f' and its total variation",
            });
        }
        if let (Some(tv), Some(df)) = (self.tv_fprime, &self.f_prime) {
            if tv < 0.0 || tv < (df(1.0) - df(-1.0)).abs() - 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "model `{}`: total variation {tv} is smaller than |f'(1) - f'(-1)|",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// `max |f'|` over `probes` equispaced points of `[-1, 1]`.
    pub fn derivative_sup(&self, probes: usize) -> Option<f64> {
        let df = self.f_prime.as_ref()?;
        let probes = probes.max(2);
        Some(
            (0..probes)
                .map(|j| df(-1.0 + 2.0 * j as f64 / (probes - 1) as f64).abs())
                .fold(0.0, f64::max),
        )
    }
}

pub mod library {
    //! Built-in models. Variations of `f'` are computed by hand:
    //!
    //! * `quadratic`: `f' = 2x`, variation 4.
    //! * `xabsx`: `f = x|x|/2`, `f' = |x|`, variation 2.
    //! * `exp`: `f' = e^x` is increasing, variation `e - 1/e`.
    //! * `sinpi`: `f' = π cos(πx)`, variation `∫|f''| = π² ∫|sin πx| = 4π`.
    //! * `runge`: `f = 1/(1 + 25x²)`, `f'` has extrema `∓15√3/8` at
    //!   `x = ±1/√75` and endpoint values `∓25/338`, variation `7.5√3 - 25/169`.
    //! * `abs`: `|x|` is only Lipschitz; `f'` does not exist at 0.

    use std::f64::consts::{E, PI};

    use super::{FunctionClass::*, FunctionModel};

    pub const NAMES: [&str; 8] = ["const1", "linear", "quadratic", "xabsx", "exp", "sinpi", "runge", "abs"];

    pub fn const1() -> FunctionModel {
        FunctionModel::new("const1", |_| 1.0)
            .with_derivative(|_| 0.0)
            .with_second_derivative(|_| 0.0)
            .with_tv(0.0)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn linear() -> FunctionModel {
        FunctionModel::new("linear", |x| 0.75 * x + 0.25)
            .with_derivative(|_| 0.75)
            .with_second_derivative(|_| 0.0)
            .with_tv(0.0)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn quadratic() -> FunctionModel {
        FunctionModel::new("quadratic", |x| x * x)
            .with_derivative(|x| 2.0 * x)
            .with_second_derivative(|_| 2.0)
            .with_tv(4.0)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn xabsx() -> FunctionModel {
        FunctionModel::new("xabsx", |x| x * x.abs() / 2.0)
            .with_derivative(f64::abs)
            .with_tv(2.0)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn exp() -> FunctionModel {
        FunctionModel::new("exp", f64::exp)
            .with_derivative(f64::exp)
            .with_second_derivative(f64::exp)
            .with_tv(E - 1.0 / E)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn sinpi() -> FunctionModel {
        FunctionModel::new("sinpi", |x| (PI * x).sin())
            .with_derivative(|x| PI * (PI * x).cos())
            .with_second_derivative(|x| -PI * PI * (PI * x).sin())
            .with_tv(4.0 * PI)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn runge() -> FunctionModel {
        FunctionModel::new("runge", |x| 1.0 / (1.0 + 25.0 * x * x))
            .with_derivative(|x| {
                let d = 1.0 + 25.0 * x * x;
                -50.0 * x / (d * d)
            })
            .with_second_derivative(|x| {
                let d = 1.0 + 25.0 * x * x;
                50.0 * (75.0 * x * x - 1.0) / (d * d * d)
            })
            .with_tv(7.5 * 3f64.sqrt() - 25.0 / 169.0)
            .with_classes(&[Lip1, Ac1, Bv1])
    }

    pub fn abs() -> FunctionModel {
        FunctionModel::new("abs", f64::abs).with_classes(&[Lip1])
    }

    pub fn by_name(name: &str) -> Option<FunctionModel> {
        Some(match name {
            "const1" => const1(),
            "linear" => linear(),
            "quadratic" => quadratic(),
            "xabsx" => xabsx(),
            "exp" => exp(),
            "sinpi" => sinpi(),
            "runge" => runge(),
            "abs" => abs(),
            _ => return None,
        })
    }

    pub fn all() -> Vec<FunctionModel> {
        NAMES.iter().filter_map(|n| by_name(n)).collect()
    }

    /// Library models tagged `BV1`.
    pub fn bv1() -> Vec<FunctionModel> {
        all().into_iter().filter(|m| m.has_class(Bv1)).collect()
    }

    /// Library models tagged `AC1`.
    pub fn ac1() -> Vec<FunctionModel> {
        all().into_iter().filter(|m| m.has_class(Ac1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Total variation of `f'` by a fine Riemann sum of `|f''|`, or of
    /// successive differences of `f'` when `f''` is absent.
    fn numeric_tv(model: &FunctionModel) -> f64 {
        let df = model.f_prime.as_ref().unwrap();
        let n = 400_000;
        let mut tv = 0.0;
        let mut prev = df(-1.0);
        for i in 1..=n {
            let cur = df(-1.0 + 2.0 * i as f64 / n as f64);
            tv += (cur - prev).abs();
            prev = cur;
        }
        tv
    }

    #[test]
    fn library_metadata_is_consistent() {
        for model in library::all() {
            model.validate().unwrap();
            if let Some(tv) = model.tv_fprime {
                let numeric = numeric_tv(&model);
                assert!((numeric - tv).abs() < 1e-6, "{}: {numeric} vs {tv}", model.name);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for model in library::all() {
            let Some(df) = model.f_prime.clone() else { continue };
            for &x in &[-0.9, -0.31, 0.2, 0.77] {
                let h = 1e-6;
                let fd = (model.eval(x + h) - model.eval(x - h)) / (2.0 * h);
                assert!((fd - df(x)).abs() < 1e-6, "{} at {x}", model.name);
            }
        }
    }

    #[test]
    fn missing_tv_is_reported() {
        let m = library::abs();
        assert!(matches!(m.tv(), Err(Error::MissingMetadata { .. })));
        let bad = FunctionModel::new("bad", |x| x).with_classes(&[FunctionClass::Bv1]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn lookup_by_name() {
        assert!(library::by_name("exp").is_some());
        assert!(library::by_name("nope").is_none());
        assert_eq!(library::all().len(), library::NAMES.len());
        assert!(library::bv1().iter().all(|m| m.tv_fprime.is_some()));
    }
}
