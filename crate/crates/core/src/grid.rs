//! Equispaced nodes on `[-1, 1]`, node membership, and the position of a
//! point relative to the grid.
//!
//! A point `x` strictly between two nodes is described by the index `iota`
//! of the node to its left and the normalised offset `rho ∈ (-1, 1)`:
//!
//! ```text
//! iota = floor(n (x + 1) / 2),     rho = n (x - x_iota) - 1,
//! x    = (2 iota + rho + 1) / n - 1.
//! ```
//!
//! Both a floating-point and an exact rational version are provided. The
//! rational one works with `x + 1 = a / b` so that membership and the offset
//! are decided with integer arithmetic only.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn matches(self, n: usize) -> bool {
        Parity::of(n) == self
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `n + 1` equally spaced nodes `x_k = 2k/n - 1`, `k = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UniformGrid {
    pub(crate) n: usize,
}

impl UniformGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { n })
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `x_k = 2k/n - 1`. The endpoints are exactly `-1` and `1`.
    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        (2 * k) as f64 / self.n as f64 - 1.0
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.node(k)).collect()
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.n as f64
    }

    /// Index of the node equal to `x` (bitwise), if any.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        if !x.is_finite() {
            return None;
        }
        let guess = (self.n as f64 * (x + 1.0) / 2.0).round();
        if guess < -1.0 || guess > self.n as f64 + 1.0 {
            return None;
        }
        let guess = guess as i64;
        (guess - 1..=guess + 1)
            .filter(|&k| k >= 0 && k as usize <= self.n)
            .map(|k| k as usize)
            .find(|&k| self.node(k) == x)
    }

    pub fn is_node(&self, x: f64) -> bool {
        self.node_index(x).is_some()
    }

    /// Floating-point position decomposition of `x ∈ (-1, 1)`.
    ///
    /// Node membership is exact equality with a computed node; there is no
    /// snapping. A node `x_k` is reported with `iota = k`, `rho = -1`, which
    /// still satisfies the reconstruction identity.
    pub fn decompose(&self, x: f64) -> Result<PositionDecomposition> {
        if !(x > -1.0 && x < 1.0) {
            return Err(Error::OutOfDomain(x));
        }
        let n = self.n;
        let t = (n as f64 * (x + 1.0) / 2.0).floor();
        let mut iota = (t.max(0.0) as usize).min(n - 1);
        // The floor may be off by one within roundoff of a node; the exact
        // comparisons below place x in the cell [x_iota, x_{iota+1}).
        while iota > 0 && x < self.node(iota) {
            iota -= 1;
        }
        while iota + 1 < n && x >= self.node(iota + 1) {
            iota += 1;
        }
        let left = self.node(iota);
        let right = self.node(iota + 1);
        let is_node = x == left || x == right;
        if x == right {
            iota += 1;
        }
        let left = if x == right { right } else { left };
        let left_gap = n as f64 * (x - left);
        let right_gap = if is_node { 2.0 } else { n as f64 * (right - x) };
        Ok(PositionDecomposition {
            iota,
            rho: left_gap - 1.0,
            is_node,
            left_gap,
            right_gap,
        })
    }

    /// Exact position decomposition of a rational point `x + 1 = a/b`.
    pub fn decompose_rational(&self, x: RationalPoint) -> ExactDecomposition {
        let n = self.n as i128;
        let a = x.num as i128;
        let b = x.den as i128;
        let na = n * a;
        let iota = na / (2 * b);
        let is_node = na % (2 * b) == 0;
        let rho = Ratio::new(na - (2 * iota + 1) * b, b);
        ExactDecomposition {
            iota: iota as usize,
            rho,
            is_node,
        }
    }
}

/// Position of a point relative to a grid, in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionDecomposition {
    pub iota: usize,
    pub rho: f64,
    pub is_node: bool,
    /// `n (x - x_iota) = 1 + rho`, computed without cancellation.
    pub left_gap: f64,
    /// `n (x_{iota+1} - x) = 1 - rho`, computed without cancellation.
    pub right_gap: f64,
}

impl PositionDecomposition {
    /// `1 - rho^2`, accurate even when `|rho|` is close to one.
    pub fn one_minus_rho_sq(&self) -> f64 {
        self.left_gap * self.right_gap
    }

    /// `(-1)^iota`.
    pub fn sign(&self) -> f64 {
        if self.iota.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn reconstruct(&self, n: usize) -> f64 {
        (2.0 * self.iota as f64 + self.rho + 1.0) / n as f64 - 1.0
    }
}

/// Position of a rational point relative to a grid, in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactDecomposition {
    pub iota: usize,
    pub rho: Ratio<i128>,
    pub is_node: bool,
}

impl ExactDecomposition {
    pub fn rho_f64(&self) -> f64 {
        *self.rho.numer() as f64 / *self.rho.denom() as f64
    }

    pub fn sign(&self) -> i32 {
        if self.iota.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Nodes of the grid with `n` intervals.
pub fn nodes(n: usize) -> Result<Vec<f64>> {
    Ok(UniformGrid::new(n)?.nodes())
}

pub fn decompose(n: usize, x: f64) -> Result<PositionDecomposition> {
    UniformGrid::new(n)?.decompose(x)
}

pub fn decompose_rational(n: usize, x: RationalPoint) -> Result<ExactDecomposition> {
    Ok(UniformGrid::new(n)?.decompose_rational(x))
}

/// Which of the three parity patterns a reduced fraction `x + 1 = a/b` has.
///
/// The fields are the `(p, q)` pair used by the corresponding limit-set
/// formula: `a = p, b = q` both odd; `a = 2p, b = q`; or `a = p, b = 2q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalClass {
    BothOdd { p: i64, q: i64 },
    EvenNumerator { p: i64, q: i64 },
    EvenDenominator { p: i64, q: i64 },
}

/// A rational point `x ∈ (-1, 1)` stored as `x + 1 = num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    num: i64,
    den: i64,
}

impl RationalPoint {
    /// Strict constructor: `num/den` must already be in lowest terms.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        let invalid = |reason| Error::InvalidRational { num, den, reason };
        if den <= 0 {
            return Err(invalid("denominator must be positive"));
        }
        if num.gcd(&den) != 1 {
            return Err(invalid("not in lowest terms"));
        }
        if num <= 0 || num >= 2 * den {
            return Err(invalid("x = num/den - 1 must lie in (-1, 1)"));
        }
        Ok(Self { num, den })
    }

    /// Reduces `num/den` before validating.
    pub fn reduced(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational {
                num,
                den,
                reason: "denominator must be positive",
            });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Self::new(num, den)
    }

    /// The point `x` itself, `x = p/q - 1` for integers `p, q`.
    pub fn from_x(p: i64, q: i64) -> Result<Self> {
        Self::reduced(p + q, q)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64 - 1.0
    }

    pub fn class(&self) -> RationalClass {
        match (self.num % 2 == 0, self.den % 2 == 0) {
            (false, false) => RationalClass::BothOdd {
                p: self.num,
                q: self.den,
            },
            (true, false) => RationalClass::EvenNumerator {
                p: self.num / 2,
                q: self.den,
            },
            (false, true) => RationalClass::EvenDenominator {
                p: self.num,
                q: self.den / 2,
            },
            (true, true) => unreachable!("lowest terms"),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `ℝ ∪ {-∞, +∞}` with the usual total order. Finite values are never NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    /// Maps `±inf` to the infinite variants. Panics on NaN.
    pub fn from_f64(v: f64) -> Self {
        assert!(!v.is_nan(), "NaN is not an extended real");
        if v == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else if v == f64::NEG_INFINITY {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(v)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn abs(self) -> Self {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v.abs()),
            _ => ExtendedReal::PosInfinity,
        }
    }
}

impl Eq for ExtendedReal {}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_f64()
            .partial_cmp(&other.to_f64())
            .expect("extended reals are never NaN")
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::from_f64(v)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInfinity => f.write_str("-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_grids() {
        assert_eq!(nodes(2).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(nodes(4).unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!((UniformGrid::new(5).unwrap().node(2) + 0.2).abs() < 1e-16);
        assert_eq!(nodes(0), Err(Error::EmptyGrid));
    }

    #[test]
    fn endpoints_are_exact() {
        for n in 1..500 {
            let g = UniformGrid::new(n).unwrap();
            assert_eq!(g.node(0), -1.0);
            assert_eq!(g.node(n), 1.0);
            assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(5, 0.0).unwrap();
        assert_eq!(d.iota, 2);
        assert!(d.rho.abs() < 1e-15);
        assert!(!d.is_node);

        let d = decompose(10, 0.35).unwrap();
        assert_eq!(d.iota, 6);
        assert!((d.rho - 0.5).abs() < 1e-14);

        assert!(decompose(4, 0.0).unwrap().is_node);
        assert_eq!(decompose(4, 1.0), Err(Error::OutOfDomain(1.0)));
        assert_eq!(decompose(4, -1.0), Err(Error::OutOfDomain(-1.0)));
    }

    #[test]
    fn decompose_rational_examples() {
        let x = RationalPoint::new(1, 3).unwrap();
        assert!(decompose_rational(6, x).unwrap().is_node);

        let d = decompose_rational(5, x).unwrap();
        assert_eq!(d.iota, 0);
        assert_eq!(d.rho, Ratio::new(2, 3));
        assert!(!d.is_node);

        let d = decompose_rational(7, RationalPoint::new(1, 2).unwrap()).unwrap();
        assert_eq!(d.iota, 1);
        assert_eq!(d.rho, Ratio::new(1, 2));
    }

    #[test]
    fn rational_point_validation() {
        assert!(RationalPoint::new(2, 4).is_err());
        assert!(RationalPoint::new(0, 1).is_err());
        assert!(RationalPoint::new(2, 1).is_err());
        assert!(RationalPoint::new(1, -3).is_err());
        assert_eq!(RationalPoint::reduced(2, 4).unwrap(), RationalPoint::new(1, 2).unwrap());
        assert_eq!(RationalPoint::from_x(-2, 3).unwrap(), RationalPoint::new(1, 3).unwrap());
    }

    #[test]
    fn rational_classes() {
        use RationalClass::*;
        assert_eq!(RationalPoint::new(1, 1).unwrap().class(), BothOdd { p: 1, q: 1 });
        assert_eq!(RationalPoint::new(2, 3).unwrap().class(), EvenNumerator { p: 1, q: 3 });
        assert_eq!(
            RationalPoint::new(3, 4).unwrap().class(),
            EvenDenominator { p: 3, q: 2 }
        );
    }

    #[test]
    fn extended_real_order() {
        let mut v = vec![
            ExtendedReal::PosInfinity,
            ExtendedReal::Finite(1.0),
            ExtendedReal::NegInfinity,
            ExtendedReal::Finite(-3.0),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ExtendedReal::NegInfinity,
                ExtendedReal::Finite(-3.0),
                ExtendedReal::Finite(1.0),
                ExtendedReal::PosInfinity
            ]
        );
        assert_eq!(
            ExtendedReal::Finite(0.0).cmp(&ExtendedReal::Finite(-0.0)),
            Ordering::Equal
        );
        assert_eq!(ExtendedReal::from(f64::INFINITY), ExtendedReal::PosInfinity);
    }

    #[test]
    fn irrational_representatives_are_never_nodes() {
        let xs = [
            std::f64::consts::SQRT_2 - 1.0,
            1.0 / std::f64::consts::PI,
            std::f64::consts::E - 2.5,
        ];
        for n in 1..=5000 {
            for &x in &xs {
                assert!(!decompose(n, x).unwrap().is_node);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn reconstruction(n in 1usize..=10_000, x in -0.999_999f64..0.999_999) {
            let d = decompose(n, x).unwrap();
            prop_assume!(!d.is_node);
            prop_assert!(d.iota < n);
            prop_assert!(d.rho > -1.0 && d.rho < 1.0);
            let back = d.reconstruct(n);
            prop_assert!((back - x).abs() <= 8.0 * f64::EPSILON * x.abs().max(1.0),
                "n={} x={} back={}", n, x, back);
        }

        #[test]
        fn float_and_exact_paths_agree(n in 1usize..=1000, den in 1i64..=1000, num_frac in 0.0f64..1.0) {
            let num = 1 + ((2 * den - 2) as f64 * num_frac) as i64;
            let r = RationalPoint::reduced(num, den).unwrap();
            let exact = decompose_rational(n, r).unwrap();
            let float = decompose(n, r.value()).unwrap();
            prop_assert_eq!(exact.is_node, float.is_node);
            if !exact.is_node {
                prop_assert_eq!(exact.iota, float.iota);
                prop_assert!((exact.rho_f64() - float.rho).abs() < 1e-12);
            }
        }
    }
}
