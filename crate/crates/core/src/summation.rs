//! Compensated (Neumaier) summation.
//!
//! Each addition is split into its rounded sum and the exact rounding error
//! (Knuth's two-sum), and the errors are accumulated separately. The result is
//! as accurate as if the sum were computed in twice the working precision and
//! then rounded, which keeps alternating sums such as `D_n` accurate for `n`
//! in the millions.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.err += (self.sum - t) + value;
        } else {
            self.err += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        self.push(rhs);
    }
}

impl Add<f64> for CompensatedSum {
    type Output = CompensatedSum;

    fn add(mut self, rhs: f64) -> Self::Output {
        self.push(rhs);
        self
    }
}

impl From<CompensatedSum> for f64 {
    fn from(s: CompensatedSum) -> Self {
        s.value()
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.push(v);
        }
        acc
    }
}

impl<'a> Sum<&'a f64> for CompensatedSum {
    fn sum<I: Iterator<Item = &'a f64>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().sum::<CompensatedSum>().value()
}
