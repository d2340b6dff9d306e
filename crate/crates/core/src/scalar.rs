//! Scalar abstractions shared by polynomials, binomial sums and the simplex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::Debug;

/// A field-like scalar: enough for evaluating polynomials and binomial sums.
///
/// Implemented for `f32`, `f64` and exact [`BigRational`].
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Exact conversion of a ratio of integers.
    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Integer power by repeated squaring.
    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            exp >>= 1;
        }
        acc
    }
}

impl Scalar for f32 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Floating-point scalar used by the simplex tableau.
pub trait LpFloat: Float + Scalar + std::iter::Sum {
    /// Default pivoting tolerance for this precision.
    fn pivot_tol() -> Self;
}

impl LpFloat for f32 {
    fn pivot_tol() -> Self {
        1e-5
    }
}

impl LpFloat for f64 {
    fn pivot_tol() -> Self {
        1e-9
    }
}

/// Neumaier (improved Kahan) summation in `f64`.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let xs = [1e16, 1.0, -1e16];
        let naive: f64 = xs.iter().sum();
        let comp: CompensatedSum = xs.iter().copied().collect();
        assert_eq!(naive, 0.0);
        assert_eq!(comp.value(), 1.0);
    }

    #[test]
    fn powu_agrees_across_scalars() {
        let r = BigRational::ratio(3, 7).powu(5);
        assert_eq!(r, BigRational::ratio(243, 16807));
        assert!((f64::ratio(3, 7).powu(5) - 243.0 / 16807.0).abs() < 1e-15);
    }
}
