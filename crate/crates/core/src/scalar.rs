//! Scalar abstractions.
//!
//! Probability tensors are generic over [`Prob`], which covers both the
//! floating-point types and exact [`BigRational`]. Anything that takes a
//! logarithm is generic over [`Real`] instead. Exact values are converted to
//! a [`Real`] exactly once, right before entropies or divergences are taken.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive, Zero};

/// A probability value: closed under the field operations and convertible
/// to floating point.
pub trait Prob: Num + Clone + PartialOrd + ToPrimitive + Debug + Send + Sync + 'static {
    /// `true` when arithmetic on this type is exact.
    const EXACT: bool;

    /// Converts to a floating-point scalar, rounding once.
    fn to_real<F: Real>(&self) -> F {
        F::from_f64(self.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan)
    }

    /// Lossy conversion used for diagnostics and float-mode JSON fields.
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Numerator and denominator, for exact types only.
    fn as_ratio(&self) -> Option<(BigInt, BigInt)> {
        None
    }
}

/// Floating-point scalar used for entropies, divergences and lattice tables.
pub trait Real:
    Prob + Float + FromPrimitive + AddAssign + SubAssign + Sum + Display + Default
{
    /// Lifts an `f64` constant (tolerances, fixture values) into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }
}

impl Prob for f64 {
    const EXACT: bool = false;

    fn to_real<F: Real>(&self) -> F {
        F::lit(*self)
    }
}

impl Prob for f32 {
    const EXACT: bool = false;
}

impl Prob for BigRational {
    const EXACT: bool = true;

    fn as_ratio(&self) -> Option<(BigInt, BigInt)> {
        Some((self.numer().clone(), self.denom().clone()))
    }
}

impl Real for f64 {}
impl Real for f32 {}

const PAIRWISE_BLOCK: usize = 8;

/// Pairwise (cascade) summation.
///
/// Rounding error grows as O(log n) instead of the O(n) of a left fold.
/// The split points depend only on the slice length, so the result is
/// deterministic for a fixed input order.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Clone + Zero,
{
    if xs.len() <= PAIRWISE_BLOCK {
        let mut acc = T::zero();
        for x in xs {
            acc = acc + x.clone();
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_sum_on_rationals() {
        let xs: Vec<BigRational> = (1..=37)
            .map(|d| BigRational::new(BigInt::from(1), BigInt::from(d)))
            .collect();
        let folded = xs.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(pairwise_sum(&xs), folded);
    }

    #[test]
    fn pairwise_beats_naive_on_many_small_terms() {
        let n = 1 << 20;
        let xs = vec![0.1_f64; n];
        let naive: f64 = xs.iter().sum();
        let exact = 0.1 * n as f64;
        let pw = pairwise_sum(&xs);
        assert!((pw - exact).abs() <= (naive - exact).abs());
        assert!((pw - exact).abs() < 1e-8);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn rational_to_real_rounds_once() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(third.to_real::<f64>(), 1.0 / 3.0);
        assert_eq!(third.to_real::<f32>(), 1.0_f32 / 3.0);
    }
}
