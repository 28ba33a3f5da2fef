//! Scalar abstractions.
//!
//! Estimator arithmetic is written against [`Real`] (implemented for `f32` and
//! `f64`). Exact outcome probabilities are accumulated in any [`Probability`],
//! which is implemented for the floats and for arbitrary-precision rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};

/// Floating-point scalar used by the estimators.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits in a float")
    }

    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal fits")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A field in which outcome probabilities can be summed.
pub trait Probability: Clone + PartialOrd + Debug + Zero + One {
    /// Converts a probability given as an `f64`. Rationals take the exact
    /// binary value of the float, so no rounding happens here.
    fn from_f64(x: f64) -> Self;
    fn from_count(c: u64) -> Self;
    /// `num / den`, exact for rationals.
    fn from_ratio(num: u64, den: u64) -> Self {
        Self::from_count(num).over(&Self::from_count(den))
    }
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn over(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
}

macro_rules! float_probability {
    ($t:ty) => {
        impl Probability for $t {
            fn from_f64(x: f64) -> Self {
                x as $t
            }
            fn from_count(c: u64) -> Self {
                c as $t
            }
            fn plus(&self, other: &Self) -> Self {
                self + other
            }
            fn minus(&self, other: &Self) -> Self {
                self - other
            }
            fn times(&self, other: &Self) -> Self {
                self * other
            }
            fn over(&self, other: &Self) -> Self {
                self / other
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_probability!(f32);
float_probability!(f64);

impl Probability for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("probability must be finite")
    }
    fn from_count(c: u64) -> Self {
        BigRational::from_integer(BigInt::from(c))
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `base^exp` by repeated squaring in any [`Probability`].
pub fn pow<P: Probability>(base: &P, mut exp: u32) -> P {
    let mut acc = P::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc.times(&sq);
        }
        sq = sq.times(&sq);
        exp >>= 1;
    }
    acc
}

/// Point masses of `Bi(m, tau)` for `0..=m`.
pub fn binomial_pmf<P: Probability>(m: usize, tau: &P) -> Vec<P> {
    let q = P::one().minus(tau);
    let mut out = Vec::with_capacity(m + 1);
    let mut binom = P::one();
    for j in 0..=m {
        if j > 0 {
            binom = binom
                .times(&P::from_count((m - j + 1) as u64))
                .over(&P::from_count(j as u64));
        }
        out.push(binom.times(&pow(tau, j as u32)).times(&pow(&q, (m - j) as u32)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_pmf_sums_to_one_exactly() {
        let tau = <BigRational as Probability>::from_f64(0.3);
        let pmf = binomial_pmf(7, &tau);
        let total = pmf.iter().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(total, BigRational::one());
    }

    #[test]
    fn binomial_half_two() {
        let pmf = binomial_pmf(2, &0.5f64);
        assert_eq!(pmf, vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn pow_matches_powi() {
        assert_eq!(pow(&0.5f64, 10), 0.5f64.powi(10));
        assert_eq!(pow(&3.0f32, 0), 1.0);
    }
}
