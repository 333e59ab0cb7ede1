//! Floating-point abstraction for the statistical kernels.
//!
//! All analytic formulas and samplers are generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. Double-precision aliases of the public
//! types live at the crate root.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating-point scalar used throughout the crate.
///
/// Besides the arithmetic supplied by `num-traits`, the trait carries one
/// sampling hook, [`Scalar::standard_normal`], so generic code does not have
/// to thread `rand_distr` distribution bounds through every signature.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// One draw from the standard normal distribution N(0, 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

/// Converts an `f64` constant into the working scalar.
pub(crate) fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Compensated (Neumaier) summation. Robust against the cancellation-heavy
/// reductions in the covariance algebra, and independent of any parallel
/// batching that produced the inputs.
pub(crate) fn neumaier_sum<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut compensation = T::zero();
    for value in values {
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}
