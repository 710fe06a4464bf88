//! Scalar abstraction for the exact layer (z-measure weights, controlling
//! moments, Cauchy determinants). Anything that is a field with conversions
//! from small integers works: `f64` and `BigRational` are the two in use.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

pub trait Field: Clone + Num + Signed + FromPrimitive + std::fmt::Debug {
    fn from_bigint(v: &BigInt) -> Self;
}

impl Field for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        use num_traits::ToPrimitive;
        v.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

pub(crate) fn int<T: Field>(k: i64) -> T {
    T::from_i64(k).expect("small integer is representable")
}
