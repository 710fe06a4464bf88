//! Correlation functions of the point processes attached to z-measures on
//! partitions: exact finite-n combinatorics, the Lauricella F_B machinery
//! behind the limit correlation functions, and the lifted Whittaker kernel.

pub mod error;
pub mod scalar;
pub mod special_fn;
pub mod partitions_chars;
pub mod lauricella;
pub mod correlation;
pub mod lifted_kernel;
pub mod verify_harness;

pub use error::{Error, Result};
pub use special_fn::{EvalResult, Method, QuadratureSpec};
pub use partitions_chars::{Partition, Series, ZMeasure, ZPair, ZParams};

/// Exact z-measure for rational `z + z'` and `z z'`.
pub type ExactZMeasure = ZMeasure<Rational>;
pub type FloatZMeasure = ZMeasure<f64>;

pub type Complex = num_complex::Complex64;
pub type Rational = num_rational::BigRational;
