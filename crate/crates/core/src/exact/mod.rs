//! Exact integer and rational linear algebra.
//!
//! Nothing in this module touches floating point.

mod cyclotomic;
mod forms;
mod linalg;
mod matrix;
mod poly;

pub use cyclotomic::{cyclotomic_factor, cyclotomic_poly, expand_cyclotomic, totient, CyclotomicVerdict};
pub use forms::{fixed_form_space, signature, FormSpace, RatMatrix, Signature};
pub use linalg::{nullspace, rank};
pub use matrix::IntMatrix;
pub use poly::{charpoly, IntPoly};

/// Reduced rational number with positive denominator.
pub type RatScalar = num_rational::BigRational;
