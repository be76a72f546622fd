//! Exact arithmetic: half-integers, factorials and binomials over
//! arbitrary-precision rationals, and signed square roots of rationals.

mod factorial;
mod half_int;
mod signed_sqrt;

pub(crate) use factorial::factorial_q;
pub use factorial::{factorial, generalized_binomial, FactorialTable, DEFAULT_FACTORIAL_CAP};
pub use half_int::HalfInt;
pub use num_rational::BigRational;
pub use signed_sqrt::SignedSqrtRational;
