//! Exact arithmetic: prime-field scalars and matrices, and arbitrary-precision
//! rationals.

mod field;
mod rational;

pub use field::{is_prime, FieldElement, FieldMatrix, Rref};
pub use rational::{format_rational, parse_rational, parse_rational_list, rational_serde, Rational};
