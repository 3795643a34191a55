//! Exact scalar arithmetic: integers, rationals, Gaussian rationals and
//! capped-relative-precision p-adic numbers, plus the multi-modular
//! machinery used to certify identities between very large integers.

mod field;
mod gaussian;
pub mod modular;
mod padic;
pub(crate) mod rational;

pub use field::Field;
pub use gaussian::{is_root_of_unity_gaussian, GaussianInteger, GaussianRational};
pub use padic::{nth_root_padic, padic_from_rational, PadicNumber};
pub use rational::{
    int, parse_rational, rat, rational_sqrt, valuation_of_integer, valuation_of_rational, Integer,
    Rational,
};
