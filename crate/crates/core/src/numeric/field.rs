use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::rational::Rational;

/// The two ground fields of the laboratory, Q and Q(i).
///
/// Every element embeds into Q(i) through [`Field::to_gaussian`]; the
/// modular and integral machinery works on that embedding so it is shared
/// by both fields.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Short name used in reports: `"Q"` or `"Q(i)"`.
    const NAME: &'static str;

    fn from_int(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_gaussian(&self) -> GaussianRational;
    /// Inverse of the embedding; `None` when `z` does not lie in `Self`.
    fn from_gaussian(z: &GaussianRational) -> Option<Self>;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powu(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Field for BigRational {
    const NAME: &'static str = "Q";

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_gaussian(&self) -> GaussianRational {
        GaussianRational::from_rational(self.clone())
    }
    fn from_gaussian(z: &GaussianRational) -> Option<Self> {
        z.im.is_zero().then(|| z.re.clone())
    }
}
