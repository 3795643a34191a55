use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::rational::{parse_rational, rational_sqrt, Integer, Rational};
use crate::error::{Error, Result};

/// An element `re + im·i` of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Least positive integer `m` with `m·self` in Z[i].
    pub fn denominator(&self) -> Integer {
        self.re.denom().lcm(self.im.denom())
    }

    /// `m·self` as a Gaussian integer, where `m` is [`Self::denominator`].
    pub fn clear_denominator(&self) -> (GaussianInteger, Integer) {
        let m = self.denominator();
        let re = (&self.re * Rational::from_integer(m.clone())).to_integer();
        let im = (&self.im * Rational::from_integer(m.clone())).to_integer();
        (GaussianInteger::new(re, im), m)
    }

    /// Exact square root in Q(i), if one exists. The root returned has
    /// positive real part, or zero real part and nonnegative imaginary part.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let r = rational_sqrt(&self.norm())?;
        let two = Rational::from_integer(2.into());
        let a = rational_sqrt(&((&self.re + &r) / &two))?;
        let b = rational_sqrt(&((&r - &self.re) / &two))?;
        let root = if a.is_zero() {
            GaussianRational::new(a, b)
        } else if self.im.is_negative() {
            GaussianRational::new(a, -b)
        } else {
            GaussianRational::new(a, b)
        };
        debug_assert_eq!(&(root.clone() * root.clone()), self);
        Some(root)
    }
}

/// Decides whether a nonzero Gaussian rational is a root of unity.
///
/// The roots of unity in Q(i) are exactly the units of Z[i].
pub fn is_root_of_unity_gaussian(z: &GaussianRational) -> Result<bool> {
    if z.is_zero() {
        return Err(Error::InvalidInput("zero is not a candidate root of unity".into()));
    }
    let one = Rational::one();
    Ok((z.im.is_zero() && z.re.abs() == one) || (z.re.is_zero() && z.im.abs() == one))
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rational::one();
        let imag = |f: &mut fmt::Formatter<'_>, b: &Rational| {
            if *b == one {
                write!(f, "i")
            } else {
                write!(f, "{b}i")
            }
        };
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-")?;
            }
            return imag(f, &self.im.abs());
        }
        write!(f, "{}{}", self.re, if self.im.is_negative() { "-" } else { "+" })?;
        imag(f, &self.im.abs())
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts the forms written by `Display`: `a`, `bi`, `a+bi`, `a-bi`,
    /// `i`, `-i`, with `a`, `b` rationals `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("not a Gaussian rational: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::from_rational(parse_rational(&t)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        Ok(GaussianRational::new(
            parse_rational(re).map_err(|_| bad())?,
            parse_rational(im).map_err(|_| bad())?,
        ))
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::from_rational(self.re * o.re);
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero in Q(i)");
        if o.im.is_zero() {
            return GaussianRational::new(self.re / &o.re, self.im / &o.re);
        }
        let n = o.norm();
        let num = self * o.conj();
        GaussianRational::new(num.re / &n, num.im / &n)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::from_ints(1, 0)
    }
}

impl Field for GaussianRational {
    const NAME: &'static str = "Q(i)";

    fn from_int(n: i64) -> Self {
        GaussianRational::from_ints(n, 0)
    }
    fn from_rational(q: &Rational) -> Self {
        GaussianRational::from_rational(q.clone())
    }
    fn to_gaussian(&self) -> GaussianRational {
        self.clone()
    }
    fn from_gaussian(z: &GaussianRational) -> Option<Self> {
        Some(z.clone())
    }
}

/// An element of Z[i].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianInteger {
    pub re: Integer,
    pub im: Integer,
}

impl GaussianInteger {
    pub fn new(re: Integer, im: Integer) -> Self {
        GaussianInteger { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianInteger::new(re.into(), im.into())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> Integer {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInteger::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }

    /// Number of bits needed for `max(|re|, |im|)`.
    pub fn bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    /// Euclidean division rounding the exact quotient to the nearest lattice point.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let n = d.norm();
        let t = self.clone() * d.conj();
        let round = |x: &Integer| -> Integer {
            // nearest integer to x/n, n > 0
            let two = BigInt::from(2);
            (x * &two + &n).div_floor(&(&n * &two))
        };
        let q = GaussianInteger::new(round(&t.re), round(&t.im));
        let r = self.clone() - q.clone() * d.clone();
        (q, r)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

impl Add for GaussianInteger {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianInteger::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianInteger {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianInteger::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianInteger {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianInteger::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussianInteger {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianInteger::new(-self.re, -self.im)
    }
}


impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
