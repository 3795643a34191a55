use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::rational::{valuation_of_integer, Integer, Rational};
use crate::error::{Error, Result};

/// A p-adic number with exact valuation and a unit part known modulo
/// `p^precision`.
///
/// Besides exact zero there is an inexact zero `O(p^k)`: the result of a
/// cancellation that left no significant digits. Its valuation is unknown
/// (only bounded below by `k`), and asking for it raises `PrecisionLoss`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PadicNumber {
    prime: u64,
    repr: Repr,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    Zero,
    Approx { abs_prec: i64 },
    Unit { valuation: i64, unit: Integer, precision: u32 },
}

fn pow_p(p: u64, k: u32) -> Integer {
    num_traits::pow(BigInt::from(p), k as usize)
}

impl PadicNumber {
    pub fn zero(p: u64) -> Self {
        PadicNumber { prime: p, repr: Repr::Zero }
    }

    /// The inexact zero `O(p^k)`.
    pub fn approx_zero(p: u64, k: i64) -> Self {
        PadicNumber { prime: p, repr: Repr::Approx { abs_prec: k } }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_unit(p, 0, BigInt::one(), precision)
    }

    pub fn from_int(n: i64, p: u64, precision: u32) -> Self {
        padic_from_rational(&Rational::from_integer(n.into()), p, precision)
    }

    /// `p^valuation · unit`, with `unit` reduced modulo `p^precision`.
    /// Panics if `unit` is divisible by `p` or `precision == 0`.
    pub fn from_unit(p: u64, valuation: i64, unit: Integer, precision: u32) -> Self {
        assert!(precision > 0, "precision must be positive");
        let unit = unit.mod_floor(&pow_p(p, precision));
        assert!(!(&unit % p).is_zero(), "unit part divisible by p");
        PadicNumber { prime: p, repr: Repr::Unit { valuation, unit, precision } }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True for exact zero and for `O(p^k)`.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    /// `Some(v)` for certified nonzero values, `None` for exact zero.
    pub fn valuation(&self) -> Result<Option<i64>> {
        match &self.repr {
            Repr::Zero => Ok(None),
            Repr::Approx { abs_prec } => Err(Error::PrecisionLoss(format!(
                "valuation of an inexact zero O({}^{abs_prec})",
                self.prime
            ))),
            Repr::Unit { valuation, .. } => Ok(Some(*valuation)),
        }
    }

    /// A lower bound for the valuation, `None` meaning +infinity. Exact for
    /// certified nonzero values.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Approx { abs_prec } => Some(*abs_prec),
            Repr::Unit { valuation, .. } => Some(*valuation),
        }
    }

    /// Absolute precision: the value is known modulo `p^k`. `None` for exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Approx { abs_prec } => Some(*abs_prec),
            Repr::Unit { valuation, precision, .. } => Some(valuation + *precision as i64),
        }
    }

    /// Relative precision of a certified nonzero value.
    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { precision, .. } => Some(*precision),
            _ => None,
        }
    }

    pub fn unit_part(&self) -> Option<&Integer> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Reduces relative precision to at most `precision` digits.
    pub fn truncate(&self, precision: u32) -> Self {
        match &self.repr {
            Repr::Unit { valuation, unit, precision: n } if *n > precision && precision > 0 => {
                Self::from_unit(self.prime, *valuation, unit.clone(), precision)
            }
            _ => self.clone(),
        }
    }

    /// Caps the absolute precision at `k`: digits at or beyond `p^k` are dropped.
    pub fn cap_absolute(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self::approx_zero(self.prime, k),
            Repr::Approx { abs_prec } => Self::approx_zero(self.prime, (*abs_prec).min(k)),
            Repr::Unit { valuation, unit, precision } => {
                if k <= *valuation {
                    Self::approx_zero(self.prime, k)
                } else {
                    let n = (*precision as i64).min(k - valuation) as u32;
                    Self::from_unit(self.prime, *valuation, unit.clone(), n)
                }
            }
        }
    }

    /// The integer representative in `[0, p^(v+N))` scaled by `p^v`, valid when
    /// the valuation is nonnegative; `Some(0)` for zeros of nonnegative precision.
    pub fn to_integer_rep(&self) -> Option<Integer> {
        match &self.repr {
            Repr::Zero => Some(Integer::zero()),
            Repr::Approx { abs_prec } => (*abs_prec >= 0).then(Integer::zero),
            Repr::Unit { valuation, unit, .. } => {
                (*valuation >= 0).then(|| unit * pow_p(self.prime, *valuation as u32))
            }
        }
    }

    /// Whether `x ≡ y` to the common precision of both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_indistinguishable_from_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Approx { .. } => Err(Error::PrecisionLoss("inverse of an inexact zero".into())),
            Repr::Unit { valuation, unit, precision } => {
                let m = pow_p(self.prime, *precision);
                let inv = mod_inverse(unit, &m).expect("unit is invertible");
                Ok(Self::from_unit(self.prime, -valuation, inv, *precision))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    /// `self^e`; `x^0` is 1 at the relative precision of `x` (64 digits for zeros).
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = match &self.repr {
            Repr::Unit { precision, .. } => Self::one(self.prime, *precision),
            _ if e == 0 => return Self::one(self.prime, 64),
            Repr::Approx { abs_prec } => return Self::approx_zero(self.prime, abs_prec * e as i64),
            Repr::Zero => return self.clone(),
        };
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

    /// Scales by `p^k` without touching the unit part.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::Zero => {}
            Repr::Approx { abs_prec } => *abs_prec += k,
            Repr::Unit { valuation, .. } => *valuation += k,
        }
        out
    }

    /// The Teichmüller representative of `a mod p`: the unique `(p−1)`-th
    /// root of unity congruent to `a`. Panics if `p | a`.
    pub fn teichmuller(a: i64, p: u64, precision: u32) -> Self {
        let m = pow_p(p, precision);
        let mut w = BigInt::from(a).mod_floor(&m);
        assert!(!(&w % p).is_zero(), "Teichmüller lift of a multiple of p");
        // w ↦ w^p converges to the lift, gaining a digit per step
        for _ in 0..=precision {
            w = w.modpow(&BigInt::from(p), &m);
        }
        Self::from_unit(p, 0, w, precision)
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixing p-adic numbers of different primes");
    }
}

pub(crate) fn mod_inverse(a: &Integer, m: &Integer) -> Option<Integer> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// The `p`-adic expansion of a rational number to relative precision `n`.
pub fn padic_from_rational(q: &Rational, p: u64, n: u32) -> PadicNumber {
    if q.is_zero() {
        return PadicNumber::zero(p);
    }
    let a = valuation_of_integer(q.numer(), p);
    let b = valuation_of_integer(q.denom(), p);
    let num = q.numer() / pow_p(p, a);
    let den = q.denom() / pow_p(p, b);
    let m = pow_p(p, n);
    let unit = num * mod_inverse(&den, &m).expect("denominator unit is invertible");
    PadicNumber::from_unit(p, a as i64 - b as i64, unit, n)
}

/// An `n`-th root of `x` in Q_p, to the relative precision of `x`.
///
/// The branch returned lifts the smallest residue root in `[1, p)`.
pub fn nth_root_padic(x: &PadicNumber, n: u32) -> Result<PadicNumber> {
    let p = x.prime;
    if n == 0 {
        return Err(Error::InvalidInput("root of index 0".into()));
    }
    let (valuation, unit, precision) = match &x.repr {
        Repr::Zero => return Err(Error::InvalidInput("root of zero".into())),
        Repr::Approx { .. } => {
            return Err(Error::PrecisionLoss("root of an inexact zero".into()));
        }
        Repr::Unit { valuation, unit, precision } => (*valuation, unit, *precision),
    };
    if valuation.rem_euclid(n as i64) != 0 {
        return Err(Error::NoRootInField(format!(
            "valuation {valuation} is not divisible by {n}"
        )));
    }
    if n == 1 {
        return Ok(x.clone());
    }
    if n as u64 % p == 0 {
        return Err(Error::InvalidInput(format!(
            "roots of index divisible by p = {p} are not supported"
        )));
    }
    if p > 10_000_000 {
        return Err(Error::InvalidInput(format!("prime {p} too large for residue root search")));
    }
    let u0 = (unit % p).to_u64_digits().1.first().copied().unwrap_or(0);
    let nn = BigInt::from(n);
    let pp = BigInt::from(p);
    let r = (1..p)
        .find(|&r| BigInt::from(r).modpow(&nn, &pp) == BigInt::from(u0))
        .ok_or_else(|| {
            Error::NoRootInField(format!("unit part is not an {n}-th power residue mod {p}"))
        })?;
    // Newton: y ← y − (y^n − u)/(n·y^(n−1)), quadratic convergence
    let m = pow_p(p, precision);
    let mut y = BigInt::from(r);
    let mut digits = 1u32;
    while digits < precision {
        digits = (2 * digits).min(precision);
        let mk = pow_p(p, digits);
        let f = (y.modpow(&nn, &mk) - unit).mod_floor(&mk);
        let df = (&nn * y.modpow(&BigInt::from(n - 1), &mk)).mod_floor(&mk);
        let step = f * mod_inverse(&df, &mk).expect("derivative is a unit");
        y = (&y - step).mod_floor(&mk);
    }
    Ok(PadicNumber::from_unit(p, valuation / n as i64, y.mod_floor(&m), precision))
}

impl Add for PadicNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check_prime(&o);
        let p = self.prime;
        match (self.repr, o.repr) {
            (Repr::Zero, r) | (r, Repr::Zero) => PadicNumber { prime: p, repr: r },
            (Repr::Approx { abs_prec: a }, Repr::Approx { abs_prec: b }) => {
                Self::approx_zero(p, a.min(b))
            }
            (Repr::Approx { abs_prec }, Repr::Unit { valuation, unit, precision })
            | (Repr::Unit { valuation, unit, precision }, Repr::Approx { abs_prec }) => {
                PadicNumber { prime: p, repr: Repr::Unit { valuation, unit, precision } }
                    .cap_absolute(abs_prec)
            }
            (
                Repr::Unit { valuation: v1, unit: u1, precision: n1 },
                Repr::Unit { valuation: v2, unit: u2, precision: n2 },
            ) => {
                let v = v1.min(v2);
                let abs = (v1 + n1 as i64).min(v2 + n2 as i64);
                let s = u1 * pow_p(p, (v1 - v) as u32) + u2 * pow_p(p, (v2 - v) as u32);
                let k = (abs - v) as u32;
                let s = s.mod_floor(&pow_p(p, k));
                if s.is_zero() {
                    return Self::approx_zero(p, abs);
                }
                let t = valuation_of_integer(&s, p);
                let unit = s / pow_p(p, t);
                Self::from_unit(p, v + t as i64, unit, k - t)
            }
        }
    }
}

impl Neg for PadicNumber {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.prime;
        match self.repr {
            Repr::Unit { valuation, unit, precision } => {
                Self::from_unit(p, valuation, -unit, precision)
            }
            r => PadicNumber { prime: p, repr: r },
        }
    }
}

impl Sub for PadicNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for PadicNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.check_prime(&o);
        let p = self.prime;
        match (self.repr, o.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(p),
            (Repr::Approx { abs_prec: a }, Repr::Approx { abs_prec: b }) => {
                Self::approx_zero(p, a + b)
            }
            (Repr::Approx { abs_prec }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Approx { abs_prec }) => {
                Self::approx_zero(p, abs_prec + valuation)
            }
            (
                Repr::Unit { valuation: v1, unit: u1, precision: n1 },
                Repr::Unit { valuation: v2, unit: u2, precision: n2 },
            ) => Self::from_unit(p, v1 + v2, u1 * u2, n1.min(n2)),
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Approx { abs_prec } => write!(f, "O({}^{abs_prec})", self.prime),
            Repr::Unit { valuation, unit, precision } => {
                write!(f, "{}^{valuation}*{unit} + O({}^{})", self.prime, self.prime,
                    valuation + *precision as i64)
            }
        }
    }
}

/// Serialized as `{p, valuation, unit, precision}`; zeros carry `valuation: null`
/// and, when inexact, the absolute precision.
impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            p: u64,
            valuation: Option<i64>,
            unit: Option<String>,
            precision: Option<i64>,
        }
        let (valuation, unit, precision) = match &self.repr {
            Repr::Zero => (None, None, None),
            Repr::Approx { abs_prec } => (None, None, Some(*abs_prec)),
            Repr::Unit { valuation, unit, precision } => {
                (Some(*valuation), Some(unit.to_string()), Some(*precision as i64))
            }
        };
        Wire { p: self.prime, valuation, unit, precision }.serialize(s)
    }
}

impl PadicNumber {
    /// Sign-insensitive size check used by tests: `|x|_p ≤ p^(-k)`.
    pub fn is_divisible_by_p_power(&self, k: i64) -> bool {
        match self.valuation_lower_bound() {
            None => true,
            Some(v) => v >= k,
        }
    }

    /// The rational `p^v·u` with `u` the stored representative; for tests and
    /// for lifting residues to exact numbers.
    pub fn to_rational_rep(&self) -> Rational {
        match &self.repr {
            Repr::Unit { valuation, unit, .. } => {
                let u = Rational::from_integer(unit.clone());
                let pv = Rational::from_integer(pow_p(self.prime, valuation.unsigned_abs() as u32));
                if *valuation >= 0 {
                    u * pv
                } else {
                    u / pv
                }
            }
            _ => Rational::zero(),
        }
    }
}
