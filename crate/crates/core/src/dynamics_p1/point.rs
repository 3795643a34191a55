use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::modular::{inv_mod, mul_mod, reduce_integer, Embedding};
use crate::numeric::{Field, GaussianInteger, GaussianRational, Integer, Rational};

/// A point of P¹(K). The affine coordinate is the normalized representative
/// `(x : 1)`; infinity is `(1 : 0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ProjPoint<K> {
    Affine(K),
    Infinity,
}

impl<K: Field> ProjPoint<K> {
    pub fn from_coords(a: K, b: K) -> Result<Self> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::InvalidInput("(0 : 0) is not a point".into()));
            }
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Affine(a / b))
    }

    pub fn from_int(n: i64) -> Self {
        ProjPoint::Affine(K::from_int(n))
    }

    /// Homogeneous coordinates `(x, 1)` or `(1, 0)`.
    pub fn coords(&self) -> (K, K) {
        match self {
            ProjPoint::Affine(x) => (x.clone(), K::one()),
            ProjPoint::Infinity => (K::one(), K::zero()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn affine(&self) -> Option<&K> {
        match self {
            ProjPoint::Affine(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> ProjPoint<L> {
        match self {
            ProjPoint::Affine(x) => ProjPoint::Affine(f(x)),
            ProjPoint::Infinity => ProjPoint::Infinity,
        }
    }

    /// Parses an affine value or `inf`/`∞`.
    pub fn parse(s: &str) -> Result<Self>
    where
        K: std::str::FromStr,
    {
        let t = s.trim();
        if t == "inf" || t == "∞" || t == "infinity" {
            return Ok(ProjPoint::Infinity);
        }
        t.parse::<K>()
            .map(ProjPoint::Affine)
            .map_err(|_| Error::InvalidInput(format!("not a point of P1: {s:?}")))
    }
}

impl<K: Field> fmt::Display for ProjPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Affine(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl<K: Field> Serialize for ProjPoint<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Fields with a naive height on P¹ and primitive integral coordinates.
pub trait HeightField: Field {
    /// Height of `(x : 1)` in primitive integral coordinates.
    fn affine_height(x: &Self) -> Integer;

    /// All points of height at most `h`, ordered by height.
    fn enumerate(h: u64) -> Result<Vec<ProjPoint<Self>>>;

    /// Index in `0..=q` (`q` for infinity) of the reduction of `p` at the
    /// prime of the embedding, from primitive coordinates.
    fn reduce_point(p: &ProjPoint<Self>, e: &Embedding) -> u64;
}

fn affine_index(a: u64, b: u64, q: u64) -> u64 {
    match inv_mod(b, q) {
        Some(bi) => mul_mod(a, bi, q),
        None => q,
    }
}

impl HeightField for Rational {
    fn affine_height(x: &Self) -> Integer {
        x.numer().abs().max(x.denom().clone())
    }

    fn enumerate(h: u64) -> Result<Vec<ProjPoint<Self>>> {
        enumerate_points(h)
    }

    fn reduce_point(p: &ProjPoint<Self>, e: &Embedding) -> u64 {
        let (a, b) = p.integer_coords();
        affine_index(reduce_integer(&a, e.q), reduce_integer(&b, e.q), e.q)
    }
}

impl HeightField for GaussianRational {
    fn affine_height(x: &Self) -> Integer {
        let (a, b) = gaussian_primitive(x);
        a.norm().max(b.norm())
    }

    fn enumerate(h: u64) -> Result<Vec<ProjPoint<Self>>> {
        enumerate_gaussian_points(h)
    }

    fn reduce_point(p: &ProjPoint<Self>, e: &Embedding) -> u64 {
        let (a, b) = p.gaussian_coords();
        affine_index(e.reduce_gaussian_integer(&a), e.reduce_gaussian_integer(&b), e.q)
    }
}

impl<K: HeightField> ProjPoint<K> {
    pub fn height(&self) -> Integer {
        match self {
            ProjPoint::Affine(x) => K::affine_height(x),
            ProjPoint::Infinity => Integer::one(),
        }
    }
}

impl ProjPoint<Rational> {
    /// Coprime integer coordinates `(a, b)` with `b > 0`, or `(1, 0)`.
    pub fn integer_coords(&self) -> (Integer, Integer) {
        match self {
            ProjPoint::Affine(x) => (x.numer().clone(), x.denom().clone()),
            ProjPoint::Infinity => (Integer::one(), Integer::zero()),
        }
    }
}

impl ProjPoint<GaussianRational> {
    /// Coprime Gaussian-integer coordinates `(a, b)` with `b` in the sector
    /// `re > 0, im ≥ 0`, or `(1, 0)`.
    pub fn gaussian_coords(&self) -> (GaussianInteger, GaussianInteger) {
        match self {
            ProjPoint::Affine(x) => gaussian_primitive(x),
            ProjPoint::Infinity => (GaussianInteger::from_ints(1, 0), GaussianInteger::from_ints(0, 0)),
        }
    }
}

fn gaussian_primitive(x: &GaussianRational) -> (GaussianInteger, GaussianInteger) {
    let (num, den) = x.clear_denominator();
    let den = GaussianInteger::new(den, Integer::zero());
    let g = num.gcd(&den);
    let a = num.exact_div(&g).expect("gcd divides");
    let b = den.exact_div(&g).expect("gcd divides");
    normalize_unit(a, b)
}

/// Rotates `(a, b)` by the unit that puts `b` in the sector `re > 0, im ≥ 0`.
fn normalize_unit(mut a: GaussianInteger, mut b: GaussianInteger) -> (GaussianInteger, GaussianInteger) {
    let i = GaussianInteger::from_ints(0, 1);
    for _ in 0..4 {
        if b.re.is_positive() && !b.im.is_negative() {
            break;
        }
        a = a * i.clone();
        b = b * i.clone();
    }
    (a, b)
}

/// All points of P¹(Q) of height at most `h`, each once, ordered by height,
/// then denominator, then numerator.
pub fn enumerate_points(h: u64) -> Result<Vec<ProjPoint<Rational>>> {
    if h == 0 {
        return Err(Error::InvalidInput("height bound must be at least 1".into()));
    }
    let h = h as i64;
    let mut pts: Vec<(i64, i64, i64)> = vec![(1, 0, 1)];
    for b in 1..=h {
        for a in -h..=h {
            if a.gcd(&b) == 1 {
                pts.push((a.abs().max(b), b, a));
            }
        }
    }
    pts.sort();
    Ok(pts
        .into_iter()
        .map(|(_, b, a)| {
            if b == 0 {
                ProjPoint::Infinity
            } else {
                ProjPoint::Affine(Rational::new(a.into(), b.into()))
            }
        })
        .collect())
}

/// All points of P¹(Q(i)) whose primitive coordinates have norms at most `h`,
/// ordered by height and then by coordinates.
pub fn enumerate_gaussian_points(h: u64) -> Result<Vec<ProjPoint<GaussianRational>>> {
    if h == 0 {
        return Err(Error::InvalidInput("height bound must be at least 1".into()));
    }
    let r = (h as f64).sqrt().floor() as i64 + 1;
    let h = h as i64;
    let lattice: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|&(x, y)| x * x + y * y <= h)
        .collect();
    let mut out: Vec<(i64, (i64, i64), (i64, i64))> = vec![(1, (0, 0), (1, 0))];
    for &b in lattice.iter().filter(|&&(x, y)| x > 0 && y >= 0) {
        let gb = GaussianInteger::from_ints(b.0, b.1);
        for &a in &lattice {
            let ga = GaussianInteger::from_ints(a.0, a.1);
            if ga.gcd(&gb).norm() != Integer::one() {
                continue;
            }
            let ht = (a.0 * a.0 + a.1 * a.1).max(b.0 * b.0 + b.1 * b.1);
            out.push((ht, b, a));
        }
    }
    out.sort();
    Ok(out
        .into_iter()
        .map(|(_, b, a)| {
            if b == (0, 0) {
                ProjPoint::Infinity
            } else {
                ProjPoint::Affine(GaussianRational::from_ints(a.0, a.1) / GaussianRational::from_ints(b.0, b.1))
            }
        })
        .collect())
}
