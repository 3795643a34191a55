use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::map::RationalMap;
use super::point::ProjPoint;
use crate::error::{Error, Result};
use crate::numeric::{rational_sqrt, Field, Integer, Rational};
use crate::poly::BinaryForm;

/// A homogeneous polynomial of fixed degree in three variables `(A, B, C)`,
/// keyed by exponent triples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TernaryForm<K> {
    degree: u32,
    terms: BTreeMap<[u32; 3], K>,
}

impl<K: Field> TernaryForm<K> {
    pub fn zero(degree: u32) -> Self {
        TernaryForm { degree, terms: BTreeMap::new() }
    }

    pub fn monomial(c: K, e: [u32; 3]) -> Self {
        let mut t = Self::zero(e.iter().sum());
        if !c.is_zero() {
            t.terms.insert(e, c);
        }
        t
    }

    pub fn constant(c: K) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &K)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.degree == o.degree || self.is_zero() || o.is_zero(), "adding forms of different degree");
        let mut out = self.clone();
        out.degree = if self.is_zero() { o.degree } else { self.degree };
        for (e, c) in &o.terms {
            let v = out.terms.remove(e).unwrap_or_else(K::zero) + c.clone();
            if !v.is_zero() {
                out.terms.insert(*e, v);
            }
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        TernaryForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.degree + o.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out = out.add(&Self::monomial(c1.clone() * c2.clone(), e));
            }
        }
        out.degree = self.degree + o.degree;
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(K::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[K; 3]) -> K {
        self.terms.iter().fold(K::zero(), |acc, (e, c)| {
            acc + c.clone() * x[0].powu(e[0] as u64) * x[1].powu(e[1] as u64) * x[2].powu(e[2] as u64)
        })
    }
}

impl<K: Field> fmt::Display for TernaryForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mon: Vec<String> = ["A", "B", "C"]
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                    .collect();
                if mon.is_empty() { format!("{c}") } else { format!("({c})*{}", mon.join("*")) }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<K: Field> Serialize for TernaryForm<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A point `(A : B : C)` of P² read as the binary quadratic
/// `A·x0² + B·x0·x1 + C·x1²`, scaled so its first nonzero entry is one.
pub type Sym2Point = [Rational; 3];

fn normalize(p: [Rational; 3]) -> Result<Sym2Point> {
    let Some(lead) = p.iter().find(|c| !c.is_zero()).cloned() else {
        return Err(Error::InvalidInput("(0 : 0 : 0) is not a point of P2".into()));
    };
    Ok(p.map(|c| c / &lead))
}

/// `u + v·√disc` for a non-square integer `disc`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadNumber {
    pub u: Rational,
    pub v: Rational,
    pub disc: Integer,
}

impl QuadNumber {
    pub fn new(u: Rational, v: Rational, disc: Integer) -> Result<Self> {
        if rational_sqrt(&Rational::from_integer(disc.clone())).is_some() {
            return Err(Error::InvalidInput(format!("{disc} is a square")));
        }
        Ok(QuadNumber { u, v, disc })
    }

    fn lift(&self, q: Rational) -> Self {
        QuadNumber { u: q, v: Rational::zero(), disc: self.disc.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadNumber { u: self.u.clone(), v: -self.v.clone(), disc: self.disc.clone() }
    }

    pub fn trace(&self) -> Rational {
        &self.u + &self.u
    }

    pub fn norm(&self) -> Rational {
        &self.u * &self.u - &self.v * &self.v * Rational::from_integer(self.disc.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadNumber { u: &self.u + &o.u, v: &self.v + &o.v, disc: self.disc.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = Rational::from_integer(self.disc.clone());
        QuadNumber {
            u: &self.u * &o.u + &self.v * &o.v * d,
            v: &self.u * &o.v + &self.v * &o.u,
            disc: self.disc.clone(),
        }
    }

    /// Panics on zero.
    pub fn div(&self, o: &Self) -> Self {
        let n = o.norm();
        let t = self.mul(&o.conj());
        QuadNumber { u: t.u / &n, v: t.v / &n, disc: self.disc.clone() }
    }
}

/// A point of P¹ over `Q(√disc)`; `None` is infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadPoint {
    pub disc: Integer,
    pub value: Option<QuadNumber>,
}

impl QuadPoint {
    pub fn affine(x: QuadNumber) -> Self {
        QuadPoint { disc: x.disc.clone(), value: Some(x) }
    }

    pub fn infinity(disc: Integer) -> Self {
        QuadPoint { disc, value: None }
    }

    pub fn from_rational(p: &ProjPoint<Rational>, disc: Integer) -> Self {
        match p {
            ProjPoint::Affine(x) => Self::affine(QuadNumber { u: x.clone(), v: Rational::zero(), disc }),
            ProjPoint::Infinity => Self::infinity(disc),
        }
    }

    /// The point together with its conjugate as a binary quadratic:
    /// `(1 : −Tr x : N x)`, or `(0 : 0 : 1)` for infinity.
    pub fn descend(&self) -> Sym2Point {
        match &self.value {
            Some(x) => [Rational::one(), -x.trace(), x.norm()],
            None => [Rational::zero(), Rational::zero(), Rational::one()],
        }
    }
}

fn eval_form_quad(f: &BinaryForm<Rational>, x: &QuadNumber) -> QuadNumber {
    let d = f.degree();
    (0..=d).rev().fold(x.lift(Rational::zero()), |acc, k| acc.mul(x).add(&x.lift(f.coeff(k))))
}

impl RationalMap<Rational> {
    /// `f(x)` for a point over a quadratic field.
    pub fn eval_quadratic(&self, x: &QuadPoint) -> QuadPoint {
        let Some(xv) = &x.value else {
            return QuadPoint::from_rational(&self.eval(&ProjPoint::Infinity), x.disc.clone());
        };
        let (n, m) = (eval_form_quad(self.f0(), xv), eval_form_quad(self.f1(), xv));
        if m.is_zero() { QuadPoint::infinity(x.disc.clone()) } else { QuadPoint::affine(n.div(&m)) }
    }
}

/// The induced self-map of P² = Sym²P¹: a quadratic with roots `r1, r2` goes
/// to the quadratic with roots `f(r1), f(r2)`.
#[derive(Clone, Debug, Serialize)]
pub struct Sym2Map {
    pub degree: u32,
    pub forms: [TernaryForm<Rational>; 3],
}

impl Sym2Map {
    pub fn apply(&self, x: &Sym2Point) -> Result<Sym2Point> {
        normalize([self.forms[0].eval(x), self.forms[1].eval(x), self.forms[2].eval(x)])
    }
}

/// With roots `(α_i : β_i)` of `(A, B, C)`, the products `G(r1)H(r2) + G(r2)H(r1)`
/// are symmetric; each monomial pair contributes `C^k A^(d−l) (u^(l−k) + w^(l−k))`
/// where `u + w = −B`, `uw = AC`.
fn symmetric_pairing(g: &BinaryForm<Rational>, h: &BinaryForm<Rational>, power_sums: &[TernaryForm<Rational>]) -> TernaryForm<Rational> {
    let d = g.degree();
    let a = TernaryForm::monomial(Rational::one(), [1, 0, 0]);
    let c = TernaryForm::monomial(Rational::one(), [0, 0, 1]);
    let mut out = TernaryForm::zero(d);
    for k in 0..=d {
        let gk = g.coeff(k);
        if gk.is_zero() {
            continue;
        }
        for l in 0..=d {
            let hl = h.coeff(l);
            if hl.is_zero() {
                continue;
            }
            let (lo, hi) = (k.min(l), k.max(l));
            let term = c.pow(lo).mul(&a.pow(d - hi)).mul(&power_sums[(hi - lo) as usize]);
            out = out.add(&term.scale(&(gk.clone() * hl)));
        }
    }
    out
}

pub fn symmetric_square_descent(f: &RationalMap<Rational>) -> Sym2Map {
    let d = f.degree();
    let minus_b = TernaryForm::monomial(-Rational::one(), [0, 1, 0]);
    let ac = TernaryForm::monomial(Rational::one(), [1, 0, 1]);
    let mut ps = vec![TernaryForm::constant(Rational::from_integer(2.into())), minus_b.clone()];
    for j in 2..=d as usize {
        let next = minus_b.mul(&ps[j - 1]).add(&ac.mul(&ps[j - 2]).scale(&-Rational::one()));
        ps.push(next);
    }
    let half = Rational::new(1.into(), 2.into());
    let a_new = symmetric_pairing(f.f1(), f.f1(), &ps).scale(&half);
    let b_new = symmetric_pairing(f.f0(), f.f1(), &ps).scale(&-Rational::one());
    let c_new = symmetric_pairing(f.f0(), f.f0(), &ps).scale(&half);
    Sym2Map { degree: d, forms: [a_new, b_new, c_new] }
}
