use std::fmt;

use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::point::ProjPoint;
use crate::error::{Error, Result};
use crate::numeric::rational::lcm_all;
use crate::numeric::{Field, Integer, Rational};
use crate::poly::{squarefree_decomposition, BinaryForm, UniPoly};

/// A morphism `P¹ → P¹` of degree `d ≥ 1`, `(x0 : x1) ↦ (F0 : F1)`.
///
/// The pair is scaled so that the first nonzero coefficient, reading `F0`
/// from `x0^d` down and then `F1`, is one; equal maps have equal forms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMap<K> {
    f0: BinaryForm<K>,
    f1: BinaryForm<K>,
}

impl<K: Field> RationalMap<K> {
    /// Rejects pairs with a common zero on P¹ (vanishing resultant).
    pub fn new(f0: BinaryForm<K>, f1: BinaryForm<K>) -> Result<Self> {
        if f0.degree() != f1.degree() {
            return Err(Error::InvalidInput("forms must have the same degree".into()));
        }
        if f0.degree() == 0 {
            return Err(Error::InvalidInput("a morphism needs degree at least 1".into()));
        }
        let d = f0.degree();
        if f0.coeff(d).is_zero() && f1.coeff(d).is_zero() {
            return Err(Error::InvalidInput("forms share the zero (1 : 0)".into()));
        }
        if f0.is_zero() || f1.is_zero() || f0.poly().gcd(f1.poly()).deg() > 0 {
            return Err(Error::InvalidInput("forms share a zero: resultant vanishes".into()));
        }
        Ok(Self::normalized(f0, f1))
    }

    #[cfg(test)]
    pub(crate) fn from_forms_unchecked(f0: BinaryForm<K>, f1: BinaryForm<K>) -> Self {
        RationalMap { f0, f1 }
    }

    fn normalized(f0: BinaryForm<K>, f1: BinaryForm<K>) -> Self {
        let d = f0.degree();
        let lead = (0..=d)
            .rev()
            .map(|k| f0.coeff(k))
            .chain((0..=d).rev().map(|k| f1.coeff(k)))
            .find(|c| !c.is_zero())
            .expect("nonzero map");
        let s = lead.inv();
        RationalMap { f0: f0.scale(&s), f1: f1.scale(&s) }
    }

    /// `z ↦ num(z)/den(z)` after cancelling common factors.
    pub fn from_affine(num: &UniPoly<K>, den: &UniPoly<K>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(den);
        let (n, d) = (num.exact_div(&g)?, den.exact_div(&g)?);
        let deg = n.degree().unwrap_or(0).max(d.deg()) as u32;
        if deg == 0 {
            return Err(Error::InvalidInput("constant maps are not morphisms of P1".into()));
        }
        Self::new(BinaryForm::new(deg, n), BinaryForm::new(deg, d))
    }

    pub fn polynomial(p: &UniPoly<K>) -> Result<Self> {
        Self::from_affine(p, &UniPoly::one())
    }

    /// Affine map from integer coefficient lists, lowest degree first.
    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::from_affine(&UniPoly::from_ints(num), &UniPoly::from_ints(den))
    }

    pub fn identity() -> Self {
        RationalMap { f0: BinaryForm::x0(), f1: BinaryForm::x1() }
    }

    pub fn degree(&self) -> u32 {
        self.f0.degree()
    }

    pub fn f0(&self) -> &BinaryForm<K> {
        &self.f0
    }

    pub fn f1(&self) -> &BinaryForm<K> {
        &self.f1
    }

    /// Numerator of the affine form `N(z)/D(z)`.
    pub fn numerator(&self) -> &UniPoly<K> {
        self.f0.poly()
    }

    pub fn denominator(&self) -> &UniPoly<K> {
        self.f1.poly()
    }

    /// Whether infinity is totally invariant, i.e. `F1 = c·x1^d`.
    pub fn is_polynomial(&self) -> bool {
        self.f1.poly().deg() == 0
    }

    pub fn eval(&self, p: &ProjPoint<K>) -> ProjPoint<K> {
        let (a, b) = p.coords();
        ProjPoint::from_coords(self.f0.eval(&a, &b), self.f1.eval(&a, &b))
            .expect("a morphism has no base points")
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Self {
        Self::normalized(self.f0.substitute(&g.f0, &g.f1), self.f1.substitute(&g.f0, &g.f1))
    }

    /// The `n`-th iterate; the identity for `n = 0`.
    pub fn iterate(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// The map in the chart `w = 1/z` on both sides.
    pub fn conjugate_by_inversion(&self) -> Self {
        Self::normalized(self.f1.swap(), self.f0.swap())
    }

    pub fn map_field<L: Field>(&self, f: impl Fn(&K) -> L) -> RationalMap<L> {
        RationalMap::normalized(self.f0.map(&f), self.f1.map(&f))
    }

    /// `Res(F0, F1)` from the Sylvester matrix of the two forms.
    pub fn resultant(&self) -> K {
        let d = self.degree() as usize;
        let n = 2 * d;
        let mut m = vec![vec![K::zero(); n]; n];
        for i in 0..d {
            for k in 0..=d {
                m[i][i + k] = self.f0.coeff((d - k) as u32);
                m[d + i][i + k] = self.f1.coeff((d - k) as u32);
            }
        }
        determinant(m)
    }

    /// Ramification indices `e ≥ 2` over the algebraic closure, with
    /// multiplicity: affine critical points from the squarefree decomposition
    /// of `N′D − ND′`, infinity from the same computation in the swapped chart.
    pub fn ramification_multiset(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let w = affine_wronskian(self.f0.poly(), self.f1.poly());
        let (_, parts) = squarefree_decomposition(&w);
        for (f, k) in parts {
            out.extend(std::iter::repeat_n(k + 1, f.deg()));
        }
        let ws = affine_wronskian(self.f0.swap().poly(), self.f1.swap().poly());
        let at_zero = ws.coeffs().iter().take_while(|c| c.is_zero()).count() as u32;
        if at_zero > 0 {
            out.push(at_zero + 1);
        }
        out.sort_unstable();
        out
    }
}

fn affine_wronskian<K: Field>(n: &UniPoly<K>, d: &UniPoly<K>) -> UniPoly<K> {
    &(&n.derivative() * d) - &(n * &d.derivative())
}

pub(crate) fn determinant<K: Field>(mut m: Vec<Vec<K>>) -> K {
    let n = m.len();
    let mut det = K::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return K::zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        let inv = m[c][c].inv();
        det = det * m[c][c].clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let t = m[r][c].clone() * inv.clone();
            for k in c..n {
                let v = m[c][k].clone() * t.clone();
                m[r][k] = m[r][k].clone() - v;
            }
        }
    }
    det
}

impl RationalMap<Rational> {
    /// The primitive integral model `(λF0, λF1)`: coprime integer
    /// coefficients, returned with `λ > 0`.
    pub fn integral_model(&self) -> (Rational, Vec<Integer>, Vec<Integer>) {
        let d = self.degree();
        let coeffs: Vec<Rational> = (0..=d).map(|k| self.f0.coeff(k)).chain((0..=d).map(|k| self.f1.coeff(k))).collect();
        let den = lcm_all(coeffs.iter().map(|c| c.denom()));
        let ints: Vec<Integer> = coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(Integer::zero(), |acc, c| acc.gcd(c));
        let ints: Vec<Integer> = ints.into_iter().map(|c| c / &g).collect();
        let lambda = Rational::new(den, g.abs());
        let (a, b) = ints.split_at(d as usize + 1);
        (lambda, a.to_vec(), b.to_vec())
    }

    /// Resultant of the primitive integral model.
    pub fn integral_resultant(&self) -> Integer {
        let (lambda, _, _) = self.integral_model();
        let r = self.resultant() * lambda.powu(2 * self.degree() as u64);
        debug_assert!(r.is_integer());
        r.to_integer()
    }
}

impl<K: Field> fmt::Display for RationalMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.f0, self.f1)
    }
}

/// Serialized as `{degree, f0, f1}` with coefficient lists indexed by the
/// power of `x0`.
impl<K: Field> Serialize for RationalMap<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            field: &'static str,
            degree: u32,
            f0: Vec<String>,
            f1: Vec<String>,
        }
        let d = self.degree();
        Wire {
            field: K::NAME,
            degree: d,
            f0: (0..=d).map(|k| self.f0.coeff(k).to_string()).collect(),
            f1: (0..=d).map(|k| self.f1.coeff(k).to_string()).collect(),
        }
        .serialize(s)
    }
}
