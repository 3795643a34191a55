use std::fmt;

use serde::{Serialize, Serializer};

use super::uni::UniPoly;
use crate::numeric::Field;

/// A binary form of fixed degree `d` in `(x0, x1)`, stored through its
/// dehomogenization: coefficient `k` of `poly` multiplies `x0^k x1^(d−k)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryForm<K> {
    degree: u32,
    poly: UniPoly<K>,
}

impl<K: Field> BinaryForm<K> {
    /// Panics if `poly` has degree above `degree`.
    pub fn new(degree: u32, poly: UniPoly<K>) -> Self {
        assert!(poly.deg() as u32 <= degree || poly.is_zero(), "form degree too small");
        BinaryForm { degree, poly }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &UniPoly<K> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coefficient of `x0^k x1^(d−k)`.
    pub fn coeff(&self, k: u32) -> K {
        self.poly.coeff(k as usize)
    }

    pub fn x0() -> Self {
        Self::new(1, UniPoly::x())
    }

    pub fn x1() -> Self {
        Self::new(1, UniPoly::one())
    }

    pub fn eval(&self, x0: &K, x1: &K) -> K {
        let d = self.degree as usize;
        let mut p1 = vec![K::one(); d + 1];
        for k in 1..=d {
            p1[k] = p1[k - 1].clone() * x1.clone();
        }
        let mut acc = K::zero();
        let mut p0 = K::one();
        for k in 0..=d {
            let c = self.poly.coeff(k);
            if !c.is_zero() {
                acc = acc + c * p0.clone() * p1[d - k].clone();
            }
            p0 = p0 * x0.clone();
        }
        acc
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.degree + o.degree, &self.poly * &o.poly)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        Self::new(self.degree, &self.poly + &o.poly)
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "subtracting forms of different degree");
        Self::new(self.degree, &self.poly - &o.poly)
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.degree, self.poly.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.degree * e, self.poly.pow(e))
    }

    /// The form with `x0` and `x1` exchanged.
    pub fn swap(&self) -> Self {
        let d = self.degree as usize;
        Self::new(
            self.degree,
            UniPoly::new((0..=d).map(|k| self.poly.coeff(d - k)).collect()),
        )
    }

    /// `F(G0, G1)` for forms `G0`, `G1` of a common degree.
    pub fn substitute(&self, g0: &Self, g1: &Self) -> Self {
        assert_eq!(g0.degree, g1.degree);
        let e = g0.degree;
        let d = self.degree;
        let mut acc = BinaryForm::new(d * e, UniPoly::zero());
        for k in 0..=d {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&g0.pow(k).mul(&g1.pow(d - k)).scale(&c));
        }
        acc
    }

    /// Multiplicity of `x1` as a factor, i.e. of the root at `(1:0)`.
    pub fn order_at_infinity(&self) -> u32 {
        if self.is_zero() {
            return self.degree;
        }
        self.degree - self.poly.deg() as u32
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> BinaryForm<L> {
        BinaryForm::new(self.degree, self.poly.map(f))
    }
}

impl<K: Field> fmt::Display for BinaryForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for k in (0..=self.degree).rev() {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            let mon = [("x0", k), ("x1", self.degree - k)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            terms.push(match (c.to_string().as_str(), mon.is_empty()) {
                (s, true) => s.to_string(),
                ("1", false) => mon,
                ("-1", false) => format!("-{mon}"),
                (s, false) if s.contains(['+', '-']) && !s.starts_with('-') => format!("({s})*{mon}"),
                (s, false) if s[1..].contains(['+', '-']) => format!("({s})*{mon}"),
                (s, false) => format!("{s}*{mon}"),
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// Serialized as `{degree, coeffs}` with `coeffs[k]` multiplying `x0^k x1^(d−k)`.
impl<K: Field> Serialize for BinaryForm<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            degree: u32,
            coeffs: Vec<String>,
        }
        Wire {
            degree: self.degree,
            coeffs: (0..=self.degree).map(|k| self.coeff(k).to_string()).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, Rational};

    type F = BinaryForm<Rational>;

    #[test]
    fn eval_and_substitute() {
        // x0^2 + x1^2
        let f = F::new(2, UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(f.eval(&rat(1, 1), &rat(1, 1)), rat(2, 1));
        assert_eq!(f.eval(&rat(2, 1), &rat(3, 1)), rat(13, 1));
        let g = F::new(3, UniPoly::from_ints(&[0, 0, 0, 1])); // x0^3
        let h = F::new(3, UniPoly::from_ints(&[1, 0, 0, 0])); // x1^3
        let fg = f.substitute(&g, &h);
        assert_eq!(fg, F::new(6, UniPoly::from_ints(&[1, 0, 0, 0, 0, 0, 1])));
        assert_eq!(f.to_string(), "x0^2 + x1^2");
        assert_eq!(F::new(2, UniPoly::from_ints(&[0, 1])).order_at_infinity(), 1);
    }

    #[test]
    fn swap_exchanges_variables() {
        let f = F::new(3, UniPoly::from_ints(&[1, 2, 0, 5]));
        let s = f.swap();
        assert_eq!(s.eval(&rat(2, 1), &rat(7, 1)), f.eval(&rat(7, 1), &rat(2, 1)));
    }
}
