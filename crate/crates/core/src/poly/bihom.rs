use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::form::BinaryForm;
use crate::error::{Error, Result};
use crate::numeric::Field;

/// A bihomogeneous polynomial of bidegree `(a, b)` on P1 × P1.
///
/// The term keyed `(i, j)` is `c · x0^i x1^(a−i) y0^j y1^(b−j)`; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BiHomPoly<K> {
    bidegree: (u32, u32),
    terms: BTreeMap<(u32, u32), K>,
}

impl<K: Field> BiHomPoly<K> {
    pub fn zero(bidegree: (u32, u32)) -> Self {
        BiHomPoly { bidegree, terms: BTreeMap::new() }
    }

    /// Builds from `(i, j, c)` triples; repeated keys are summed. Panics on
    /// keys outside the bidegree.
    pub fn from_terms(bidegree: (u32, u32), terms: impl IntoIterator<Item = (u32, u32, K)>) -> Self {
        let mut out = Self::zero(bidegree);
        for (i, j, c) in terms {
            assert!(i <= bidegree.0 && j <= bidegree.1, "monomial outside bidegree");
            out.add_term((i, j), c);
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: K) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(K::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `x0·y1 − x1·y0`, cutting out the diagonal.
    pub fn diagonal() -> Self {
        Self::from_terms((1, 1), [(1, 0, K::one()), (0, 1, -K::one())])
    }

    /// `x1·y1`: the union of `{∞} × P1` and `P1 × {∞}`, with `∞ = (1:0)`.
    pub fn lines_through_infinity() -> Self {
        Self::from_terms((1, 1), [(0, 0, K::one())])
    }

    /// The product `F(x)·G(y)` of a form in `x` and a form in `y`.
    pub fn outer(fx: &BinaryForm<K>, gy: &BinaryForm<K>) -> Self {
        let mut out = Self::zero((fx.degree(), gy.degree()));
        for i in 0..=fx.degree() {
            let a = fx.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=gy.degree() {
                out.add_term((i, j), a.clone() * gy.coeff(j));
            }
        }
        out
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> K {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(K::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.bidegree, o.bidegree, "adding polynomials of different bidegree");
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-K::one()))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.bidegree);
        }
        BiHomPoly {
            bidegree: self.bidegree,
            terms: self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero((self.bidegree.0 + o.bidegree.0, self.bidegree.1 + o.bidegree.1));
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &o.terms {
                out.add_term((i1 + i2, j1 + j2), a.clone() * b.clone());
            }
        }
        out
    }

    /// Scaled so the coefficient of the largest key is 1.
    pub fn normalized(&self) -> Self {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn eval(&self, x0: &K, x1: &K, y0: &K, y1: &K) -> K {
        let (a, b) = self.bidegree;
        self.terms.iter().fold(K::zero(), |acc, ((i, j), c)| {
            acc + c.clone()
                * x0.powu(*i as u64)
                * x1.powu((a - i) as u64)
                * y0.powu(*j as u64)
                * y1.powu((b - j) as u64)
        })
    }

    /// `Φ(F0(x), F1(x); G0(y), G1(y))` for pairs of forms of degrees `dF`, `dG`.
    pub fn substitute(
        &self,
        f0: &BinaryForm<K>,
        f1: &BinaryForm<K>,
        g0: &BinaryForm<K>,
        g1: &BinaryForm<K>,
    ) -> Self {
        let (a, b) = self.bidegree;
        let (df, dg) = (f0.degree(), g0.degree());
        let mut out = Self::zero((a * df, b * dg));
        let fx: Vec<BinaryForm<K>> = (0..=a).map(|i| f0.pow(i).mul(&f1.pow(a - i))).collect();
        let gy: Vec<BinaryForm<K>> = (0..=b).map(|j| g0.pow(j).mul(&g1.pow(b - j))).collect();
        for ((i, j), c) in &self.terms {
            let t = Self::outer(&fx[*i as usize], &gy[*j as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> BiHomPoly<L> {
        let mut out = BiHomPoly::zero(self.bidegree);
        for (k, c) in &self.terms {
            out.add_term(*k, f(c));
        }
        out
    }
}

/// Whether `Φ` divides `Ψ` as bihomogeneous polynomials; returns the
/// cofactor `Θ` with `Ψ = Φ·Θ` when it does.
///
/// Both are dehomogenized to `k[u, v]` (`u = x0/x1`, `v = y0/y1`) and divided
/// exactly under the lexicographic order; the quotient must also fit in the
/// complementary bidegree, which accounts for factors of `x1` and `y1`.
pub fn bihom_divides<K: Field>(phi: &BiHomPoly<K>, psi: &BiHomPoly<K>) -> Result<Option<BiHomPoly<K>>> {
    if phi.is_zero() {
        return Err(Error::InvalidInput("divisibility by the zero polynomial".into()));
    }
    let (pa, pb) = phi.bidegree;
    let (sa, sb) = psi.bidegree;
    if pa > sa || pb > sb {
        return Ok(None);
    }
    let cob = (sa - pa, sb - pb);
    if psi.is_zero() {
        return Ok(Some(BiHomPoly::zero(cob)));
    }
    let (&(li, lj), lc) = phi.terms.iter().next_back().expect("nonzero");
    let lc_inv = lc.inv();
    // remainder as a max-heap by key
    let mut rem: BTreeMap<Reverse<(u32, u32)>, K> =
        psi.terms.iter().map(|(k, c)| (Reverse(*k), c.clone())).collect();
    let mut quotient = BiHomPoly::zero(cob);
    while let Some((&Reverse((i, j)), c)) = rem.iter().next() {
        if i < li || j < lj {
            return Ok(None);
        }
        let (qi, qj) = (i - li, j - lj);
        if qi > cob.0 || qj > cob.1 {
            return Ok(None);
        }
        let q = c.clone() * lc_inv.clone();
        for ((pi, pj), pc) in &phi.terms {
            let key = Reverse((pi + qi, pj + qj));
            let e = rem.entry(key).or_insert_with(K::zero);
            *e = e.clone() - q.clone() * pc.clone();
            if e.is_zero() {
                rem.remove(&key);
            }
        }
        quotient.add_term((qi, qj), q);
    }
    Ok(Some(quotient))
}

impl<K: Field> fmt::Display for BiHomPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (a, b) = self.bidegree;
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((i, j), c)| {
                let mon: Vec<String> = [("x0", *i), ("x1", a - i), ("y0", *j), ("y1", b - j)]
                    .iter()
                    .filter(|(_, e)| *e > 0)
                    .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                    .collect();
                let s = c.to_string();
                match (s.as_str(), mon.is_empty()) {
                    (_, true) => s,
                    ("1", false) => mon.join("*"),
                    ("-1", false) => format!("-{}", mon.join("*")),
                    _ if s.trim_start_matches('-').contains(['+', '-']) => {
                        format!("({s})*{}", mon.join("*"))
                    }
                    _ => format!("{s}*{}", mon.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Serialized as `{bidegree, terms}`, each term `[i, j, c]` meaning
/// `c · x0^i x1^(a−i) y0^j y1^(b−j)`.
impl<K: Field> Serialize for BiHomPoly<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            bidegree: [u32; 2],
            terms: Vec<(u32, u32, String)>,
        }
        Wire {
            bidegree: [self.bidegree.0, self.bidegree.1],
            terms: self.terms.iter().map(|((i, j), c)| (*i, *j, c.to_string())).collect(),
        }
        .serialize(s)
    }
}
