//! Exterior powers, periods of periodic subspaces under a linear
//! automorphism, a uniform period bound depending only on the dimension, and
//! the split of a minimal polynomial into a unipotent part and a part free
//! of roots of unity.

mod matrix;

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::poly::{cyclotomic_part, orders_with_phi_at_most, UniPoly};

pub use matrix::{rank, RationalMatrix};

/// Linearly independent column vectors spanning a subspace of Q^n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubspaceBasis {
    vectors: Vec<Vec<Rational>>,
}

impl SubspaceBasis {
    pub fn new(vectors: Vec<Vec<Rational>>) -> Result<Self> {
        let n = vectors.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("empty basis".into()))?;
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidInput("basis vectors differ in length".into()));
        }
        if rank(&vectors) != vectors.len() {
            return Err(Error::InvalidInput("basis vectors are linearly dependent".into()));
        }
        Ok(SubspaceBasis { vectors })
    }

    pub fn from_ints(vectors: &[&[i64]]) -> Result<Self> {
        Self::new(vectors.iter().map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn image(&self, m: &RationalMatrix) -> Result<Self> {
        Self::new(self.vectors.iter().map(|v| m.apply(v)).collect())
    }

    pub fn same_span(&self, o: &Self) -> bool {
        let mut all = self.vectors.clone();
        all.extend(o.vectors.iter().cloned());
        self.dim() == o.dim() && rank(&all) == self.dim()
    }

    /// The line spanned by `w_1 ∧ … ∧ w_k` in the exterior power, in
    /// Plücker coordinates ordered as in [`exterior_power`].
    pub fn wedge(&self) -> SubspaceBasis {
        let k = self.dim();
        let coords = k_subsets(self.ambient_dim(), k)
            .iter()
            .map(|rows| {
                let minor: Vec<Vec<Rational>> =
                    rows.iter().map(|&r| (0..k).map(|c| self.vectors[c][r].clone()).collect()).collect();
                crate::dynamics_p1::determinant(minor)
            })
            .collect();
        SubspaceBasis { vectors: vec![coords] }
    }
}

impl Serialize for SubspaceBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = self.vectors.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        v.serialize(s)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `Λᵏ M` on the basis `e_I = e_{i1} ∧ … ∧ e_{ik}`, `I` in lexicographic order;
/// the `(I, J)` entry is the minor on rows `I` and columns `J`.
pub fn exterior_power(m: &RationalMatrix, k: usize) -> Result<RationalMatrix> {
    let n = m.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("exterior power {k} of a {n}-dimensional space")));
    }
    let subsets = k_subsets(n, k);
    let rows = subsets
        .iter()
        .map(|ri| {
            subsets
                .iter()
                .map(|cj| {
                    let minor = ri.iter().map(|&r| cj.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
                    crate::dynamics_p1::determinant(minor)
                })
                .collect()
        })
        .collect();
    RationalMatrix::new(rows)
}

/// Least `n ≥ 1` with `MⁿW = W`, or `None` if there is none up to `n_max`.
pub fn subspace_period(m: &RationalMatrix, w: &SubspaceBasis, n_max: u64) -> Result<Option<u64>> {
    if !m.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    if w.ambient_dim() != m.dim() {
        return Err(Error::InvalidInput("subspace and matrix dimensions differ".into()));
    }
    let mut cur = w.clone();
    for n in 1..=n_max {
        cur = cur.image(m)?;
        if cur.same_span(w) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `2·lcm{m ≥ 1 : φ(m) ≤ n²}`: a power of any automorphism of Q^n
/// fixing every periodic subspace.
pub fn period_bound(n: u64) -> BigUint {
    let l = orders_with_phi_at_most(n * n)
        .into_iter()
        .fold(BigUint::one(), |acc, m| acc.lcm(&BigUint::from(m)));
    l * 2u32
}

/// The minimal polynomial of `M^{n₀}` written as `(t − 1)^m · Q` with `Q`
/// free of roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicSplit {
    pub n0: u64,
    pub m: usize,
    pub q: UniPoly<Rational>,
    pub minimal_polynomial: UniPoly<Rational>,
}

/// Exponents tried by default: the divisors of `lcm{m : φ(m) ≤ dim}`, which
/// kill every root of unity among the eigenvalues.
pub fn default_split_candidates(dim: usize) -> Vec<u64> {
    let l = orders_with_phi_at_most(dim as u64).into_iter().fold(1u64, |acc, m| acc.lcm(&m));
    (1..=l).filter(|d| l % d == 0).collect()
}

pub fn minpoly_cyclotomic_split(m: &RationalMatrix) -> Result<CyclotomicSplit> {
    minpoly_cyclotomic_split_within(m, &default_split_candidates(m.dim()))
}

/// The least candidate `n₀` whose power has unipotent cyclotomic part.
pub fn minpoly_cyclotomic_split_within(m: &RationalMatrix, candidates: &[u64]) -> Result<CyclotomicSplit> {
    let t_minus_1 = UniPoly::new(vec![-Rational::one(), Rational::one()]);
    for &n0 in candidates {
        let minimal_polynomial = m.pow(n0).minimal_polynomial();
        let (c, q) = cyclotomic_part(&minimal_polynomial)?;
        let mult = c.deg();
        if c == t_minus_1.pow(mult as u32) {
            return Ok(CyclotomicSplit { n0, m: mult, q, minimal_polynomial });
        }
    }
    Err(Error::SearchExhausted(format!("no exponent among {candidates:?} makes the cyclotomic part unipotent")))
}

#[cfg(test)]
mod tests;
