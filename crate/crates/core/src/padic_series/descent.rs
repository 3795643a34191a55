use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::numeric::{Field, GaussianRational};

/// A truncated power series with exact coefficients in `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSeries {
    nvars: usize,
    coeffs: BTreeMap<MultiIndex, GaussianRational>,
}

impl ExactSeries {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, GaussianRational)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (i, c) in terms {
            if i.len() != nvars {
                return Err(Error::InvalidInput("multi-index of wrong length".into()));
            }
            if !c.is_zero() {
                let e = coeffs.entry(i).or_insert_with(GaussianRational::zero);
                *e = e.clone() + c;
            }
        }
        coeffs.retain(|_, c: &mut GaussianRational| !c.is_zero());
        Ok(ExactSeries { nvars, coeffs })
    }

    pub fn univariate(coeffs: Vec<GaussianRational>) -> Self {
        Self::new(1, coeffs.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)))
            .expect("one variable")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff(&self, i: &[u32]) -> GaussianRational {
        self.coeffs.get(i).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussianRational)> {
        self.coeffs.iter()
    }

    /// Product truncated at total degree `d`.
    pub fn mul_trunc(&self, o: &Self, d: u32) -> Self {
        let mut out: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                let k: MultiIndex = i.iter().zip(j).map(|(x, y)| x + y).collect();
                if k.iter().sum::<u32>() > d {
                    continue;
                }
                let e = out.entry(k).or_insert_with(GaussianRational::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        out.retain(|_, c| !c.is_zero());
        ExactSeries { nvars: self.nvars, coeffs: out }
    }

    fn truncated(&self, d: u32) -> Self {
        ExactSeries {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| i.iter().sum::<u32>() <= d)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DescentVerdict {
    /// Every coefficient of the quotient is rational.
    Rational,
    /// The first coefficient (in index order) outside `Q`.
    NotRational { index: MultiIndex, coefficient: String },
}

/// Computes `g = h/f` to total degree `d` and reports whether `g` has
/// rational coefficients.
///
/// `f` must have a nonzero constant term, except in one variable where a
/// factor `T^k` of `f` is cancelled against `h` (and `NotDivisible` is
/// raised if `h` lacks it).
pub fn divisibility_descent_check(
    f: &ExactSeries,
    h: &ExactSeries,
    d: u32,
) -> Result<(ExactSeries, DescentVerdict)> {
    if f.nvars != h.nvars {
        return Err(Error::InvalidInput("series in different numbers of variables".into()));
    }
    let n = f.nvars;
    let (f, h) = if f.coeff(&vec![0; n]).is_zero() {
        if n != 1 {
            return Err(Error::InvalidInput(
                "divisor needs a nonzero constant term in several variables".into(),
            ));
        }
        let Some(k) = f.coeffs.keys().map(|i| i[0]).min() else {
            return Err(Error::NotDivisible("division by the zero series".into()));
        };
        if let Some(j) = h.coeffs.keys().map(|i| i[0]).min() {
            if j < k {
                return Err(Error::NotDivisible(format!(
                    "dividend has order {j} below the divisor's order {k}"
                )));
            }
        }
        let shift = |s: &ExactSeries| ExactSeries {
            nvars: 1,
            coeffs: s.coeffs.iter().map(|(i, c)| (vec![i[0] - k], c.clone())).collect(),
        };
        (shift(f), shift(h))
    } else {
        (f.clone(), h.clone())
    };
    let inv = inverse(&f, d);
    let g = h.truncated(d).mul_trunc(&inv, d);
    debug_assert_eq!(g.mul_trunc(&f, d), h.truncated(d));
    let verdict = g
        .coeffs
        .iter()
        .find(|(_, c)| !c.is_rational())
        .map(|(i, c)| DescentVerdict::NotRational { index: i.clone(), coefficient: c.to_string() })
        .unwrap_or(DescentVerdict::Rational);
    Ok((g, verdict))
}

/// Formal inverse of a series with nonzero constant term, to degree `d`.
fn inverse(f: &ExactSeries, d: u32) -> ExactSeries {
    let n = f.nvars;
    let zero = vec![0u32; n];
    let a0_inv = f.coeff(&zero).inv();
    let mut indices = all_indices(n, d);
    indices.sort_by_key(|i| i.iter().sum::<u32>());
    let mut b: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
    b.insert(zero.clone(), a0_inv.clone());
    for i in indices.iter().skip(1) {
        let mut acc = GaussianRational::zero();
        for (j, fj) in &f.coeffs {
            if *j == zero || !j.iter().zip(i).all(|(a, c)| a <= c) {
                continue;
            }
            let rest: MultiIndex = i.iter().zip(j).map(|(c, a)| c - a).collect();
            if let Some(bv) = b.get(&rest) {
                acc = acc + fj.clone() * bv.clone();
            }
        }
        if !acc.is_zero() {
            b.insert(i.clone(), -(acc * a0_inv.clone()));
        }
    }
    ExactSeries { nvars: n, coeffs: b }
}

fn all_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    super::all_indices(n, d)
}
