//! Truncated power series in several variables with p-adic coefficients,
//! as elements of the polydisc algebra with radii `p^(-m_i)`: Gauss norms,
//! `ord`, staircase sets and factor-count bounds, all on exact exponents.
//!
//! Norms are reported as exponents: a returned `e` stands for `p^(-e)`, so a
//! larger exponent is a smaller norm.

mod descent;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{padic_from_rational, PadicNumber, Rational};

pub use descent::{divisibility_descent_check, DescentVerdict, ExactSeries};

/// Exact rational exponent of `p`.
pub type Exponent = Ratio<i64>;

pub type MultiIndex = Vec<u32>;

pub fn exp(n: i64) -> Exponent {
    Ratio::from_integer(n)
}

/// Radii `r_i = p^(-m_i)` stored through their exponents `m_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Radius {
    pub exponents: Vec<Exponent>,
}

impl Radius {
    pub fn new(exponents: Vec<Exponent>) -> Result<Self> {
        if exponents.iter().any(|m| *m < Exponent::zero()) {
            return Err(Error::InvalidInput("radius exponents must be nonnegative".into()));
        }
        Ok(Radius { exponents })
    }

    pub fn uniform(n: usize, m: i64) -> Self {
        Radius { exponents: vec![exp(m); n] }
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    /// Exponent of `r^I`.
    pub fn weight(&self, index: &[u32]) -> Exponent {
        self.exponents
            .iter()
            .zip(index)
            .fold(Exponent::zero(), |acc, (m, &i)| acc + *m * exp(i as i64))
    }

    /// Whether every radius of `self` is at most the corresponding radius of `other`.
    pub fn is_within(&self, other: &Radius) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a >= b)
    }
}

/// Bound on the omitted part: every term `a_I T^I` with `|I| > D` satisfies
/// `|a_I| ρ^I ≤ p^(-τ)` at the reference radius `ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tail {
    pub radius: Radius,
    pub tau: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolydiscSeries {
    prime: u64,
    nvars: usize,
    trunc: u32,
    coeffs: BTreeMap<MultiIndex, PadicNumber>,
    tail: Option<Tail>,
}

fn total(index: &[u32]) -> u32 {
    index.iter().sum()
}

impl PolydiscSeries {
    /// A series from stored terms; exact zeros are dropped and terms above
    /// degree `trunc` rejected. `tail = None` means the series is exactly the
    /// stored polynomial.
    pub fn new(
        prime: u64,
        nvars: usize,
        trunc: u32,
        terms: impl IntoIterator<Item = (MultiIndex, PadicNumber)>,
        tail: Option<Tail>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (i, c) in terms {
            if i.len() != nvars {
                return Err(Error::InvalidInput("multi-index of wrong length".into()));
            }
            if total(&i) > trunc {
                return Err(Error::InvalidInput("term above the truncation degree".into()));
            }
            if c.prime() != prime {
                return Err(Error::InvalidInput("coefficient of a different prime".into()));
            }
            if !c.is_exact_zero() {
                coeffs.insert(i, c);
            }
        }
        if let Some(t) = &tail {
            if t.radius.nvars() != nvars {
                return Err(Error::InvalidInput("tail radius of wrong dimension".into()));
            }
        }
        Ok(PolydiscSeries { prime, nvars, trunc, coeffs, tail })
    }

    /// An exact polynomial from rational coefficients at `precision` digits.
    pub fn from_rational_terms(
        prime: u64,
        nvars: usize,
        trunc: u32,
        terms: &[(MultiIndex, Rational)],
        precision: u32,
    ) -> Result<Self> {
        Self::new(
            prime,
            nvars,
            trunc,
            terms.iter().map(|(i, c)| (i.clone(), padic_from_rational(c, prime, precision))),
            None,
        )
    }

    /// Univariate convenience: `coeffs[k]` multiplies `z^k`.
    pub fn univariate(prime: u64, trunc: u32, coeffs: Vec<PadicNumber>, tail: Option<Tail>) -> Result<Self> {
        Self::new(
            prime,
            1,
            trunc,
            coeffs.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)),
            tail,
        )
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn trunc(&self) -> u32 {
        self.trunc
    }
    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &PadicNumber)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, index: &[u32]) -> PadicNumber {
        self.coeffs.get(index).cloned().unwrap_or_else(|| PadicNumber::zero(self.prime))
    }

    /// Univariate coefficient of `z^k`.
    pub fn coeff1(&self, k: u32) -> PadicNumber {
        self.coeff(&[k])
    }

    /// Tail exponent at radius `s`, `None` if there is no tail (+infinity).
    fn tail_at(&self, s: &Radius) -> Result<Option<Exponent>> {
        let Some(t) = &self.tail else { return Ok(None) };
        if !s.is_within(&t.radius) {
            return Err(Error::TailDominates(format!(
                "tail is certified only on radii inside {:?}",
                t.radius.exponents
            )));
        }
        let gain = s
            .exponents
            .iter()
            .zip(&t.radius.exponents)
            .map(|(a, b)| *a - *b)
            .min()
            .unwrap_or_else(Exponent::zero);
        Ok(Some(t.tau + gain * exp(self.trunc as i64 + 1)))
    }

    /// The certified Gauss norm exponent at `s` together with the attaining indices.
    fn certified_max(&self, s: &Radius) -> Result<(Exponent, Vec<MultiIndex>)> {
        if s.nvars() != self.nvars {
            return Err(Error::InvalidInput("radius of wrong dimension".into()));
        }
        let tail = self.tail_at(s)?;
        let mut best: Option<Exponent> = None;
        let mut attain = Vec::new();
        let mut noise: Option<Exponent> = tail;
        for (i, c) in &self.coeffs {
            let w = s.weight(i);
            match c.valuation() {
                Ok(Some(v)) => {
                    let e = exp(v) + w;
                    match best {
                        Some(b) if e > b => {}
                        Some(b) if e == b => attain.push(i.clone()),
                        _ => {
                            best = Some(e);
                            attain = vec![i.clone()];
                        }
                    }
                }
                Ok(None) => {}
                Err(_) => {
                    let k = c.abs_precision().expect("inexact zero has a precision");
                    let e = exp(k) + w;
                    noise = Some(noise.map_or(e, |n| n.min(e)));
                }
            }
        }
        let Some(best) = best else {
            return Err(Error::TailDominates("no certified nonzero stored term".into()));
        };
        if let Some(n) = noise {
            if n <= best {
                return Err(Error::TailDominates(format!(
                    "stored maximum p^-({best}) does not exceed the uncertainty p^-({n})"
                )));
            }
        }
        Ok((best, attain))
    }

    /// Gauss norm at `s`, as the exponent `e` of `p^(-e)`.
    pub fn gauss_norm(&self, s: &Radius) -> Result<Exponent> {
        Ok(self.certified_max(s)?.0)
    }

    /// The largest total degree attaining the Gauss norm at `s`.
    pub fn ord(&self, s: &Radius) -> Result<u32> {
        let (_, attain) = self.certified_max(s)?;
        Ok(attain.iter().map(|i| total(i)).max().expect("nonempty"))
    }

    /// Indices attaining the Gauss norm for some radius `r·p^(-k)` with
    /// `k ∈ {0, …, depth}^n`.
    pub fn staircase_set(&self, r: &Radius, depth: u32) -> Result<BTreeSet<MultiIndex>> {
        let mut out = BTreeSet::new();
        let n = self.nvars;
        let mut k = vec![0u32; n];
        loop {
            let s = Radius {
                exponents: r.exponents.iter().zip(&k).map(|(m, &d)| *m + exp(d as i64)).collect(),
            };
            out.extend(self.certified_max(&s)?.1);
            // odometer over {0..depth}^n
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(out);
                }
                if k[pos] < depth {
                    k[pos] += 1;
                    break;
                }
                k[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Upper bound for the number of non-unit factors in any factorization
    /// at radius `r` or smaller: `ord(f, r)`.
    pub fn prime_factor_bound(&self, r: &Radius) -> Result<u32> {
        self.ord(r)
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.prime != o.prime || self.nvars != o.nvars {
            return Err(Error::InvalidInput("series over different primes or variables".into()));
        }
        if let (Some(a), Some(b)) = (&self.tail, &o.tail) {
            if a.radius != b.radius {
                return Err(Error::InvalidInput("tails at different reference radii".into()));
            }
        }
        Ok(())
    }

    fn reference_radius(&self, o: &Self) -> Option<Radius> {
        self.tail.as_ref().or(o.tail.as_ref()).map(|t| t.radius.clone())
    }

    /// Exponent of the stored part's norm at `s`, counting inexact
    /// coefficients by their precision. `None` when nothing is stored.
    fn stored_bound(&self, s: &Radius) -> Option<Exponent> {
        self.coeffs
            .iter()
            .map(|(i, c)| exp(c.valuation_lower_bound().unwrap_or(i64::MAX / 4)) + s.weight(i))
            .min()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let trunc = self.trunc.min(o.trunc);
        let mut coeffs = BTreeMap::new();
        let mut dropped = Vec::new();
        for (i, c) in self.coeffs.iter().chain(o.coeffs.iter()) {
            if total(i) > trunc {
                dropped.push((i.clone(), c.clone()));
                continue;
            }
            let e = coeffs.entry(i.clone()).or_insert_with(|| PadicNumber::zero(self.prime));
            *e = e.clone() + c.clone();
        }
        coeffs.retain(|_, c: &mut PadicNumber| !c.is_exact_zero());
        let tail = match self.reference_radius(o) {
            None if dropped.is_empty() => None,
            r => {
                let r = r.unwrap_or_else(|| Radius::uniform(self.nvars, 0));
                let mut tau: Option<Exponent> = None;
                let mut take = |e: Exponent| tau = Some(tau.map_or(e, |t: Exponent| t.min(e)));
                for x in [self, o] {
                    if let Some(t) = x.tail_rescaled(trunc, &r) {
                        take(t);
                    }
                }
                for (i, c) in &dropped {
                    take(exp(c.valuation_lower_bound().unwrap_or(i64::MAX / 4)) + r.weight(i));
                }
                tau.map(|tau| Tail { radius: r, tau })
            }
        };
        Ok(PolydiscSeries { prime: self.prime, nvars: self.nvars, trunc, coeffs, tail })
    }

    /// Tail exponent re-expressed for a lower truncation degree (same radius).
    fn tail_rescaled(&self, _trunc: u32, r: &Radius) -> Option<Exponent> {
        self.tail.as_ref().map(|t| {
            debug_assert_eq!(&t.radius, r);
            t.tau
        })
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &PadicNumber) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(i, a)| (i.clone(), a.clone() * c.clone()))
            .filter(|(_, a)| !a.is_exact_zero())
            .collect();
        if let Some(t) = &mut out.tail {
            match c.valuation_lower_bound() {
                Some(v) => t.tau += exp(v),
                None => out.tail = None,
            }
        }
        out
    }

    /// Product truncated at the smaller truncation degree. Omitted terms of
    /// the stored product are bounded exactly; cross terms with tails are
    /// bounded by products of norms at the reference radius.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let trunc = self.trunc.min(o.trunc);
        let r = self.reference_radius(o);
        let mut coeffs: BTreeMap<MultiIndex, PadicNumber> = BTreeMap::new();
        let mut dropped: Option<Exponent> = None;
        let rr = r.clone().unwrap_or_else(|| Radius::uniform(self.nvars, 0));
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                let k: MultiIndex = i.iter().zip(j).map(|(x, y)| x + y).collect();
                let c = a.clone() * b.clone();
                if total(&k) > trunc {
                    let e = exp(c.valuation_lower_bound().unwrap_or(i64::MAX / 4)) + rr.weight(&k);
                    dropped = Some(dropped.map_or(e, |d| d.min(e)));
                    continue;
                }
                let e = coeffs.entry(k).or_insert_with(|| PadicNumber::zero(self.prime));
                *e = e.clone() + c;
            }
        }
        coeffs.retain(|_, c| !c.is_exact_zero());
        let mut tau = dropped;
        let mut take = |e: Exponent| tau = Some(tau.map_or(e, |t: Exponent| t.min(e)));
        let big = exp(i64::MAX / 4);
        let sf = self.stored_bound(&rr).unwrap_or(big);
        let so = o.stored_bound(&rr).unwrap_or(big);
        let tf = self.tail.as_ref().map(|t| t.tau);
        let to = o.tail.as_ref().map(|t| t.tau);
        if let Some(t) = tf {
            take(t + so);
        }
        if let Some(t) = to {
            take(t + sf);
        }
        if let (Some(a), Some(b)) = (tf, to) {
            take(a + b);
        }
        let tail = match (r, tau) {
            (_, None) => None,
            (Some(radius), Some(tau)) => Some(Tail { radius, tau }),
            (None, Some(tau)) => Some(Tail { radius: rr, tau }),
        };
        Ok(PolydiscSeries { prime: self.prime, nvars: self.nvars, trunc, coeffs, tail })
    }

    /// Inverse of a series with nonzero constant term, truncated at the
    /// same degree, with the omitted part bounded at the reference radius `r`
    /// (or the series' own tail radius).
    pub fn truncated_inverse(&self, r: &Radius) -> Result<Self> {
        let zero_index = vec![0u32; self.nvars];
        let a0 = self.coeff(&zero_index);
        let a0_inv = a0.inv().map_err(|_| {
            Error::NotDivisible("constant term is zero: series is not invertible".into())
        })?;
        let r = self.tail.as_ref().map(|t| t.radius.clone()).unwrap_or_else(|| r.clone());
        let v0 = a0.valuation()?.expect("nonzero");
        // g = f/a0 − 1
        let g = self.scale(&a0_inv);
        let mut g_terms = g.coeffs.clone();
        g_terms.remove(&zero_index);
        let g_stored = PolydiscSeries {
            prime: self.prime,
            nvars: self.nvars,
            trunc: self.trunc,
            coeffs: g_terms,
            tail: None,
        };
        let stored = g_stored.stored_bound(&r);
        let g_tail = g.tail.as_ref().map(|t| t.tau);
        let delta = match (stored, g_tail) {
            (None, None) => None,
            (a, b) => Some(a.into_iter().chain(b).min().expect("one present")),
        };
        if let Some(d) = delta {
            if d <= Exponent::zero() {
                return Err(Error::TailDominates(
                    "non-constant part is not smaller than the constant term".into(),
                ));
            }
        }
        // (1 + g)^{-1} = Σ (−g)^k by the recurrence b_I = −Σ_{J<I} g_{I−J} b_J
        let mut indices: Vec<MultiIndex> = all_indices(self.nvars, self.trunc);
        indices.sort_by_key(|i| total(i));
        let mut b: BTreeMap<MultiIndex, PadicNumber> = BTreeMap::new();
        b.insert(zero_index.clone(), PadicNumber::one(self.prime, a0.rel_precision().unwrap_or(32)));
        for i in indices.iter().skip(1) {
            let mut acc = PadicNumber::zero(self.prime);
            for (j, gj) in &g_stored.coeffs {
                if j.iter().zip(i).all(|(a, c)| a <= c) {
                    let rest: MultiIndex = i.iter().zip(j).map(|(c, a)| c - a).collect();
                    if let Some(bv) = b.get(&rest) {
                        acc = acc + gj.clone() * bv.clone();
                    }
                }
            }
            let acc = -acc;
            if !acc.is_exact_zero() {
                b.insert(i.clone(), acc);
            }
        }
        let max_deg = g_stored.coeffs.keys().map(|i| total(i)).max().unwrap_or(0);
        let tail = delta.map(|d| {
            let k_min = if max_deg == 0 {
                i64::MAX / 8
            } else {
                ((self.trunc as i64 + 1) + max_deg as i64 - 1) / max_deg as i64
            };
            let k_min = k_min.max(2);
            let from_powers = d * exp(k_min);
            let t = match g_tail {
                Some(t) => t.min(from_powers),
                None => from_powers,
            };
            Tail { radius: r.clone(), tau: t - exp(v0) }
        });
        let inv = PolydiscSeries {
            prime: self.prime,
            nvars: self.nvars,
            trunc: self.trunc,
            coeffs: b.into_iter().map(|(i, c)| (i, c * a0_inv.clone())).collect(),
            tail,
        };
        Ok(inv)
    }

    /// Serializable view: `(index, valuation, unit digits)` triples plus `(p, D, τ)`.
    pub fn to_wire(&self) -> SeriesWire {
        SeriesWire {
            p: self.prime,
            nvars: self.nvars,
            truncation: self.trunc,
            tail: self.tail.as_ref().map(|t| TailWire {
                radius: t.radius.exponents.iter().map(|m| m.to_string()).collect(),
                tau: t.tau.to_string(),
            }),
            terms: self
                .coeffs
                .iter()
                .map(|(i, c)| TermWire {
                    index: i.clone(),
                    valuation: c.valuation().ok().flatten(),
                    unit: c.unit_part().map(|u| u.to_string()),
                    precision: c.abs_precision(),
                })
                .collect(),
        }
    }
}

fn all_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in all_indices(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesWire {
    pub p: u64,
    pub nvars: usize,
    pub truncation: u32,
    pub tail: Option<TailWire>,
    pub terms: Vec<TermWire>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailWire {
    pub radius: Vec<String>,
    pub tau: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermWire {
    pub index: MultiIndex,
    pub valuation: Option<i64>,
    pub unit: Option<String>,
    /// Absolute precision of the coefficient.
    pub precision: Option<i64>,
}

/// Converts an exponent to `f64` for display only.
pub fn exponent_to_f64(e: &Exponent) -> f64 {
    e.to_f64().unwrap_or(f64::NAN)
}
