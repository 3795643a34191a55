//! Local p-adic dynamics of one-variable germs `F: pZ_p → pZ_p`: attracting
//! fixed points, linearizing and Böttcher coordinates with certified isometry
//! radii, the local case split for a pair of germs, and the root-of-unity
//! limit test.

mod conjugacy;
mod limit;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{padic_from_rational, PadicNumber, Rational};
use crate::padic_series::{exp, Exponent, PolydiscSeries, Radius, Tail};

pub use conjugacy::{boettcher_coordinate, certify_isometry, koenigs_linearize, Conjugacy};
pub use limit::{root_of_unity_limit_test, LimitReport, LimitVerdict, UnitInput, ValuationReading};

/// A one-variable germ with `p`-integral coefficients and `F(0) ∈ pZ_p`.
///
/// Omitted coefficients (beyond the truncation) are assumed integral as well;
/// a tail bound, if present, quantifies them at its reference radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    series: PolydiscSeries,
}

impl Germ {
    pub fn new(series: PolydiscSeries) -> Result<Self> {
        if series.nvars() != 1 {
            return Err(Error::InvalidInput("a germ has one variable".into()));
        }
        for (i, c) in series.terms() {
            let lb = c.valuation_lower_bound().unwrap_or(i64::MAX);
            if lb < 0 {
                return Err(Error::InvalidInput(format!("coefficient of z^{} is not integral", i[0])));
            }
            if i[0] == 0 && lb < 1 {
                return Err(Error::InvalidInput("constant term must lie in pZ_p".into()));
            }
        }
        Ok(Germ { series })
    }

    /// The polynomial germ `Σ coeffs[k] z^k`, coefficients at `precision` digits.
    pub fn from_rationals(p: u64, coeffs: &[Rational], precision: u32) -> Result<Self> {
        let cs = coeffs.iter().map(|c| padic_from_rational(c, p, precision)).collect();
        Self::new(PolydiscSeries::univariate(p, coeffs.len().saturating_sub(1) as u32, cs, None)?)
    }

    pub fn from_ints(p: u64, coeffs: &[i64], precision: u32) -> Result<Self> {
        let cs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        Self::from_rationals(p, &cs, precision)
    }

    pub fn series(&self) -> &PolydiscSeries {
        &self.series
    }
    pub fn prime(&self) -> u64 {
        self.series.prime()
    }
    pub fn trunc(&self) -> u32 {
        self.series.trunc()
    }
    pub fn coeff(&self, k: u32) -> PadicNumber {
        self.series.coeff1(k)
    }
    /// Coefficients `a_0, …, a_D`.
    pub fn coeffs(&self) -> Vec<PadicNumber> {
        (0..=self.trunc()).map(|k| self.coeff(k)).collect()
    }
    /// Usable truncation for a target degree: any degree for a polynomial
    /// germ, at most the stored truncation otherwise.
    pub fn usable_degree(&self, n: u32) -> u32 {
        if self.series.tail().is_none() { n } else { n.min(self.trunc()) }
    }
    /// Coefficients `a_0, …, a_n`, padding a polynomial germ with zeros.
    pub fn coeffs_to(&self, n: u32) -> Vec<PadicNumber> {
        (0..=n).map(|k| self.coeff(k)).collect()
    }
    pub fn constant(&self) -> PadicNumber {
        self.coeff(0)
    }
    pub fn derivative_at_zero(&self) -> PadicNumber {
        self.coeff(1)
    }

    /// Bound `p^(-e)` on the contribution of omitted terms at points with
    /// `|w| ≤ p^(-m)`; `None` when nothing is omitted.
    fn tail_error(&self, m: i64) -> Result<Option<i64>> {
        let Some(t) = self.series.tail() else { return Ok(None) };
        let rho = t.radius.exponents[0];
        if exp(m) < rho {
            return Err(Error::TailDominates("point outside the certified tail radius".into()));
        }
        let e = t.tau + (exp(m) - rho) * exp(self.trunc() as i64 + 1);
        Ok(Some(e.floor().to_integer()))
    }

    fn cap(&self, x: PadicNumber, w: &PadicNumber) -> Result<PadicNumber> {
        let m = w.valuation_lower_bound().unwrap_or(i64::MAX / 4).min(1 << 20);
        Ok(match self.tail_error(m.max(1))? {
            Some(e) => x.cap_absolute(e),
            None => x,
        })
    }

    /// `F(w)` for `w ∈ pZ_p`, with the omitted part folded into the precision.
    pub fn eval(&self, w: &PadicNumber) -> Result<PadicNumber> {
        let v = horner(&self.coeffs(), w, self.prime());
        self.cap(v, w)
    }

    pub fn derivative_eval(&self, w: &PadicNumber) -> Result<PadicNumber> {
        let cs = self.coeffs();
        let d: Vec<PadicNumber> = cs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * PadicNumber::from_int(k as i64, self.prime(), 64))
            .collect();
        let v = horner(&d, w, self.prime());
        self.cap(v, w)
    }

    /// `w ↦ F(w + c) − c` for `c ∈ pZ_p`.
    pub fn translate(&self, c: &PadicNumber) -> Result<Germ> {
        let p = self.prime();
        let vc = c.valuation_lower_bound().unwrap_or(i64::MAX);
        if vc < 1 {
            return Err(Error::InvalidInput("translation must stay inside pZ_p".into()));
        }
        let a = self.coeffs();
        let n = a.len();
        // Taylor shift by repeated synthetic division
        let mut b = a.clone();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = b[j + 1].clone() * c.clone();
                b[j] = b[j].clone() + t;
            }
        }
        b[0] = b[0].clone() - c.clone();
        let tail = match self.series.tail() {
            None => None,
            Some(t) => {
                let rho = t.radius.exponents[0];
                if exp(vc) < rho {
                    return Err(Error::TailDominates(
                        "translation leaves the certified tail radius".into(),
                    ));
                }
                // the omitted part keeps its Gauss norm and leaks into every coefficient
                for (j, bj) in b.iter_mut().enumerate() {
                    let cap = (t.tau - rho * exp(j as i64)).floor().to_integer();
                    *bj = bj.cap_absolute(cap);
                }
                Some(t.clone())
            }
        };
        Germ::new(PolydiscSeries::univariate(p, self.trunc(), b, tail)?)
    }
}

pub(crate) fn horner(cs: &[PadicNumber], w: &PadicNumber, p: u64) -> PadicNumber {
    cs.iter().rev().fold(PadicNumber::zero(p), |acc, c| acc * w.clone() + c.clone())
}

/// The unique fixed point of an attracting germ in `pZ_p`, by Newton's method
/// on `G(w) − w`, whose derivative is a unit on `pZ_p`.
pub fn find_attracting_fixed_point(g: &Germ) -> Result<PadicNumber> {
    let a1 = g.derivative_at_zero();
    match a1.valuation() {
        Ok(Some(0)) => return Err(Error::InvalidInput("derivative at 0 is a unit".into())),
        Ok(_) => {}
        Err(_) if a1.valuation_lower_bound() >= Some(1) => {}
        Err(e) => return Err(e),
    }
    if g.constant().is_exact_zero() {
        return Ok(PadicNumber::zero(g.prime()));
    }
    let p = g.prime();
    let one = PadicNumber::one(p, 64);
    let mut w = PadicNumber::zero(p);
    for _ in 0..256 {
        let h = g.eval(&w)? - w.clone();
        if h.is_indistinguishable_from_zero() {
            return Ok(w);
        }
        let dh = g.derivative_eval(&w)? - one.clone();
        let next = w.clone() - h.div(&dh)?;
        if next == w {
            return Ok(w);
        }
        w = next;
    }
    Err(Error::PrecisionLoss("fixed-point iteration did not settle".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LocalCase {
    /// Both derivatives are units.
    Case1,
    /// One unit derivative; the other germ has nonzero derivative at its fixed point.
    Case2a,
    /// One unit derivative; the other germ is superattracting.
    Case2b,
    /// No unit derivative; at least one germ has nonzero multiplier at its fixed point.
    Case3a,
    /// Both germs are superattracting.
    Case3b,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Multiplier {
    Unit,
    Attracting,
    Superattracting,
}

fn multiplier(g: &Germ) -> Result<Multiplier> {
    let a1 = g.derivative_at_zero();
    if a1.valuation().ok().flatten() == Some(0) {
        return Ok(Multiplier::Unit);
    }
    let c = find_attracting_fixed_point(g)?;
    let m = if c.is_exact_zero() { a1 } else { g.derivative_eval(&c)? };
    if m.is_exact_zero() {
        return Ok(Multiplier::Superattracting);
    }
    match m.valuation() {
        Ok(Some(_)) => Ok(Multiplier::Attracting),
        _ => Err(Error::PrecisionLoss(
            "multiplier at the fixed point is indistinguishable from zero".into(),
        )),
    }
}

/// Which local case a pair of germs falls into, after moving each attracting
/// germ's fixed point to the origin.
pub fn classify_local_case(f: &Germ, g: &Germ) -> Result<LocalCase> {
    use Multiplier::*;
    let (a, b) = (multiplier(f)?, multiplier(g)?);
    Ok(match (a, b) {
        (Unit, Unit) => LocalCase::Case1,
        (Unit, Attracting) | (Attracting, Unit) => LocalCase::Case2a,
        (Unit, Superattracting) | (Superattracting, Unit) => LocalCase::Case2b,
        (Superattracting, Superattracting) => LocalCase::Case3b,
        _ => LocalCase::Case3a,
    })
}

/// `f(g(z))` modulo `z^(n+1)`; `g(0)` must vanish.
pub(crate) fn compose_trunc(f: &[PadicNumber], g: &[PadicNumber], n: usize, p: u64) -> Vec<PadicNumber> {
    let mut acc = vec![PadicNumber::zero(p); n + 1];
    for c in f.iter().rev() {
        acc = mul_trunc(&acc, g, n, p);
        acc[0] = acc[0].clone() + c.clone();
    }
    acc
}

pub(crate) fn mul_trunc(a: &[PadicNumber], b: &[PadicNumber], n: usize, p: u64) -> Vec<PadicNumber> {
    let mut out = vec![PadicNumber::zero(p); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_exact_zero() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

/// The univariate series `Σ cs[k] z^k` with a tail at radius `p^(-m)`.
pub(crate) fn series_with_tail(p: u64, cs: Vec<PadicNumber>, tail: Option<(Exponent, Exponent)>) -> Result<PolydiscSeries> {
    let trunc = cs.len().saturating_sub(1) as u32;
    let tail = tail.map(|(m, tau)| Tail { radius: Radius { exponents: vec![m] }, tau });
    PolydiscSeries::univariate(p, trunc, cs, tail)
}
