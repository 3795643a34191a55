use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{
    is_root_of_unity_gaussian, nth_root_padic, padic_from_rational, Field, GaussianRational,
    PadicNumber, Rational,
};
use crate::numeric::modular::pow_mod;
use crate::poly::{cyclotomic_polynomial, UniPoly};

/// How `ξ` is supplied. Exact inputs also get an exact verdict.
#[derive(Clone, Debug)]
pub enum UnitInput {
    Padic(PadicNumber),
    /// The Teichmüller representative of `residue mod p`.
    Teichmuller { residue: i64 },
    /// A Gaussian rational, embedded in Q_p through the square root of −1
    /// that lifts the smallest residue root (needs `p ≡ 1 mod 4`).
    Gaussian(GaussianRational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVerdict {
    ConvergesToZero,
    /// `P(ξ^(d^n))` does not tend to zero.
    BoundedAway,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ValuationReading {
    Exact(i64),
    /// Zero to working precision: the valuation is at least this.
    AtLeast(i64),
    Infinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    /// The exact verdict when available, else the numerical one.
    pub verdict: LimitVerdict,
    pub numeric_verdict: LimitVerdict,
    pub exact_verdict: Option<LimitVerdict>,
    /// For exact inputs: whether `ξ` is a root of unity.
    pub root_of_unity: Option<bool>,
    pub valuations: Vec<ValuationReading>,
}

fn embed_gaussian(z: &GaussianRational, p: u64, precision: u32) -> Result<PadicNumber> {
    if p % 4 != 1 {
        return Err(Error::InvalidInput(format!("Q(i) does not embed in Q_{p}")));
    }
    let minus_one = PadicNumber::from_int(-1, p, precision);
    let i = nth_root_padic(&minus_one, 2)?;
    Ok(padic_from_rational(&z.re, p, precision) + padic_from_rational(&z.im, p, precision) * i)
}

fn reading(x: &PadicNumber) -> ValuationReading {
    match x.valuation() {
        Ok(Some(v)) => ValuationReading::Exact(v),
        Ok(None) => ValuationReading::Infinite,
        Err(_) => ValuationReading::AtLeast(x.abs_precision().expect("inexact zero")),
    }
}

fn numeric_verdict(rs: &[ValuationReading]) -> LimitVerdict {
    let half = &rs[rs.len() / 2..];
    let small = |r: &ValuationReading| !matches!(r, ValuationReading::Exact(_));
    if half.iter().all(small) {
        return LimitVerdict::ConvergesToZero;
    }
    if let ValuationReading::Exact(v) = half[0] {
        if half.iter().all(|r| *r == ValuationReading::Exact(v)) {
            return LimitVerdict::BoundedAway;
        }
    }
    LimitVerdict::Inconclusive
}

/// Follows `ξ^(d^n)` for `n = 0..=n_max` and reads off `v(P(ξ^(d^n)))`.
///
/// Numerically the verdict is `ConvergesToZero` when the later half of the
/// readings is zero to working precision, `BoundedAway` when it is a constant
/// finite valuation. For Teichmüller and Gaussian inputs the sequence is
/// decided exactly: a root of unity makes it eventually periodic, and the
/// limit is zero iff `P` vanishes on the whole cycle; otherwise `ξ` is not a
/// root of unity and the limit cannot be zero.
pub fn root_of_unity_limit_test(
    xi: &UnitInput,
    p: u64,
    precision: u32,
    poly: &UniPoly<Rational>,
    d: u64,
    n_max: u32,
) -> Result<LimitReport> {
    if d == 0 || d % p == 0 {
        return Err(Error::InvalidInput("need d ≥ 1 with p ∤ d".into()));
    }
    if poly.is_zero() {
        return Err(Error::InvalidInput("P must be nonzero".into()));
    }
    let x0 = match xi {
        UnitInput::Padic(x) => x.clone(),
        UnitInput::Teichmuller { residue } => PadicNumber::teichmuller(*residue, p, precision),
        UnitInput::Gaussian(z) => embed_gaussian(z, p, precision)?,
    };
    if x0.valuation()? != Some(0) {
        return Err(Error::InvalidInput("ξ must be a p-adic unit".into()));
    }
    let coeffs: Vec<PadicNumber> =
        poly.coeffs().iter().map(|c| padic_from_rational(c, p, precision)).collect();
    let mut x = x0;
    let mut readings = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        readings.push(reading(&super::horner(&coeffs, &x, p)));
        if n < n_max {
            x = x.pow(d);
        }
    }
    let numeric = numeric_verdict(&readings);
    let (exact, rou) = match xi {
        UnitInput::Padic(_) => (None, None),
        UnitInput::Teichmuller { residue } => {
            (Some(teichmuller_verdict(*residue, p, poly, d)), Some(true))
        }
        UnitInput::Gaussian(z) => {
            if is_root_of_unity_gaussian(z)? {
                (Some(gaussian_verdict(z, poly, d)), Some(true))
            } else {
                (Some(LimitVerdict::BoundedAway), Some(false))
            }
        }
    };
    Ok(LimitReport {
        verdict: exact.unwrap_or(numeric),
        numeric_verdict: numeric,
        exact_verdict: exact,
        root_of_unity: rou,
        valuations: readings,
    })
}

/// Eventual cycle of `x ↦ x^d` starting from `x0`, given exact equality.
fn eventual_cycle<T: Clone + Eq + std::hash::Hash>(x0: T, step: impl Fn(&T) -> T) -> Vec<T> {
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut seq = vec![x0];
    loop {
        let last = seq.last().expect("nonempty").clone();
        if let Some(&i) = seen.get(&last) {
            return seq[i..seq.len() - 1].to_vec();
        }
        seen.insert(last.clone(), seq.len() - 1);
        seq.push(step(&last));
    }
}

fn multiplicative_order(a: u64, p: u64) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * (a % p) % p;
        k += 1;
    }
    k
}

fn teichmuller_verdict(residue: i64, p: u64, poly: &UniPoly<Rational>, d: u64) -> LimitVerdict {
    let b0 = residue.rem_euclid(p as i64) as u64;
    let cycle = eventual_cycle(b0, |&b| pow_mod(b, d, p));
    // ω(b) is a root of P iff the cyclotomic polynomial of its order divides P
    let vanishes = cycle
        .iter()
        .all(|&b| cyclotomic_polynomial(multiplicative_order(b, p)).divides(poly));
    if vanishes {
        LimitVerdict::ConvergesToZero
    } else {
        LimitVerdict::BoundedAway
    }
}

fn gaussian_verdict(z: &GaussianRational, poly: &UniPoly<Rational>, d: u64) -> LimitVerdict {
    let cycle = eventual_cycle(z.clone(), |x| x.powu(d));
    let pg = poly.map(|c| GaussianRational::from_rational(c.clone()));
    if cycle.iter().all(|x| pg.eval(x).is_zero()) {
        LimitVerdict::ConvergesToZero
    } else {
        LimitVerdict::BoundedAway
    }
}
