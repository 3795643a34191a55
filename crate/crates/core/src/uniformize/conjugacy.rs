use serde::{Serialize, Serializer};

use super::{compose_trunc, series_with_tail, Germ};
use crate::error::{Error, Result};
use crate::numeric::{nth_root_padic, PadicNumber};
use crate::padic_series::{exp, Exponent, PolydiscSeries};

/// `φ` with `F∘φ = φ∘model` on the disc of radius `p^(-s)`, where the model
/// is `z ↦ λz` or `z ↦ z^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugacy {
    pub phi: PolydiscSeries,
    /// Exponent `m` of the source radius `p^(-m)`; `None` if no radius was certified.
    pub source_radius: Option<Exponent>,
    /// Exponent of the image radius `|φ'(0)|·p^(-m)`.
    pub target_radius: Option<Exponent>,
    pub certified: bool,
    /// Residual coefficients of the functional equation, all expected to be
    /// zero to working precision.
    pub residual: Vec<PadicNumber>,
}

impl Conjugacy {
    pub fn coeffs(&self) -> Vec<PadicNumber> {
        (0..=self.phi.trunc()).map(|k| self.phi.coeff1(k)).collect()
    }

    /// Whether every residual coefficient is zero to its precision.
    pub fn residual_vanishes(&self) -> bool {
        self.residual.iter().all(|r| r.is_indistinguishable_from_zero())
    }

    /// Smallest relative precision among the certified coefficients of `φ`.
    pub fn precision(&self) -> Option<u32> {
        self.phi.terms().filter_map(|(_, c)| c.rel_precision()).min()
    }
}

impl Serialize for Conjugacy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            p: u64,
            s: Option<String>,
            r_prime: Option<String>,
            certified: bool,
            residual_vanishes: bool,
            coefficients: Vec<PadicNumber>,
        }
        Wire {
            p: self.phi.prime(),
            s: self.source_radius.map(|m| m.to_string()),
            r_prime: self.target_radius.map(|m| m.to_string()),
            certified: self.certified,
            residual_vanishes: self.residual_vanishes(),
            coefficients: self.coeffs(),
        }
        .serialize(s)
    }
}

/// Whether the linear term of `φ` strictly dominates every other stored term
/// and the tail on the disc of radius `p^(-m)`.
pub fn certify_isometry(phi: &PolydiscSeries, m: &Exponent) -> Result<bool> {
    if phi.nvars() != 1 {
        return Err(Error::InvalidInput("isometry check needs a one-variable series".into()));
    }
    if !phi.coeff1(0).is_indistinguishable_from_zero() {
        return Err(Error::InvalidInput("φ(0) must vanish".into()));
    }
    let c1 = phi.coeff1(1);
    let v1 = match c1.valuation() {
        Ok(Some(v)) => v,
        Ok(None) => return Err(Error::InvalidInput("φ'(0) must be nonzero".into())),
        Err(_) => {
            return Err(Error::TailDominates("linear coefficient is not certified nonzero".into()))
        }
    };
    let lin = exp(v1) + *m;
    for (i, c) in phi.terms() {
        if i[0] < 2 {
            continue;
        }
        if let Some(v) = c.valuation_lower_bound() {
            if exp(v) + *m * exp(i[0] as i64) <= lin {
                return Ok(false);
            }
        }
    }
    if let Some(t) = phi.tail() {
        let rho = t.radius.exponents[0];
        if *m < rho {
            return Err(Error::TailDominates(format!("tail certified only for radii inside p^-({rho})")));
        }
        let tau = t.tau + (*m - rho) * exp(phi.trunc() as i64 + 1);
        if tau <= lin {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest radius `p^(-m)`, `m = 1..=max_m`, at which `build(m)` certifies.
fn search_radius(
    max_m: u32,
    build: impl Fn(i64) -> Result<PolydiscSeries>,
) -> Result<Option<(Exponent, PolydiscSeries)>> {
    for m in 1..=max_m.max(1) as i64 {
        let phi = build(m)?;
        if phi.tail().is_none() {
            return Ok(None);
        }
        if certify_isometry(&phi, &exp(m))? {
            return Ok(Some((exp(m), phi)));
        }
    }
    Ok(None)
}

fn finish(
    p: u64,
    cs: Vec<PadicNumber>,
    found: Option<(Exponent, PolydiscSeries)>,
    residual: Vec<PadicNumber>,
) -> Result<Conjugacy> {
    let v1 = cs[1].valuation()?.expect("linear coefficient is nonzero");
    Ok(match found {
        Some((m, phi)) => Conjugacy {
            phi,
            source_radius: Some(m),
            target_radius: Some(m + exp(v1)),
            certified: true,
            residual,
        },
        None => Conjugacy {
            phi: series_with_tail(p, cs, None)?,
            source_radius: None,
            target_radius: None,
            certified: false,
            residual,
        },
    })
}

fn require_fixed_origin(f: &Germ) -> Result<()> {
    if !f.constant().is_indistinguishable_from_zero() {
        return Err(Error::InvalidInput("germ must fix the origin".into()));
    }
    Ok(())
}

/// Koenigs coordinate: `φ(λz) = F(φ(z))` modulo `z^(D+1)` with `φ'(0) = 1`.
///
/// Coefficients satisfy `v(c_k) ≥ −(k−1)·v(λ)`, which bounds the omitted
/// part at radius `p^(-m)` by `p^-((D+1)(m − v(λ)) + v(λ))`.
pub fn koenigs_linearize(f: &Germ, d: u32) -> Result<Conjugacy> {
    require_fixed_origin(f)?;
    let p = f.prime();
    let lam = f.derivative_at_zero();
    let v = match lam.valuation()? {
        Some(v) if v >= 1 => v,
        _ => return Err(Error::InvalidInput("need 0 < |F'(0)| < 1".into())),
    };
    let d = f.usable_degree(d).max(1) as usize;
    let prec = lam.rel_precision().expect("certified nonzero");
    let mut high = f.coeffs_to(d as u32);
    high[0] = PadicNumber::zero(p);
    high[1] = PadicNumber::zero(p);
    let mut phi = vec![PadicNumber::zero(p); d + 1];
    phi[1] = PadicNumber::one(p, prec);
    let mut lam_k = lam.clone();
    for k in 2..=d {
        lam_k = lam_k * lam.clone();
        let s = compose_trunc(&high, &phi[..k + 1], k, p)[k].clone();
        phi[k] = s.div(&(lam_k.clone() - lam.clone()))?;
    }
    // residual φ(λz) − F(φ(z))
    let mut lhs = phi.clone();
    let mut lp = PadicNumber::one(p, prec);
    for c in lhs.iter_mut() {
        *c = c.clone() * lp.clone();
        lp = lp * lam.clone();
    }
    let fc = f.coeffs_to(d as u32);
    let rhs = compose_trunc(&fc, &phi, d, p);
    let residual: Vec<PadicNumber> = lhs.into_iter().zip(rhs).map(|(a, b)| a - b).collect();
    let cs = phi.clone();
    let found = search_radius(d as u32, |m| {
        let tau = exp((d as i64 + 1) * (m - v) + v);
        series_with_tail(p, cs.clone(), Some((exp(m), tau)))
    })?;
    finish(p, phi, found, residual)
}

/// Böttcher coordinate: `F(φ(z)) = φ(z^d)` with `φ'(0)^(d−1) = 1/a_d`, for
/// `F = a_d z^d + …`.
///
/// A radius is certified when `a_d` is a unit and `p ∤ d`: then every
/// coefficient of `φ` is integral.
pub fn boettcher_coordinate(f: &Germ, trunc: u32) -> Result<Conjugacy> {
    require_fixed_origin(f)?;
    let p = f.prime();
    let cs = f.coeffs();
    let mut order = None;
    for (k, c) in cs.iter().enumerate().skip(1) {
        match c.valuation() {
            Ok(None) => continue,
            Ok(Some(_)) => {
                order = Some(k);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let Some(dd) = order else {
        return Err(Error::InvalidInput("germ vanishes to working truncation".into()));
    };
    if dd < 2 {
        return Err(Error::InvalidInput("Böttcher coordinate needs F'(0) = 0".into()));
    }
    let a_d = cs[dd].clone();
    let beta = nth_root_padic(&a_d, dd as u32 - 1).map_err(|e| match e {
        Error::NoRootInField(m) => Error::ExtensionRequired(m),
        other => other,
    })?;
    let b1 = beta.inv()?;
    let avail = f.usable_degree(trunc + dd as u32 - 1) as usize;
    let n = (avail + 1 - dd).max(1);
    let top = n + dd - 1;
    let fc = f.coeffs_to(top as u32);
    let d_inv = PadicNumber::from_int(dd as i64, p, 64).inv()?;
    let mut phi = vec![PadicNumber::zero(p); n + 1];
    phi[1] = b1.clone();
    for k in 2..=n {
        let deg = dd + k - 1;
        let l = compose_trunc(&fc, &phi, deg, p)[deg].clone();
        let r = if deg % dd == 0 { phi[deg / dd].clone() } else { PadicNumber::zero(p) };
        phi[k] = (r - l) * d_inv.clone();
    }
    // residual F(φ(z)) − φ(z^d) through degree D + d − 1
    let lhs = compose_trunc(&fc, &phi, top, p);
    let mut rhs = vec![PadicNumber::zero(p); top + 1];
    for (k, c) in phi.iter().enumerate() {
        if k * dd <= top {
            rhs[k * dd] = c.clone();
        }
    }
    let residual: Vec<PadicNumber> = lhs.into_iter().zip(rhs).map(|(a, b)| a - b).collect();
    let integral = a_d.valuation()? == Some(0) && dd as u64 % p != 0;
    let cs_phi = phi.clone();
    let found = if integral {
        search_radius(n as u32, |m| {
            series_with_tail(p, cs_phi.clone(), Some((exp(m), exp((n as i64 + 1) * m))))
        })?
    } else {
        None
    };
    finish(p, phi, found, residual)
}
