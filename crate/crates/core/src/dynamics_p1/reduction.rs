use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::Serialize;

use super::map::RationalMap;
use crate::error::{Error, Result};
use crate::numeric::modular::{add_mod, inv_mod, mul_mod, reduce_integer};
use crate::numeric::{padic_from_rational, valuation_of_rational, Integer, Rational};
use crate::padic_series::exp;
use crate::poly::UniPoly;
use crate::uniformize::{series_with_tail, Germ};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Smallest prime `p ≥ p_min`, `p ≤ bound`, that is odd, keeps every
/// integral resultant a unit and divides no ramification index.
pub fn choose_good_prime(maps: &[RationalMap<Rational>], p_min: u64, bound: u64) -> Result<u64> {
    let data: Vec<(Integer, Vec<u32>)> =
        maps.iter().map(|f| (f.integral_resultant(), f.ramification_multiset())).collect();
    let mut p = p_min.max(3);
    while p <= bound {
        if is_prime(p)
            && data.iter().all(|(res, es)| {
                reduce_integer(res, p) != 0 && es.iter().all(|&e| e as u64 % p != 0)
            })
        {
            return Ok(p);
        }
        p += 1;
    }
    Err(Error::SearchExhausted(format!("no good prime in [{}, {bound}]", p_min.max(3))))
}

/// A self-map of P¹(F_p). Point `i < p` is the residue `i`, point `p` is infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteMap {
    p: u64,
    table: Vec<u64>,
}

impl FiniteMap {
    pub fn new(p: u64, table: Vec<u64>) -> Result<Self> {
        if table.len() as u64 != p + 1 || table.iter().any(|&t| t > p) {
            return Err(Error::InvalidInput("table must map the p + 1 points into themselves".into()));
        }
        Ok(FiniteMap { p, table })
    }

    pub fn identity(p: u64) -> Self {
        FiniteMap { p, table: (0..=p).collect() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn apply(&self, i: u64) -> u64 {
        self.table[i as usize]
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &FiniteMap) -> FiniteMap {
        assert_eq!(self.p, g.p, "maps over different primes");
        FiniteMap { p: self.p, table: g.table.iter().map(|&i| self.apply(i)).collect() }
    }

    pub fn iterate(&self, n: u64) -> FiniteMap {
        let mut acc = FiniteMap::identity(self.p);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn fixed_points(&self) -> Vec<u64> {
        (0..=self.p).filter(|&i| self.apply(i) == i).collect()
    }

    /// Smallest `k ≥ 1` with `f^k ∘ f^k = f^k`: the least multiple of the
    /// lcm of the cycle lengths that is at least the longest preperiod.
    pub fn idempotent_power(&self) -> u64 {
        let n = self.table.len();
        let mut lcm = 1u64;
        let mut preperiod = 0u64;
        for start in 0..n as u64 {
            let mut seen = vec![usize::MAX; n];
            let mut x = start;
            let mut step = 0;
            while seen[x as usize] == usize::MAX {
                seen[x as usize] = step;
                x = self.apply(x);
                step += 1;
            }
            let first = seen[x as usize];
            preperiod = preperiod.max(first as u64);
            lcm = lcm.lcm(&((step - first) as u64));
        }
        let mut k = lcm;
        while k < preperiod {
            k += lcm;
        }
        k
    }

    pub fn label(&self, i: u64) -> String {
        if i == self.p { "inf".into() } else { i.to_string() }
    }
}

fn eval_mod(coeffs: &[u64], a: u64, b: u64, p: u64) -> u64 {
    let d = coeffs.len() - 1;
    let mut acc = 0;
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = mul_mod(c, mul_mod(pow(a, k as u64, p), pow(b, (d - k) as u64, p), p), p);
        acc = add_mod(acc, term, p);
    }
    acc
}

fn pow(a: u64, e: u64, p: u64) -> u64 {
    crate::numeric::modular::pow_mod(a, e, p)
}

/// The self-map of P¹(F_p) induced by the primitive integral model of `f`.
pub fn reduce_mod_p(f: &RationalMap<Rational>, p: u64) -> Result<FiniteMap> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadReduction(format!("{p} is not an odd prime")));
    }
    if reduce_integer(&f.integral_resultant(), p) == 0 {
        return Err(Error::BadReduction(format!("resultant vanishes mod {p}")));
    }
    let (_, a, b) = f.integral_model();
    let a: Vec<u64> = a.iter().map(|c| reduce_integer(c, p)).collect();
    let b: Vec<u64> = b.iter().map(|c| reduce_integer(c, p)).collect();
    let image = |x0: u64, x1: u64| -> u64 {
        let (u, v) = (eval_mod(&a, x0, x1, p), eval_mod(&b, x0, x1, p));
        match inv_mod(v, p) {
            Some(vi) => mul_mod(u, vi, p),
            None => p,
        }
    };
    let mut table: Vec<u64> = (0..p).map(|i| image(i, 1)).collect();
    table.push(image(1, 0));
    FiniteMap::new(p, table)
}

/// The expansion of `f` around the fixed residue disc of `xi` (a point
/// index as in [`FiniteMap`]): `z ↦ f(c + z) − c` for the lift `c = xi`, or
/// `w ↦ 1/f(1/w)` at infinity. Coefficients are exact to `precision` digits;
/// the omitted part is integral, so its tail at radius `p^-1` is `p^-(D+1)`.
pub fn local_germ(f: &RationalMap<Rational>, xi: u64, p: u64, trunc: u32, precision: u32) -> Result<Germ> {
    let red = reduce_mod_p(f, p)?;
    if xi > p || red.apply(xi) != xi {
        return Err(Error::InvalidInput(format!("{} is not fixed by the reduction", red.label(xi))));
    }
    let (g, c) = if xi == p { (f.conjugate_by_inversion(), 0) } else { (f.clone(), xi) };
    let (_, a, b) = g.integral_model();
    let to_poly = |v: &[Integer]| UniPoly::new(v.iter().map(|x| Rational::from_integer(x.clone())).collect());
    let shift = UniPoly::new(vec![Rational::from_integer(c.into()), Rational::one()]);
    let cr = Rational::from_integer(c.into());
    let num = to_poly(&a).compose(&shift);
    let den = to_poly(&b).compose(&shift);
    let num = &num - &den.scale(&cr);
    let b0 = den.coeff(0);
    if b0.is_zero() || valuation_of_rational(&b0, p) != Some(0) {
        return Err(Error::BadReduction("denominator is not a unit on the residue disc".into()));
    }
    let n = trunc as usize;
    let mut q: Vec<Rational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut s = num.coeff(k);
        for j in 1..=k {
            s -= den.coeff(j) * &q[k - j];
        }
        q.push(s / &b0);
    }
    let cs = q.iter().map(|x| padic_from_rational(x, p, precision)).collect();
    Germ::new(series_with_tail(p, cs, Some((exp(1), exp(n as i64 + 1))))?)
}
