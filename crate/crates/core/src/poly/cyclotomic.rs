use num_traits::One;

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::numeric::{Field, Rational};

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// All `m ≥ 1` with `φ(m) ≤ bound`, increasing. Uses `φ(m) ≥ sqrt(m/2)`,
/// so `m ≤ 2·bound²` suffices; the scan runs to `max(2·bound², bound² + bound)`.
pub fn orders_with_phi_at_most(bound: u64) -> Vec<u64> {
    let limit = (2 * bound * bound).max(bound * bound + bound).max(2);
    (1..=limit).filter(|&m| euler_phi(m) <= bound).collect()
}

/// `t^n − 1`.
pub fn t_pow_minus_one<K: Field>(n: usize) -> UniPoly<K> {
    &UniPoly::monomial(K::one(), n) - &UniPoly::one()
}

/// The `n`-th cyclotomic polynomial, from `t^n − 1` by dividing out `Φ_k` for
/// proper divisors `k`.
pub fn cyclotomic_polynomial(n: u64) -> UniPoly<Rational> {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut p = t_pow_minus_one::<Rational>(n as usize);
    for k in (1..n).filter(|k| n % k == 0) {
        p = p.exact_div(&cyclotomic_polynomial(k)).expect("Φ_k divides t^n − 1");
    }
    p
}

/// Splits a monic polynomial as `P = C·Q` where every root of `C` is a root
/// of unity and `Q` has none.
pub fn cyclotomic_part(p: &UniPoly<Rational>) -> Result<(UniPoly<Rational>, UniPoly<Rational>)> {
    if p.is_zero() || !p.lead().is_one() {
        return Err(Error::NonMonic);
    }
    let mut c = UniPoly::one();
    let mut q = p.clone();
    for n in orders_with_phi_at_most(p.deg() as u64) {
        if q.deg() == 0 {
            break;
        }
        let tn = t_pow_minus_one::<Rational>(n as usize);
        loop {
            let g = q.gcd(&tn);
            if g.deg() == 0 {
                break;
            }
            q = q.exact_div(&g)?;
            c = &c * &g;
        }
    }
    Ok((c, q))
}

/// `gcd(Q, t^n − 1) = 1` for every `n` with `φ(n) ≤ deg Q`.
pub fn is_cyclotomic_free(q: &UniPoly<Rational>) -> bool {
    orders_with_phi_at_most(q.deg() as u64)
        .into_iter()
        .all(|n| q.gcd(&t_pow_minus_one(n as usize)).deg() == 0)
}
