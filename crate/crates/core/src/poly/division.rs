//! Division polynomials and multiplication maps of `y² = x³ + ax + b`.

use std::collections::BTreeMap;

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::numeric::Field;

/// `ψ_n = P_n · y^e` with `P_n` a polynomial in `x` and `e = 1` for even `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionPolynomial<K> {
    pub n: u32,
    /// `P_n`, the part free of `y`.
    pub reduced: UniPoly<K>,
    pub has_y_factor: bool,
}

impl<K: Field> DivisionPolynomial<K> {
    /// `ψ_n²` as a polynomial in `x`, using `y² = x³ + ax + b`.
    pub fn squared(&self, a: &K, b: &K) -> UniPoly<K> {
        let sq = self.reduced.pow(2);
        if self.has_y_factor {
            &sq * &cubic(a, b)
        } else {
            sq
        }
    }
}

/// `x³ + ax + b`.
pub fn cubic<K: Field>(a: &K, b: &K) -> UniPoly<K> {
    UniPoly::new(vec![b.clone(), a.clone(), K::zero(), K::one()])
}

fn check_curve<K: Field>(a: &K, b: &K) -> Result<()> {
    let disc = K::from_int(4) * a.clone() * a.clone() * a.clone()
        + K::from_int(27) * b.clone() * b.clone();
    if disc.is_zero() {
        return Err(Error::InvalidInput("singular curve: 4a^3 + 27b^2 = 0".into()));
    }
    Ok(())
}

struct Table<K: Field> {
    f: UniPoly<K>,
    memo: BTreeMap<u32, UniPoly<K>>,
}

impl<K: Field> Table<K> {
    fn new(a: &K, b: &K) -> Self {
        let c = |n: i64| K::from_int(n);
        let (a2, ab, b2, a3) = (
            a.clone() * a.clone(),
            a.clone() * b.clone(),
            b.clone() * b.clone(),
            a.clone() * a.clone() * a.clone(),
        );
        let mut memo = BTreeMap::new();
        memo.insert(0, UniPoly::zero());
        memo.insert(1, UniPoly::one());
        memo.insert(2, UniPoly::constant(c(2)));
        memo.insert(
            3,
            UniPoly::new(vec![-a2.clone(), c(12) * b.clone(), c(6) * a.clone(), K::zero(), c(3)]),
        );
        memo.insert(
            4,
            UniPoly::new(vec![
                -(c(8) * b2 + a3),
                -(c(4) * ab.clone()),
                -(c(5) * a2),
                c(20) * b.clone(),
                c(5) * a.clone(),
                K::zero(),
                K::one(),
            ])
            .scale(&c(4)),
        );
        Table { f: cubic(a, b), memo }
    }

    fn get(&mut self, n: u32) -> UniPoly<K> {
        if let Some(p) = self.memo.get(&n) {
            return p.clone();
        }
        let m = n / 2;
        let f2 = self.f.pow(2);
        let p = if n % 2 == 1 {
            let (pm2, pm, pm1, pp1) = (self.get(m + 2), self.get(m), self.get(m - 1), self.get(m + 1));
            let t1 = &pm2 * &pm.pow(3);
            let t2 = &pm1 * &pp1.pow(3);
            if m % 2 == 0 {
                &(&f2 * &t1) - &t2
            } else {
                &t1 - &(&f2 * &t2)
            }
        } else {
            let (pm, pm2, pm1, pm_2, pp1) =
                (self.get(m), self.get(m + 2), self.get(m - 1), self.get(m - 2), self.get(m + 1));
            let inner = &(&pm2 * &pm1.pow(2)) - &(&pm_2 * &pp1.pow(2));
            (&pm * &inner).scale(&K::from_int(2).inv())
        };
        self.memo.insert(n, p.clone());
        p
    }
}

/// The `n`-th division polynomial of `y² = x³ + ax + b`.
pub fn division_polynomial<K: Field>(a: &K, b: &K, n: u32) -> Result<DivisionPolynomial<K>> {
    check_curve(a, b)?;
    if n == 0 {
        return Err(Error::InvalidInput("division polynomial index must be at least 1".into()));
    }
    let mut t = Table::new(a, b);
    Ok(DivisionPolynomial { n, reduced: t.get(n), has_y_factor: n % 2 == 0 })
}

/// The x-coordinate of multiplication by `n` as `(numerator, denominator)`
/// in `x`: `x − ψ_{n−1}ψ_{n+1}/ψ_n²` with `y` eliminated.
pub fn multiplication_x_map<K: Field>(a: &K, b: &K, n: u32) -> Result<(UniPoly<K>, UniPoly<K>)> {
    check_curve(a, b)?;
    if n == 0 {
        return Err(Error::InvalidInput("multiplication by 0 has no x-map".into()));
    }
    let mut t = Table::new(a, b);
    let (pm, p, pp) = (t.get(n - 1), t.get(n), t.get(n + 1));
    let f = cubic(a, b);
    let x = UniPoly::x();
    let p2 = p.pow(2);
    Ok(if n % 2 == 1 {
        (&(&x * &p2) - &(&f * &(&pm * &pp)), p2)
    } else {
        let den = &f * &p2;
        (&(&x * &den) - &(&pm * &pp), den)
    })
}
