//! Orbits reduced modulo word-size primes. A mismatch modulo a prime of good
//! reduction proves the exact values differ, so fingerprints only ever rule
//! candidates out; matches are confirmed exactly.

use crate::dynamics_p1::{HeightField, ProjPoint, RationalMap};
use crate::numeric::modular::{add_mod, inv_mod, mul_mod, split_primes, sub_mod, Embedding};
use crate::numeric::Field;
use crate::poly::BiHomPoly;

/// A map with coefficients reduced at the prime of an embedding; points are
/// indices in `0..=q`, with `q` for infinity.
#[derive(Clone, Debug)]
pub(crate) struct ModMap {
    q: u64,
    f0: Vec<u64>,
    f1: Vec<u64>,
}

fn reduce<K: Field>(c: &K, e: &Embedding) -> Option<u64> {
    e.reduce_gaussian(&c.to_gaussian())
}

fn det_mod(mut m: Vec<Vec<u64>>, q: u64) -> u64 {
    let n = m.len();
    let mut det = 1;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
        if piv != c {
            m.swap(piv, c);
            det = sub_mod(0, det, q);
        }
        det = mul_mod(det, m[c][c], q);
        let inv = inv_mod(m[c][c], q).expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let t = mul_mod(m[r][c], inv, q);
            for k in c..n {
                m[r][k] = sub_mod(m[r][k], mul_mod(t, m[c][k], q), q);
            }
        }
    }
    det
}

impl ModMap {
    /// `None` unless the map has good reduction at the embedding's prime.
    pub fn new<K: Field>(f: &RationalMap<K>, e: &Embedding) -> Option<Self> {
        let d = f.degree();
        let f0 = (0..=d).map(|k| reduce(&f.f0().coeff(k), e)).collect::<Option<Vec<_>>>()?;
        let f1 = (0..=d).map(|k| reduce(&f.f1().coeff(k), e)).collect::<Option<Vec<_>>>()?;
        let d = d as usize;
        let mut m = vec![vec![0; 2 * d]; 2 * d];
        for i in 0..d {
            for k in 0..=d {
                m[i][i + k] = f0[d - k];
                m[d + i][i + k] = f1[d - k];
            }
        }
        (det_mod(m, e.q) != 0).then_some(ModMap { q: e.q, f0, f1 })
    }

    pub fn apply(&self, x: u64) -> u64 {
        let q = self.q;
        let d = self.f0.len() - 1;
        let (u, v) = if x == q {
            (self.f0[d], self.f1[d])
        } else {
            let h = |c: &[u64]| c.iter().rev().fold(0, |acc, &a| add_mod(mul_mod(acc, x, q), a, q));
            (h(&self.f0), h(&self.f1))
        };
        match inv_mod(v, q) {
            Some(vi) => mul_mod(u, vi, q),
            None => q,
        }
    }
}

/// A reduced bihomogeneous polynomial.
#[derive(Clone, Debug)]
pub(crate) struct ModCurve {
    q: u64,
    bidegree: (u32, u32),
    terms: Vec<((u32, u32), u64)>,
}

impl ModCurve {
    pub fn new<K: Field>(phi: &BiHomPoly<K>, e: &Embedding) -> Option<Self> {
        let terms = phi
            .terms()
            .map(|(k, c)| reduce(c, e).map(|r| (*k, r)))
            .collect::<Option<Vec<_>>>()?;
        terms.iter().any(|(_, c)| *c != 0).then_some(ModCurve { q: e.q, bidegree: phi.bidegree(), terms })
    }

    pub fn vanishes(&self, x: u64, y: u64) -> bool {
        let q = self.q;
        let coords = |p: u64| if p == q { (1, 0) } else { (p, 1) };
        let ((x0, x1), (y0, y1)) = (coords(x), coords(y));
        let pw = crate::numeric::modular::pow_mod;
        let (a, b) = self.bidegree;
        let mut acc = 0;
        for &((i, j), c) in &self.terms {
            let t = mul_mod(
                mul_mod(pw(x0, i as u64, q), pw(x1, (a - i) as u64, q), q),
                mul_mod(pw(y0, j as u64, q), pw(y1, (b - j) as u64, q), q),
                q,
            );
            acc = add_mod(acc, mul_mod(c, t, q), q);
        }
        acc == 0
    }
}

/// Embeddings at which every given map has good reduction and every given
/// curve reduces to a nonzero polynomial.
pub(crate) fn fingerprint_embeddings<K: Field>(
    maps: &[&RationalMap<K>],
    curves: &[&BiHomPoly<K>],
    count: usize,
) -> Vec<(Embedding, Vec<ModMap>, Vec<ModCurve>)> {
    let mut out: Vec<(Embedding, Vec<ModMap>, Vec<ModCurve>)> = Vec::with_capacity(count);
    let mut tried = 0;
    loop {
        let primes = split_primes(tried + count + 4);
        for sp in &primes[tried..] {
            tried += 1;
            let e = sp.embeddings()[0];
            let ms: Option<Vec<ModMap>> = maps.iter().map(|f| ModMap::new(f, &e)).collect();
            let cs: Option<Vec<ModCurve>> = curves.iter().map(|c| ModCurve::new(c, &e)).collect();
            if let (Some(ms), Some(cs)) = (ms, cs) {
                out.push((e, ms, cs));
                if out.len() == count {
                    return out;
                }
            }
        }
    }
}

/// The reduced orbit `x, f(x), …, f^len(x)`.
pub(crate) fn orbit<K: HeightField>(f: &ModMap, x: &ProjPoint<K>, e: &Embedding, len: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut r = K::reduce_point(x, e);
    out.push(r);
    for _ in 0..len {
        r = f.apply(r);
        out.push(r);
    }
    out
}
