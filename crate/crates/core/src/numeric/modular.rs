//! Word-size primes that split in Z[i], and certified vanishing tests for
//! Gaussian integers too large to write down.
//!
//! Every prime `q ≡ 1 (mod 4)` has a square root `r` of −1, giving two ring
//! maps Z[i] → F_q (`i ↦ r` and `i ↦ −r`). An element `a + bi` vanishes under
//! both iff `q | a` and `q | b`, so if it vanishes for a set of primes whose
//! product exceeds `max(|a|, |b|)` it is zero.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::gaussian::{GaussianInteger, GaussianRational};
use super::rational::Rational;

/// Primes are drawn from `[LOW, 2^31)`.
const LOW: u64 = 1 << 30;
/// Each prime contributes at least this many bits to a modulus product.
pub const BITS_PER_PRIME: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SplitPrime {
    pub q: u64,
    /// A square root of −1 modulo `q`.
    pub i_root: u64,
}

/// One of the two embeddings Z[i] → F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub q: u64,
    /// Image of `i`.
    pub i: u64,
}

impl SplitPrime {
    pub fn embeddings(&self) -> [Embedding; 2] {
        [
            Embedding { q: self.q, i: self.i_root },
            Embedding { q: self.q, i: self.q - self.i_root },
        ]
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, q);
        }
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    (a != 0).then(|| pow_mod(a, q - 2, q))
}

pub fn reduce_integer(n: &BigInt, q: u64) -> u64 {
    n.mod_floor(&BigInt::from(q)).to_u64().expect("residue fits in u64")
}

impl Embedding {
    pub fn reduce_gaussian_integer(&self, z: &GaussianInteger) -> u64 {
        let a = reduce_integer(&z.re, self.q);
        let b = reduce_integer(&z.im, self.q);
        add_mod(a, mul_mod(b, self.i, self.q), self.q)
    }

    /// `None` when `q` divides a denominator.
    pub fn reduce_rational(&self, x: &Rational) -> Option<u64> {
        let d = inv_mod(reduce_integer(x.denom(), self.q), self.q)?;
        Some(mul_mod(reduce_integer(x.numer(), self.q), d, self.q))
    }

    pub fn reduce_gaussian(&self, z: &GaussianRational) -> Option<u64> {
        let a = self.reduce_rational(&z.re)?;
        if z.im.is_zero() {
            return Some(a);
        }
        let b = self.reduce_rational(&z.im)?;
        Some(add_mod(a, mul_mod(b, self.i, self.q), self.q))
    }
}

static CACHE: Mutex<Vec<SplitPrime>> = Mutex::new(Vec::new());

const SEGMENT: u64 = 1 << 20;

fn small_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; limit as usize + 1];
    let mut out = Vec::new();
    for n in 2..=limit as usize {
        if sieve[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m <= limit as usize {
                sieve[m] = false;
                m += n;
            }
        }
    }
    out
}

fn sqrt_minus_one(q: u64) -> u64 {
    let half = (q - 1) / 2;
    let c = (2..q).find(|&c| pow_mod(c, half, q) == q - 1).expect("non-residue exists");
    pow_mod(c, (q - 1) / 4, q)
}

fn segment_primes(start: u64, base: &[u64]) -> Vec<SplitPrime> {
    let end = (start + SEGMENT).min(1 << 31);
    let mut comp = vec![false; (end - start) as usize];
    for &p in base {
        let first = start.div_ceil(p) * p;
        let mut m = first.max(p * p);
        while m < end {
            comp[(m - start) as usize] = true;
            m += p;
        }
    }
    comp.iter()
        .enumerate()
        .filter(|&(k, &c)| !c && (start + k as u64) % 4 == 1)
        .map(|(k, _)| {
            let q = start + k as u64;
            SplitPrime { q, i_root: sqrt_minus_one(q) }
        })
        .collect()
}

/// The first `count` split primes above `2^30`, in increasing order. Cached
/// for the life of the process.
pub fn split_primes(count: usize) -> Vec<SplitPrime> {
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.len() < count {
        let base = small_primes(46_341);
        let mut start = cache.last().map(|p| p.q + 1).unwrap_or(LOW);
        while cache.len() < count {
            // roughly 1/(2 ln q) of a segment is usable
            let need = count - cache.len();
            let segments = (need as u64 * 45 / SEGMENT + 1).min(256);
            let starts: Vec<u64> = (0..segments)
                .map(|k| start + k * SEGMENT)
                .filter(|&s| s < (1 << 31))
                .collect();
            assert!(!starts.is_empty(), "ran out of split primes below 2^31");
            let found: Vec<Vec<SplitPrime>> =
                starts.par_iter().map(|&s| segment_primes(s, &base)).collect();
            for seg in found {
                cache.extend(seg);
            }
            start = starts.last().unwrap() + SEGMENT;
        }
    }
    cache[..count].to_vec()
}

/// Number of primes whose product is guaranteed to exceed `2^bits`.
pub fn primes_needed(bits: f64) -> usize {
    ((bits.max(0.0) + 1.0) / BITS_PER_PRIME).ceil() as usize + 1
}

/// Certifies that a Gaussian integer `z` with `max(|Re z|, |Im z|) < 2^bits` is
/// zero, given a routine computing its image under an embedding. Returns
/// `false` as soon as some image is nonzero.
pub fn certify_zero<F>(bits: f64, image: F) -> bool
where
    F: Fn(Embedding) -> u64 + Sync,
{
    let primes = split_primes(primes_needed(bits));
    !primes
        .par_iter()
        .any(|p| p.embeddings().iter().any(|&e| image(e) != 0))
}

/// Decides whether `z` is zero using only its images. Same contract as
/// [`certify_zero`] but also reports the first prime witnessing `z ≠ 0`.
pub fn nonzero_witness<F>(bits: f64, image: F) -> Option<Embedding>
where
    F: Fn(Embedding) -> u64 + Sync,
{
    let primes = split_primes(primes_needed(bits));
    primes
        .par_iter()
        .flat_map_iter(|p| p.embeddings())
        .find_first(|&e| image(e) != 0)
}

/// `log2 |n|`, rounded up, for bounding purposes. Zero maps to 0.
pub fn log2_upper(n: &BigInt) -> f64 {
    n.bits() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_primes_are_prime_with_square_root_of_minus_one() {
        let ps = split_primes(50);
        assert_eq!(ps.len(), 50);
        for w in ps.windows(2) {
            assert!(w[0].q < w[1].q);
        }
        for p in &ps {
            assert_eq!(p.q % 4, 1);
            assert!(p.q >= LOW);
            assert_eq!(mul_mod(p.i_root, p.i_root, p.q), p.q - 1);
            // trial division
            let mut d = 3;
            while d * d <= p.q {
                assert_ne!(p.q % d, 0);
                d += 2;
            }
        }
    }

    #[test]
    fn embeddings_are_ring_maps() {
        let p = split_primes(1)[0];
        let a = GaussianInteger::from_ints(12345, -678);
        let b = GaussianInteger::from_ints(-91, 4242);
        for e in p.embeddings() {
            let ab = e.reduce_gaussian_integer(&(a.clone() * b.clone()));
            let prod = mul_mod(e.reduce_gaussian_integer(&a), e.reduce_gaussian_integer(&b), e.q);
            assert_eq!(ab, prod);
        }
    }

    #[test]
    fn certificate_detects_large_values() {
        let big: BigInt = BigInt::from(3).pow(500u32);
        let z = GaussianInteger::new(BigInt::zero(), big.clone());
        let bits = log2_upper(&big);
        assert!(!certify_zero(bits, |e| e.reduce_gaussian_integer(&z)));
        let zero = GaussianInteger::default();
        assert!(certify_zero(bits, |e| e.reduce_gaussian_integer(&zero)));
        // a product of many of our own primes: vanishes for the early ones only
        let ps = split_primes(primes_needed(bits));
        let mut prod = BigInt::from(1);
        for p in &ps[..ps.len() - 1] {
            prod *= p.q;
        }
        let w = GaussianInteger::new(prod.clone(), BigInt::zero());
        assert!(!certify_zero(log2_upper(&prod), |e| e.reduce_gaussian_integer(&w)));
    }
}
