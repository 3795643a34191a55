use num_integer::Integer as _;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::poly::{cyclotomic_polynomial, euler_phi, is_cyclotomic_free};

fn m(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_ints(rows).unwrap()
}

fn poly(cs: &[i64]) -> UniPoly<Rational> {
    UniPoly::from_ints(cs)
}

#[test]
fn exterior_power_examples() {
    let a = m(&[&[1, 2, 0], &[3, -1, 4], &[0, 5, 2]]);
    assert_eq!(exterior_power(&a, 1).unwrap(), a);
    assert_eq!(exterior_power(&a, 3).unwrap(), RationalMatrix::scalar(1, a.det()));
    let b = m(&[&[2, 7], &[1, 3]]);
    assert_eq!(exterior_power(&b, 2).unwrap(), m(&[&[-1]]));
    assert_eq!(exterior_power(&a, 2).unwrap().dim(), 3);
    assert!(exterior_power(&a, 4).is_err());
}

#[test]
fn period_examples() {
    let rot = m(&[&[0, -1], &[1, 0]]);
    let e1 = SubspaceBasis::from_ints(&[&[1, 0]]).unwrap();
    assert_eq!(subspace_period(&rot, &e1, 10).unwrap(), Some(2));
    let two = RationalMatrix::scalar(3, Rational::from_integer(2.into()));
    let w = SubspaceBasis::from_ints(&[&[1, 2, 3], &[0, 1, -1]]).unwrap();
    assert_eq!(subspace_period(&two, &w, 10).unwrap(), Some(1));
    let c3 = RationalMatrix::companion(&poly(&[1, 1, 1])).unwrap().scale(&Rational::from_integer(3.into()));
    assert_eq!(subspace_period(&c3, &e1, 10).unwrap(), Some(3));
    let shear = m(&[&[1, 1], &[0, 1]]);
    let e2 = SubspaceBasis::from_ints(&[&[0, 1]]).unwrap();
    assert_eq!(subspace_period(&shear, &e2, 50).unwrap(), None);
    assert!(matches!(subspace_period(&m(&[&[1, 1], &[1, 1]]), &e1, 5), Err(Error::SingularMatrix)));
}

#[test]
fn period_bound_values() {
    assert_eq!(period_bound(1), BigUint::from(4u32));
    assert_eq!(period_bound(2), BigUint::from(240u32));
    // independent enumeration of φ(m) ≤ 9 by a direct gcd count
    let phi = |k: u64| (1..=k).filter(|j| j.gcd(&k) == 1).count() as u64;
    let l = (1..=400u64).filter(|&k| phi(k) <= 9).fold(1u64, |a, k| a.lcm(&k));
    assert_eq!(period_bound(3), BigUint::from(2 * l));
    assert!(period_bound(3) >= period_bound(2));
}

#[test]
fn split_examples() {
    let c = RationalMatrix::companion(&poly(&[1, 1, 1])).unwrap();
    let s = minpoly_cyclotomic_split(&c).unwrap();
    assert_eq!((s.n0, s.m, s.q.clone()), (3, 1, UniPoly::one()));
    let s = minpoly_cyclotomic_split(&RationalMatrix::identity(3)).unwrap();
    assert_eq!((s.n0, s.m, s.q), (1, 1, UniPoly::one()));
    let s = minpoly_cyclotomic_split(&m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]])).unwrap();
    assert_eq!((s.n0, s.m, s.q), (1, 1, poly(&[-2, 1])));
    assert!(matches!(minpoly_cyclotomic_split_within(&c, &[1, 2]), Err(Error::SearchExhausted(_))));
    let jordan = m(&[&[1, 1], &[0, 1]]);
    assert_eq!(minpoly_cyclotomic_split(&jordan).unwrap().m, 2);
}

#[test]
fn minimal_polynomials() {
    for n in [1u64, 3, 4, 5, 8, 12] {
        let c = RationalMatrix::companion(&cyclotomic_polynomial(n)).unwrap();
        assert_eq!(c.minimal_polynomial(), cyclotomic_polynomial(n));
    }
    let d = m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
    assert_eq!(d.minimal_polynomial(), poly(&[6, -5, 1]));
    let a = m(&[&[1, 2], &[3, 5]]);
    assert_eq!(a.inverse().unwrap().mul(&a), RationalMatrix::identity(2));
}

fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        RationalMatrix::new(v.chunks(n).map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
            .unwrap()
    })
}

/// `S·B·S⁻¹` with `B` a block sum of scaled cyclotomic companions and `S`
/// unimodular, a subspace `S·W_B` built from blocks and lines inside blocks,
/// and the period of `W_B` known from the block structure.
fn periodic_trial(seed: u64, n: usize) -> (RationalMatrix, SubspaceBasis, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();
    let mut parts: Vec<(usize, usize, u64)> = Vec::new(); // (offset, size, order)
    let mut used = 0;
    while used < n {
        let orders: Vec<u64> = (1..=12).filter(|&k| euler_phi(k) as usize <= n - used).collect();
        let k = orders[rng.gen_range(0..orders.len())];
        let c = Rational::from_integer([1, -1, 2, 3, -2][rng.gen_range(0..5)].into());
        let b = RationalMatrix::companion(&cyclotomic_polynomial(k)).unwrap().scale(&c);
        parts.push((used, b.dim(), k));
        used += b.dim();
        blocks.push(b);
    }
    let b = RationalMatrix::block_diagonal(&blocks).unwrap();
    let mut vectors = Vec::new();
    let mut period = 1u64;
    for &(off, size, k) in &parts {
        match rng.gen_range(0..3) {
            0 => {}
            1 => {
                for i in 0..size {
                    let mut v = vec![0i64; n];
                    v[off + i] = 1;
                    vectors.push(v);
                }
            }
            _ => {
                let mut v = vec![0i64; n];
                for x in &mut v[off..off + size] {
                    *x = rng.gen_range(-2..=2);
                }
                if v.iter().all(|&x| x == 0) {
                    v[off] = 1;
                }
                vectors.push(v);
                if size > 1 {
                    period = period.lcm(&(if k % 2 == 0 { k / 2 } else { k }));
                }
            }
        }
    }
    if vectors.is_empty() {
        let mut v = vec![0i64; n];
        v[0] = 1;
        vectors.push(v);
        let (_, size, k) = parts[0];
        if size > 1 {
            period = if k % 2 == 0 { k / 2 } else { k };
        }
    }
    let mut s = RationalMatrix::identity(n);
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let mut rows = RationalMatrix::identity(n).rows().to_vec();
            rows[i][j] = Rational::from_integer(rng.gen_range(-2i64..=2).into());
            s = s.mul(&RationalMatrix::new(rows).unwrap());
        }
    }
    let conj = s.mul(&b).mul(&s.inverse().unwrap());
    let w = SubspaceBasis::new(
        vectors.iter().map(|v| s.apply(&v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>())).collect(),
    )
    .unwrap();
    (conj, w, period)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exterior_power_is_functorial(a in small_matrix(3), b in small_matrix(3), k in 1usize..=3) {
        prop_assert_eq!(
            exterior_power(&a.mul(&b), k).unwrap(),
            exterior_power(&a, k).unwrap().mul(&exterior_power(&b, k).unwrap())
        );
    }

    #[test]
    fn periods_match_construction(seed in any::<u64>(), n in 2usize..=4) {
        let (mat, w, expected) = periodic_trial(seed, n);
        let got = subspace_period(&mat, &w, 64).unwrap();
        prop_assert_eq!(got, Some(expected));
        prop_assert!(BigUint::from(expected) <= period_bound(n as u64));
        prop_assert_eq!(subspace_period(&mat, &w, 1).unwrap() == Some(1), w.image(&mat).unwrap().same_span(&w));
    }

    #[test]
    fn wedge_preserves_periods(seed in any::<u64>(), n in 2usize..=4) {
        let (mat, w, _) = periodic_trial(seed, n);
        let lam = exterior_power(&mat, w.dim()).unwrap();
        prop_assert_eq!(subspace_period(&mat, &w, 64).unwrap(), subspace_period(&lam, &w.wedge(), 64).unwrap());
    }

    #[test]
    fn split_reconstructs(seed in any::<u64>(), n in 1usize..=4) {
        let (mat, _, _) = periodic_trial(seed, n);
        let s = minpoly_cyclotomic_split(&mat).unwrap();
        let rebuilt = &poly(&[-1, 1]).pow(s.m as u32) * &s.q;
        prop_assert_eq!(&rebuilt, &s.minimal_polynomial);
        prop_assert_eq!(&s.minimal_polynomial, &mat.pow(s.n0).minimal_polynomial());
        prop_assert!(is_cyclotomic_free(&s.q));
    }
}
