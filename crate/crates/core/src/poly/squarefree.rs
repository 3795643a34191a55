use super::uni::UniPoly;
use crate::numeric::Field;

/// Squarefree decomposition `P = c · ∏ f_k^{e_k}` with monic, squarefree,
/// pairwise coprime `f_k` and strictly increasing exponents (Yun's algorithm,
/// characteristic zero). Returns `(c, [(f_k, e_k)])`. Panics on `P = 0`.
pub fn squarefree_decomposition<K: Field>(p: &UniPoly<K>) -> (K, Vec<(UniPoly<K>, u32)>) {
    assert!(!p.is_zero(), "squarefree decomposition of the zero polynomial");
    let c = p.lead();
    let f = p.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return (c, out);
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let cc = df.exact_div(&a0).expect("gcd divides");
    let mut d = &cc - &b.derivative();
    let mut k = 1;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let nb = b.exact_div(&a).expect("gcd divides");
        let nc = d.exact_div(&a).expect("gcd divides");
        if a.deg() > 0 {
            out.push((a, k));
        }
        d = &nc - &nb.derivative();
        b = nb;
        k += 1;
    }
    (c, out)
}

/// The squarefree part: product of the distinct monic irreducible factors.
pub fn squarefree_part<K: Field>(p: &UniPoly<K>) -> UniPoly<K> {
    let (_, fs) = squarefree_decomposition(p);
    fs.iter().fold(UniPoly::one(), |acc, (f, _)| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, GaussianRational, Rational};
    use proptest::prelude::*;

    type P = UniPoly<Rational>;

    fn rebuild(c: &Rational, fs: &[(P, u32)]) -> P {
        fs.iter()
            .fold(P::constant(c.clone()), |acc, (f, e)| &acc * &f.pow(*e))
    }

    #[test]
    fn documented_examples() {
        let t1 = P::from_ints(&[-1, 1]);
        let t2 = P::from_ints(&[2, 1]);
        let p = &t1.pow(2) * &t2;
        let (c, fs) = squarefree_decomposition(&p);
        assert_eq!(c, rat(1, 1));
        assert_eq!(fs, vec![(t2, 1), (t1, 2)]);
        let t = P::x();
        assert_eq!(squarefree_decomposition(&t).1, vec![(t.clone(), 1)]);
        let q = P::from_ints(&[1, 0, 1]);
        assert_eq!(squarefree_decomposition(&q.pow(3)).1, vec![(q, 3)]);
    }

    #[test]
    fn over_gaussian_rationals() {
        let i = GaussianRational::i();
        let f = UniPoly::linear_root(i.clone());
        let g = UniPoly::linear_root(-i);
        let p = &f.pow(2) * &g;
        let (_, fs) = squarefree_decomposition(&p);
        assert_eq!(fs, vec![(g, 1), (f, 2)]);
    }

    proptest! {
        #[test]
        fn reconstructs_random_products(
            roots in proptest::collection::vec((-5i64..5, 1u32..4), 1..5),
            lead in 1i64..7,
        ) {
            let mut p = P::constant(rat(lead, 1));
            for (r, e) in &roots {
                p = &p * &P::linear_root(rat(*r, 1)).pow(*e);
            }
            let (c, fs) = squarefree_decomposition(&p);
            prop_assert_eq!(rebuild(&c, &fs), p);
            for (k, (f, _)) in fs.iter().enumerate() {
                prop_assert_eq!(f.gcd(&f.derivative()).deg(), 0);
                for (g, _) in &fs[k + 1..] {
                    prop_assert_eq!(f.gcd(g).deg(), 0);
                }
            }
        }
    }
}
