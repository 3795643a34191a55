//! The commuting degree-5 Lattès pair on the x-line of `y² = x³ + x` over
//! Q(i), descending multiplication by `1 + 2i` and `1 − 2i`, together with the
//! preimage recipe check and explicit tail witnesses for the diagonal.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics_p1::{HeightField, ProjPoint, RationalMap};
use crate::error::{Error, Result};
use crate::numeric::modular::Embedding;
use crate::numeric::{is_root_of_unity_gaussian, Field, GaussianRational};
use crate::piq_engine::{fingerprint_embeddings, EntryTime, ModCurve, ModMap};
use crate::poly::{cubic, division_polynomial, multiplication_x_map, UniPoly};

type G = GaussianRational;

/// The curve `y² = x³ + x` with `[i](x, y) = (−x, iy)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CMCurve;

impl CMCurve {
    pub fn a() -> G {
        G::one()
    }

    pub fn b() -> G {
        G::zero()
    }

    pub fn discriminant() -> G {
        G::from_int(-16) * (G::from_int(4) * Self::a().powu(3) + G::from_int(27) * Self::b().powu(2))
    }

    /// `x ↦ −x`, the action of `[i]` on the x-line.
    pub fn i_x_map() -> RationalMap<G> {
        RationalMap::from_affine(&UniPoly::new(vec![G::zero(), -G::one()]), &UniPoly::one()).expect("degree one")
    }

    /// The x-map of `[n]` as a morphism of P¹.
    pub fn multiplication_map(n: u32) -> Result<RationalMap<G>> {
        let (num, den) = multiplication_x_map(&Self::a(), &Self::b(), n)?;
        RationalMap::from_affine(&num, &den)
    }

    /// `y([2]P) = y(P)·R(x(P))`, returned as `R = num/den`.
    fn doubling_y_ratio() -> Result<(UniPoly<G>, UniPoly<G>)> {
        let (n2, d2) = multiplication_x_map(&Self::a(), &Self::b(), 2)?;
        let f = cubic(&Self::a(), &Self::b());
        let slope = UniPoly::new(vec![Self::a(), G::zero(), G::from_int(3)]);
        // R = (3x² + a)(x − x₂)/(2f) − 1 with x₂ = n2/d2
        let x_minus = &(&UniPoly::x() * &d2) - &n2;
        let two_f_d2 = (&f * &d2).scale(&G::from_int(2));
        Ok((&(&slope * &x_minus) - &two_f_d2, two_f_d2))
    }
}

/// The x-coordinates of the points with `[2]P = [εi]P`, i.e. of `ker(2 − εi)`,
/// which is `ker(1 + 2i)` for `ε = 1` and `ker(1 − 2i)` for `ε = −1`.
fn kernel_polynomial(eps: i64) -> Result<UniPoly<G>> {
    let (a, b) = (CMCurve::a(), CMCurve::b());
    let psi5 = division_polynomial(&a, &b, 5)?.reduced;
    let (n2, d2) = multiplication_x_map(&a, &b, 2)?;
    // x([2]P) = −x(P) on both kernels of norm 5
    let both = psi5.gcd(&(&n2 + &(&UniPoly::x() * &d2)));
    if both.deg() != 4 {
        return Err(Error::ConstructionFailed(format!("expected a quartic, found degree {}", both.deg())));
    }
    let (rn, rd) = CMCurve::doubling_y_ratio()?;
    let h = both.gcd(&(&rn - &rd.scale(&G::from_ints(0, eps))));
    if h.deg() != 2 {
        return Err(Error::ConstructionFailed(format!("expected a quadratic kernel, found degree {}", h.deg())));
    }
    Ok(h.monic())
}

/// `x`-coordinates of the nonzero points of `ker(1 + 2i)`.
pub fn kernel_polynomial_1_plus_2i() -> Result<UniPoly<G>> {
    kernel_polynomial(1)
}

/// `x`-coordinates of the nonzero points of `ker(1 − 2i)`.
pub fn kernel_polynomial_1_minus_2i() -> Result<UniPoly<G>> {
    kernel_polynomial(-1)
}

/// Power sums `p_1, …, p_k` of the roots of a monic polynomial.
fn power_sums(h: &UniPoly<G>, k: usize) -> Vec<G> {
    let d = h.deg();
    // e_j = (−1)^j · coeff(d − j)
    let e: Vec<G> = (0..=d)
        .map(|j| if j % 2 == 0 { h.coeff(d - j) } else { -h.coeff(d - j) })
        .collect();
    let mut p: Vec<G> = vec![G::from_int(d as i64)];
    for m in 1..=k {
        let mut acc = G::zero();
        for j in 1..m {
            if j <= d {
                let t = e[j].clone() * p[m - j].clone();
                acc = if j % 2 == 1 { acc + t } else { acc - t };
            }
        }
        if m <= d {
            let t = G::from_int(m as i64) * e[m].clone();
            acc = if m % 2 == 1 { acc + t } else { acc - t };
        }
        p.push(acc);
    }
    p
}

/// Separable isogeny with kernel polynomial `h` (odd kernel, no 2-torsion):
/// the x-map `(num, den)` and the codomain coefficients `(A′, B′)`.
fn isogeny_x_map(a: &G, b: &G, h: &UniPoly<G>) -> (UniPoly<G>, UniPoly<G>, G, G) {
    let d = h.deg();
    let ell = G::from_int(2 * d as i64 + 1);
    let p = power_sums(h, 3);
    let f = cubic(a, b);
    let (h1, h2) = (h.derivative(), h.derivative().derivative());
    let lin = UniPoly::new(vec![-(G::from_int(2) * p[1].clone()), ell]);
    let slope = UniPoly::new(vec![a.clone(), G::zero(), G::from_int(3)]);
    let hh = h.pow(2);
    let num = &(&(&lin * &hh) - &(&(&slope * &h1) * h).scale(&G::from_int(2)))
        - &(&f * &(&(&h2 * h) - &h1.pow(2))).scale(&G::from_int(4));
    let t = G::from_int(6) * p[2].clone() + G::from_int(2 * d as i64) * a.clone();
    let w = G::from_int(10) * p[3].clone()
        + G::from_int(6) * a.clone() * p[1].clone()
        + G::from_int(4 * d as i64) * b.clone();
    let a_new = a.clone() - G::from_int(5) * t;
    let b_new = b.clone() - G::from_int(7) * w;
    (num, hh, a_new, b_new)
}

/// The self-map of P¹ induced by the isogeny with kernel `h`, after
/// identifying the codomain with the source by `x ↦ x/u²`, `u⁴ = A′`.
pub fn velu_descend(h: &UniPoly<G>) -> Result<RationalMap<G>> {
    let (num, den, a_new, b_new) = isogeny_x_map(&CMCurve::a(), &CMCurve::b(), h);
    if !b_new.is_zero() {
        return Err(Error::ConstructionFailed(format!("codomain has b = {b_new}, not j = 1728")));
    }
    let u2 = a_new
        .sqrt()
        .filter(|u2| !u2.is_zero())
        .ok_or_else(|| Error::ConstructionFailed(format!("codomain coefficient {a_new} is not a square in Q(i)")))?;
    let map = RationalMap::from_affine(&num, &den.scale(&u2))?;
    if map.degree() != 2 * h.deg() as u32 + 1 {
        return Err(Error::ConstructionFailed(format!("descended map has degree {}", map.degree())));
    }
    Ok(map)
}

/// Two maps of P¹ for the preimage recipe, with the multipliers whose ratio
/// governs `Y ∩ gⁿ(Y)` when they are known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LattesPair {
    pub f: RationalMap<G>,
    pub g: RationalMap<G>,
    pub multipliers: Option<(G, G)>,
    #[serde(skip)]
    commuting: bool,
}

impl LattesPair {
    /// A pair of arbitrary maps; commutation is decided exactly here.
    pub fn from_maps(f: RationalMap<G>, g: RationalMap<G>) -> Self {
        let commuting = f.compose(&g) == g.compose(&f);
        LattesPair { f, g, multipliers: None, commuting }
    }

    pub fn is_commuting(&self) -> bool {
        self.commuting
    }
}

/// `F`, `G` descending `1 + 2i` and `1 − 2i`, with `F∘G = G∘F = [5]`.
///
/// Vélu's model fixes each map only up to the automorphisms `{±1, ±i}` of
/// the curve; on the x-line these act as `x ↦ u²x`, and the twist making
/// the pair identity hold is chosen by exact comparison.
pub fn build_lattes_pair() -> Result<LattesPair> {
    let f0 = velu_descend(&kernel_polynomial_1_plus_2i()?)?;
    let g0 = velu_descend(&kernel_polynomial_1_minus_2i()?)?;
    let five = CMCurve::multiplication_map(5)?;
    // u = ±1 act trivially, u = ±i by x ↦ −x
    let twists = [RationalMap::identity(), CMCurve::i_x_map()];
    for u in &twists {
        for v in &twists {
            let (f, g) = (u.compose(&f0), v.compose(&g0));
            let fg = f.compose(&g);
            if fg == five && g.compose(&f) == five {
                return Ok(LattesPair {
                    f,
                    g,
                    multipliers: Some((G::from_ints(1, 2), G::from_ints(1, -2))),
                    commuting: true,
                });
            }
        }
    }
    Err(Error::ConstructionFailed("no unit twist satisfies F∘G = G∘F = [5]".into()))
}

/// The four hypotheses for `f = F × G`, `g = G × F`, `Y = Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecipeReport {
    /// `f∘g = g∘f`.
    pub commute: bool,
    /// `f(g(Δ)) = Δ`, from `f∘g = h × h` with the same surjective `h`.
    pub diagonal_restored: bool,
    /// `Δ ∩ gⁿ(Δ) ⊊ Δ` for every `n ≥ 1`.
    pub proper_intersection: bool,
    pub proper_intersection_basis: String,
    /// `Δ(Q(i)) ≅ P¹(Q(i))` is infinite.
    pub dense: bool,
    /// `F∘G = [5]` as well, for a pair carrying the multipliers `1 ± 2i`.
    pub multiplication_by_5: Option<bool>,
    pub applicable: bool,
}

const DIRECT_ITERATES: u32 = 4;

/// Whether `Fⁿ = Gⁿ` for some `1 ≤ n ≤ DIRECT_ITERATES`: a mismatch of the
/// reductions at a prime of good reduction rules `n` out, and the remaining
/// `n` are decided by exact composition.
fn equal_iterate(f: &RationalMap<G>, g: &RationalMap<G>) -> Option<u32> {
    let embs = fingerprint_embeddings(&[f, g], &[], 2);
    let samples: Vec<ProjPoint<G>> = (-6..=6).map(ProjPoint::from_int).chain([ProjPoint::Infinity]).collect();
    (1..=DIRECT_ITERATES).find(|&n| {
        let differs = embs.iter().any(|(e, ms, _)| {
            samples.iter().any(|t| {
                let (mut a, mut b) = (G::reduce_point(t, e), G::reduce_point(t, e));
                for _ in 0..n {
                    a = ms[0].apply(a);
                    b = ms[1].apply(b);
                }
                a != b
            })
        });
        !differs && f.iterate(n) == g.iterate(n)
    })
}

pub fn verify_recipe(pair: &LattesPair) -> Result<RecipeReport> {
    let commute = pair.commuting;
    let diagonal_restored = commute;
    let (proper_intersection, basis) = match &pair.multipliers {
        Some((alpha, beta)) => {
            let unit = is_root_of_unity_gaussian(&(alpha.clone() / beta.clone()))?;
            (!unit, format!("({alpha})/({beta}) is {}a root of unity", if unit { "" } else { "not " }))
        }
        None => match equal_iterate(&pair.f, &pair.g) {
            Some(n) => (false, format!("F^{n} = G^{n}, so g^{n}(Δ) ⊆ Δ")),
            None => (true, format!("F^n ≠ G^n for n ≤ {DIRECT_ITERATES} only")),
        },
    };
    let multiplication_by_5 = match pair.multipliers {
        Some(_) => Some(pair.f.compose(&pair.g) == CMCurve::multiplication_map(5)?),
        None => None,
    };
    let dense = true;
    Ok(RecipeReport {
        commute,
        diagonal_restored,
        proper_intersection,
        proper_intersection_basis: basis,
        dense,
        multiplication_by_5,
        applicable: commute && diagonal_restored && proper_intersection && dense,
    })
}

/// Why `f^i(x) ∉ Δ`: exact inequality at `i = 0`, otherwise distinct
/// reductions at a prime of good reduction for both maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub step: u32,
    pub prime: Option<u64>,
    pub residues: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub seed: ProjPoint<G>,
    pub point: (ProjPoint<G>, ProjPoint<G>),
    pub entry: EntryTime,
    pub separations: Vec<Separation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub s: u32,
    pub seeds_consumed: usize,
    pub witnesses: Vec<Witness>,
}

const WITNESS_PRIMES: usize = 8;

/// Points `x = (G^{s+1}(t), F^{s+1}(t))` entering the diagonal under
/// `F × G` at exactly step `s + 1`.
///
/// Entry at `s + 1` holds because `F^{s+1}∘G^{s+1} = G^{s+1}∘F^{s+1}` for a
/// commuting pair; each reduction is checked against it as well. Every earlier
/// step must be separated, exactly at step 0 and modulo some prime after.
pub fn witness_points(pair: &LattesPair, s: u32, seeds: &[ProjPoint<G>]) -> Result<WitnessReport> {
    if !pair.commuting {
        return Err(Error::InvalidInput("witnesses need a commuting pair".into()));
    }
    let embs = fingerprint_embeddings(&[&pair.f, &pair.g], &[], WITNESS_PRIMES);
    let witnesses = seeds
        .par_iter()
        .filter_map(|t| witness_for_seed(pair, s, t, &embs))
        .collect();
    Ok(WitnessReport { s, seeds_consumed: seeds.len(), witnesses })
}

fn witness_for_seed(
    pair: &LattesPair,
    s: u32,
    t: &ProjPoint<G>,
    embs: &[(Embedding, Vec<ModMap>, Vec<ModCurve>)],
) -> Option<Witness> {
    let (mut x0, mut x1) = (t.clone(), t.clone());
    for _ in 0..=s {
        x0 = pair.g.eval(&x0);
        x1 = pair.f.eval(&x1);
    }
    if x0 == x1 {
        return None;
    }
    let mut separations = vec![Separation { step: 0, prime: None, residues: None }];
    let reduced: Vec<Vec<(u64, u64)>> = embs
        .iter()
        .map(|(e, ms, _)| {
            let (mut a, mut b) = (G::reduce_point(&x0, e), G::reduce_point(&x1, e));
            let mut steps = vec![(a, b)];
            for _ in 0..=s {
                a = ms[0].apply(a);
                b = ms[1].apply(b);
                steps.push((a, b));
            }
            steps
        })
        .collect();
    if reduced.iter().any(|steps| steps[s as usize + 1].0 != steps[s as usize + 1].1) {
        return None;
    }
    for step in 1..=s {
        let (k, &(a, b)) = reduced
            .iter()
            .enumerate()
            .map(|(k, steps)| (k, &steps[step as usize]))
            .find(|(_, (a, b))| a != b)?;
        separations.push(Separation { step, prime: Some(embs[k].0.q), residues: Some((a, b)) });
    }
    Some(Witness { seed: t.clone(), point: (x0, x1), entry: EntryTime::At(s + 1), separations })
}

#[cfg(test)]
mod tests;
