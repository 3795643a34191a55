use super::*;
use crate::dynamics_p1::enumerate_gaussian_points;
use crate::piq_engine::{first_entry_time, generalized_tail_set, ProductSystem, Subscheme};

fn poly_mod_zero(p: &UniPoly<G>, h: &UniPoly<G>) -> bool {
    p.rem(h).is_zero()
}

/// x∘[1 + 2i] from the chord through `P` and `[i][2]P`.
fn one_plus_two_i_by_addition() -> RationalMap<G> {
    let (n2, d2) = multiplication_x_map(&CMCurve::a(), &CMCurve::b(), 2).unwrap();
    let (rn, rd) = CMCurve::doubling_y_ratio().unwrap();
    let f = cubic(&CMCurve::a(), &CMCurve::b());
    let x = UniPoly::x();
    // λ² = f·(iR − 1)²/(x + x₂)², and x(P + Q) = λ² − x + x₂
    let i_r_minus_1 = &rn.scale(&G::i()) - &rd;
    let sum = &(&x * &d2) + &n2;
    let lam_num = &(&f * &i_r_minus_1.pow(2)) * &d2.pow(2);
    let lam_den = &rd.pow(2) * &sum.pow(2);
    let rest = &n2 - &(&x * &d2);
    let num = &(&lam_num * &d2) + &(&rest * &lam_den);
    let den = &lam_den * &d2;
    RationalMap::from_affine(&num, &den).unwrap()
}

#[test]
fn kernel_polynomials() {
    let h = kernel_polynomial_1_plus_2i().unwrap();
    let hm = kernel_polynomial_1_minus_2i().unwrap();
    assert_eq!(h.deg(), 2);
    let psi5 = division_polynomial(&CMCurve::a(), &CMCurve::b(), 5).unwrap().reduced;
    assert_eq!(psi5.deg(), 12);
    assert!(h.divides(&psi5));
    assert!((&h * &hm).divides(&psi5));
    let (n2, d2) = multiplication_x_map(&CMCurve::a(), &CMCurve::b(), 2).unwrap();
    assert!(poly_mod_zero(&(&n2 + &(&UniPoly::x() * &d2)), &h));
    assert_eq!(hm, h.map(|c| c.conj()));
    assert_ne!(h, hm);
}

#[test]
fn descended_maps() {
    let f = velu_descend(&kernel_polynomial_1_plus_2i().unwrap()).unwrap();
    assert_eq!(f.degree(), 5);
    let two = CMCurve::multiplication_map(2).unwrap();
    assert_eq!(f.compose(&two), two.compose(&f));
    assert_eq!(f.eval(&ProjPoint::Infinity), ProjPoint::Infinity);
    let oracle = one_plus_two_i_by_addition();
    assert_eq!(oracle.degree(), 5);
    assert!(f == oracle || f == CMCurve::i_x_map().compose(&oracle));
}

#[test]
fn pair_identity() {
    let pair = build_lattes_pair().unwrap();
    let (f, g) = (&pair.f, &pair.g);
    assert_eq!((f.degree(), g.degree()), (5, 5));
    assert_ne!(f, g);
    let fg = f.compose(g);
    assert_eq!(fg.degree(), 25);
    assert_eq!(fg, g.compose(f));
    assert_eq!(fg, CMCurve::multiplication_map(5).unwrap());
    assert_eq!(*g, f.map_field(|c| c.conj()));
    assert_eq!(CMCurve::discriminant(), G::from_int(-64));
}

#[test]
fn recipe_reports() {
    let r = verify_recipe(&build_lattes_pair().unwrap()).unwrap();
    assert!(r.commute && r.diagonal_restored && r.proper_intersection && r.dense && r.applicable);
    assert_eq!(r.multiplication_by_5, Some(true));

    let sq = RationalMap::<G>::from_ints(&[0, 0, 1], &[1]).unwrap();
    let r = verify_recipe(&LattesPair::from_maps(sq.clone(), sq)).unwrap();
    assert!(r.commute && !r.proper_intersection && !r.applicable);

    let id = RationalMap::<G>::identity();
    let r = verify_recipe(&LattesPair::from_maps(id.clone(), id)).unwrap();
    assert!(r.commute && r.diagonal_restored && !r.proper_intersection);

    // z ↦ −z and z ↦ z commute and agree after two steps
    let neg = CMCurve::i_x_map();
    let r = verify_recipe(&LattesPair::from_maps(neg, RationalMap::identity())).unwrap();
    assert!(r.commute && !r.proper_intersection);
}

#[test]
fn witnesses_agree_with_exact_entry_times() {
    let pair = build_lattes_pair().unwrap();
    let seeds = enumerate_gaussian_points(3).unwrap();
    let sys = ProductSystem::new(pair.f.clone(), pair.g.clone());
    for s in 0..2 {
        let report = witness_points(&pair, s, &seeds).unwrap();
        assert_eq!(report.seeds_consumed, seeds.len());
        assert!(!report.witnesses.is_empty(), "s = {s}");
        for w in &report.witnesses {
            assert_eq!(first_entry_time(&sys, &Subscheme::Diagonal, &w.point, s + 1), EntryTime::At(s + 1));
            assert_eq!(w.separations.len() as u32, s + 1);
        }
    }
    // the Gaussian points of norm at most 1 map into Δ under G × F right away
    // or stay off it; the generalized tail at height 1 contains the s = 0 witnesses
    let tail = generalized_tail_set(&sys, &Subscheme::Diagonal, 0, 1).unwrap();
    let w0 = witness_points(&pair, 0, &enumerate_gaussian_points(1).unwrap()).unwrap();
    for w in &w0.witnesses {
        if w.point.0.height() <= 1.into() && w.point.1.height() <= 1.into() {
            assert!(tail.contains(&w.point));
        }
    }
}

#[test]
fn degenerate_seeds_are_rejected() {
    let pair = build_lattes_pair().unwrap();
    // ∞ is the identity and 0, ±i are 2-torsion: all fixed by both maps
    let seeds = [ProjPoint::Infinity, ProjPoint::from_int(0), ProjPoint::Affine(G::i()), ProjPoint::Affine(-G::i())];
    for s in 0..3 {
        assert!(witness_points(&pair, s, &seeds).unwrap().witnesses.is_empty());
    }
    let sq = RationalMap::<G>::from_ints(&[0, 0, 1], &[1]).unwrap();
    let cube = RationalMap::<G>::from_ints(&[0, 0, 0, 1], &[1]).unwrap();
    let noncommuting = LattesPair::from_maps(sq, CMCurve::i_x_map().compose(&cube));
    assert!(witness_points(&noncommuting, 0, &seeds).is_err());
}
