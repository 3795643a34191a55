//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown;
//! the process fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_integer::Integer as _;
use num_traits::Zero;
use piq_lab::dynamics_p1::{
    choose_good_prime, enumerate_gaussian_points, enumerate_points, symmetric_square_descent, QuadNumber, QuadPoint,
    RationalMap, Sym2Point,
};
use piq_lab::lattes::{build_lattes_pair, verify_recipe, witness_points, CMCurve, Witness};
use piq_lab::linalg_uniform::{
    exterior_power, minpoly_cyclotomic_split, period_bound, subspace_period, RationalMatrix, SubspaceBasis,
};
use piq_lab::numeric::{padic_from_rational, rat, PadicNumber, Rational};
use piq_lab::padic_series::{MultiIndex, PolydiscSeries, Radius};
use piq_lab::piq_engine::{
    empirical_s0, finite_stabilization, first_entry_time, EntryTime, FiniteDynSystem, ProductSystem, Subscheme,
};
use piq_lab::poly::{cyclotomic_polynomial, euler_phi, is_cyclotomic_free, BiHomPoly, UniPoly};
use piq_lab::uniformize::{
    boettcher_coordinate, certify_isometry, koenigs_linearize, root_of_unity_limit_test, Conjugacy, Germ,
    LimitVerdict, UnitInput,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Map = RationalMap<Rational>;
type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn map(expr_num: &[i64], expr_den: &[i64]) -> Map {
    RationalMap::from_ints(expr_num, expr_den).unwrap()
}

// ---------------------------------------------------------------- 1

fn lattes() -> Check {
    let pair = build_lattes_pair().map_err(|e| e.to_string())?;
    let five = CMCurve::multiplication_map(5).unwrap();
    let fg = pair.f.compose(&pair.g);
    ensure(fg.degree() == 25 && fg == five && pair.g.compose(&pair.f) == five, || "F∘G = G∘F = [5] fails".into())?;
    let r = verify_recipe(&pair).map_err(|e| e.to_string())?;
    ensure(r.commute && r.diagonal_restored && r.proper_intersection && r.dense, || format!("recipe: {r:?}"))?;

    let seeds = enumerate_gaussian_points(10).unwrap();
    let sys = ProductSystem::new(pair.f.clone(), pair.g.clone());
    let mut found = Vec::new();
    for s in 0..=4u32 {
        let mut ws: Vec<Witness> = Vec::new();
        let mut used = 0;
        for chunk in seeds.chunks(8) {
            let rep = witness_points(&pair, s, chunk).map_err(|e| e.to_string())?;
            used += rep.seeds_consumed;
            ws.extend(rep.witnesses);
            if !ws.is_empty() {
                break;
            }
        }
        ensure(!ws.is_empty(), || format!("no witness at s = {s}"))?;
        for w in &ws {
            ensure(w.entry == EntryTime::At(s + 1) && w.separations.len() as u32 == s + 1, || format!("bad witness at s = {s}"))?;
            // direct exact iteration while the heights stay moderate
            if s <= 2 {
                ensure(first_entry_time(&sys, &Subscheme::Diagonal, &w.point, s + 1) == EntryTime::At(s + 1), || {
                    format!("exact entry time disagrees at s = {s}")
                })?;
            }
        }
        found.push(format!("s={s}: {} from {used} seeds", ws.len()));
    }
    Ok(found.join(", "))
}

// ---------------------------------------------------------------- 2

/// Tail sizes `0..=s_max` by exact forward iteration of every pair.
fn direct_tail_sizes(sys: &ProductSystem<Rational>, y: &Subscheme<Rational>, h: u64, s_max: u32) -> Vec<usize> {
    let pts = enumerate_points(h).unwrap();
    let mut sizes = vec![0; s_max as usize + 1];
    for a in &pts {
        for b in &pts {
            if let EntryTime::At(t) = first_entry_time(sys, y, &(a.clone(), b.clone()), s_max + 1) {
                if t >= 1 {
                    sizes[t as usize - 1] += 1;
                }
            }
        }
    }
    sizes
}

fn piq_evidence() -> Check {
    let sq = map(&[0, 0, 1], &[1]);
    let r = empirical_s0(&ProductSystem::new(sq.clone(), sq), &Subscheme::Diagonal, 50, 12).map_err(|e| e.to_string())?;
    ensure(r.s0 == Some(1) && r.tail_sizes[0] > 0 && r.tail_sizes[1..].iter().all(|&n| n == 0), || {
        format!("z² on Δ: {r:?}")
    })?;

    let lines = Subscheme::curve(BiHomPoly::lines_through_infinity()).unwrap();
    let point = |a: i64, b: i64| Subscheme::point(piq_lab::dynamics_p1::ProjPoint::from_int(a), piq_lab::dynamics_p1::ProjPoint::from_int(b));
    // values pinned from the first run at H = 30, S_max = 10
    let pinned: Vec<(&str, Map, Map, Subscheme<Rational>, u32)> = vec![
        ("z²−1 on Δ", map(&[-1, 0, 1], &[1]), map(&[-1, 0, 1], &[1]), Subscheme::Diagonal, 2),
        ("z³−3z on Δ", map(&[0, -3, 0, 1], &[1]), map(&[0, -3, 0, 1], &[1]), Subscheme::Diagonal, 1),
        ("z³ × z² at (1,1)", map(&[0, 0, 0, 1], &[1]), map(&[0, 0, 1], &[1]), point(1, 1), 1),
        ("z²−2 at (2,2)", map(&[-2, 0, 1], &[1]), map(&[-2, 0, 1], &[1]), point(2, 2), 2),
        ("z² × (z³+z) on x1·y1", map(&[0, 0, 1], &[1]), map(&[0, 1, 0, 1], &[1]), lines.clone(), 0),
    ];
    let mut notes = vec!["z²: s0=1".to_string()];
    for (name, f, g, y, want) in pinned {
        let sys = ProductSystem::new(f, g);
        let r = empirical_s0(&sys, &y, 30, 10).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.s0 == Some(want), || format!("{name}: s0 = {:?}, pinned {want}", r.s0))?;
        // second route at small height: every pair iterated exactly
        let small = empirical_s0(&sys, &y, 5, 3).unwrap();
        let direct = direct_tail_sizes(&sys, &y, 5, 3);
        ensure(small.tail_sizes == direct, || format!("{name}: tails {:?} vs direct {direct:?}", small.tail_sizes))?;
        notes.push(format!("{name}: s0={want}"));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------- 3

fn brute_force_s0(map: &[usize], members: &[bool]) -> u32 {
    let mut cur = members.to_vec();
    let mut s = 0;
    loop {
        let next: Vec<bool> = (0..map.len()).map(|x| cur[x] || cur[map[x]]).collect();
        if next == cur {
            return s;
        }
        cur = next;
        s += 1;
    }
}

fn forward_closure(map: &[usize], seeds: &[usize]) -> Vec<bool> {
    let mut member = vec![false; map.len()];
    let mut stack = seeds.to_vec();
    while let Some(x) = stack.pop() {
        if !member[x] {
            member[x] = true;
            stack.push(map[x]);
        }
    }
    member
}

fn finite_graphs() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    let mut check = |table: Vec<usize>, members: Vec<bool>| -> Result<(), String> {
        let sys = FiniteDynSystem::new(table.clone(), members.clone()).map_err(|e| e.to_string())?;
        let got = finite_stabilization(&sys).map_err(|e| e.to_string())?;
        let want = brute_force_s0(&table, &members);
        count += 1;
        ensure(got == want, || format!("table {table:?}: engine {got}, brute force {want}"))
    };
    for p in [3usize, 5, 7, 11, 13] {
        let inf = p;
        let mut tables = Vec::new();
        for k in 1..=p as u32 {
            let mut t: Vec<usize> = (0..p).map(|x| (0..k).fold(1, |acc, _| acc * x % p)).collect();
            t.push(inf);
            tables.push(t);
        }
        for a in 1..p {
            for b in 0..p {
                let mut t: Vec<usize> = (0..p).map(|x| (a * x + b) % p).collect();
                t.push(inf);
                tables.push(t);
            }
        }
        for t in tables {
            let x = rng.gen_range(0..=p);
            for seeds in [vec![inf], vec![0], vec![x], vec![0, x]] {
                check(t.clone(), forward_closure(&t, &seeds))?;
            }
        }
    }
    for _ in 0..50 {
        let n = rng.gen_range(1..=200);
        let table: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let k = rng.gen_range(1..=3);
        let seeds: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        check(table.clone(), forward_closure(&table, &seeds))?;
    }
    Ok(format!("{count} systems agree"))
}

// ---------------------------------------------------------------- 4

type Terms = BTreeMap<MultiIndex, Rational>;

fn random_terms(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32) -> Terms {
    let mut t = Terms::new();
    while t.is_empty() {
        for _ in 0..rng.gen_range(1..6) {
            let idx: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
            if idx.iter().sum::<u32>() > max_deg {
                continue;
            }
            let c = rng.gen_range(-60i64..60) * 5i64.pow(rng.gen_range(0..3));
            *t.entry(idx).or_insert_with(Rational::zero) += rat(c, 1);
        }
        t.retain(|_, c| !c.is_zero());
    }
    t
}

fn terms_mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (i, x) in a {
        for (j, y) in b {
            let k: Vec<u32> = i.iter().zip(j).map(|(u, v)| u + v).collect();
            *out.entry(k).or_insert_with(Rational::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn series(nvars: usize, trunc: u32, t: &Terms) -> PolydiscSeries {
    let v: Vec<(MultiIndex, Rational)> = t.iter().map(|(i, c)| (i.clone(), c.clone())).collect();
    PolydiscSeries::from_rational_terms(5, nvars, trunc, &v, 30).unwrap()
}

fn gauss_ord() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..200 {
        let nvars = 1 + k % 2;
        let (a, b) = (random_terms(&mut rng, nvars, 3), random_terms(&mut rng, nvars, 3));
        let r = Radius::uniform(nvars, rng.gen_range(0..3));
        // the product expanded over Q, not by series multiplication
        let (f, g, fg) = (series(nvars, 6, &a), series(nvars, 6, &b), series(nvars, 6, &terms_mul(&a, &b)));
        let (of, og, ofg) = (f.ord(&r).unwrap(), g.ord(&r).unwrap(), fg.ord(&r).unwrap());
        ensure(ofg == of + og, || format!("pair {k}: ord(fg) = {ofg} ≠ {of} + {og}"))?;
    }
    for k in 0..100 {
        let t = random_terms(&mut rng, 1, 4);
        let f = series(1, 8, &t);
        let r = Radius::uniform(1, rng.gen_range(0..3));
        let ord = f.ord(&r).unwrap();
        let unit = match f.truncated_inverse(&r) {
            Ok(inv) => {
                ensure(inv.gauss_norm(&r).unwrap() == -f.gauss_norm(&r).unwrap(), || format!("unit {k}: inverse norm"))?;
                true
            }
            Err(_) => false,
        };
        ensure(unit == (ord == 0), || format!("unit case {k}: invertible = {unit}, ord = {ord}"))?;
    }
    for k in 0..50 {
        let d = 3;
        let f = series(2, d, &random_terms(&mut rng, 2, d));
        let r = Radius::uniform(2, 0);
        let sets: Vec<BTreeSet<MultiIndex>> = (0..=4 * d).map(|m| f.staircase_set(&r, m).unwrap()).collect();
        ensure(sets.windows(2).all(|w| w[0].is_subset(&w[1])), || format!("staircase {k} shrinks"))?;
        ensure(sets[sets.len() - 2] == sets[sets.len() - 1], || format!("staircase {k} not stable by depth {}", 4 * d))?;
    }
    for k in 0..50 {
        let nvars = 1 + k % 2;
        let factors = rng.gen_range(1..=4);
        let mut t: Terms = [(vec![0; nvars], rat(1, 1))].into_iter().collect();
        for _ in 0..factors {
            // z_j − a, a non-unit at radius 1
            let j = rng.gen_range(0..nvars);
            let mut e = vec![0; nvars];
            e[j] = 1;
            let lin: Terms = [(e, rat(1, 1)), (vec![0; nvars], rat(rng.gen_range(-9..10), 1))].into_iter().collect();
            t = terms_mul(&t, &lin);
        }
        let mut unit: Terms = [(vec![0; nvars], rat([1, 2, 3, 4][rng.gen_range(0..4)], 1))].into_iter().collect();
        unit.insert(vec![1; nvars], rat(5 * rng.gen_range(1..5), 1));
        let f = series(nvars, 12, &terms_mul(&t, &unit));
        let bound = f.prime_factor_bound(&Radius::uniform(nvars, 0)).unwrap();
        ensure(bound >= factors, || format!("product {k}: bound {bound} < {factors} factors"))?;
    }
    Ok("200 pairs, 100 unit cases, 50 staircases, 50 products".into())
}

// ---------------------------------------------------------------- 5

/// Koenigs coefficients over Q by the recursion on truncated compositions.
fn rational_koenigs(f: &[Rational], n: usize) -> Vec<Rational> {
    let lam = f[1].clone();
    let trunc = |p: UniPoly<Rational>, k: usize| UniPoly::new(p.coeffs().iter().take(k + 1).cloned().collect());
    let mut phi = UniPoly::new(vec![rat(0, 1), rat(1, 1)]);
    for k in 2..=n {
        let mut s = rat(0, 1);
        let mut pw = phi.clone();
        for (j, a) in f.iter().enumerate().skip(1) {
            if j >= 2 {
                s += a * pw.coeff(k);
            }
            pw = trunc(&pw * &phi, k);
        }
        let mut c = phi.coeffs().to_vec();
        c.resize(k + 1, rat(0, 1));
        c[k] = s / (num_traits::pow(lam.clone(), k) - &lam);
        phi = UniPoly::new(c);
    }
    (0..=n).map(|k| phi.coeff(k)).collect()
}

/// Böttcher coefficients over Q for a monic germ.
fn rational_boettcher_monic(f: &[Rational], d: usize, n: usize) -> Vec<Rational> {
    let mut phi = vec![rat(0, 1), rat(1, 1)];
    phi.resize(n + 1, rat(0, 1));
    for k in 2..=n {
        let deg = d + k - 1;
        let p = UniPoly::new(phi.clone());
        let comp = f.iter().rev().fold(UniPoly::<Rational>::zero(), |acc, a| &(&acc * &p) + &UniPoly::constant(a.clone()));
        let r = if deg % d == 0 { phi[deg / d].clone() } else { rat(0, 1) };
        phi[k] = (r - comp.coeff(deg)) / rat(d as i64, 1);
    }
    phi
}

fn agrees(c: &PadicNumber, q: &Rational) -> bool {
    (c.clone() - padic_from_rational(q, 5, 60)).is_indistinguishable_from_zero()
}

fn certified(c: &Conjugacy) -> Result<(), String> {
    ensure(c.residual_vanishes(), || "residual above the precision certificate".into())?;
    let m = c.source_radius.ok_or("no certified radius")?;
    ensure(c.certified && certify_isometry(&c.phi, &m).unwrap(), || "isometry not certified".into())
}

fn uniformization() -> Check {
    const N: u32 = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..20 {
        let mut f = vec![rat(0, 1), rat(5 * [1, 2, 3, 4, 6][rng.gen_range(0..5)], 1)];
        f.extend((0..rng.gen_range(1..6)).map(|_| rat(rng.gen_range(-30..30), 1)));
        let germ = Germ::from_rationals(5, &f, N).unwrap();
        let c = koenigs_linearize(&germ, 12).map_err(|e| format!("Koenigs {k}: {e}"))?;
        certified(&c).map_err(|e| format!("Koenigs {k}: {e}"))?;
        let exact = rational_koenigs(&f, c.phi.trunc() as usize);
        let coeffs = c.coeffs();
        ensure(coeffs.iter().zip(&exact).all(|(a, b)| agrees(a, b)), || format!("Koenigs {k}: coefficients differ from Q"))?;
    }
    for k in 0..20 {
        let d = 2 + k % 2;
        let monic = k < 10;
        let lead = if monic { 1 } else { [1, 4, 6, 9, 11, 14][rng.gen_range(0..6)] };
        let mut f = vec![rat(0, 1); d];
        f.push(rat(lead, 1));
        f.extend((0..rng.gen_range(1..5)).map(|_| rat(rng.gen_range(-30..30), 1)));
        let germ = Germ::from_rationals(5, &f, N).unwrap();
        let c = boettcher_coordinate(&germ, 10).map_err(|e| format!("Böttcher {k}: {e}"))?;
        certified(&c).map_err(|e| format!("Böttcher {k}: {e}"))?;
        if monic {
            let exact = rational_boettcher_monic(&f, d, c.phi.trunc() as usize);
            ensure(c.coeffs().iter().zip(&exact).all(|(a, b)| agrees(a, b)), || format!("Böttcher {k}: coefficients differ"))?;
        }
    }
    Ok("20 Koenigs (D=12), 20 Böttcher (D=10)".into())
}

// ---------------------------------------------------------------- 6

fn limit_tests() -> Check {
    let xm1 = UniPoly::from_ints(&[-1, 1]);
    let t2 = root_of_unity_limit_test(&UnitInput::Teichmuller { residue: 2 }, 5, 20, &xm1, 2, 8).unwrap();
    ensure(t2.verdict == LimitVerdict::ConvergesToZero && t2.root_of_unity == Some(true), || format!("Teichmüller 2: {t2:?}"))?;
    let one = root_of_unity_limit_test(&UnitInput::Padic(PadicNumber::one(5, 20)), 5, 20, &xm1, 2, 8).unwrap();
    ensure(one.verdict == LimitVerdict::ConvergesToZero, || format!("ξ = 1: {one:?}"))?;
    let six = root_of_unity_limit_test(&UnitInput::Padic(PadicNumber::from_int(6, 5, 20)), 5, 20, &xm1, 2, 8).unwrap();
    ensure(six.verdict == LimitVerdict::BoundedAway, || format!("ξ = 6: {six:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..30 {
        let mut c: Vec<i64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(-3..4)).collect();
        c.push(1);
        let poly = UniPoly::from_ints(&c);
        let d = [1u64, 2, 3, 4, 6][rng.gen_range(0..5)];
        if k % 2 == 0 {
            let xi = UnitInput::Teichmuller { residue: rng.gen_range(1..5) };
            let r = root_of_unity_limit_test(&xi, 5, 24, &poly, d, 10).unwrap();
            ensure(r.root_of_unity == Some(true), || format!("case {k}: Teichmüller lift not recognised"))?;
            if let (Some(e), LimitVerdict::ConvergesToZero | LimitVerdict::BoundedAway) = (r.exact_verdict, r.numeric_verdict) {
                ensure(e == r.numeric_verdict, || format!("case {k}: exact {e:?} vs numeric {:?}", r.numeric_verdict))?;
            }
        } else {
            // 1 + 5u with u ≠ 0 is never a root of unity in Z_5
            let u = 1 + 5 * rng.gen_range(1..25);
            let r = root_of_unity_limit_test(&UnitInput::Padic(PadicNumber::from_int(u, 5, 24)), 5, 24, &poly, d, 10).unwrap();
            ensure(r.numeric_verdict != LimitVerdict::ConvergesToZero, || format!("case {k}: principal unit {u} converges"))?;
        }
    }
    Ok("3 documented verdicts, 30 randomized cases".into())
}

// ---------------------------------------------------------------- 7, 8

/// `S·B·S⁻¹` with `B` a block sum of scaled cyclotomic companions, a subspace
/// made of whole blocks and lines inside blocks, and its period read off the
/// construction.
fn periodic_trial(rng: &mut ChaCha8Rng, n: usize) -> (RationalMatrix, SubspaceBasis, u64) {
    let mut blocks = Vec::new();
    let mut parts: Vec<(usize, usize, u64)> = Vec::new();
    let mut used = 0;
    while used < n {
        let orders: Vec<u64> = (1..=12).filter(|&k| euler_phi(k) as usize <= n - used).collect();
        let k = orders[rng.gen_range(0..orders.len())];
        let c = rat([1, -1, 2, 3, -2][rng.gen_range(0..5)], 1);
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
                    // a line in the block of a primitive k-th root comes back once ζ^t = ±1
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
            rows[i][j] = rat(rng.gen_range(-2..=2), 1);
            s = s.mul(&RationalMatrix::new(rows).unwrap());
        }
    }
    let conj = s.mul(&b).mul(&s.inverse().unwrap());
    let w = SubspaceBasis::new(
        vectors.iter().map(|v| s.apply(&v.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>())).collect(),
    )
    .unwrap();
    (conj, w, period)
}

fn period_bounds() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0;
    for k in 0..100 {
        let n = 2 + k % 3;
        let (m, w, want) = periodic_trial(&mut rng, n);
        let got = subspace_period(&m, &w, 64).unwrap();
        ensure(got == Some(want), || format!("trial {k}: period {got:?}, constructed {want}"))?;
        ensure(num_bigint::BigUint::from(want) <= period_bound(n as u64), || format!("trial {k}: exceeds the bound"))?;
        worst = worst.max(want);
    }
    for k in 0..50 {
        let n = 2 + k % 3;
        let (m, w, _) = periodic_trial(&mut rng, n);
        let lam = exterior_power(&m, w.dim()).unwrap();
        let (a, b) = (subspace_period(&m, &w, 64).unwrap(), subspace_period(&lam, &w.wedge(), 64).unwrap());
        ensure(a == b, || format!("wedge trial {k}: {a:?} vs {b:?}"))?;
    }
    Ok(format!("100 period trials (max period {worst}), 50 wedge trials"))
}

fn cyclotomic_splits() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t_minus_1 = UniPoly::from_ints(&[-1, 1]);
    for k in 0..50 {
        let (m, _, _) = periodic_trial(&mut rng, 1 + k % 4);
        let s = minpoly_cyclotomic_split(&m).map_err(|e| format!("split {k}: {e}"))?;
        ensure(&t_minus_1.pow(s.m as u32) * &s.q == s.minimal_polynomial, || format!("split {k}: no reconstruction"))?;
        ensure(s.minimal_polynomial == m.pow(s.n0).minimal_polynomial(), || format!("split {k}: wrong minimal polynomial"))?;
        ensure(is_cyclotomic_free(&s.q), || format!("split {k}: Q has a cyclotomic factor"))?;
        // second route: Q shares no factor with any Φ_n of degree ≤ deg Q
        let deg = s.q.deg() as u64;
        let clean = (1..=2 * deg * deg + 2).filter(|&n| euler_phi(n) <= deg).all(|n| s.q.gcd(&cyclotomic_polynomial(n)).deg() == 0);
        ensure(clean, || format!("split {k}: gcd with a cyclotomic polynomial"))?;
    }
    Ok("50 splits reconstruct with cyclotomic-free Q".into())
}

// ---------------------------------------------------------------- 9

fn proportional(a: &Sym2Point, b: &Sym2Point) -> bool {
    (0..3).all(|i| (0..3).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

fn random_quad(rng: &mut ChaCha8Rng) -> QuadNumber {
    let disc = [-1i64, -2, -3, 2, 3, 5, 7][rng.gen_range(0..7)];
    let u = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
    let v = rat([-2, -1, 1, 2][rng.gen_range(0..4)], rng.gen_range(1..=3));
    QuadNumber::new(u, v, disc.into()).unwrap()
}

fn symmetric_descent() -> Check {
    let maps = [
        map(&[-1, 0, 1], &[1]),
        map(&[1, 0, 1], &[0, 2]),
        map(&[0, -3, 0, 1], &[1]),
        map(&[1], &[0, 0, 1]),
        map(&[1, 0, 2], &[-3, 1]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (mi, f) in maps.iter().enumerate() {
        let down = symmetric_square_descent(f);
        for k in 0..50 {
            let x = QuadPoint::affine(random_quad(&mut rng));
            let a = f.eval_quadratic(&x).descend();
            let b = down.apply(&x.descend()).map_err(|e| e.to_string())?;
            ensure(proportional(&a, &b), || format!("map {mi}, point {k}: descent does not commute"))?;
        }
    }

    // Y = {z : (z² − 2)(z² + 1)(z − 3) = 0} over Q; Z = quadratics sharing a root with it
    let h = &(&UniPoly::<Rational>::from_ints(&[-2, 0, 1]) * &UniPoly::from_ints(&[1, 0, 1])) * &UniPoly::from_ints(&[-3, 1]);
    let mut points = vec![
        QuadNumber::new(rat(0, 1), rat(1, 1), 2.into()).unwrap(),
        QuadNumber::new(rat(0, 1), rat(-1, 1), 2.into()).unwrap(),
        QuadNumber::new(rat(0, 1), rat(1, 1), (-1).into()).unwrap(),
        QuadNumber::new(rat(0, 1), rat(-1, 1), (-1).into()).unwrap(),
        QuadNumber::new(rat(1, 1), rat(1, 1), 2.into()).unwrap(),
        QuadNumber::new(rat(0, 1), rat(1, 2), 8.into()).unwrap(),
    ];
    while points.len() < 20 {
        points.push(random_quad(&mut rng));
    }
    let mut inside = 0;
    for (k, x) in points.iter().enumerate() {
        // x ∈ Y(L): evaluate h at x in L
        let hx = h.coeffs().iter().rev().fold(QuadNumber::new(rat(0, 1), rat(0, 1), x.disc.clone()).unwrap(), |acc, c| {
            acc.mul(x).add(&QuadNumber::new(c.clone(), rat(0, 1), x.disc.clone()).unwrap())
        });
        let in_y = hx.is_zero();
        // x̄ ∈ Z(K): the quadratic A z² + B z + C shares a factor with h
        let [a, b, c] = QuadPoint::affine(x.clone()).descend();
        let in_z = h.gcd(&UniPoly::new(vec![c, b, a])).deg() > 0;
        ensure(in_y == in_z, || format!("membership point {k}: Y {in_y}, Z {in_z}"))?;
        inside += in_y as usize;
    }
    ensure(inside >= 4, || "pinned points of Y not recognised".into())?;
    Ok(format!("250 descents commute; membership agrees on 20 points ({inside} in Y)"))
}

// ---------------------------------------------------------------- 10

fn ramification() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 30 {
        let dn = rng.gen_range(0..=4);
        let dd = rng.gen_range(0..=4);
        let num: Vec<i64> = (0..=dn).map(|_| rng.gen_range(-5..=5)).collect();
        let den: Vec<i64> = (0..=dd).map(|_| rng.gen_range(-5..=5)).collect();
        let Ok(f) = RationalMap::<Rational>::from_ints(&num, &den) else { continue };
        let d = f.degree();
        if d == 0 {
            continue;
        }
        let total: u32 = f.ramification_multiset().iter().map(|e| e - 1).sum();
        ensure(total == 2 * d - 2, || format!("{f}: Σ(e−1) = {total}, degree {d}"))?;
        done += 1;
    }
    let sq = map(&[0, 0, 1], &[1]);
    let cases = [(vec![sq.clone(), sq], 3), (vec![map(&[0, 0, 0, 1], &[1])], 5), (vec![map(&[0, -3, 0, 1], &[1])], 5)];
    for (maps, want) in cases {
        let got = choose_good_prime(&maps, 2, 100).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{}: good prime {got}, expected {want}", maps[0]))?;
    }
    Ok("30 maps satisfy Riemann–Hurwitz; good primes 3, 5, 5".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 10] = [
        (1, "Lattès counterexample", lattes),
        (2, "PIQ stabilization evidence", piq_evidence),
        (3, "finite-graph oracle equivalence", finite_graphs),
        (4, "Gauss norm and ord", gauss_ord),
        (5, "uniformization residuals", uniformization),
        (6, "root-of-unity limit test", limit_tests),
        (7, "period bounds", period_bounds),
        (8, "cyclotomic split", cyclotomic_splits),
        (9, "symmetric descent", symmetric_descent),
        (10, "ramification and good primes", ramification),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let total = Instant::now();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} ({name}) [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} ({name}) [{secs:.1}s]: {why}");
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.1}s", total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
