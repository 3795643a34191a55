//! Preimage tails on P¹ × P¹: invariance checks, first entry times, tail sets
//! at bounded height, the empirical stabilization index, and the exact
//! stabilization index of reductions modulo a prime.

mod finite;
mod fingerprint;

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dynamics_p1::{HeightField, ProjPoint, RationalMap};
use crate::error::{Error, Result};
use crate::numeric::Field;
use crate::poly::{bihom_divides, BiHomPoly};

pub use finite::{finite_stabilization, modp_piq_report, FiniteDynSystem, ModpReport};
pub(crate) use fingerprint::{fingerprint_embeddings, ModCurve, ModMap};

pub type PointPair<K> = (ProjPoint<K>, ProjPoint<K>);

/// The product map `f × g` on P¹ × P¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSystem<K> {
    pub f: RationalMap<K>,
    pub g: RationalMap<K>,
}

impl<K: Field> ProductSystem<K> {
    pub fn new(f: RationalMap<K>, g: RationalMap<K>) -> Self {
        ProductSystem { f, g }
    }

    pub fn diagonal_of(f: RationalMap<K>) -> Self {
        ProductSystem { g: f.clone(), f }
    }

    pub fn apply(&self, x: &PointPair<K>) -> PointPair<K> {
        (self.f.eval(&x.0), self.g.eval(&x.1))
    }

    pub fn iterate_point(&self, x: &PointPair<K>, n: u32) -> PointPair<K> {
        (0..n).fold(x.clone(), |acc, _| self.apply(&acc))
    }
}

impl<K: Field> Serialize for ProductSystem<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound = "")]
        struct Wire<'a, K: Field> {
            field: &'static str,
            f: &'a RationalMap<K>,
            g: &'a RationalMap<K>,
        }
        Wire { field: K::NAME, f: &self.f, g: &self.g }.serialize(s)
    }
}

/// A closed subscheme of P¹ × P¹.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum Subscheme<K: Field> {
    Diagonal,
    Point { p: ProjPoint<K>, q: ProjPoint<K> },
    Curve { phi: BiHomPoly<K> },
}

impl<K: Field> Subscheme<K> {
    pub fn point(p: ProjPoint<K>, q: ProjPoint<K>) -> Self {
        Subscheme::Point { p, q }
    }

    /// The zero set of `Φ`, scaled to a canonical representative.
    pub fn curve(phi: BiHomPoly<K>) -> Result<Self> {
        if phi.is_zero() {
            return Err(Error::InvalidInput("the zero polynomial cuts out everything".into()));
        }
        Ok(Subscheme::Curve { phi: phi.normalized() })
    }

    pub fn contains(&self, x: &PointPair<K>) -> bool {
        match self {
            Subscheme::Diagonal => x.0 == x.1,
            Subscheme::Point { p, q } => &x.0 == p && &x.1 == q,
            Subscheme::Curve { phi } => {
                let ((x0, x1), (y0, y1)) = (x.0.coords(), x.1.coords());
                phi.eval(&x0, &x1, &y0, &y1).is_zero()
            }
        }
    }
}

/// Whether `(f × g)(Y) ⊆ Y`: equal maps for the diagonal, a fixed pair for a
/// point, and `Φ | Φ(F0, F1; G0, G1)` for a curve.
pub fn check_invariant<K: Field>(sys: &ProductSystem<K>, y: &Subscheme<K>) -> Result<bool> {
    Ok(match y {
        Subscheme::Diagonal => sys.f == sys.g,
        Subscheme::Point { p, q } => &sys.f.eval(p) == p && &sys.g.eval(q) == q,
        Subscheme::Curve { phi } => {
            let pulled = phi.substitute(sys.f.f0(), sys.f.f1(), sys.g.f0(), sys.g.f1());
            bihom_divides(phi, &pulled)?.is_some()
        }
    })
}

fn require_invariant<K: Field>(sys: &ProductSystem<K>, y: &Subscheme<K>) -> Result<()> {
    if check_invariant(sys, y)? {
        Ok(())
    } else {
        Err(Error::InvarianceViolated("Y is not mapped into itself by f × g".into()))
    }
}

/// Least `s` with `(f × g)^s(x) ∈ Y`, or `Never` within the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntryTime {
    At(u32),
    Never,
}

impl Serialize for EntryTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EntryTime::At(n) => s.serialize_u32(*n),
            EntryTime::Never => s.serialize_str("never"),
        }
    }
}

pub fn first_entry_time<K: Field>(sys: &ProductSystem<K>, y: &Subscheme<K>, x: &PointPair<K>, s_max: u32) -> EntryTime {
    let mut cur = x.clone();
    for s in 0..=s_max {
        if y.contains(&cur) {
            return EntryTime::At(s);
        }
        if s < s_max {
            cur = sys.apply(&cur);
        }
    }
    EntryTime::Never
}

/// Exact forward orbits, extended on demand.
struct OrbitCache<'a, K> {
    map: &'a RationalMap<K>,
    orbits: Vec<Mutex<Vec<ProjPoint<K>>>>,
}

impl<'a, K: Field> OrbitCache<'a, K> {
    fn new(map: &'a RationalMap<K>, pts: &[ProjPoint<K>]) -> Self {
        OrbitCache { map, orbits: pts.iter().map(|p| Mutex::new(vec![p.clone()])).collect() }
    }

    fn get(&self, i: usize, t: u32) -> ProjPoint<K> {
        let mut orb = self.orbits[i].lock().unwrap_or_else(|e| e.into_inner());
        while orb.len() <= t as usize {
            let next = self.map.eval(orb.last().expect("nonempty"));
            orb.push(next);
        }
        orb[t as usize].clone()
    }
}

/// Pairs of points of height at most `h`, grouped by exact first entry
/// level `0..=max_level`; pairs entering later or never are omitted.
///
/// Orbits are followed modulo two primes of good reduction to select
/// candidates; each candidate's entry is then confirmed by exact evaluation.
pub fn entry_levels<K: HeightField>(
    sys: &ProductSystem<K>,
    y: &Subscheme<K>,
    h: u64,
    max_level: u32,
) -> Result<Vec<Vec<PointPair<K>>>> {
    let pts = K::enumerate(h)?;
    let curves: Vec<&BiHomPoly<K>> = match y {
        Subscheme::Curve { phi } => vec![phi],
        _ => vec![],
    };
    let embs = fingerprint_embeddings(&[&sys.f, &sys.g], &curves, 2);
    let reduced = |m: usize| -> Vec<Vec<[u64; 2]>> {
        pts.par_iter()
            .map(|x| {
                let a = fingerprint::orbit(&embs[0].1[m], x, &embs[0].0, max_level);
                let b = fingerprint::orbit(&embs[1].1[m], x, &embs[1].0, max_level);
                a.into_iter().zip(b).map(|(u, v)| [u, v]).collect()
            })
            .collect()
    };
    let (of, og) = (reduced(0), reduced(1));
    let levels = max_level as usize + 1;
    let n = pts.len();

    // fingerprint condition at level t for the pair (i, j)
    let target = match y {
        Subscheme::Point { p, q } => Some((
            [K::reduce_point(p, &embs[0].0), K::reduce_point(p, &embs[1].0)],
            [K::reduce_point(q, &embs[0].0), K::reduce_point(q, &embs[1].0)],
        )),
        _ => None,
    };
    let fp_match = |i: usize, j: usize, t: usize| -> bool {
        match y {
            Subscheme::Diagonal => of[i][t] == og[j][t],
            Subscheme::Point { .. } => {
                let (rp, rq) = target.as_ref().expect("point target");
                &of[i][t] == rp && &og[j][t] == rq
            }
            Subscheme::Curve { .. } => (0..2).all(|k| embs[k].2[0].vanishes(of[i][t][k], og[j][t][k])),
        }
    };

    let mut candidates: Vec<(usize, usize, usize)> = match y {
        Subscheme::Diagonal => {
            let mut first: HashMap<(usize, usize), usize> = HashMap::new();
            for t in 0..levels {
                let mut index: HashMap<[u64; 2], Vec<usize>> = HashMap::new();
                for (i, o) in of.iter().enumerate() {
                    index.entry(o[t]).or_default().push(i);
                }
                for (j, o) in og.iter().enumerate() {
                    if let Some(is) = index.get(&o[t]) {
                        for &i in is {
                            first.entry((i, j)).or_insert(t);
                        }
                    }
                }
            }
            first.into_iter().map(|((i, j), t)| (i, j, t)).collect()
        }
        Subscheme::Point { .. } => {
            let (rp, rq) = target.as_ref().expect("point target");
            let xs: Vec<usize> = (0..n).filter(|&i| of[i].iter().any(|r| r == rp)).collect();
            let ys: Vec<usize> = (0..n).filter(|&j| og[j].iter().any(|r| r == rq)).collect();
            xs.iter()
                .flat_map(|&i| ys.iter().map(move |&j| (i, j)))
                .filter_map(|(i, j)| (0..levels).find(|&t| fp_match(i, j, t)).map(|t| (i, j, t)))
                .collect()
        }
        Subscheme::Curve { .. } => (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let fp_match = &fp_match;
                (0..n).filter_map(move |j| (0..levels).find(|&t| fp_match(i, j, t)).map(|t| (i, j, t)))
            })
            .collect(),
    };
    candidates.sort_unstable();

    let cf = OrbitCache::new(&sys.f, &pts);
    let cg = OrbitCache::new(&sys.g, &pts);
    let confirmed: Vec<(usize, usize, usize)> = candidates
        .par_iter()
        .filter_map(|&(i, j, t0)| {
            (t0..levels)
                .filter(|&t| fp_match(i, j, t))
                .find(|&t| y.contains(&(cf.get(i, t as u32), cg.get(j, t as u32))))
                .map(|t| (i, j, t))
        })
        .collect();

    let mut out = vec![Vec::new(); levels];
    for (i, j, t) in confirmed {
        out[t].push((pts[i].clone(), pts[j].clone()));
    }
    Ok(out)
}

/// Pairs of height at most `h` entering the invariant `Y` at exactly step `s + 1`.
pub fn tail_set<K: HeightField>(sys: &ProductSystem<K>, y: &Subscheme<K>, s: u32, h: u64) -> Result<Vec<PointPair<K>>> {
    require_invariant(sys, y)?;
    generalized_tail_set(sys, y, s, h)
}

/// Pairs of height at most `h` in the `(s + 1)`-st preimage of `Y` but in none
/// of the earlier ones; `Y` need not be invariant.
pub fn generalized_tail_set<K: HeightField>(
    sys: &ProductSystem<K>,
    y: &Subscheme<K>,
    s: u32,
    h: u64,
) -> Result<Vec<PointPair<K>>> {
    let mut levels = entry_levels(sys, y, h, s + 1)?;
    Ok(levels.swap_remove(s as usize + 1))
}

/// Bounded-height evidence for stabilization: `tail_sizes[s]` counts the
/// tail at level `s` for `s ≤ horizon`, and `s0` is the least `s` after which
/// every counted tail is empty (`None` if the last one is not).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S0Report {
    pub height: u64,
    pub horizon: u32,
    pub points: usize,
    pub s0: Option<u32>,
    pub tail_sizes: Vec<usize>,
}

pub fn empirical_s0<K: HeightField>(sys: &ProductSystem<K>, y: &Subscheme<K>, h: u64, s_max: u32) -> Result<S0Report> {
    require_invariant(sys, y)?;
    let levels = entry_levels(sys, y, h, s_max + 1)?;
    let tail_sizes: Vec<usize> = levels[1..].iter().map(Vec::len).collect();
    let s0 = match tail_sizes.iter().rposition(|&n| n > 0) {
        None => Some(0),
        Some(last) if (last as u32) < s_max => Some(last as u32 + 1),
        Some(_) => None,
    };
    Ok(S0Report { height: h, horizon: s_max, points: K::enumerate(h)?.len(), s0, tail_sizes })
}
