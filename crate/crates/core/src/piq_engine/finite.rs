use std::collections::VecDeque;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::fingerprint::ModCurve;
use super::{ProductSystem, Subscheme};
use crate::dynamics_p1::{reduce_mod_p, FiniteMap, HeightField};
use crate::error::{Error, Result};
use crate::numeric::modular::Embedding;
use crate::numeric::{Integer, Rational};
use crate::poly::BiHomPoly;

/// A self-map of `0..n` given by its table, with a marked subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteDynSystem {
    pub map: Vec<usize>,
    pub subset: Vec<bool>,
}

impl FiniteDynSystem {
    pub fn new(map: Vec<usize>, subset: Vec<bool>) -> Result<Self> {
        let n = map.len();
        if subset.len() != n {
            return Err(Error::InvalidInput("subset mask and map table differ in size".into()));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidInput(format!("map value {bad} outside 0..{n}")));
        }
        Ok(FiniteDynSystem { map, subset })
    }

    pub fn from_members(map: Vec<usize>, members: &[usize]) -> Result<Self> {
        let mut subset = vec![false; map.len()];
        for &m in members {
            *subset
                .get_mut(m)
                .ok_or_else(|| Error::InvalidInput(format!("member {m} outside the ground set")))? = true;
        }
        Self::new(map, subset)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_invariant(&self) -> bool {
        (0..self.len()).all(|x| !self.subset[x] || self.subset[self.map[x]])
    }

    /// Least `s` with `x ∈ map^{-s}(Y)`, for every `x`.
    pub fn entry_times(&self) -> Vec<Option<u32>> {
        let n = self.len();
        let mut preimages = vec![Vec::new(); n];
        for (x, &y) in self.map.iter().enumerate() {
            preimages[y].push(x);
        }
        let mut time = vec![None; n];
        let mut queue = VecDeque::new();
        for x in 0..n {
            if self.subset[x] {
                time[x] = Some(0);
                queue.push_back(x);
            }
        }
        while let Some(y) = queue.pop_front() {
            let t = time[y].expect("queued") + 1;
            for &x in &preimages[y] {
                if time[x].is_none() {
                    time[x] = Some(t);
                    queue.push_back(x);
                }
            }
        }
        time
    }
}

/// Least `s₀` with `map^{-s₀-1}(Y) = map^{-s₀}(Y)`.
pub fn finite_stabilization(sys: &FiniteDynSystem) -> Result<u32> {
    if !sys.is_invariant() {
        return Err(Error::InvarianceViolated("the marked subset is not mapped into itself".into()));
    }
    Ok(sys.entry_times().into_iter().flatten().max().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModpReport {
    pub p: u64,
    /// Power of `f̄ × ḡ` that is idempotent on `P¹(F_p)²`.
    pub idempotent_power: u64,
    pub fixed_f: Vec<String>,
    pub fixed_g: Vec<String>,
    /// `Fix(f̄^k) × Fix(ḡ^k)`.
    pub fixed_pairs: Vec<(String, String)>,
    pub y_size: usize,
    pub s0: u32,
}

/// Primitive integral multiple of `Φ`.
fn primitive_integral(phi: &BiHomPoly<Rational>) -> BiHomPoly<Rational> {
    let den = phi.terms().fold(Integer::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let num = phi
        .terms()
        .fold(Integer::zero(), |acc, (_, c)| acc.gcd(&(c * Rational::from_integer(den.clone())).to_integer()));
    phi.scale(&Rational::new(den, num.abs()))
}

fn reduced_subset(y: &Subscheme<Rational>, p: u64) -> Result<Vec<bool>> {
    let m = p as usize + 1;
    let e = Embedding { q: p, i: 0 };
    let mut out = vec![false; m * m];
    match y {
        Subscheme::Diagonal => (0..m).for_each(|a| out[a * m + a] = true),
        Subscheme::Point { p: a, q: b } => {
            let (ra, rb) = (Rational::reduce_point(a, &e), Rational::reduce_point(b, &e));
            out[ra as usize * m + rb as usize] = true;
        }
        Subscheme::Curve { phi } => {
            let c = ModCurve::new(&primitive_integral(phi), &e)
                .ok_or_else(|| Error::BadReduction(format!("the curve reduces to zero mod {p}")))?;
            for a in 0..m {
                for b in 0..m {
                    out[a * m + b] = c.vanishes(a as u64, b as u64);
                }
            }
        }
    }
    Ok(out)
}

/// Reduction of `f × g` and `Y` modulo a prime of good reduction: the
/// fixed-point grid of the idempotent iterate and the exact stabilization
/// index of the reduced preimage chain.
pub fn modp_piq_report(sys: &ProductSystem<Rational>, y: &Subscheme<Rational>, p: u64) -> Result<ModpReport> {
    let fb = reduce_mod_p(&sys.f, p)?;
    let gb = reduce_mod_p(&sys.g, p)?;
    let m = p as usize + 1;
    let table: Vec<usize> = (0..m * m)
        .map(|idx| {
            let (a, b) = ((idx / m) as u64, (idx % m) as u64);
            fb.apply(a) as usize * m + gb.apply(b) as usize
        })
        .collect();
    let subset = reduced_subset(y, p)?;
    let finite = FiniteDynSystem::new(table, subset)?;
    let s0 = finite_stabilization(&finite)?;

    let k = idempotent_joint(&fb, &gb);
    let (fk, gk) = (fb.iterate(k), gb.iterate(k));
    let fixed_f: Vec<String> = fk.fixed_points().into_iter().map(|i| fb.label(i)).collect();
    let fixed_g: Vec<String> = gk.fixed_points().into_iter().map(|i| gb.label(i)).collect();
    let fixed_pairs = fixed_f
        .iter()
        .flat_map(|a| fixed_g.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    Ok(ModpReport {
        p,
        idempotent_power: k,
        fixed_f,
        fixed_g,
        fixed_pairs,
        y_size: finite.subset.iter().filter(|&&b| b).count(),
        s0,
    })
}

/// Least `k ≥ 1` making both reductions idempotent at once: a multiple of
/// every cycle length that is at least every preperiod.
fn idempotent_joint(f: &FiniteMap, g: &FiniteMap) -> u64 {
    let ((lf, pf), (lg, pg)) = (orbit_stats(f), orbit_stats(g));
    let step = lf.lcm(&lg);
    pg.max(pf).div_ceil(step).max(1) * step
}

fn orbit_stats(f: &FiniteMap) -> (u64, u64) {
    let n = f.len() as u64;
    let mut lcm = 1u64;
    let mut pre = 0u64;
    for start in 0..n {
        let mut seen = vec![u64::MAX; n as usize];
        let (mut x, mut step) = (start, 0u64);
        while seen[x as usize] == u64::MAX {
            seen[x as usize] = step;
            x = f.apply(x);
            step += 1;
        }
        pre = pre.max(seen[x as usize]);
        lcm = lcm.lcm(&(step - seen[x as usize]));
    }
    (lcm, pre)
}
