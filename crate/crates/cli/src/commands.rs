use std::time::Instant;

use clap::ValueEnum;
use piq_lab::dynamics_p1::{
    enumerate_gaussian_points, symmetric_square_descent, HeightField, ProjPoint, QuadNumber, QuadPoint,
    RationalMap, Sym2Point,
};
use piq_lab::lattes::{
    build_lattes_pair, kernel_polynomial_1_minus_2i, kernel_polynomial_1_plus_2i, verify_recipe, witness_points,
    CMCurve, Witness,
};
use piq_lab::linalg_uniform::{
    exterior_power, minpoly_cyclotomic_split, minpoly_cyclotomic_split_within, period_bound, subspace_period,
    RationalMatrix, SubspaceBasis,
};
use piq_lab::numeric::{rat, GaussianRational, Rational};
use piq_lab::padic_series::{Exponent, PolydiscSeries, Radius};
use piq_lab::piq_engine::{check_invariant, empirical_s0, entry_levels, modp_piq_report, ProductSystem, Subscheme};
use piq_lab::poly::{BiHomPoly, UniPoly};
use piq_lab::uniformize::{boettcher_coordinate, koenigs_linearize, Germ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, FieldKind, MapSpec, SeriesSpec, SubschemeKind, SubschemeSpec};
use crate::expr::{parse_constant, parse_rational_function};
use crate::{CliError, Report, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// Take the command from the config's `command` field.
    Run,
    PiqRun,
    GpiqRun,
    LattesBuild,
    LattesWitness,
    ModpReport,
    Linearize,
    Boettcher,
    GaussNorm,
    OrdScan,
    PeriodBound,
    CycloSplit,
    DescendSym2,
}

impl CommandKind {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        <Self as ValueEnum>::from_str(s, false).map_err(|_| CliError::Config(format!("command: unknown command {s:?}")))
    }
}

type R<T> = Result<T, CliError>;

fn cfg_err(section: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{section}: {msg}"))
}

fn require<'a, T>(v: &'a Option<T>, section: &str) -> R<&'a T> {
    v.as_ref().ok_or_else(|| cfg_err(section, "missing"))
}

/// Runs one experiment. `seed` overrides the config's seed; `timing` adds a
/// wall-clock field, which is the only nondeterministic part of a report.
pub fn run(kind: CommandKind, mut cfg: ExperimentConfig, seed: Option<u64>, timing: bool) -> R<Report> {
    let kind = match kind {
        CommandKind::Run => CommandKind::parse(require(&cfg.command, "command")?)?,
        k => k,
    };
    if kind == CommandKind::Run {
        return Err(cfg_err("command", "\"run\" cannot name itself"));
    }
    cfg.command = Some(kind.name());
    if seed.is_some() {
        cfg.seed = seed;
    }
    let start = Instant::now();
    let result = dispatch(kind, &cfg)?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION"),
        command: kind.name(),
        config: cfg,
        result,
        wall_clock_ms: timing.then(|| start.elapsed().as_millis() as u64),
    })
}

fn dispatch(kind: CommandKind, cfg: &ExperimentConfig) -> R<Value> {
    match (kind, cfg.field) {
        (CommandKind::PiqRun, FieldKind::Q) => piq_run::<Rational>(cfg),
        (CommandKind::PiqRun, FieldKind::Qi) => piq_run::<GaussianRational>(cfg),
        (CommandKind::GpiqRun, FieldKind::Q) => gpiq_run::<Rational>(cfg),
        (CommandKind::GpiqRun, FieldKind::Qi) => gpiq_run::<GaussianRational>(cfg),
        (CommandKind::LattesBuild, _) => lattes_build(),
        (CommandKind::LattesWitness, _) => lattes_witness(cfg),
        (CommandKind::ModpReport, FieldKind::Q) => modp_report(cfg),
        (CommandKind::Linearize, FieldKind::Q) => uniformize(cfg, false),
        (CommandKind::Boettcher, FieldKind::Q) => uniformize(cfg, true),
        (CommandKind::GaussNorm, FieldKind::Q) => gauss_norm(cfg, false),
        (CommandKind::OrdScan, FieldKind::Q) => gauss_norm(cfg, true),
        (CommandKind::PeriodBound, FieldKind::Q) => period(cfg),
        (CommandKind::CycloSplit, FieldKind::Q) => cyclo_split(cfg),
        (CommandKind::DescendSym2, FieldKind::Q) => descend_sym2(cfg),
        (CommandKind::Run, _) => unreachable!("resolved above"),
        (k, FieldKind::Qi) => Err(cfg_err("field", format!("{} runs over Q only", k.name()))),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

fn parse_map<K: piq_lab::numeric::Field>(spec: &MapSpec, section: &str) -> R<RationalMap<K>> {
    let (num, den) = match spec {
        MapSpec::Expr(s) => parse_rational_function::<K>(s).map_err(|e| cfg_err(section, e))?,
        MapSpec::Coeffs { num, den } => {
            let list = |cs: &[String]| -> R<UniPoly<K>> {
                cs.iter().map(|c| parse_constant::<K>(c).map_err(|e| cfg_err(section, e))).collect::<R<Vec<_>>>().map(UniPoly::new)
            };
            (list(num)?, list(den)?)
        }
    };
    RationalMap::from_affine(&num, &den).map_err(|e| cfg_err(section, e))
}

fn parse_point<K: piq_lab::numeric::Field>(s: &str, section: &str) -> R<ProjPoint<K>> {
    match s.trim() {
        "inf" | "∞" | "infinity" => Ok(ProjPoint::Infinity),
        t => parse_constant::<K>(t).map(ProjPoint::Affine).map_err(|e| cfg_err(section, e)),
    }
}

fn system<K: piq_lab::numeric::Field>(cfg: &ExperimentConfig) -> R<ProductSystem<K>> {
    let sys = require(&cfg.system, "system")?;
    let f = parse_map::<K>(&sys.f, "system.f")?;
    let g = match &sys.g {
        Some(g) => parse_map::<K>(g, "system.g")?,
        None => f.clone(),
    };
    Ok(ProductSystem::new(f, g))
}

fn subscheme<K: piq_lab::numeric::Field>(spec: &SubschemeSpec) -> R<Subscheme<K>> {
    let sec = "subscheme";
    Ok(match spec.kind {
        SubschemeKind::Diagonal => Subscheme::Diagonal,
        SubschemeKind::Point => Subscheme::point(
            parse_point(require(&spec.p, "subscheme.p")?, "subscheme.p")?,
            parse_point(require(&spec.q, "subscheme.q")?, "subscheme.q")?,
        ),
        SubschemeKind::LinesThroughInfinity => Subscheme::curve(BiHomPoly::lines_through_infinity())?,
        SubschemeKind::Curve => {
            let [a, b] = *require(&spec.bidegree, "subscheme.bidegree")?;
            let mut terms = Vec::new();
            for t in require(&spec.terms, "subscheme.terms")? {
                if t.i > a || t.j > b {
                    return Err(cfg_err(sec, format!("term ({}, {}) outside bidegree ({a}, {b})", t.i, t.j)));
                }
                terms.push((t.i, t.j, parse_constant::<K>(&t.c).map_err(|e| cfg_err("subscheme.terms", e))?));
            }
            Subscheme::curve(BiHomPoly::from_terms((a, b), terms)).map_err(|e| cfg_err(sec, e))?
        }
    })
}

fn pair_strings<K: piq_lab::numeric::Field>(pts: &[(ProjPoint<K>, ProjPoint<K>)], limit: usize) -> Vec<[String; 2]> {
    pts.iter().take(limit).map(|(a, b)| [a.to_string(), b.to_string()]).collect()
}

fn piq_bounds(cfg: &ExperimentConfig) -> R<(u64, u32, usize)> {
    let b = &cfg.bounds;
    Ok((*require(&b.height, "bounds.height")?, *require(&b.s_max, "bounds.s_max")?, b.list_limit.unwrap_or(5)))
}

fn piq_run<K: HeightField>(cfg: &ExperimentConfig) -> R<Value> {
    let sys = system::<K>(cfg)?;
    let y = subscheme::<K>(require(&cfg.subscheme, "subscheme")?)?;
    let (h, s_max, limit) = piq_bounds(cfg)?;
    let report = empirical_s0(&sys, &y, h, s_max)?;
    let tails = if limit > 0 {
        let levels = entry_levels(&sys, &y, h, s_max + 1)?;
        levels[1..].iter().map(|l| pair_strings(l, limit)).collect()
    } else {
        Vec::new()
    };
    Ok(json!({
        "system": to_value(&sys),
        "subscheme": to_value(&y),
        "s0": report.s0,
        "tail_sizes": report.tail_sizes,
        "points": report.points,
        "height": report.height,
        "horizon": report.horizon,
        "tails": tails,
        "evidence": "bounded height",
    }))
}

fn gpiq_run<K: HeightField>(cfg: &ExperimentConfig) -> R<Value> {
    let sys = system::<K>(cfg)?;
    let y = subscheme::<K>(require(&cfg.subscheme, "subscheme")?)?;
    let (h, s_max, limit) = piq_bounds(cfg)?;
    let levels = entry_levels(&sys, &y, h, s_max + 1)?;
    let sizes: Vec<usize> = levels[1..].iter().map(Vec::len).collect();
    Ok(json!({
        "system": to_value(&sys),
        "subscheme": to_value(&y),
        "invariant": check_invariant(&sys, &y)?,
        "entered_at_zero": levels[0].len(),
        "tail_sizes": sizes,
        "last_nonempty": sizes.iter().rposition(|&n| n > 0),
        "tails": levels[1..].iter().map(|l| pair_strings(l, limit)).collect::<Vec<_>>(),
        "height": h,
        "horizon": s_max,
    }))
}

fn modp_report(cfg: &ExperimentConfig) -> R<Value> {
    let sys = system::<Rational>(cfg)?;
    let y = subscheme::<Rational>(require(&cfg.subscheme, "subscheme")?)?;
    let primes = require(&cfg.primes, "primes")?;
    let reports = primes.iter().map(|&p| modp_piq_report(&sys, &y, p).map(|r| to_value(&r))).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({ "system": to_value(&sys), "subscheme": to_value(&y), "reports": reports }))
}

fn lattes_build() -> R<Value> {
    let pair = build_lattes_pair()?;
    let five = CMCurve::multiplication_map(5)?;
    let identity = pair.f.compose(&pair.g) == five && pair.g.compose(&pair.f) == five;
    Ok(json!({
        "curve": "y^2 = x^3 + x",
        "kernel_1_plus_2i": kernel_polynomial_1_plus_2i()?.to_string(),
        "kernel_1_minus_2i": kernel_polynomial_1_minus_2i()?.to_string(),
        "pair": to_value(&pair),
        "fg_equals_gf_equals_mult5": identity,
        "recipe": to_value(&verify_recipe(&pair)?),
    }))
}

// Fixed so that reports do not depend on the thread count.
const WITNESS_CHUNK: usize = 8;

fn lattes_witness(cfg: &ExperimentConfig) -> R<Value> {
    let pair = build_lattes_pair()?;
    let levels = cfg.bounds.s.clone().unwrap_or_else(|| (0..=4).collect());
    let seeds: Vec<ProjPoint<GaussianRational>> = match &cfg.seeds {
        Some(list) => list.iter().map(|s| parse_point(s, "seeds")).collect::<R<_>>()?,
        None => enumerate_gaussian_points(cfg.bounds.height.unwrap_or(10))?,
    };
    let mut out = Vec::new();
    for &s in &levels {
        let mut consumed = 0;
        let mut witnesses: Vec<Witness> = Vec::new();
        for chunk in seeds.chunks(WITNESS_CHUNK) {
            let r = witness_points(&pair, s, chunk)?;
            consumed += r.seeds_consumed;
            witnesses.extend(r.witnesses);
            if !witnesses.is_empty() {
                break;
            }
        }
        out.push(json!({ "s": s, "seeds_consumed": consumed, "witnesses": to_value(&witnesses) }));
    }
    Ok(json!({ "seed_count": seeds.len(), "levels": out }))
}

fn germ(cfg: &ExperimentConfig) -> R<Germ> {
    let g = require(&cfg.germ, "germ")?;
    let coeffs =
        g.coeffs.iter().map(|c| parse_constant::<Rational>(c).map_err(|e| cfg_err("germ.coeffs", e))).collect::<R<Vec<_>>>()?;
    Ok(Germ::from_rationals(g.p, &coeffs, cfg.bounds.precision.unwrap_or(20))?)
}

fn uniformize(cfg: &ExperimentConfig, superattracting: bool) -> R<Value> {
    let f = germ(cfg)?;
    let c = if superattracting {
        boettcher_coordinate(&f, cfg.bounds.trunc.unwrap_or(10))?
    } else {
        koenigs_linearize(&f, cfg.bounds.trunc.unwrap_or(12))?
    };
    Ok(json!({
        "model": if superattracting { "z^d" } else { "lambda z" },
        "conjugacy": to_value(&c),
        "residual_vanishes": c.residual_vanishes(),
        "precision": c.precision(),
    }))
}

fn series(spec: &SeriesSpec, cfg: &ExperimentConfig, k: usize) -> R<(PolydiscSeries, Radius)> {
    let sec = format!("series[{k}]");
    let terms: Vec<(Vec<u32>, Rational)> = match (&spec.expr, &spec.terms) {
        (Some(e), None) => {
            if spec.nvars != 1 {
                return Err(cfg_err(&sec, "expr is univariate; use terms"));
            }
            let (n, d) = parse_rational_function::<Rational>(e).map_err(|m| cfg_err(&sec, m))?;
            if d.deg() > 0 {
                return Err(cfg_err(&sec, "expr must be a polynomial"));
            }
            let d0 = d.coeff(0);
            n.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32], c / &d0)).collect()
        }
        (None, Some(ts)) => ts
            .iter()
            .map(|t| parse_constant::<Rational>(&t.c).map(|c| (t.index.clone(), c)).map_err(|m| cfg_err(&sec, m)))
            .collect::<R<_>>()?,
        _ => return Err(cfg_err(&sec, "give exactly one of expr and terms")),
    };
    let top = terms.iter().map(|(i, _)| i.iter().sum::<u32>()).max().unwrap_or(0);
    let trunc = cfg.bounds.trunc.unwrap_or(top).max(top);
    let s = PolydiscSeries::from_rational_terms(spec.p, spec.nvars, trunc, &terms, cfg.bounds.precision.unwrap_or(24))
        .map_err(|m| cfg_err(&sec, m))?;
    let radius = spec
        .radius
        .iter()
        .map(|r| r.trim().parse::<Exponent>().map_err(|_| cfg_err(&sec, format!("bad radius exponent {r:?}"))))
        .collect::<R<Vec<Exponent>>>()?;
    Ok((s, Radius::new(radius).map_err(|m| cfg_err(&sec, m))?))
}

fn gauss_norm(cfg: &ExperimentConfig, scan: bool) -> R<Value> {
    let specs = require(&cfg.series, "series")?;
    let mut out = Vec::new();
    for (k, spec) in specs.iter().enumerate() {
        let (s, r) = series(spec, cfg, k)?;
        let mut entry = json!({
            "p": spec.p,
            "radius": spec.radius,
            "gauss_norm": s.gauss_norm(&r)?.to_string(),
            "ord": s.ord(&r)?,
        });
        if scan {
            let depth = cfg.bounds.grid_depth.unwrap_or(4);
            let stair = s.staircase_set(&r, depth)?;
            entry["grid_depth"] = json!(depth);
            entry["staircase"] = to_value(&stair);
            entry["prime_factor_bound"] = json!(s.prime_factor_bound(&r)?);
        }
        out.push(entry);
    }
    Ok(json!({ "series": out }))
}

fn rational_rows(rows: &[Vec<String>], sec: &str) -> R<Vec<Vec<Rational>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| parse_constant::<Rational>(x).map_err(|e| cfg_err(sec, e))).collect())
        .collect()
}

fn matrix(cfg: &ExperimentConfig) -> R<Option<RationalMatrix>> {
    let m = require(&cfg.matrix, "matrix")?;
    m.rows
        .as_ref()
        .map(|rows| RationalMatrix::new(rational_rows(rows, "matrix.rows")?).map_err(|e| cfg_err("matrix.rows", e)))
        .transpose()
}

/// Longest orbit of subspaces followed before giving up on periodicity.
const PERIOD_SCAN: u64 = 100_000;

fn period(cfg: &ExperimentConfig) -> R<Value> {
    let spec = require(&cfg.matrix, "matrix")?;
    let m = matrix(cfg)?;
    let n = match (&m, spec.dimension) {
        (Some(m), _) => m.dim() as u64,
        (None, Some(d)) if d > 0 => d,
        _ => return Err(cfg_err("matrix", "give rows or a positive dimension")),
    };
    let bound = period_bound(n);
    let mut out = json!({ "dimension": n, "period_bound": bound.to_string() });
    if let (Some(m), Some(w)) = (&m, &spec.subspace) {
        let w = SubspaceBasis::new(rational_rows(w, "matrix.subspace")?).map_err(|e| cfg_err("matrix.subspace", e))?;
        let scan = u64::try_from(&bound).map_or(PERIOD_SCAN, |b| b.min(PERIOD_SCAN));
        let per = subspace_period(m, &w, scan)?;
        let lam = exterior_power(m, w.dim())?;
        let wedge_per = subspace_period(&lam, &w.wedge(), scan)?;
        out["scan_limit"] = json!(scan);
        out["period"] = json!(per);
        out["wedge_period"] = json!(wedge_per);
        out["wedge"] = to_value(&w.wedge());
    }
    Ok(out)
}

fn cyclo_split(cfg: &ExperimentConfig) -> R<Value> {
    let m = matrix(cfg)?.ok_or_else(|| cfg_err("matrix.rows", "missing"))?;
    let split = match require(&cfg.matrix, "matrix")?.candidates.as_deref() {
        Some(c) => minpoly_cyclotomic_split_within(&m, c)?,
        None => minpoly_cyclotomic_split(&m)?,
    };
    Ok(json!({
        "n0": split.n0,
        "unipotent_multiplicity": split.m,
        "q": split.q.display_in("t"),
        "minimal_polynomial": split.minimal_polynomial.display_in("t"),
    }))
}

fn sym2_strings(x: &Sym2Point) -> [String; 3] {
    [x[0].to_string(), x[1].to_string(), x[2].to_string()]
}

fn random_quad_point(rng: &mut ChaCha8Rng) -> QuadPoint {
    const DISCS: [i64; 7] = [-1, -2, -3, 2, 3, 5, 7];
    let disc = DISCS[rng.gen_range(0..DISCS.len())];
    let u = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
    let v = rat([-2, -1, 1, 2][rng.gen_range(0..4)], rng.gen_range(1..=3));
    QuadPoint::affine(QuadNumber::new(u, v, disc.into()).expect("nonsquare discriminant"))
}

fn descend_sym2(cfg: &ExperimentConfig) -> R<Value> {
    let sys = system::<Rational>(cfg)?;
    let f = &sys.f;
    let descended = symmetric_square_descent(f);
    let spec = cfg.sym2.clone().unwrap_or_default();
    let mut points = Vec::new();
    for (k, q) in spec.points.iter().flatten().enumerate() {
        let sec = format!("sym2.points[{k}]");
        let u = parse_constant::<Rational>(&q.u).map_err(|e| cfg_err(&sec, e))?;
        let v = parse_constant::<Rational>(&q.v).map_err(|e| cfg_err(&sec, e))?;
        points.push(QuadPoint::affine(QuadNumber::new(u, v, q.disc.into()).map_err(|e| cfg_err(&sec, e))?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    points.extend((0..spec.random.unwrap_or(0)).map(|_| random_quad_point(&mut rng)));
    let mut rows = Vec::new();
    for x in &points {
        let down = x.descend();
        let image_then_down = f.eval_quadratic(x).descend();
        let down_then_image = descended.apply(&down)?;
        let label = match &x.value {
            Some(q) => format!("{} + ({})*sqrt({})", q.u, q.v, q.disc),
            None => "inf".into(),
        };
        rows.push(json!({
            "point": label,
            "descended": sym2_strings(&down),
            "descended_image": sym2_strings(&image_then_down),
            "image_of_descended": sym2_strings(&down_then_image),
            "commutes": image_then_down == down_then_image,
        }));
    }
    Ok(json!({ "map": f.to_string(), "descended_map": to_value(&descended), "points": rows }))
}
