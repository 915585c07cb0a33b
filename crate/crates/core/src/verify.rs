//! Reproducible verification suites.
//!
//! A suite runs a family of checks and returns a [`Report`]. Reports carry
//! no timings, so a fixed [`RunConfig`] always yields the same bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{build_cy3, ginzburg_export};
use crate::dgmod::DGModule;
use crate::error::{DmsError, Result};
use crate::field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
use crate::quiver::quiver_of;
use crate::strings::{int_delta, int_with_base, parse_word, shared_endpoints, twist_adjacent, ArcClass, StringModel};
use crate::surface::{
    enumerate_triangulations, flip_graph, standard_triangulation, surface_invariants, FlipDirection, MarkedSurface,
    Scheme, Triangulation,
};
use crate::twists::{relators_with, BraidWord, TwistMemo};

pub const SCHEMA_VERSION: u32 = 1;

/// Surfaces the randomized suites run on unless told otherwise.
pub const DEFAULT_SURFACES: [&str; 4] = ["hexagon-star", "pentagon-fan", "annulus(1,2)", "annulus(2,3)"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    Prime,
    Rational,
    Both,
}

impl FromStr for FieldMode {
    type Err = DmsError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(FieldMode::Prime),
            "rational" | "q" => Ok(FieldMode::Rational),
            "both" => Ok(FieldMode::Both),
            _ => Err(DmsError::Input(format!("unknown field mode '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: FieldMode,
    pub prime: u64,
    pub seed: u64,
    /// Random braid-generated arcs, split across the surfaces.
    pub fleet: usize,
    /// Longest random braid word.
    pub max_word: usize,
    /// Engineered pairs of each kind.
    pub pairs: usize,
    pub decompositions: usize,
    /// Conjugation-identity samples.
    pub triples: usize,
    /// Probe arcs beyond `s_1..s_n`.
    pub probes: usize,
    pub walk_steps: usize,
    pub walk_int_cap: usize,
    pub green_max_len: usize,
    /// Tilt budget for green-sequence searches.
    pub cap: usize,
    pub samples: usize,
    /// Surface specs; empty means [`DEFAULT_SURFACES`].
    pub surfaces: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldMode::Prime,
            prime: DEFAULT_PRIME,
            seed: 0,
            fleet: 1000,
            max_word: 6,
            pairs: 100,
            decompositions: 100,
            triples: 50,
            probes: 50,
            walk_steps: 500,
            walk_int_cap: 24,
            green_max_len: 8,
            cap: 100_000,
            samples: 200,
            surfaces: Vec::new(),
        }
    }
}

impl RunConfig {
    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        format!("{:x}", Sha256::digest(bytes))
    }

    fn surface_specs(&self) -> Vec<String> {
        if self.surfaces.is_empty() {
            DEFAULT_SURFACES.iter().map(|s| s.to_string()).collect()
        } else {
            self.surfaces.clone()
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

/// Parses `square`, `pentagon`, `hexagon`, `disk(m)` or `annulus(p,q)`,
/// optionally followed by `-fan`, `-snake`, `-star` or `-standard`.
pub fn parse_surface(spec: &str) -> Result<Triangulation> {
    let spec = spec.trim();
    let (body, scheme) = match spec.rsplit_once('-') {
        Some((b, s)) if !s.contains(')') => (b, Some(s)),
        _ => (spec, None),
    };
    let bad = || DmsError::Input(format!("unrecognized surface '{spec}'"));
    let nums = |inner: &str| -> Result<Vec<u32>> {
        inner.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| bad())).collect()
    };
    let surface = match body {
        "square" => MarkedSurface::disk(4)?,
        "pentagon" => MarkedSurface::disk(5)?,
        "hexagon" => MarkedSurface::disk(6)?,
        "heptagon" => MarkedSurface::disk(7)?,
        _ => {
            let inner = |p: &str| body.strip_prefix(p).and_then(|r| r.strip_suffix(')'));
            if let Some(i) = inner("disk(") {
                match nums(i)?.as_slice() {
                    [m] => MarkedSurface::disk(*m)?,
                    _ => return Err(bad()),
                }
            } else if let Some(i) = inner("annulus(") {
                match nums(i)?.as_slice() {
                    [p, q] => MarkedSurface::annulus(*p, *q)?,
                    _ => return Err(bad()),
                }
            } else {
                return Err(bad());
            }
        }
    };
    let scheme = match scheme {
        Some("standard") => Scheme::AnnulusStandard,
        Some(s) => s.parse()?,
        None if surface.is_annulus() => Scheme::AnnulusStandard,
        None if surface.boundaries == [6] => Scheme::Star,
        None => Scheme::Fan,
    };
    standard_triangulation(&surface, scheme)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: Value) -> Self {
        Check { name: name.into(), pass, detail }
    }

    /// Runs `f`; an error other than an input error counts as a failure.
    fn guard(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, Value)>) -> Result<Self> {
        let name = name.into();
        match f() {
            Ok((pass, detail)) => Ok(Check { name, pass, detail }),
            Err(e @ DmsError::Input(_)) => Err(e),
            Err(e) => Ok(Check { name, pass: false, detail: json!({ "error": e.to_string() }) }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} config {}", self.suite, &self.config_hash[..16])?;
        for c in &self.checks {
            writeln!(f, "  {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name)?;
        }
        write!(f, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Counting,
    Ginzburg,
    Strings,
    Spherical,
    Relations,
    Tilting,
    Fields,
    Con0,
    All,
}

impl Suite {
    pub const ACCEPTANCE: [Suite; 7] =
        [Suite::Counting, Suite::Ginzburg, Suite::Strings, Suite::Spherical, Suite::Relations, Suite::Tilting, Suite::Fields];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counting => "counting",
            Suite::Ginzburg => "ginzburg",
            Suite::Strings => "strings",
            Suite::Spherical => "spherical",
            Suite::Relations => "relations",
            Suite::Tilting => "tilting",
            Suite::Fields => "fields",
            Suite::Con0 => "con0",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = DmsError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "counting" => Suite::Counting,
            "ginzburg" => Suite::Ginzburg,
            "strings" | "d2" => Suite::Strings,
            "spherical" => Suite::Spherical,
            "relations" => Suite::Relations,
            "tilting" => Suite::Tilting,
            "fields" => Suite::Fields,
            "con0" => Suite::Con0,
            "all" => Suite::All,
            _ => return Err(DmsError::Input(format!("unknown suite '{s}'"))),
        })
    }
}

/// Checks plus the dimension-valued outputs they produced.
#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    dims: Vec<String>,
}

impl Outcome {
    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let specs = cfg.surface_specs();
    for s in &specs {
        parse_surface(s)?;
    }
    if cfg.field != FieldMode::Rational {
        PrimeField::new(cfg.prime)?;
    }
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::ACCEPTANCE {
                let r = run(s, cfg)?;
                all.extend(r.checks.into_iter().map(|c| Check { name: format!("{}/{}", s.name(), c.name), ..c }));
            }
            all
        }
        Suite::Fields => fields_suite(cfg)?,
        _ => match cfg.field {
            FieldMode::Prime => run_in(suite, cfg, PrimeField::new(cfg.prime)?)?.checks,
            FieldMode::Rational => run_in(suite, cfg, Rationals)?.checks,
            FieldMode::Both => {
                let p = run_in(suite, cfg, PrimeField::new(cfg.prime)?)?;
                let q = run_in(suite, cfg, Rationals)?;
                let mut out = agreement(&p, &q);
                out.extend(p.checks.into_iter().map(|c| Check { name: format!("prime/{}", c.name), ..c }));
                out.extend(q.checks.into_iter().map(|c| Check { name: format!("rational/{}", c.name), ..c }));
                out
            }
        },
    };
    Ok(Report {
        schema: SCHEMA_VERSION,
        suite: suite.name().to_string(),
        config_hash: cfg.hash(),
        config: cfg.clone(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

fn agreement(p: &Outcome, q: &Outcome) -> Vec<Check> {
    let first = p.dims.iter().zip(&q.dims).position(|(a, b)| a != b);
    let pass = first.is_none() && p.dims.len() == q.dims.len();
    let detail = match first {
        Some(i) => json!({ "compared": p.dims.len(), "prime": p.dims[i], "rational": q.dims[i] }),
        None => json!({ "compared": p.dims.len().min(q.dims.len()), "lengths": [p.dims.len(), q.dims.len()] }),
    };
    vec![Check::new("prime_rational_agree", pass, detail)]
}

fn fields_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in [Suite::Ginzburg, Suite::Strings, Suite::Spherical] {
        let p = run_in(s, cfg, PrimeField::new(cfg.prime)?)?;
        let q = run_in(s, cfg, Rationals)?;
        let both_pass = p.checks.iter().chain(&q.checks).all(|c| c.pass);
        out.push(Check::new(format!("{}/both_fields_pass", s.name()), both_pass, Value::Null));
        for c in agreement(&p, &q) {
            out.push(Check { name: format!("{}/{}", s.name(), c.name), ..c });
        }
    }
    Ok(out)
}

fn run_in<F: Field>(suite: Suite, cfg: &RunConfig, field: F) -> Result<Outcome> {
    let models = || -> Result<Vec<(String, StringModel<F>)>> {
        cfg.surface_specs()
            .into_iter()
            .map(|s| Ok((s.clone(), StringModel::new(parse_surface(&s)?, field.clone())?)))
            .collect()
    };
    match suite {
        Suite::Counting => counting(),
        Suite::Ginzburg => ginzburg(field),
        Suite::Strings => strings_suite(cfg, &models()?, field.clone()),
        Suite::Spherical => spherical(cfg, &models()?),
        Suite::Relations => relations(cfg, &models()?),
        Suite::Tilting => tilting(cfg, field),
        Suite::Con0 => con0(cfg, &models()?),
        Suite::Fields | Suite::All => unreachable!("composite suites are expanded by run"),
    }
}

// ---------------------------------------------------------------- counting

/// Triangulations of the `m`-gon by testing every set of `m - 3` diagonals.
pub fn brute_force_polygon_count(m: usize) -> usize {
    let diagonals: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (i + 2..m).map(move |j| (i, j))).filter(|&(i, j)| !(i == 0 && j == m - 1)).collect();
    let cross = |(a, b): (usize, usize), (c, d): (usize, usize)| (a < c && c < b && b < d) || (c < a && a < d && d < b);
    fn rec(ds: &[(usize, usize)], k: usize, from: usize, chosen: &mut Vec<(usize, usize)>, cross: &dyn Fn((usize, usize), (usize, usize)) -> bool) -> usize {
        if chosen.len() == k {
            return 1;
        }
        let mut total = 0;
        for i in from..ds.len() {
            if chosen.iter().all(|&c| !cross(c, ds[i])) {
                chosen.push(ds[i]);
                total += rec(ds, k, i + 1, chosen, cross);
                chosen.pop();
            }
        }
        total
    }
    rec(&diagonals, m.saturating_sub(3), 0, &mut Vec::new(), &cross)
}

fn counting() -> Result<Outcome> {
    let mut o = Outcome::default();
    for (name, s, want) in [
        ("pentagon", MarkedSurface::disk(5)?, (2, 3)),
        ("hexagon", MarkedSurface::disk(6)?, (3, 4)),
        ("annulus(2,3)", MarkedSurface::annulus(2, 3)?, (5, 5)),
    ] {
        let got = surface_invariants(&s)?;
        o.dims.push(format!("{name}:{got:?}"));
        o.push(Check::new(format!("invariants/{name}"), got == want, json!({ "n": got.0, "aleph": got.1 })));
    }
    let g = flip_graph(&MarkedSurface::disk(5)?, 100)?;
    o.push(Check::new(
        "flip_graph/pentagon_is_5_cycle",
        g.nodes.len() == 5 && g.is_single_cycle(),
        json!({ "nodes": g.nodes.len(), "degrees": g.degrees() }),
    ));
    let hex = enumerate_triangulations(&MarkedSurface::disk(6)?, 1000)?.len();
    let oracle = brute_force_polygon_count(6);
    o.push(Check::new("count/hexagon", hex == 14 && oracle == 14, json!({ "flips": hex, "brute_force": oracle })));
    let mut agree = Vec::new();
    for m in 4..=8 {
        agree.push((m, enumerate_triangulations(&MarkedSurface::disk(m as u32)?, 10_000)?.len(), brute_force_polygon_count(m)));
    }
    o.push(Check::new("count/polygons_4_to_8", agree.iter().all(|(_, a, b)| a == b), json!(agree)));
    Ok(o)
}

// ---------------------------------------------------------------- ginzburg

const HEXAGON_DIFFERENTIALS: &str = "\
d(a*) = bc
d(b*) = ca
d(c*) = ab
d(f_1) = cc* - b*b
d(f_2) = bb* - a*a
d(f_3) = aa* - c*c
";

/// Quivers of every triangulation of the 4- to 7-gon plus standard annuli.
fn test_quiver_triangulations() -> Result<Vec<(String, Triangulation)>> {
    let mut out = Vec::new();
    for m in 4..=7 {
        for (i, t) in enumerate_triangulations(&MarkedSurface::disk(m)?, 1000)?.into_iter().enumerate() {
            out.push((format!("disk({m})#{i}"), t));
        }
    }
    out.push(("hexagon-star".into(), parse_surface("hexagon-star")?));
    for (p, q) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        let s = format!("annulus({p},{q})");
        out.push((s.clone(), parse_surface(&s)?));
    }
    Ok(out)
}

fn ginzburg<F: Field>(field: F) -> Result<Outcome> {
    let mut o = Outcome::default();
    let hex = parse_surface("hexagon-star")?;
    let qp = quiver_of(&hex);
    let text = ginzburg_export(&qp).to_text();
    o.push(Check::new("hexagon_star/differential_table", text == HEXAGON_DIFFERENTIALS, json!({ "table": text })));

    let m = StringModel::new(hex, field)?;
    let n = m.n();
    let mut table = vec![vec![[0usize; 4]; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for (t, d) in m.cat.hom_dims(&m.cat.simple(i), &m.cat.simple(j)) {
                if (0..4).contains(&t) {
                    cell[t as usize] = d;
                }
                o.dims.push(format!("hex:{i}:{j}:{t}:{d}"));
            }
        }
    }
    let expected = |i: usize, j: usize| -> [usize; 4] {
        if i == j {
            [1, 0, 0, 1]
        } else if j == (i + 1) % 3 {
            [0, 1, 0, 0]
        } else {
            [0, 0, 1, 0]
        }
    };
    let ok = (0..n).all(|i| (0..n).all(|j| table[i][j] == expected(i, j)));
    o.push(Check::new("hexagon_star/hom_dimension_table", ok, json!(table)));

    let mut bad = Vec::new();
    let mut checked = 0;
    for (name, t) in test_quiver_triangulations()? {
        let qp = quiver_of(&t);
        match build_cy3(&qp) {
            Ok(e) => {
                checked += 1;
                let h = e.hom_dim_table();
                let adj = qp.adjacency();
                let fits = (0..qp.n).all(|i| (0..qp.n).all(|j| h[i][j][1] == adj[i][j] && h[j][i][2] == adj[i][j]));
                if !fits {
                    bad.push(format!("{name}: ext quiver differs from Q"));
                }
            }
            Err(DmsError::Unsupported(_)) => {}
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    o.push(Check::new("e_associativity/all_test_quivers", bad.is_empty() && checked > 0, json!({ "quivers": checked, "failures": bad })));
    Ok(o)
}

// ---------------------------------------------------------------- fleets

struct FleetArc {
    surface: usize,
    word: BraidWord,
    start: usize,
    arc: ArcClass,
    /// `d² = 0` on the twisted module and on the rebuilt string.
    d2: bool,
    /// Summand census equals the crossing counts.
    census: bool,
    counts: Vec<usize>,
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, min_len: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(min_len..=max_len.max(min_len));
    BraidWord::new((0..len).map(|_| (rng.gen_range(1..=n), if rng.gen_bool(0.5) { 1 } else { -1 })).collect())
}

fn share(total: usize, parts: usize, i: usize) -> usize {
    total / parts + usize::from(i < total % parts)
}

fn fleet<F: Field>(cfg: &RunConfig, models: &[(String, StringModel<F>)]) -> Result<Vec<FleetArc>> {
    let per: Vec<Result<Vec<FleetArc>>> = models
        .par_iter()
        .enumerate()
        .map(|(si, (_, m))| {
            let mut rng = cfg.rng(100 + si as u64);
            let mut memo = TwistMemo::new();
            let mut out = Vec::new();
            for _ in 0..share(cfg.fleet, models.len(), si) {
                let word = random_word(&mut rng, m.n(), 1, cfg.max_word);
                let start = rng.gen_range(1..=m.n());
                let (y, acted) = m.braid_act_module(&word, &m.s(start), &mut memo)?;
                let rebuilt = m.module(&acted.arc);
                let d2 = m.cat.validate(&y).is_ok() && m.cat.validate(&rebuilt).is_ok();
                let (counts, _) = int_with_base(&m.base, &acted.arc);
                let census = y.vertex_counts(m.n()) == counts && rebuilt.vertex_counts(m.n()) == counts;
                out.push(FleetArc { surface: si, word, start, arc: acted.arc, d2, census, counts });
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in per {
        all.extend(p?);
    }
    Ok(all)
}

const ETA_1: &str = "1 (0:0/2/-) 2";
const ETA_2: &str = "3 (2:0/0/ccw) 3 (0:1/0/w) 1";

fn example_cones<F: Field>(m: &StringModel<F>) -> Result<(DGModule<F::Elem>, DGModule<F::Elem>)> {
    let c = &m.cat;
    let unique = |x: &DGModule<F::Elem>, y: &DGModule<F::Elem>| -> Result<DGModule<F::Elem>> {
        let basis = c.cohomology_basis(x, y);
        match basis.get(&0).map(|v| v.as_slice()) {
            Some([f]) => c.cone(x, y, f),
            _ => Err(DmsError::Identity("expected a unique degree-0 map".into())),
        }
    };
    let eta1 = unique(&c.simple(0), &c.shift(&c.simple(1), 1))?;
    let x = unique(&c.shift(&c.simple(0), -2), &c.simple(2))?;
    let eta2 = unique(&x, &c.shift(&c.simple(2), 3))?;
    Ok((eta1, eta2))
}

fn strings_suite<F: Field>(cfg: &RunConfig, models: &[(String, StringModel<F>)], field: F) -> Result<Outcome> {
    let mut o = Outcome::default();
    let hex = StringModel::new(parse_surface("hexagon-star")?, field)?;
    let (c1, c2) = example_cones(&hex)?;
    for (name, text, cone) in [("eta_1", ETA_1, &c1), ("eta_2", ETA_2, &c2)] {
        let c = Check::guard(format!("example/{name}"), || {
            let w = parse_word(&hex.base, text)?;
            let iso = hex.cat.iso_up_to_shift(&hex.module(&w), cone)?.is_some();
            let decoded = hex.decode_string(cone)?.arc;
            o.dims.push(format!("{name}:{}", cone.len()));
            Ok((iso && decoded == w, json!({ "word": text, "summands": cone.len(), "decoded": decoded.to_text(&hex.base) })))
        })?;
        o.push(c);
    }
    let arcs = match fleet(cfg, models) {
        Ok(a) => a,
        Err(e @ DmsError::Input(_)) => return Err(e),
        Err(e) => {
            o.push(Check::new("fleet/generated", false, json!({ "error": e.to_string() })));
            return Ok(o);
        }
    };
    for a in &arcs {
        o.dims.push(format!("{}:{}:{}:{:?}", a.surface, a.word, a.start, a.counts));
    }
    let per_surface: BTreeMap<&str, usize> =
        models.iter().enumerate().map(|(i, (s, _))| (s.as_str(), arcs.iter().filter(|a| a.surface == i).count())).collect();
    let distinct: BTreeSet<(usize, &ArcClass)> = arcs.iter().map(|a| (a.surface, &a.arc)).collect();
    let longest = arcs.iter().map(|a| a.arc.len()).max().unwrap_or(0);
    o.push(Check::new(
        "fleet/generated",
        arcs.len() == cfg.fleet,
        json!({ "arcs": arcs.len(), "distinct": distinct.len(), "longest": longest, "per_surface": per_surface }),
    ));
    let bad_d2: Vec<String> = arcs.iter().filter(|a| !a.d2).map(|a| describe(models, a)).collect();
    o.push(Check::new("fleet/d_squared_zero", bad_d2.is_empty(), json!({ "failures": bad_d2 })));
    let bad_census: Vec<String> = arcs.iter().filter(|a| !a.census).map(|a| describe(models, a)).collect();
    o.push(Check::new("fleet/census_equals_crossings", bad_census.is_empty(), json!({ "failures": bad_census })));
    Ok(o)
}

fn describe<F: Field>(models: &[(String, StringModel<F>)], a: &FleetArc) -> String {
    format!("{}: {} on s{}", models[a.surface].0, a.word, a.start)
}

// ---------------------------------------------------------------- pairs

/// Two arcs of a dual system, moved by a common braid. Dual arcs meet only
/// at shared endpoints, which a braid preserves.
#[derive(Clone, Debug)]
struct Pair {
    surface: usize,
    psi: BraidWord,
    a: ArcClass,
    b: ArcClass,
    shared: usize,
}

fn engineered_pairs<F: Field>(
    cfg: &RunConfig,
    models: &[(String, StringModel<F>)],
    kind: usize,
    count: usize,
    stream: u64,
) -> Result<Vec<Pair>> {
    let mut pool: Vec<(usize, ArcClass, ArcClass)> = Vec::new();
    for (si, (_, m)) in models.iter().enumerate() {
        let mut seen = BTreeSet::new();
        let mut collect = |duals: &[ArcClass]| {
            for i in 0..duals.len() {
                for j in i + 1..duals.len() {
                    let (a, b) = (duals[i].clone(), duals[j].clone());
                    if shared_endpoints(&m.base, &a, &b).len() == kind && seen.insert((a.clone(), b.clone())) {
                        pool.push((si, a, b));
                    }
                }
            }
        };
        collect(&m.initial_node().duals);
        m.random_walk_with(40, cfg.seed ^ (stream + si as u64), cfg.walk_int_cap, &mut |node| collect(&node.duals))?;
    }
    if pool.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = cfg.rng(stream);
    let mut memo: Vec<TwistMemo> = models.iter().map(|_| TwistMemo::new()).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (si, a, b) = pool[rng.gen_range(0..pool.len())].clone();
        let m = &models[si].1;
        let psi = random_word(&mut rng, m.n(), 0, 2);
        let a = m.braid_act_with(&psi, &a, &mut memo[si])?.arc;
        let b = m.braid_act_with(&psi, &b, &mut memo[si])?.arc;
        out.push(Pair { surface: si, psi, a, b, shared: kind });
    }
    Ok(out)
}

fn spherical<F: Field>(cfg: &RunConfig, models: &[(String, StringModel<F>)]) -> Result<Outcome> {
    let mut o = Outcome::default();
    let arcs = fleet(cfg, models)?;
    let distinct: BTreeSet<(usize, ArcClass)> = arcs.iter().map(|a| (a.surface, a.arc.clone())).collect();
    let mut not_spherical = Vec::new();
    for (si, arc) in &distinct {
        let m = &models[*si].1;
        let x = m.module(arc);
        let dims = m.cat.hom_dims(&x, &x);
        o.dims.push(format!("sph:{si}:{}:{dims:?}", arc.to_text(&m.base)));
        if !m.cat.is_spherical(&x) {
            not_spherical.push(format!("{}: {}", models[*si].0, arc.to_text(&m.base)));
        }
    }
    o.push(Check::new(
        "fleet/is_spherical",
        not_spherical.is_empty(),
        json!({ "arcs": distinct.len(), "failures": not_spherical }),
    ));

    for (kind, want, label) in [(0usize, 0i64, "disjoint_pairs_int_0"), (1, 1, "shared_endpoint_pairs_int_half")] {
        let c = Check::guard(format!("pairs/{label}"), || {
            let pairs = engineered_pairs(cfg, models, kind, cfg.pairs, 200 + kind as u64)?;
            let mut bad = Vec::new();
            for p in &pairs {
                let m = &models[p.surface].1;
                let got = m.int_categorical(&p.a, &p.b);
                o.dims.push(format!("int:{}:{}:{}", p.surface, p.psi, got));
                let endpoints_kept = shared_endpoints(&m.base, &p.a, &p.b).len() == p.shared;
                if got.halves() != want || !endpoints_kept || !m.cat.is_spherical(&m.module(&p.a)) {
                    bad.push(format!(
                        "{}: {} / {} gives {got}",
                        models[p.surface].0,
                        p.a.to_text(&m.base),
                        p.b.to_text(&m.base)
                    ));
                }
            }
            Ok((pairs.len() == cfg.pairs && bad.is_empty(), json!({ "pairs": pairs.len(), "failures": bad })))
        })?;
        o.push(c);
    }

    let c = Check::guard("twist_triangle/decompositions", || {
        let mut long: Vec<&FleetArc> = Vec::new();
        let mut seen = BTreeSet::new();
        for a in &arcs {
            if a.arc.len() >= 2 && seen.insert((a.surface, a.arc.clone())) {
                long.push(a);
            }
        }
        long.truncate(cfg.decompositions);
        let mut bad = Vec::new();
        for a in &long {
            let m = &models[a.surface].1;
            let (alpha, beta, _) = m.decompose(&a.arc)?;
            let twisted = m.cat.spherical_twist(&m.module(&alpha), &m.module(&beta), 1)?;
            let iso = m.cat.iso_up_to_shift(&m.module(&a.arc), &twisted)?.is_some();
            let word = twist_adjacent(&m.base, &alpha, &beta, 1)? == a.arc;
            o.dims.push(format!("dcp:{}:{}", a.surface, twisted.len()));
            if !iso || !word {
                bad.push(format!("{}: {} (module {iso}, word {word})", models[a.surface].0, a.arc.to_text(&m.base)));
            }
        }
        Ok((long.len() == cfg.decompositions && bad.is_empty(), json!({ "decompositions": long.len(), "failures": bad })))
    })?;
    o.push(c);
    Ok(o)
}

fn con0<F: Field>(cfg: &RunConfig, models: &[(String, StringModel<F>)]) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut ledger = Vec::new();
    let mut ok = true;
    for kind in 0..=2usize {
        let pairs = engineered_pairs(cfg, models, kind, share(cfg.samples, 3, kind), 300 + kind as u64)?;
        for p in pairs {
            let m = &models[p.surface].1;
            let int = int_delta(&m.base, &p.a, &p.b);
            let hom = m.cat.hom_total(&m.module(&p.a), &m.module(&p.b));
            let pass = hom as i64 == int.halves();
            ok &= pass;
            ledger.push(json!({
                "surface": models[p.surface].0,
                "psi": p.psi.to_string(),
                "a": p.a.to_text(&m.base),
                "b": p.b.to_text(&m.base),
                "int": int.to_string(),
                "hom_total": hom,
                "pass": pass,
            }));
        }
    }
    o.push(Check::new("hom_total_is_twice_intersection", ok && !ledger.is_empty(), json!({ "samples": ledger })));
    Ok(o)
}

// ---------------------------------------------------------------- relations

fn relations<F: Field>(cfg: &RunConfig, models: &[(String, StringModel<F>)]) -> Result<Outcome> {
    let mut o = Outcome::default();
    let per: Vec<Result<Vec<Check>>> = models
        .par_iter()
        .enumerate()
        .map(|(si, (name, m))| {
            let mut rng = cfg.rng(400 + si as u64);
            let mut memo = TwistMemo::new();
            let mut extra = Vec::new();
            for _ in 0..cfg.probes {
                let w = random_word(&mut rng, m.n(), 1, 3);
                let s = rng.gen_range(1..=m.n());
                extra.push(m.braid_act_with(&w, &m.s(s), &mut memo)?.arc);
            }
            let probes = m.probe_modules(&extra);
            let mut checks = Vec::new();
            let mut failed = Vec::new();
            let rels = relators_with(&m.quiver, true)?;
            for r in &rels {
                if let Err(i) = m.cat.action_equal_modules(&r.lhs, &r.rhs, &probes)? {
                    failed.push(json!({ "relator": r.id(), "witness_probe": i }));
                }
            }
            checks.push(Check::new(
                format!("{name}/relators"),
                failed.is_empty(),
                json!({ "relators": rels.iter().map(|r| r.id()).collect::<Vec<_>>(), "probes": probes.len(), "failures": failed }),
            ));
            let n = m.n();
            let mut bad = Vec::new();
            for g in 1..=n {
                if m.cat.action_equal_modules(&BraidWord::gen(g, 1), &BraidWord::identity(), &probes)?.is_ok() {
                    bad.push(format!("b{g} acts trivially"));
                }
                for h in g + 1..=n {
                    if m.cat.action_equal_modules(&BraidWord::gen(g, 1), &BraidWord::gen(h, 1), &probes)?.is_ok() {
                        bad.push(format!("b{g} and b{h} act alike"));
                    }
                }
            }
            checks.push(Check::new(format!("{name}/generators_distinct_nontrivial"), bad.is_empty(), json!({ "failures": bad })));
            Ok(checks)
        })
        .collect();
    for p in per {
        for c in p? {
            o.push(c);
        }
    }

    let c = Check::guard("conjugation_identity", || {
        let mut rng = cfg.rng(450);
        let mut bad = Vec::new();
        for k in 0..cfg.triples {
            let si = k % models.len();
            let m = &models[si].1;
            let psi = random_word(&mut rng, m.n(), 1, 3);
            let s = rng.gen_range(1..=m.n());
            let w = random_word(&mut rng, m.n(), 0, 2);
            let x0 = rng.gen_range(1..=m.n());
            let eps: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let x = m.cat.act(&w, &m.module(&m.s(x0)))?;
            let ps = m.cat.act(&psi, &m.module(&m.s(s)))?;
            let lhs = m.cat.spherical_twist(&ps, &x, eps)?;
            let inner = m.cat.act(&psi.inverse(), &x)?;
            let rhs = m.cat.act(&psi, &m.cat.spherical_twist(&m.module(&m.s(s)), &inner, eps)?)?;
            if m.cat.iso_up_to_shift(&lhs, &rhs)?.is_none() {
                bad.push(format!("{}: psi {psi}, S_{s}, X = {w} on s{x0}", models[si].0));
            }
        }
        Ok((bad.is_empty(), json!({ "triples": cfg.triples, "failures": bad })))
    })?;
    o.push(c);
    Ok(o)
}

// ---------------------------------------------------------------- tilting

fn tilting<F: Field>(cfg: &RunConfig, field: F) -> Result<Outcome> {
    use FlipDirection::{Backward, Forward};
    let mut o = Outcome::default();
    let model = |s: &str| -> Result<StringModel<F>> { StringModel::new(parse_surface(s)?, field.clone()) };

    for (name, spec, want) in [("a1", "square", vec![1]), ("a2", "pentagon-fan", vec![2, 3])] {
        let m = model(spec)?;
        let c = Check::guard(format!("green/{name}"), || {
            let g = m.cat.green_sequences(cfg.green_max_len, cfg.cap)?;
            let mut lengths = g.lengths();
            lengths.sort_unstable();
            o.dims.push(format!("green:{name}:{lengths:?}"));
            Ok((lengths == want && !g.truncated, json!({ "sequences": g.sequences, "truncated": g.truncated })))
        })?;
        o.push(c);
        let c = Check::guard(format!("green/{name}/replay_to_h0_shift_1"), || {
            let g = m.cat.green_sequences(cfg.green_max_len, cfg.cap)?;
            let h0 = m.cat.canonical_heart();
            let n0 = m.initial_node();
            let mut bad = Vec::new();
            for seq in &g.sequences {
                let mut h = h0.clone();
                for &j in seq {
                    h = m.cat.tilt(&h, j, Forward)?;
                }
                let shifts: Vec<i64> =
                    (-1..=3).filter(|&k| m.cat.heart_iso(&h, &m.cat.shift_heart(&h0, k)).ok().flatten().is_some()).collect();
                let node = m.replay(&n0, &seq.iter().map(|&j| (j, Forward)).collect::<Vec<_>>())?;
                let synced = m.cat.heart_iso(&node.heart, &h)?.is_some();
                if shifts != [1] || !synced {
                    bad.push(json!({ "sequence": seq, "iso_shifts": shifts }));
                }
            }
            Ok((bad.is_empty() && !g.sequences.is_empty(), json!({ "failures": bad })))
        })?;
        o.push(c);
    }

    let pent = model("pentagon-fan")?;
    let c = Check::guard("sync_flip/pentagon", || {
        let n0 = pent.initial_node();
        let a = pent.replay(&n0, &[(1, Forward), (2, Forward)])?;
        let b = pent.replay(&n0, &[(2, Forward), (1, Forward), (2, Forward)])?;
        let back = pent.replay(&a, &[(2, Backward), (1, Backward)])?;
        Ok((pent.node_equal(&a, &b)? && pent.node_equal(&back, &n0)?, Value::Null))
    })?;
    o.push(c);

    let mut square_specs: Vec<String> = vec!["hexagon-fan".into(), "disk(7)-snake".into()];
    square_specs.extend(cfg.surface_specs());
    for spec in &square_specs {
        let m = model(spec)?;
        let adj = m.quiver.adjacency();
        let pairs: Vec<(usize, usize)> = (1..=m.n())
            .flat_map(|i| (i + 1..=m.n()).map(move |j| (i, j)))
            .filter(|&(i, j)| adj[i - 1][j - 1] == 0 && adj[j - 1][i - 1] == 0)
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let c = Check::guard(format!("sync_flip/square/{spec}"), || {
            let n0 = m.initial_node();
            let mut bad = Vec::new();
            for &(i, j) in &pairs {
                for d in [Forward, Backward] {
                    let x = m.replay(&n0, &[(i, d), (j, d)])?;
                    let y = m.replay(&n0, &[(j, d), (i, d)])?;
                    if !m.node_equal(&x, &y)? {
                        bad.push(format!("{i},{j} {d:?}"));
                    }
                }
            }
            Ok((bad.is_empty(), json!({ "pairs": pairs, "failures": bad })))
        })?;
        o.push(c);
    }

    let specs = cfg.surface_specs();
    let walks: Vec<Result<Check>> = specs
        .par_iter()
        .enumerate()
        .map(|(si, spec)| {
            let m = model(spec)?;
            Check::guard(format!("sync_flip/walk/{spec}"), || {
                let r = m.random_walk(cfg.walk_steps, cfg.seed.wrapping_add(500 + si as u64), cfg.walk_int_cap)?;
                Ok((r.steps == cfg.walk_steps, serde_json::to_value(&r).unwrap_or(Value::Null)))
            })
        })
        .collect();
    for w in walks {
        o.push(w?);
    }
    Ok(o)
}
