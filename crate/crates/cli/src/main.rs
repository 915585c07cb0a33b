use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dms_core::algebra::{build_cy3, ginzburg_export};
use dms_core::field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
use dms_core::quiver::quiver_of;
use dms_core::strings::{int_delta, int_with_base, parse_word, word_from_json, CrossingWord, StringModel};
use dms_core::surface::{enumerate_triangulations, surface_invariants, Triangulation};
use dms_core::twists::BraidWord;
use dms_core::verify::{self, FieldMode, RunConfig, Suite};
use dms_core::DmsError;

#[derive(Parser)]
#[command(name = "dms", version, about = "Decorated marked surfaces and their CY3 categories")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// prime, rational or both
    #[arg(long, global = true, default_value = "prime")]
    field: String,
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write a DOT graph to this path.
    #[arg(long, global = true, value_name = "OUT")]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants, standard triangulation and quiver of a surface.
    Surface { surface: String },
    /// Build the string module of a crossing word.
    String { surface: String, word: String },
    /// Hom dimensions between two string modules.
    Hom { surface: String, word1: String, word2: String },
    /// Act on an arc by a braid word such as "b1 b2' b3".
    Twist { surface: String, braid: String, word: String },
    /// Exchange graph of hearts around the canonical heart.
    Eg {
        surface: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 1000)]
        cap: usize,
        #[arg(long)]
        forward_only: bool,
    },
    /// Maximal green sequences from the canonical heart.
    Green {
        surface: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Run a verification suite.
    Verify {
        /// counting, ginzburg, strings (d2), spherical, relations, tilting,
        /// fields, con0 or all
        suite: String,
        /// Restrict randomized suites to these surfaces.
        #[arg(long)]
        surface: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        fleet: Option<usize>,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        walk_steps: Option<usize>,
        #[arg(long)]
        max_word: Option<usize>,
    },
}

/// A command outcome: the report and whether every asserted identity held.
struct Output {
    value: Value,
    text: String,
    pass: bool,
    dot: Option<String>,
}

fn exit_code(e: &DmsError) -> u8 {
    match e {
        DmsError::Identity(_) | DmsError::NotAString(_) | DmsError::NotSpherical => 1,
        _ => 2,
    }
}

fn read_word(t: &Triangulation, s: &str) -> dms_core::Result<CrossingWord> {
    if s.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| DmsError::Input(format!("word json: {e}")))?;
        word_from_json(t, &v)
    } else {
        parse_word(t, s)
    }
}

fn read_braid(s: &str) -> dms_core::Result<BraidWord> {
    if s.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| DmsError::Input(format!("braid json: {e}")))?;
        BraidWord::from_json(&v)
    } else {
        s.parse()
    }
}

fn cmd_surface(spec: &str) -> dms_core::Result<Output> {
    let t = verify::parse_surface(spec)?;
    let (n, aleph) = surface_invariants(t.surface())?;
    let qp = quiver_of(&t);
    let mut value = json!({
        "surface": spec,
        "n": n,
        "aleph": aleph,
        "triangles": t.triangles(),
        "arrows": qp.arrows.iter().map(|a| json!({"name": a.name, "source": a.source, "target": a.target})).collect::<Vec<_>>(),
        "potential": qp.potential_string(),
    });
    let mut text = format!("{spec}: n = {n}, aleph = {aleph}\npotential: {}\n", qp.potential_string());
    if t.surface().is_disk() {
        let count = enumerate_triangulations(t.surface(), 100_000)?.len();
        value["triangulations"] = json!(count);
        text.push_str(&format!("triangulations: {count}\n"));
    }
    if build_cy3(&qp).is_ok() {
        let g = ginzburg_export(&qp).to_text();
        text.push_str(&g);
        value["ginzburg"] = json!(g);
    }
    value["dims"] = json!({ "n": n, "aleph": aleph });
    Ok(Output { value, text, pass: true, dot: Some(qp.to_dot()) })
}

fn hom_table<F: Field>(m: &StringModel<F>, x: &dms_core::dgmod::DGModule<F::Elem>) -> Vec<Value> {
    (0..m.n())
        .map(|i| {
            let d = m.cat.hom_dims(&m.cat.simple(i), x);
            json!({ "simple": i + 1, "dims": d.into_iter().map(|(t, k)| (t.to_string(), json!(k))).collect::<serde_json::Map<_, _>>() })
        })
        .collect()
}

fn cmd_string<F: Field>(spec: &str, word: &str, field: F) -> dms_core::Result<Output> {
    let m = StringModel::new(verify::parse_surface(spec)?, field)?;
    let w = read_word(&m.base, word)?;
    let x = m.build_string(&w, 0)?;
    let (counts, total) = int_with_base(&m.base, &w);
    let table = hom_table(&m, &x);
    let spherical = m.cat.is_spherical(&x);
    let text = format!(
        "word: {}\nendpoints: {:?}\ncrossings: {total}\n{}spherical: {spherical}\n",
        w.to_text(&m.base),
        w.endpoints(&m.base),
        m.cat.render(&x)
    );
    let value = json!({
        "field": m.cat.field.name(),
        "word": w.to_json(&m.base),
        "module": m.cat.to_json(&x),
        "spherical": spherical,
        "dims": { "census": counts, "hom_from_simples": table },
    });
    Ok(Output { value, text, pass: true, dot: None })
}

fn cmd_hom<F: Field>(spec: &str, a: &str, b: &str, field: F) -> dms_core::Result<Output> {
    let m = StringModel::new(verify::parse_surface(spec)?, field)?;
    let (wa, wb) = (read_word(&m.base, a)?, read_word(&m.base, b)?);
    let (x, y) = (m.module(&wa), m.module(&wb));
    let dims = m.cat.hom_dims(&x, &y);
    let total = m.cat.hom_total(&x, &y);
    let int = m.int_categorical(&wa, &wb);
    let endpoint_int = int_delta(&m.base, &wa, &wb);
    let mut text = String::new();
    for (t, d) in &dims {
        text.push_str(&format!("Hom^{t} = {d}\n"));
    }
    text.push_str(&format!("total = {total}\nInt (categorical) = {int}\nendpoint part = {endpoint_int}\n"));
    let value = json!({
        "field": m.cat.field.name(),
        "dims": {
            "hom": dims.iter().map(|(t, k)| (t.to_string(), json!(k))).collect::<serde_json::Map<_, _>>(),
            "total": total,
        },
        "int_categorical": int.to_string(),
        "int_endpoints": endpoint_int.to_string(),
    });
    Ok(Output { value, text, pass: true, dot: None })
}

fn cmd_twist<F: Field>(spec: &str, braid: &str, word: &str, field: F) -> dms_core::Result<Output> {
    let m = StringModel::new(verify::parse_surface(spec)?, field)?;
    let b = read_braid(braid)?;
    b.check_range(m.n())?;
    let w = read_word(&m.base, word)?.canonical(&m.base);
    let r = m.braid_act(&b, &w)?;
    let text = format!("{b} ({}) = {} shift {}\n", w.to_text(&m.base), r.arc.to_text(&m.base), r.shift);
    let value = json!({
        "field": m.cat.field.name(),
        "braid": b.to_json(),
        "input": w.to_json(&m.base),
        "arc": r.arc.to_json(&m.base),
        "shift": r.shift,
        "dims": { "census": int_with_base(&m.base, &r.arc).0, "shift": r.shift },
    });
    Ok(Output { value, text, pass: true, dot: None })
}

fn cmd_eg<F: Field>(spec: &str, radius: usize, cap: usize, forward_only: bool, field: F) -> dms_core::Result<Output> {
    let m = StringModel::new(verify::parse_surface(spec)?, field)?;
    let (g, _) = m.cat.exchange_graph(&m.cat.canonical_heart(), radius, cap, forward_only)?;
    let text = format!("{} hearts, {} edges within radius {radius}\n", g.len(), g.edges.len());
    let value = json!({
        "field": m.cat.field.name(),
        "radius": radius,
        "graph": g,
        "dims": { "hearts": g.len(), "edges": g.edges.len() },
    });
    Ok(Output { value, text, pass: true, dot: Some(g.to_dot()) })
}

fn cmd_green<F: Field>(spec: &str, max_len: usize, cap: usize, field: F) -> dms_core::Result<Output> {
    let m = StringModel::new(verify::parse_surface(spec)?, field)?;
    let g = m.cat.green_sequences(max_len, cap)?;
    let mut text = String::new();
    for s in &g.sequences {
        text.push_str(&s.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" "));
        text.push('\n');
    }
    text.push_str(&format!("{} sequences, lengths {:?}{}\n", g.sequences.len(), g.lengths(), if g.truncated { " (truncated)" } else { "" }));
    let dot = m.cat.interval_graph(cap).ok().map(|(eg, _)| eg.to_dot());
    let value = json!({
        "field": m.cat.field.name(),
        "sequences": g.sequences,
        "truncated": g.truncated,
        "dims": { "lengths": g.lengths() },
    });
    Ok(Output { value, text, pass: true, dot })
}

/// Runs `f` in the requested field, or in both and compares dimensions.
fn in_fields(
    g: &Global,
    prime: impl Fn(PrimeField) -> dms_core::Result<Output>,
    rational: impl Fn(Rationals) -> dms_core::Result<Output>,
) -> dms_core::Result<Output> {
    match g.field.parse::<FieldMode>()? {
        FieldMode::Prime => prime(PrimeField::new(g.prime)?),
        FieldMode::Rational => rational(Rationals),
        FieldMode::Both => {
            let p = prime(PrimeField::new(g.prime)?)?;
            let q = rational(Rationals)?;
            let agree = p.value["dims"] == q.value["dims"];
            let value = json!({ "prime": p.value, "rational": q.value, "fields_agree": agree });
            let text = format!("{}fields agree: {agree}\n", p.text);
            Ok(Output { value, text, pass: agree && p.pass && q.pass, dot: p.dot })
        }
    }
}

fn run(cli: &Cli) -> dms_core::Result<Output> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Surface { surface } => cmd_surface(surface),
        Cmd::String { surface, word } => in_fields(g, |f| cmd_string(surface, word, f), |f| cmd_string(surface, word, f)),
        Cmd::Hom { surface, word1, word2 } => {
            in_fields(g, |f| cmd_hom(surface, word1, word2, f), |f| cmd_hom(surface, word1, word2, f))
        }
        Cmd::Twist { surface, braid, word } => {
            in_fields(g, |f| cmd_twist(surface, braid, word, f), |f| cmd_twist(surface, braid, word, f))
        }
        Cmd::Eg { surface, radius, cap, forward_only } => in_fields(
            g,
            |f| cmd_eg(surface, *radius, *cap, *forward_only, f),
            |f| cmd_eg(surface, *radius, *cap, *forward_only, f),
        ),
        Cmd::Green { surface, max_len, cap } => {
            in_fields(g, |f| cmd_green(surface, *max_len, *cap, f), |f| cmd_green(surface, *max_len, *cap, f))
        }
        Cmd::Verify { suite, surface, samples, fleet, pairs, walk_steps, max_word } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = RunConfig { field: g.field.parse()?, prime: g.prime, seed: g.seed, ..RunConfig::default() };
            cfg.surfaces = surface.clone();
            if let Some(v) = samples {
                cfg.samples = *v;
            }
            if let Some(v) = fleet {
                cfg.fleet = *v;
            }
            if let Some(v) = pairs {
                cfg.pairs = *v;
            }
            if let Some(v) = walk_steps {
                cfg.walk_steps = *v;
            }
            if let Some(v) = max_word {
                cfg.max_word = *v;
            }
            let r = verify::run(suite, &cfg)?;
            let value = serde_json::to_value(&r).expect("report serializes");
            Ok(Output { value, text: format!("{r}\n"), pass: r.pass, dot: None })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&out.value).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if let Some(path) = &cli.global.dot {
                match &out.dot {
                    Some(d) => {
                        if let Err(e) = fs::write(path, d) {
                            eprintln!("dms: cannot write {}: {e}", path.display());
                            return ExitCode::from(2);
                        }
                    }
                    None => eprintln!("dms: this command has no graph to export"),
                }
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("dms: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
