//! Closed arcs as crossing words over the base triangulation, and their
//! string modules.
//!
//! A word is the slot through which the arc leaves its start triangle plus
//! one turn per traversed triangle. A turn `r` exits through side
//! `entry + r (mod 3)`; its sign is the sense of rotation about the
//! triangle's decoration (positive is counterclockwise) and `|r|` is the
//! degree of the induced arrow. `|r| = 3` means leaving through the entry
//! side after circling the decoration.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dgmod::{DGModule, DgCat, Summand};
use crate::error::{DmsError, Result};
use crate::field::Field;
use crate::quiver::{quiver_of, QuiverWithPotential};
use crate::surface::{Slot, Triangulation};
use crate::algebra::build_cy3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingWord {
    /// Slot of the first crossed arc, in the start triangle.
    pub start: Slot,
    /// One entry per traversed triangle, each in `{±1, ±2, ±3}`.
    pub turns: Vec<i8>,
}

/// Canonical representative of an arc: the smaller of a word and its reversal.
pub type ArcClass = CrossingWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub triangle: usize,
    pub enter: usize,
    pub exit: usize,
    pub turn: i8,
}

impl Corner {
    pub fn wraps_decoration(&self) -> bool {
        self.turn.abs() >= 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    /// Arc labels `j_1..j_m`.
    pub crossings: Vec<usize>,
    pub corners: Vec<Corner>,
    pub start_triangle: usize,
    pub end_triangle: usize,
    /// Slot of the last crossed arc, in the end triangle.
    pub end_slot: Slot,
}

/// Half-integers, stored as twice their value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_halves(h: i64) -> Self {
        HalfInt(h)
    }
    pub fn halves(&self) -> i64 {
        self.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn wrap_token(c: &Corner) -> &'static str {
    match c.turn {
        3 => "ccw",
        -3 => "cw",
        1 | -1 => "-",
        _ => "w",
    }
}

fn turn_from_sides(enter: usize, exit: usize, wrap: &str) -> Result<i8> {
    let bad = || DmsError::Input(format!("corner {enter}/{exit}/{wrap} is not a valid traversal"));
    if enter > 2 || exit > 2 {
        return Err(bad());
    }
    let diff = (exit + 3 - enter) % 3;
    Ok(match (diff, wrap) {
        (0, "-") => 0,
        (0, "ccw") => 3,
        (0, "cw") => -3,
        (1, "-") => 1,
        (1, "w") => -2,
        (2, "-") => -1,
        (2, "w") => 2,
        _ => return Err(bad()),
    })
}

/// Traces a word. Turns of 0 are allowed here (unreduced input).
pub fn walk(t: &Triangulation, start: Slot, turns: &[i8]) -> Result<Walk> {
    let first = t
        .side(start)
        .arc()
        .ok_or_else(|| DmsError::Input("start slot is a boundary edge".into()))?;
    let mut crossings = vec![first];
    let mut corners = Vec::with_capacity(turns.len());
    let mut cur = t.partner(start).unwrap();
    for (i, &r) in turns.iter().enumerate() {
        if r.abs() > 3 {
            return Err(DmsError::NotSimple(format!("turn {r} at position {i} circles a decoration twice")));
        }
        let exit = (cur.side as i64 + r as i64).rem_euclid(3) as usize;
        let slot = Slot { tri: cur.tri, side: exit };
        let label = t.side(slot).arc().ok_or_else(|| {
            DmsError::Input(format!("turn {r} at position {i} leaves through a boundary edge"))
        })?;
        corners.push(Corner { triangle: cur.tri, enter: cur.side, exit, turn: r });
        crossings.push(label);
        cur = t.partner(slot).unwrap();
    }
    Ok(Walk { crossings, corners, start_triangle: start.tri, end_triangle: cur.tri, end_slot: cur })
}

impl CrossingWord {
    pub fn new(t: &Triangulation, start: Slot, turns: Vec<i8>) -> Result<Self> {
        if let Some(p) = turns.iter().position(|&r| r == 0) {
            return Err(DmsError::NotReduced { position: p });
        }
        walk(t, start, &turns)?;
        Ok(CrossingWord { start, turns })
    }

    /// The dual arc of arc `label`: a single crossing.
    pub fn single(t: &Triangulation, label: usize) -> Self {
        CrossingWord { start: t.arc_slots(label)[0], turns: Vec::new() }.canonical(t)
    }

    pub fn len(&self) -> usize {
        self.turns.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn walk(&self, t: &Triangulation) -> Walk {
        walk(t, self.start, &self.turns).expect("word was validated")
    }

    pub fn reversed(&self, t: &Triangulation) -> Self {
        let w = self.walk(t);
        CrossingWord { start: w.end_slot, turns: self.turns.iter().rev().map(|r| -r).collect() }
    }

    pub fn canonical(&self, t: &Triangulation) -> Self {
        let r = self.reversed(t);
        if r < *self {
            r
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self, t: &Triangulation) -> bool {
        self.canonical(t) == *self
    }

    /// Decorations at the two ends.
    pub fn endpoints(&self, t: &Triangulation) -> (usize, usize) {
        let w = self.walk(t);
        (t.decoration(w.start_triangle), t.decoration(w.end_triangle))
    }

    pub fn is_l_arc(&self, t: &Triangulation) -> bool {
        let (a, b) = self.endpoints(t);
        a == b
    }

    pub fn to_text(&self, t: &Triangulation) -> String {
        let w = self.walk(t);
        let mut s = w.crossings[0].to_string();
        for (c, j) in w.corners.iter().zip(&w.crossings[1..]) {
            s.push_str(&format!(" ({}:{}/{}/{}) {}", c.triangle, c.enter, c.exit, wrap_token(c), j));
        }
        s
    }

    pub fn to_json(&self, t: &Triangulation) -> serde_json::Value {
        let w = self.walk(t);
        let (z, z2) = self.endpoints(t);
        serde_json::json!({
            "crossings": w.crossings,
            "corners": w.corners.iter().map(|c| serde_json::json!({
                "triangle": c.triangle,
                "enter": c.enter,
                "exit": c.exit,
                "wraps_decoration": c.wraps_decoration(),
                "wrap": wrap_token(c),
            })).collect::<Vec<_>>(),
            "endpoints": [z, z2],
            "start": {"tri": self.start.tri, "side": self.start.side},
            "turns": self.turns,
        })
    }
}

/// Parses `j1 (t:enter/exit/wrap) j2 ...` into a raw start slot and
/// turns. Turns may be 0 (digons); see [`reduce`] and [`CrossingWord::new`].
pub fn parse_raw(t: &Triangulation, text: &str) -> Result<(Slot, Vec<i8>)> {
    let spaced = text.replace('(', " (").replace(')', ") ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    let bad = |m: String| DmsError::Input(format!("word '{text}': {m}"));
    if tokens.is_empty() || tokens.len().is_multiple_of(2) {
        return Err(bad("expected labels separated by corner records".into()));
    }
    let label = |s: &str| -> Result<usize> {
        let l: usize = s.trim_start_matches('[').trim_end_matches(']').parse().map_err(|_| bad(format!("bad label '{s}'")))?;
        if l == 0 || l > t.arc_count() {
            return Err(bad(format!("label {l} out of range")));
        }
        Ok(l)
    };
    let labels: Vec<usize> = tokens.iter().step_by(2).map(|s| label(s)).collect::<Result<_>>()?;
    let mut corners = Vec::new();
    for tok in tokens.iter().skip(1).step_by(2) {
        let inner = tok
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| bad(format!("bad corner '{tok}'")))?;
        let (tri, rest) = inner.split_once(':').ok_or_else(|| bad(format!("bad corner '{tok}'")))?;
        let parts: Vec<&str> = rest.split('/').collect();
        if parts.len() != 3 {
            return Err(bad(format!("bad corner '{tok}'")));
        }
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("bad number '{s}'")));
        let tri = num(tri)?;
        if tri >= t.triangles().len() {
            return Err(bad(format!("triangle {tri} out of range")));
        }
        corners.push((tri, num(parts[0])?, num(parts[1])?, parts[2].trim().to_string()));
    }
    if corners.is_empty() {
        return Ok((t.arc_slots(labels[0])[0], Vec::new()));
    }
    let (t1, e1, _, _) = &corners[0];
    let entry = Slot { tri: *t1, side: *e1 };
    if t.side(entry).arc() != Some(labels[0]) {
        return Err(bad(format!("side {e1} of triangle {t1} is not arc {}", labels[0])));
    }
    let start = t.partner(entry).unwrap();
    let mut turns = Vec::new();
    let mut cur = entry;
    for (i, (tri, enter, exit, wrap)) in corners.iter().enumerate() {
        if cur != (Slot { tri: *tri, side: *enter }) {
            return Err(bad(format!("corner {} does not continue the path", i + 1)));
        }
        let exit_slot = Slot { tri: *tri, side: *exit };
        if t.side(exit_slot).arc() != Some(labels[i + 1]) {
            return Err(bad(format!("side {exit} of triangle {tri} is not arc {}", labels[i + 1])));
        }
        turns.push(turn_from_sides(*enter, *exit, wrap)?);
        cur = t.partner(exit_slot).unwrap();
    }
    Ok((start, turns))
}

/// Parses and validates a reduced word in text form.
pub fn parse_word(t: &Triangulation, text: &str) -> Result<CrossingWord> {
    let (start, turns) = parse_raw(t, text)?;
    CrossingWord::new(t, start, turns)
}

/// Parses the JSON form: either `start` and `turns`, or `crossings` with
/// `corners` records.
pub fn word_from_json(t: &Triangulation, v: &serde_json::Value) -> Result<CrossingWord> {
    let bad = |m: &str| DmsError::Input(format!("word json: {m}"));
    if let (Some(st), Some(turns)) = (v.get("start"), v.get("turns")) {
        let slot = Slot {
            tri: st["tri"].as_u64().ok_or_else(|| bad("start.tri"))? as usize,
            side: st["side"].as_u64().ok_or_else(|| bad("start.side"))? as usize,
        };
        if slot.tri >= t.triangles().len() || slot.side > 2 {
            return Err(bad("start slot out of range"));
        }
        let turns = turns
            .as_array()
            .ok_or_else(|| bad("turns"))?
            .iter()
            .map(|r| r.as_i64().map(|r| r as i8).ok_or_else(|| bad("turn")))
            .collect::<Result<Vec<_>>>()?;
        return CrossingWord::new(t, slot, turns);
    }
    let crossings = v["crossings"].as_array().ok_or_else(|| bad("crossings"))?;
    let corners = v["corners"].as_array().map(|a| a.as_slice()).unwrap_or(&[]);
    let mut text = String::new();
    for (i, c) in crossings.iter().enumerate() {
        if i > 0 {
            let k = &corners.get(i - 1).ok_or_else(|| bad("corners"))?;
            let wrap = match k.get("wrap").and_then(|w| w.as_str()) {
                Some(w) => w.to_string(),
                None => if k["wraps_decoration"].as_bool().unwrap_or(false) { "w" } else { "-" }.to_string(),
            };
            text.push_str(&format!(" ({}:{}/{}/{}) ", k["triangle"], k["enter"], k["exit"], wrap));
        }
        text.push_str(&c.to_string());
    }
    parse_word(t, &text)
}

/// Removes digons (zero turns) by merging the neighbouring turns.
/// Returns `None` when the arc contracts to its endpoint.
pub fn reduce(t: &Triangulation, start: Slot, turns: &[i8]) -> Result<Option<CrossingWord>> {
    walk(t, start, turns)?;
    let mut start_side = start.side;
    let mut stack: Vec<i8> = Vec::new();
    let mut queue: VecDeque<i8> = turns.iter().copied().collect();
    while let Some(r) = queue.pop_front() {
        if r != 0 {
            if r.abs() > 3 {
                return Err(DmsError::NotSimple(format!("merged turn {r} circles a decoration twice")));
            }
            stack.push(r);
            continue;
        }
        match (stack.pop(), queue.pop_front()) {
            (Some(p), Some(nx)) => queue.push_front(p + nx),
            (None, Some(nx)) => start_side = (start_side as i64 + nx as i64).rem_euclid(3) as usize,
            (Some(_), None) => {}
            (None, None) => return Ok(None),
        }
    }
    let start = Slot { tri: start.tri, side: start_side };
    Ok(Some(CrossingWord::new(t, start, stack)?))
}

/// One rewrite step: removes the digon at turn index `i`.
pub fn reduce_at(start: Slot, turns: &[i8], i: usize) -> (Option<Slot>, Vec<i8>) {
    debug_assert_eq!(turns[i], 0);
    let mut out = turns.to_vec();
    let mut start = Some(start);
    let has_prev = i > 0;
    let has_next = i + 1 < turns.len();
    match (has_prev, has_next) {
        (true, true) => {
            let merged = out[i - 1] + out[i + 1];
            out.splice(i - 1..i + 2, [merged]);
        }
        (false, true) => {
            let s = start.unwrap();
            start = Some(Slot { tri: s.tri, side: (s.side as i64 + out[1] as i64).rem_euclid(3) as usize });
            out.drain(0..2);
        }
        (true, false) => {
            out.drain(i - 1..);
        }
        (false, false) => return (None, Vec::new()),
    }
    (start, out)
}

/// `w` or its reversal, oriented to end at decoration `z`.
pub fn ending_at(t: &Triangulation, w: &CrossingWord, z: usize) -> Option<CrossingWord> {
    let (a, b) = w.endpoints(t);
    if b == z {
        Some(w.clone())
    } else if a == z {
        Some(w.reversed(t))
    } else {
        None
    }
}

/// Position of a strand with turn `r` across its entry side, left to right
/// when facing into the triangle.
fn turn_rank(r: i8) -> i8 {
    match r {
        -1 => 0,
        -2 => 1,
        -3 => 2,
        3 => 3,
        2 => 4,
        _ => 5,
    }
}

/// Whether `v` runs to the right of `u`, both leaving the same decoration
/// through the same side.
fn runs_right_of(u: &CrossingWord, v: &CrossingWord) -> bool {
    for (a, b) in u.turns.iter().zip(&v.turns) {
        if a != b {
            return turn_rank(*b) > turn_rank(*a);
        }
    }
    match (u.turns.get(v.turns.len()), v.turns.get(u.turns.len())) {
        (Some(&r), None) => r < 0,
        (None, Some(&r)) => r > 0,
        _ => false,
    }
}

/// Concatenates `a` (ending at some decoration) with `b` (starting there),
/// passing the decoration clockwise (`negative`) or counterclockwise.
pub fn join(t: &Triangulation, a: &CrossingWord, b: &CrossingWord, negative: bool) -> Result<CrossingWord> {
    let wa = a.walk(t);
    if wa.end_triangle != b.start.tri {
        return Err(DmsError::Input("joined words do not meet in one triangle".into()));
    }
    let diff = (b.start.side + 3 - wa.end_slot.side) % 3;
    let r: i8 = match (diff, negative) {
        (0, _) => {
            let clockwise = runs_right_of(&a.reversed(t), b);
            match (negative, clockwise) {
                (true, true) | (false, false) => 0,
                (true, false) => -3,
                (false, true) => 3,
            }
        }
        (1, true) => -2,
        (1, false) => 1,
        (2, true) => -1,
        _ => 2,
    };
    let mut turns = a.turns.clone();
    turns.push(r);
    turns.extend_from_slice(&b.turns);
    reduce(t, a.start, &turns)?.ok_or_else(|| DmsError::Input("joined arc contracts to a point".into()))
}

/// Decorations shared by the endpoint sets of two words.
pub fn shared_endpoints(t: &Triangulation, a: &CrossingWord, b: &CrossingWord) -> Vec<usize> {
    let (a0, a1) = a.endpoints(t);
    let (b0, b1) = b.endpoints(t);
    let mut z: Vec<usize> = [a0, a1].into_iter().filter(|x| *x == b0 || *x == b1).collect();
    z.sort_unstable();
    z.dedup();
    z
}

/// `B_σ^{±1}(η)` for arcs meeting only at one common endpoint.
pub fn twist_adjacent(t: &Triangulation, sigma: &CrossingWord, eta: &CrossingWord, sign: i8) -> Result<ArcClass> {
    let z = shared_endpoints(t, sigma, eta);
    if z.len() != 1 {
        return Err(DmsError::Input(format!("arcs share {} endpoints, expected one", z.len())));
    }
    let a = ending_at(t, sigma, z[0]).unwrap();
    let b = ending_at(t, eta, z[0]).unwrap().reversed(t);
    Ok(join(t, &a, &b, sign > 0)?.canonical(t))
}

/// Arc label counts `Int(γ_i, w)` and their total `Int(T_0, w)`.
pub fn int_with_base(t: &Triangulation, w: &CrossingWord) -> (Vec<usize>, usize) {
    let mut counts = vec![0; t.arc_count()];
    let walk = w.walk(t);
    for &j in &walk.crossings {
        counts[j - 1] += 1;
    }
    (counts, walk.crossings.len())
}

/// Endpoint intersection: half the sum over decorations of the product of
/// endpoint multiplicities.
pub fn int_delta(t: &Triangulation, w1: &CrossingWord, w2: &CrossingWord) -> HalfInt {
    let (a, b) = w1.endpoints(t);
    let (c, d) = w2.endpoints(t);
    let mut total = 0;
    for x in [a, b] {
        for y in [c, d] {
            if x == y {
                total += 1;
            }
        }
    }
    HalfInt(total)
}

/// Result of decoding a string module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub arc: ArcClass,
    /// Shift of the first crossing's summand.
    pub shift: i64,
}

/// Base triangulation together with its CY3 category.
#[derive(Clone, Debug)]
pub struct StringModel<F: Field> {
    pub base: Triangulation,
    pub quiver: QuiverWithPotential,
    pub cat: DgCat<F>,
}

const SEARCH_NODE_CAP: usize = 1_000_000;
const SEARCH_ISO_CAP: usize = 20_000;

impl<F: Field> StringModel<F> {
    pub fn new(base: Triangulation, field: F) -> Result<Self> {
        if !base.is_valid_initial() {
            return Err(DmsError::Unsupported(
                "base triangulation has two triangles sharing two arcs".into(),
            ));
        }
        let quiver = quiver_of(&base);
        let alg = build_cy3(&quiver)?;
        Ok(StringModel { base, quiver, cat: DgCat::new(alg, field) })
    }

    pub fn n(&self) -> usize {
        self.base.arc_count()
    }

    /// Dual arc `s_i` of arc `i` (1-based).
    pub fn s(&self, i: usize) -> ArcClass {
        CrossingWord::single(&self.base, i)
    }

    fn element(&self, from: usize, to: usize, deg: i64) -> Option<usize> {
        let mut it = self.cat.alg.between_deg(from, to, deg);
        let e = it.next()?;
        it.next().is_none().then_some(e)
    }

    pub fn build_string(&self, w: &CrossingWord, base_shift: i64) -> Result<DGModule<F::Elem>> {
        let walk = walk(&self.base, w.start, &w.turns)?;
        let f = &self.cat.field;
        let mut x = DGModule::zero();
        let mut shift = base_shift;
        x.summands.push(Summand { vertex: walk.crossings[0] - 1, shift });
        for (i, c) in walk.corners.iter().enumerate() {
            if c.turn == 0 {
                return Err(DmsError::NotReduced { position: i });
            }
            let (u, v) = (walk.crossings[i] - 1, walk.crossings[i + 1] - 1);
            let d = c.turn.unsigned_abs() as i64;
            let forward = c.turn < 0;
            let (from, to) = if forward { (u, v) } else { (v, u) };
            let e = self.element(from, to, d).ok_or_else(|| {
                DmsError::Identity(format!("no degree-{d} element for corner {i} of the word"))
            })?;
            shift = if forward { shift + d - 1 } else { shift - d + 1 };
            x.summands.push(Summand { vertex: v, shift });
            let key = if forward { (i, i + 1) } else { (i + 1, i) };
            x.diff.insert(key, vec![(e, f.one())]);
        }
        self.cat.validate(&x)?;
        Ok(x)
    }

    pub fn module(&self, w: &CrossingWord) -> DGModule<F::Elem> {
        self.build_string(w, 0).expect("validated word builds")
    }

    /// Turns along a path of summands, if it is read off geometrically.
    fn read_path(&self, labels: &[usize], edges: &[(bool, usize)]) -> Option<CrossingWord> {
        let t = &self.base;
        let common = |a: usize, b: usize| -> Option<usize> {
            let mut it = (0..t.triangles().len()).filter(|&k| t.side_of(k, a).is_some() && t.side_of(k, b).is_some());
            let k = it.next()?;
            it.next().is_none().then_some(k)
        };
        let first_tri = if labels[0] != labels[1] {
            common(labels[0], labels[1])?
        } else if labels.len() >= 3 && labels[1] != labels[2] {
            let t2 = common(labels[1], labels[2])?;
            let [p, q] = t.arc_slots(labels[0]);
            if p.tri == t2 {
                q.tri
            } else if q.tri == t2 {
                p.tri
            } else {
                return None;
            }
        } else if labels.len() == 2 {
            t.arc_slots(labels[0])[0].tri
        } else {
            return None;
        };
        let entry = Slot { tri: first_tri, side: t.side_of(first_tri, labels[0])? };
        let start = t.partner(entry)?;
        let mut cur = entry;
        let mut turns = Vec::with_capacity(edges.len());
        for (i, &(forward, deg)) in edges.iter().enumerate() {
            let r: i8 = if labels[i] == labels[i + 1] {
                if deg != 3 {
                    return None;
                }
                if forward { -3 } else { 3 }
            } else {
                let q = t.side_of(cur.tri, labels[i + 1])?;
                let diff = (q + 3 - cur.side) % 3;
                match (diff, deg, forward) {
                    (1, 1, false) => 1,
                    (1, 2, true) => -2,
                    (2, 1, true) => -1,
                    (2, 2, false) => 2,
                    _ => return None,
                }
            };
            let exit = Slot { tri: cur.tri, side: (cur.side as i64 + r as i64).rem_euclid(3) as usize };
            turns.push(r);
            cur = t.partner(exit)?;
        }
        CrossingWord::new(t, start, turns).ok()
    }

    fn finish(&self, w: CrossingWord, first_shift: i64) -> Decoded {
        let walk = w.walk(&self.base);
        let c = w.canonical(&self.base);
        if c == w {
            return Decoded { arc: c, shift: first_shift };
        }
        // shift of the last crossing
        let mut s = first_shift;
        for k in &walk.corners {
            let d = k.turn.unsigned_abs() as i64;
            s = if k.turn < 0 { s + d - 1 } else { s - d + 1 };
        }
        Decoded { arc: c, shift: s }
    }

    /// Tries each hint by isomorphism before falling back to
    /// [`StringModel::decode_string`].
    pub fn decode_with_hints(&self, x: &DGModule<F::Elem>, hints: &[CrossingWord]) -> Result<Decoded> {
        let counts = x.vertex_counts(self.n());
        for h in hints {
            let (c, _) = int_with_base(&self.base, h);
            if c != counts {
                continue;
            }
            let arc = h.canonical(&self.base);
            let y = self.module(&arc);
            if let Some(k) = self.cat.iso_up_to_shift(x, &y)? {
                return Ok(Decoded { arc, shift: k });
            }
        }
        self.decode_string(x)
    }

    /// Recovers the arc and base shift of a string module.
    pub fn decode_string(&self, x: &DGModule<F::Elem>) -> Result<Decoded> {
        if x.is_empty() {
            return Err(DmsError::NotAString("zero module".into()));
        }
        if !self.cat.is_minimal(x) {
            return Err(DmsError::NotMinimal);
        }
        if x.len() == 1 {
            let w = CrossingWord::single(&self.base, x.summands[0].vertex + 1);
            return Ok(Decoded { arc: w, shift: x.summands[0].shift });
        }
        if let Some(d) = self.decode_path(x) {
            return Ok(d);
        }
        self.decode_search(x)
    }

    fn decode_path(&self, x: &DGModule<F::Elem>) -> Option<Decoded> {
        let m = x.len();
        if x.diff.len() != m - 1 {
            return None;
        }
        let mut adj: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); m];
        for (&(a, b), l) in &x.diff {
            if l.len() != 1 {
                return None;
            }
            let deg = self.cat.alg.elem(l[0].0).degree as usize;
            adj[a].push((b, true, deg));
            adj[b].push((a, false, deg));
        }
        if adj.iter().any(|v| v.len() > 2) {
            return None;
        }
        let head = (0..m).find(|&v| adj[v].len() == 1)?;
        let mut order = vec![head];
        let mut edges = Vec::with_capacity(m - 1);
        let mut prev = usize::MAX;
        let mut cur = head;
        while order.len() < m {
            let &(next, fwd, deg) = adj[cur].iter().find(|e| e.0 != prev)?;
            edges.push((fwd, deg));
            prev = cur;
            cur = next;
            order.push(cur);
        }
        let labels: Vec<usize> = order.iter().map(|&v| x.summands[v].vertex + 1).collect();
        let w = self.read_path(&labels, &edges)?;
        let first = x.summands[head].shift;
        let built = self.build_string(&w, first).ok()?;
        (built.census() == x.census()).then(|| self.finish(w, first))
    }

    /// Depth-first search for a word with the right summand census,
    /// preferring steps whose entry pattern occurs in `x`; candidates are
    /// confirmed by the isomorphism test.
    fn decode_search(&self, x: &DGModule<F::Elem>) -> Result<Decoded> {
        let t = &self.base;
        let mut remaining: BTreeMap<Summand, usize> = BTreeMap::new();
        for s in &x.summands {
            *remaining.entry(*s).or_default() += 1;
        }
        let pattern: HashSet<(Summand, Summand, usize)> = x
            .diff
            .iter()
            .flat_map(|(&(a, b), l)| l.iter().map(move |(e, _)| (x.summands[a], x.summands[b], *e)))
            .collect();
        let mut budget = SearchBudget { nodes: 0, isos: 0, exhausted: false, dead: HashSet::new(), strict: true };
        let starts: Vec<Summand> = remaining.keys().copied().collect();
        for strict in [true, false] {
            budget = SearchBudget { nodes: 0, isos: 0, exhausted: false, dead: HashSet::new(), strict };
            for &s0 in &starts {
                for slot in t.arc_slots(s0.vertex + 1) {
                    let mut rem = remaining.clone();
                    take(&mut rem, s0);
                    let mut turns = Vec::new();
                    let cur = t.partner(slot).unwrap();
                    if let Some(w) = self.search(x, &pattern, &mut rem, slot, cur, s0, &mut turns, &mut budget)? {
                        return Ok(self.finish(w, s0.shift));
                    }
                }
            }
        }
        Err(DmsError::NotAString(format!(
            "no crossing word matches this module ({} summands, {} nodes, {} iso)",
            x.len(), budget.nodes, budget.isos
        )))
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        x: &DGModule<F::Elem>,
        pattern: &HashSet<(Summand, Summand, usize)>,
        rem: &mut BTreeMap<Summand, usize>,
        start: Slot,
        cur: Slot,
        here: Summand,
        turns: &mut Vec<i8>,
        budget: &mut SearchBudget,
    ) -> Result<Option<CrossingWord>> {
        budget.nodes += 1;
        if budget.nodes > SEARCH_NODE_CAP || budget.isos > SEARCH_ISO_CAP {
            budget.exhausted = true;
            return Ok(None);
        }
        let state = (cur, here, rem.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>());
        if budget.dead.contains(&state) {
            return Ok(None);
        }
        let isos_before = budget.isos;
        if rem.is_empty() {
            let w = CrossingWord { start, turns: turns.clone() };
            budget.isos += 1;
            let y = self.build_string(&w, 0)?;
            if self.cat.iso_up_to_shift(x, &y)?.is_some() {
                return Ok(Some(w));
            }
            return Ok(None);
        }
        let t = &self.base;
        let mut options: Vec<(bool, i8, Summand)> = Vec::new();
        for r in [-1i8, 1, -2, 2, -3, 3] {
            let exit = Slot { tri: cur.tri, side: (cur.side as i64 + r as i64).rem_euclid(3) as usize };
            let Some(label) = t.side(exit).arc() else { continue };
            let d = r.unsigned_abs() as i64;
            let shift = if r < 0 { here.shift + d - 1 } else { here.shift - d + 1 };
            let next = Summand { vertex: label - 1, shift };
            if !rem.contains_key(&next) {
                continue;
            }
            let (from, to) = if r < 0 { (here, next) } else { (next, here) };
            let Some(e) = self.element(from.vertex, to.vertex, d) else { continue };
            let seen = pattern.contains(&(from, to, e));
            if seen || !budget.strict {
                options.push((seen, r, next));
            }
        }
        options.sort_by_key(|o| !o.0);
        for (_, r, next) in options {
            let exit = Slot { tri: cur.tri, side: (cur.side as i64 + r as i64).rem_euclid(3) as usize };
            take(rem, next);
            turns.push(r);
            let found = self.search(x, pattern, rem, start, t.partner(exit).unwrap(), next, turns, budget)?;
            turns.pop();
            *rem.entry(next).or_default() += 1;
            if found.is_some() {
                return Ok(found);
            }
        }
        // only structural dead ends are remembered; iso failures depend on the prefix
        if !budget.exhausted && budget.isos == isos_before {
            budget.dead.insert(state);
        }
        Ok(None)
    }

    /// Splits `w` at a traversed triangle whose decoration `Z_0` is not an
    /// endpoint. Records are tried in order and the first split into two
    /// spherical pieces wins; a piece can fail to be simple when `w`
    /// revisits that triangle. Returns `(α, β, Z_0)` with
    /// `X_w ≅ φ_{X_α}(X_β)` up to shift.
    pub fn decompose(&self, w: &CrossingWord) -> Result<(ArcClass, ArcClass, usize)> {
        let t = &self.base;
        if w.turns.is_empty() {
            return Err(DmsError::Input("a single-crossing word has nothing to decompose".into()));
        }
        let walk = w.walk(t);
        let (z, z2) = (t.decoration(walk.start_triangle), t.decoration(walk.end_triangle));
        for (c, corner) in walk.corners.iter().enumerate() {
            let z0 = t.decoration(corner.triangle);
            if z0 == z || z0 == z2 {
                continue;
            }
            let prefix = CrossingWord { start: w.start, turns: w.turns[..c].to_vec() };
            let suffix = CrossingWord {
                start: Slot { tri: corner.triangle, side: corner.exit },
                turns: w.turns[c + 1..].to_vec(),
            };
            if !self.cat.is_spherical(&self.module(&prefix)) || !self.cat.is_spherical(&self.module(&suffix)) {
                continue;
            }
            let (alpha, beta) = if corner.turn < 0 { (prefix, suffix) } else { (suffix, prefix) };
            return Ok((alpha.canonical(t), beta.canonical(t), z0));
        }
        Err(DmsError::Identity(format!("no split of {} into two closed arcs", w.to_text(t))))
    }
}

struct SearchBudget {
    nodes: usize,
    isos: usize,
    exhausted: bool,
    /// States `(slot, class, remaining census)` with no census-complete extension.
    dead: HashSet<(Slot, Summand, Vec<(Summand, usize)>)>,
    /// Only follow steps whose entry occurs in the target module.
    strict: bool,
}

fn take(rem: &mut BTreeMap<Summand, usize>, s: Summand) {
    let c = rem.get_mut(&s).unwrap();
    *c -= 1;
    if *c == 0 {
        rem.remove(&s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::surface::{standard_triangulation, MarkedSurface, Scheme};

    fn star() -> StringModel<PrimeField> {
        let t = standard_triangulation(&MarkedSurface::disk(6).unwrap(), Scheme::Star).unwrap();
        StringModel::new(t, PrimeField::default()).unwrap()
    }

    #[test]
    fn single_crossing_is_simple() {
        let m = star();
        for i in 1..=3 {
            let x = m.module(&m.s(i));
            assert_eq!(x.census(), vec![Summand { vertex: i - 1, shift: 0 }]);
        }
    }

    #[test]
    fn text_round_trip() {
        let m = star();
        let t = &m.base;
        // from arc 1 into the central triangle, out through arc 2
        let c = t.arc_slots(1).into_iter().find(|s| t.decoration(s.tri) == 1).unwrap();
        let start = t.partner(c).unwrap();
        for r in [-1i8, 1, -2, 2] {
            let w = CrossingWord::new(t, start, vec![r]).unwrap();
            let back = parse_word(t, &w.to_text(t)).unwrap();
            assert_eq!(back, w);
            let json = word_from_json(t, &w.to_json(t)).unwrap();
            assert_eq!(json, w);
        }
    }

    #[test]
    fn digon_rejected_then_reduced() {
        let m = star();
        let t = &m.base;
        let c = t.arc_slots(1).into_iter().find(|s| t.decoration(s.tri) == 1).unwrap();
        let start = t.partner(c).unwrap();
        assert_eq!(CrossingWord::new(t, start, vec![1, 0, -1]), Err(DmsError::NotReduced { position: 1 }));
        // 1 + (-1) = 0 merges again with the start; nothing is left
        assert_eq!(reduce(t, start, &[0]).unwrap(), None);
        let r = reduce(t, start, &[-1, 0, -1]).unwrap().unwrap();
        assert_eq!(r.turns, vec![-2]);
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt(1).to_string(), "1/2");
        assert_eq!(HalfInt(4).to_string(), "2");
    }
}
