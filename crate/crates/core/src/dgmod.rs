//! Minimal perfect dg modules over `E`, realized as twisted complexes.
//!
//! A module is a list of summands `S_v[s]` and a differential with one
//! entry per ordered pair of summands. The entry from summand `a` to summand
//! `b` is an element of `Hom(S_va, S_vb)` of degree `1 + s_b - s_a`.
//! Compositions are plain products in `E` and `d∘d = 0`.

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{BasisKind, CY3Algebra};
use crate::error::{DmsError, Result};
use crate::field::Field;
use crate::linalg::{self, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    /// 0-based vertex (arc label minus one).
    pub vertex: usize,
    pub shift: i64,
}

/// Linear combination of basis ids, sorted, no zero coefficients.
pub type Lin<E> = Vec<(usize, E)>;

#[derive(Clone, Debug, PartialEq)]
pub struct DGModule<E> {
    pub summands: Vec<Summand>,
    /// `(from, to) -> entry`.
    pub diff: BTreeMap<(usize, usize), Lin<E>>,
}

impl<E> DGModule<E> {
    pub fn zero() -> Self {
        DGModule { summands: Vec::new(), diff: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Sorted `(vertex, shift)` multiset.
    pub fn census(&self) -> Vec<Summand> {
        let mut c = self.summands.clone();
        c.sort_unstable();
        c
    }

    /// Number of summands per vertex.
    pub fn vertex_counts(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for s in &self.summands {
            c[s.vertex] += 1;
        }
        c
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.summands.iter().map(|s| s.shift).min()
    }
}

/// A homogeneous map `X -> Y`; components keyed `(summand of X, summand of Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomMap<E> {
    pub degree: i64,
    pub comps: BTreeMap<(usize, usize), Lin<E>>,
}

/// Basis of the Hom complex in one degree.
#[derive(Clone, Debug, Default)]
pub struct HomDegree {
    /// `(summand of X, summand of Y, basis id)`.
    pub basis: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
}

#[derive(Clone, Debug)]
pub struct HomComplex<E> {
    pub degrees: BTreeMap<i64, HomDegree>,
    /// Columns of `δ^t: C^t -> C^(t+1)`.
    pub delta: BTreeMap<i64, Vec<SparseVec<E>>>,
}

impl<E> HomComplex<E> {
    pub fn dim(&self, t: i64) -> usize {
        self.degrees.get(&t).map_or(0, |d| d.basis.len())
    }
}

/// The dg category of twisted complexes over `E` with scalars in `F`.
#[derive(Clone, Debug)]
pub struct DgCat<F: Field> {
    pub alg: CY3Algebra,
    pub field: F,
}

fn sign(t: i64) -> i64 {
    if t.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl<F: Field> DgCat<F> {
    pub fn new(alg: CY3Algebra, field: F) -> Self {
        DgCat { alg, field }
    }

    pub fn simple(&self, v: usize) -> DGModule<F::Elem> {
        DGModule { summands: vec![Summand { vertex: v, shift: 0 }], diff: BTreeMap::new() }
    }

    pub fn shift(&self, x: &DGModule<F::Elem>, k: i64) -> DGModule<F::Elem> {
        let f = &self.field;
        let odd = k.rem_euclid(2) == 1;
        DGModule {
            summands: x.summands.iter().map(|s| Summand { vertex: s.vertex, shift: s.shift + k }).collect(),
            diff: x
                .diff
                .iter()
                .map(|(k, l)| (*k, if odd { l.iter().map(|(b, c)| (*b, f.neg(c))).collect() } else { l.clone() }))
                .collect(),
        }
    }

    pub fn direct_sum(&self, parts: &[&DGModule<F::Elem>]) -> DGModule<F::Elem> {
        let mut out = DGModule::zero();
        for p in parts {
            let off = out.summands.len();
            out.summands.extend(p.summands.iter().copied());
            for ((a, b), l) in &p.diff {
                out.diff.insert((a + off, b + off), l.clone());
            }
        }
        out
    }

    fn lin_add(&self, acc: &mut BTreeMap<usize, F::Elem>, id: usize, c: F::Elem) {
        let f = &self.field;
        match acc.get_mut(&id) {
            Some(x) => {
                *x = f.add(x, &c);
                if f.is_zero(x) {
                    acc.remove(&id);
                }
            }
            None => {
                if !f.is_zero(&c) {
                    acc.insert(id, c);
                }
            }
        }
    }

    /// `g∘f` for linear combinations.
    pub fn compose(&self, g: &Lin<F::Elem>, h: &Lin<F::Elem>) -> Lin<F::Elem> {
        let f = &self.field;
        let mut acc = BTreeMap::new();
        for (x, cx) in g {
            for (y, cy) in h {
                if let Some((r, s)) = self.alg.mul(*x, *y) {
                    let c = f.mul(&f.mul(cx, cy), &f.from_i64(s as i64));
                    self.lin_add(&mut acc, r, c);
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Entry degrees, basis endpoints and `d∘d = 0`.
    pub fn validate(&self, x: &DGModule<F::Elem>) -> Result<()> {
        let n = self.alg.n();
        for s in &x.summands {
            if s.vertex >= n {
                return Err(DmsError::Input(format!("vertex {} out of range", s.vertex + 1)));
            }
        }
        for (&(a, b), l) in &x.diff {
            if a >= x.len() || b >= x.len() {
                return Err(DmsError::Input(format!("entry ({a},{b}) out of range")));
            }
            let (sa, sb) = (x.summands[a], x.summands[b]);
            let want = 1 + sb.shift - sa.shift;
            for (id, c) in l {
                let e = self.alg.elem(*id);
                if self.field.is_zero(c) || e.source != sa.vertex || e.target != sb.vertex || e.degree as i64 != want {
                    return Err(DmsError::Input(format!(
                        "entry {a}->{b} contains {} which does not fit degree {want}",
                        self.alg.name(*id)
                    )));
                }
            }
        }
        let mut out: Vec<Vec<(usize, &Lin<F::Elem>)>> = vec![Vec::new(); x.len()];
        for (&(a, b), l) in &x.diff {
            out[a].push((b, l));
        }
        for a in 0..x.len() {
            let mut sq: BTreeMap<usize, BTreeMap<usize, F::Elem>> = BTreeMap::new();
            for &(b, l1) in &out[a] {
                for &(c, l2) in &out[b] {
                    let p = self.compose(l2, l1);
                    let acc = sq.entry(c).or_default();
                    for (id, coef) in p {
                        self.lin_add(acc, id, coef);
                    }
                }
            }
            if let Some((c, _)) = sq.iter().find(|(_, v)| !v.is_empty()) {
                return Err(DmsError::Identity(format!("d^2 != 0 on component {a} -> {c}")));
            }
        }
        Ok(())
    }

    /// No degree-0 entries and an acyclic entry graph.
    pub fn is_minimal(&self, x: &DGModule<F::Elem>) -> bool {
        let scalar = x.diff.values().any(|l| l.iter().any(|(id, _)| self.alg.elem(*id).degree == 0));
        if scalar {
            return false;
        }
        let mut indeg = vec![0usize; x.len()];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); x.len()];
        for &(a, b) in x.diff.keys() {
            out[a].push(b);
            indeg[b] += 1;
        }
        let mut stack: Vec<usize> = (0..x.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == x.len()
    }

    pub fn hom_complex(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> HomComplex<F::Elem> {
        let f = &self.field;
        let mut degrees: BTreeMap<i64, HomDegree> = BTreeMap::new();
        for (a, sa) in x.summands.iter().enumerate() {
            for (b, sb) in y.summands.iter().enumerate() {
                for &e in self.alg.between(sa.vertex, sb.vertex) {
                    let t = self.alg.elem(e).degree as i64 - sb.shift + sa.shift;
                    let d = degrees.entry(t).or_default();
                    d.index.insert((a, b, e), d.basis.len());
                    d.basis.push((a, b, e));
                }
            }
        }
        let mut y_out: Vec<Vec<(usize, &Lin<F::Elem>)>> = vec![Vec::new(); y.len()];
        for (&(b, c), l) in &y.diff {
            y_out[b].push((c, l));
        }
        let mut x_in: Vec<Vec<(usize, &Lin<F::Elem>)>> = vec![Vec::new(); x.len()];
        for (&(a0, a), l) in &x.diff {
            x_in[a].push((a0, l));
        }
        let mut delta = BTreeMap::new();
        for (&t, deg) in &degrees {
            let target = degrees.get(&(t + 1));
            let mut cols = Vec::with_capacity(deg.basis.len());
            for &(a, b, e) in &deg.basis {
                let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
                if let Some(tg) = target {
                    for &(c, l) in &y_out[b] {
                        for (g, cg) in l {
                            if let Some((h, s)) = self.alg.mul(*g, e) {
                                let idx = tg.index[&(a, c, h)];
                                self.lin_add(&mut acc, idx, f.mul(cg, &f.from_i64(s as i64)));
                            }
                        }
                    }
                    let sg = -sign(t);
                    for &(a0, l) in &x_in[a] {
                        for (g, cg) in l {
                            if let Some((h, s)) = self.alg.mul(e, *g) {
                                let idx = tg.index[&(a0, b, h)];
                                self.lin_add(&mut acc, idx, f.mul(cg, &f.from_i64(sg * s as i64)));
                            }
                        }
                    }
                }
                cols.push(acc.into_iter().collect());
            }
            delta.insert(t, cols);
        }
        HomComplex { degrees, delta }
    }

    /// Nonzero cohomology dimensions of `Hom(X, Y)`.
    pub fn hom_dims(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> BTreeMap<i64, usize> {
        let hc = self.hom_complex(x, y);
        let ranks: BTreeMap<i64, usize> =
            hc.delta.iter().map(|(t, cols)| (*t, linalg::rank(&self.field, cols))).collect();
        let mut out = BTreeMap::new();
        for (&t, d) in &hc.degrees {
            let h = d.basis.len() - ranks[&t] - ranks.get(&(t - 1)).copied().unwrap_or(0);
            if h > 0 {
                out.insert(t, h);
            }
        }
        out
    }

    pub fn hom_total(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> usize {
        self.hom_dims(x, y).values().sum()
    }

    pub fn euler_form(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> i64 {
        self.hom_dims(x, y).iter().map(|(t, d)| sign(*t) * *d as i64).sum()
    }

    fn to_map(&self, deg: &HomDegree, t: i64, v: &SparseVec<F::Elem>) -> HomMap<F::Elem> {
        let mut comps: BTreeMap<(usize, usize), BTreeMap<usize, F::Elem>> = BTreeMap::new();
        for (i, c) in v {
            let (a, b, e) = deg.basis[*i];
            comps.entry((a, b)).or_default().insert(e, c.clone());
        }
        HomMap { degree: t, comps: comps.into_iter().map(|(k, l)| (k, l.into_iter().collect())).collect() }
    }

    /// Cocycles lifting a basis of `H^t Hom(X, Y)`, per degree.
    pub fn cohomology_basis(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> BTreeMap<i64, Vec<HomMap<F::Elem>>> {
        let hc = self.hom_complex(x, y);
        let mut out = BTreeMap::new();
        for (&t, deg) in &hc.degrees {
            let z = linalg::kernel(&self.field, &hc.delta[&t]);
            let empty = Vec::new();
            let bnd = hc.delta.get(&(t - 1)).unwrap_or(&empty);
            let reps = linalg::cohomology_reps(&self.field, &z, bnd);
            if !reps.is_empty() {
                out.insert(t, reps.iter().map(|v| self.to_map(deg, t, v)).collect());
            }
        }
        out
    }

    /// `δf`, as a map of degree `deg f + 1`.
    pub fn delta_of(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>, m: &HomMap<F::Elem>) -> HomMap<F::Elem> {
        let f = &self.field;
        let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, F::Elem>> = BTreeMap::new();
        for (&(a, b), l) in &m.comps {
            for (&(b0, c), dl) in y.diff.range((b, 0)..(b + 1, 0)) {
                debug_assert_eq!(b0, b);
                let p = self.compose(dl, l);
                let e = acc.entry((a, c)).or_default();
                for (id, v) in p {
                    self.lin_add(e, id, v);
                }
            }
            for (&(a0, a1), dl) in &x.diff {
                if a1 != a {
                    continue;
                }
                let p = self.compose(l, dl);
                let e = acc.entry((a0, b)).or_default();
                let s = f.from_i64(-sign(m.degree));
                for (id, v) in p {
                    self.lin_add(e, id, f.mul(&v, &s));
                }
            }
        }
        HomMap {
            degree: m.degree + 1,
            comps: acc
                .into_iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
        }
    }

    /// `Cone(m) = X[1] ⊕ Y`, not minimized. `m` must be closed of degree 0.
    pub fn cone_raw(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>, m: &HomMap<F::Elem>) -> Result<DGModule<F::Elem>> {
        if m.degree != 0 || !self.delta_of(x, y, m).comps.is_empty() {
            return Err(DmsError::NotClosed);
        }
        let mut c = self.direct_sum(&[&self.shift(x, 1), y]);
        let off = x.len();
        for (&(a, b), l) in &m.comps {
            if !l.is_empty() {
                c.diff.insert((a, off + b), l.clone());
            }
        }
        Ok(c)
    }

    pub fn cone(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>, m: &HomMap<F::Elem>) -> Result<DGModule<F::Elem>> {
        Ok(self.minimize(&self.cone_raw(x, y, m)?))
    }

    /// Cancels summand pairs joined by invertible scalar entries.
    pub fn minimize(&self, x: &DGModule<F::Elem>) -> DGModule<F::Elem> {
        self.minimize_with(x, false)
    }

    /// `reverse` picks pivots in reverse key order; the results agree up
    /// to isomorphism.
    pub fn minimize_with(&self, x: &DGModule<F::Elem>, reverse: bool) -> DGModule<F::Elem> {
        let f = &self.field;
        let mut diff = x.diff.clone();
        let mut alive = vec![true; x.len()];
        loop {
            let is_pivot = |l: &Lin<F::Elem>| l.iter().any(|(id, _)| self.alg.elem(*id).kind == BasisKind::Idem);
            let pivot = if reverse {
                diff.iter().rev().find(|(_, l)| is_pivot(l)).map(|(k, l)| (*k, l.clone()))
            } else {
                diff.iter().find(|(_, l)| is_pivot(l)).map(|(k, l)| (*k, l.clone()))
            };
            let Some(((a, b), l)) = pivot else { break };
            debug_assert_eq!(l.len(), 1);
            let lam_inv = f.inv(&l[0].1).expect("nonzero pivot");
            let into_b: Vec<(usize, Lin<F::Elem>)> =
                diff.iter().filter(|((s, t), _)| *t == b && *s != a).map(|((s, _), l)| (*s, l.clone())).collect();
            let from_a: Vec<(usize, Lin<F::Elem>)> =
                diff.iter().filter(|((s, t), _)| *s == a && *t != b).map(|((_, t), l)| (*t, l.clone())).collect();
            for (xs, lx) in &into_b {
                for (yt, ly) in &from_a {
                    let p = self.compose(ly, lx);
                    if p.is_empty() {
                        continue;
                    }
                    let entry = diff.entry((*xs, *yt)).or_default();
                    let mut acc: BTreeMap<usize, F::Elem> = entry.drain(..).collect();
                    for (id, c) in p {
                        self.lin_add(&mut acc, id, f.neg(&f.mul(&c, &lam_inv)));
                    }
                    *entry = acc.into_iter().collect();
                }
            }
            diff.retain(|(s, t), l| *s != a && *t != a && *s != b && *t != b && !l.is_empty());
            alive[a] = false;
            alive[b] = false;
        }
        let mut newidx = vec![usize::MAX; x.len()];
        let mut summands = Vec::new();
        for (i, s) in x.summands.iter().enumerate() {
            if alive[i] {
                newidx[i] = summands.len();
                summands.push(*s);
            }
        }
        DGModule {
            summands,
            diff: diff.into_iter().map(|((s, t), l)| ((newidx[s], newidx[t]), l)).collect(),
        }
    }

    fn seed_for(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        x.summands.hash(&mut h);
        y.summands.hash(&mut h);
        x.diff.len().hash(&mut h);
        y.diff.len().hash(&mut h);
        h.finish() ^ 0x5eed_1e55
    }

    /// Decides whether two minimal modules are isomorphic.
    ///
    /// Solves for closed degree-0 maps and tests the scalar part of a
    /// generic one for invertibility. One-sided error below `2^-40` when
    /// the solution space has dimension at least three; exact otherwise.
    pub fn iso(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> Result<bool> {
        if !self.is_minimal(x) || !self.is_minimal(y) {
            return Err(DmsError::NotMinimal);
        }
        if x.census() != y.census() {
            return Ok(false);
        }
        if x.is_empty() {
            return Ok(true);
        }
        let f = &self.field;
        let hc = self.hom_complex(x, y);
        let Some(deg0) = hc.degrees.get(&0) else { return Ok(false) };
        let ker = linalg::kernel(f, &hc.delta[&0]);
        if ker.is_empty() {
            return Ok(false);
        }

        // scalar blocks, one per (vertex, shift) class
        let mut class_x: BTreeMap<Summand, Vec<usize>> = BTreeMap::new();
        let mut class_y: BTreeMap<Summand, Vec<usize>> = BTreeMap::new();
        for (i, s) in x.summands.iter().enumerate() {
            class_x.entry(*s).or_default().push(i);
        }
        for (i, s) in y.summands.iter().enumerate() {
            class_y.entry(*s).or_default().push(i);
        }
        let mut pos_x = vec![(0usize, 0usize); x.len()];
        let mut pos_y = vec![(0usize, 0usize); y.len()];
        let mut sizes = Vec::new();
        for (k, (s, xs)) in class_x.iter().enumerate() {
            for (r, &i) in xs.iter().enumerate() {
                pos_x[i] = (k, r);
            }
            for (r, &j) in class_y[s].iter().enumerate() {
                pos_y[j] = (k, r);
            }
            sizes.push(xs.len());
        }
        // kernel vectors restricted to scalar entries: (block, row, col, coeff)
        let scalars: Vec<Vec<(usize, usize, usize, F::Elem)>> = ker
            .iter()
            .map(|v| {
                v.iter()
                    .filter_map(|(i, c)| {
                        let (a, b, e) = deg0.basis[*i];
                        (self.alg.elem(e).kind == BasisKind::Idem).then(|| {
                            let (k, col) = pos_x[a];
                            let (_, row) = pos_y[b];
                            (k, row, col, c.clone())
                        })
                    })
                    .collect()
            })
            .collect();
        let invertible = |coeffs: &[F::Elem]| -> bool {
            let mut blocks: Vec<Vec<Vec<F::Elem>>> = sizes.iter().map(|&s| vec![vec![f.zero(); s]; s]).collect();
            for (kv, c) in scalars.iter().zip(coeffs) {
                if f.is_zero(c) {
                    continue;
                }
                for (k, r, col, v) in kv {
                    let cell = &mut blocks[*k][*r][*col];
                    *cell = f.add(cell, &f.mul(c, v));
                }
            }
            blocks.into_iter().all(|b| linalg::dense_invertible(f, b))
        };
        let total: usize = sizes.iter().sum();
        match ker.len() {
            1 => Ok(invertible(&[f.one()])),
            2 => Ok((0..=total as i64).any(|j| invertible(&[f.one(), f.from_i64(j)]))),
            dim => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed_for(x, y));
                let ratio = f.sample_size() as f64 / total as f64;
                let per_trial = ratio.log2().max(0.5);
                let trials = (40.0 / per_trial).ceil() as usize;
                for _ in 0..trials {
                    let c: Vec<F::Elem> = (0..dim).map(|_| f.random(&mut rng)).collect();
                    if invertible(&c) {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Isomorphic after shifting `y` by some `k`; returns that `k`.
    pub fn iso_up_to_shift(&self, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> Result<Option<i64>> {
        match (x.min_shift(), y.min_shift()) {
            (None, None) => Ok(Some(0)),
            (Some(a), Some(b)) => {
                let k = a - b;
                Ok(self.iso(x, &self.shift(y, k))?.then_some(k))
            }
            _ => Ok(None),
        }
    }

    pub fn is_spherical(&self, x: &DGModule<F::Elem>) -> bool {
        let d = self.hom_dims(x, x);
        d.len() == 2 && d.get(&0) == Some(&1) && d.get(&3) == Some(&1)
    }

    pub fn render(&self, x: &DGModule<F::Elem>) -> String {
        let mut s = String::new();
        if x.is_empty() {
            return "0\n".to_string();
        }
        let parts: Vec<String> =
            x.summands.iter().map(|m| format!("S{}[{}]", m.vertex + 1, m.shift)).collect();
        s.push_str(&parts.join(" + "));
        s.push('\n');
        for (&(a, b), l) in &x.diff {
            let terms: Vec<String> = l
                .iter()
                .map(|(id, c)| {
                    let cs = self.field.render(c);
                    if cs == "1" {
                        self.alg.name(*id)
                    } else {
                        format!("{cs}*{}", self.alg.name(*id))
                    }
                })
                .collect();
            s.push_str(&format!("  {a} -> {b}: {}\n", terms.join(" + ")));
        }
        s
    }

    pub fn to_json(&self, x: &DGModule<F::Elem>) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = x
            .diff
            .iter()
            .flat_map(|(&(a, b), l)| {
                l.iter().map(move |(id, c)| {
                    serde_json::json!({
                        "row": b,
                        "col": a,
                        "basis": id,
                        "name": self.alg.name(*id),
                        "scalar": self.field.render(c),
                    })
                })
            })
            .collect();
        serde_json::json!({
            "summands": x.summands.iter().map(|s| serde_json::json!({"vertex": s.vertex + 1, "shift": s.shift})).collect::<Vec<_>>(),
            "entries": entries,
        })
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<DGModule<F::Elem>> {
        let bad = |m: &str| DmsError::Input(format!("module json: {m}"));
        let mut x = DGModule::zero();
        for s in v["summands"].as_array().ok_or_else(|| bad("summands"))? {
            let vertex = s["vertex"].as_u64().ok_or_else(|| bad("vertex"))? as usize;
            if vertex == 0 {
                return Err(bad("vertices start at 1"));
            }
            let shift = s["shift"].as_i64().ok_or_else(|| bad("shift"))?;
            x.summands.push(Summand { vertex: vertex - 1, shift });
        }
        let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, F::Elem>> = BTreeMap::new();
        for e in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            let row = e["row"].as_u64().ok_or_else(|| bad("row"))? as usize;
            let col = e["col"].as_u64().ok_or_else(|| bad("col"))? as usize;
            let id = e["basis"].as_u64().ok_or_else(|| bad("basis"))? as usize;
            if id >= self.alg.dim() {
                return Err(bad("basis id out of range"));
            }
            let c = self.field.parse(e["scalar"].as_str().ok_or_else(|| bad("scalar"))?)?;
            let m = acc.entry((col, row)).or_default();
            self.lin_add(m, id, c);
        }
        x.diff = acc.into_iter().map(|(k, l)| (k, l.into_iter().collect())).collect();
        self.validate(&x)?;
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_cy3;
    use crate::field::PrimeField;
    use crate::quiver::QuiverWithPotential;

    fn cycle() -> DgCat<PrimeField> {
        let q = QuiverWithPotential::new(3, vec![(1, 2, 0), (2, 3, 0), (3, 1, 0)], vec![[1, 0, 2]]);
        DgCat::new(build_cy3(&q).unwrap(), PrimeField::default())
    }

    #[test]
    fn simple_is_spherical() {
        let c = cycle();
        let s = c.simple(0);
        assert_eq!(c.hom_dims(&s, &s), BTreeMap::from([(0, 1), (3, 1)]));
        assert!(c.is_spherical(&s));
        let sum = c.direct_sum(&[&c.simple(0), &c.simple(1)]);
        assert!(!c.is_spherical(&sum));
    }

    #[test]
    fn hom_between_neighbours() {
        let c = cycle();
        assert_eq!(c.hom_dims(&c.simple(0), &c.simple(1)), BTreeMap::from([(1, 1)]));
        assert_eq!(c.hom_dims(&c.simple(1), &c.simple(0)), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn additivity_with_shift() {
        let c = cycle();
        let x = c.direct_sum(&[&c.simple(0), &c.shift(&c.simple(0), 5)]);
        assert_eq!(c.hom_dims(&x, &c.simple(0)), BTreeMap::from([(0, 1), (3, 1), (5, 1), (8, 1)]));
    }

    #[test]
    fn cone_of_identity_vanishes() {
        let c = cycle();
        let s = c.simple(0);
        let id = HomMap { degree: 0, comps: BTreeMap::from([((0, 0), vec![(c.alg.idem(0), 1)])]) };
        assert!(c.cone(&s, &s, &id).unwrap().is_empty());
        let zero = HomMap { degree: 0, comps: BTreeMap::new() };
        let z = c.cone(&s, &c.simple(1), &zero).unwrap();
        assert_eq!(z.census(), vec![Summand { vertex: 0, shift: 1 }, Summand { vertex: 1, shift: 0 }]);
    }

    #[test]
    fn non_closed_rejected() {
        let c = cycle();
        let x = c.simple(0);
        let y = c.shift(&c.simple(1), 1);
        let arrow = c.alg.arrow_index(0, 1).unwrap();
        let m = HomMap { degree: 1, comps: BTreeMap::from([((0, 0), vec![(c.alg.arrow(arrow), 1)])]) };
        assert_eq!(c.cone_raw(&x, &y, &m), Err(DmsError::NotClosed));
    }

    #[test]
    fn iso_basics() {
        let c = cycle();
        let s = c.simple(0);
        assert!(c.iso(&s, &s).unwrap());
        assert!(!c.iso(&s, &c.shift(&s, 1)).unwrap());
        assert!(c.iso(&DGModule::zero(), &DGModule::zero()).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let c = cycle();
        let arrow = c.alg.arrow_index(0, 1).unwrap();
        let m = HomMap { degree: 0, comps: BTreeMap::from([((0, 0), vec![(c.alg.arrow(arrow), 3)])]) };
        let x = c.cone(&c.simple(0), &c.shift(&c.simple(1), 1), &m).unwrap();
        let back = c.from_json(&c.to_json(&x)).unwrap();
        assert_eq!(back, x);
    }
}
