//! Hearts as tuples of simples, simple tilts, exchange graphs, green
//! sequences, and flips kept in sync with tilts.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dgmod::{DGModule, DgCat, Summand};
use crate::error::{DmsError, Result};
use crate::field::Field;
use crate::quiver::quiver_of;
use crate::strings::{ending_at, int_with_base, join, shared_endpoints, twist_adjacent, ArcClass, StringModel};
use crate::surface::{FlipDirection, Triangulation};

#[derive(Clone, Debug, PartialEq)]
pub struct Heart<E> {
    pub simples: Vec<DGModule<E>>,
    /// `ext[i][j] = dim Hom^1(X_i, X_j)`.
    pub ext: Vec<Vec<usize>>,
}

impl<E> Heart<E> {
    pub fn n(&self) -> usize {
        self.simples.len()
    }

    fn census_key(&self) -> Vec<Vec<Summand>> {
        let mut k: Vec<Vec<Summand>> = self.simples.iter().map(|s| s.census()).collect();
        k.sort();
        k
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExchangeGraph {
    /// Census of each simple, per node, for display.
    pub nodes: Vec<Vec<Vec<(usize, i64)>>>,
    /// `(from, to, index, forward)`, indices 1-based.
    pub edges: Vec<(usize, usize, usize, bool)>,
}

impl ExchangeGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph eg {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label: Vec<String> = n
                .iter()
                .map(|c| c.iter().map(|(v, k)| format!("S{}[{}]", v + 1, k)).collect::<Vec<_>>().join("+"))
                .collect();
            s.push_str(&format!("  h{i} [label=\"{}\"];\n", label.join("\\n")));
        }
        for &(a, b, j, fwd) in &self.edges {
            if fwd {
                s.push_str(&format!("  h{a} -> h{b} [label=\"{j}\", color=green];\n"));
            } else {
                s.push_str(&format!("  h{a} -> h{b} [label=\"{j}\", color=red];\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GreenSequences {
    /// Tilt indices, 1-based.
    pub sequences: Vec<Vec<usize>>,
    /// Search hit `max_len` or the node cap on some branch.
    pub truncated: bool,
}

impl GreenSequences {
    pub fn lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.sequences.iter().map(|s| s.len()).collect();
        l.sort_unstable();
        l
    }
}

impl<F: Field> DgCat<F> {
    pub fn heart(&self, simples: Vec<DGModule<F::Elem>>) -> Heart<F::Elem> {
        let ext = simples
            .iter()
            .map(|a| simples.iter().map(|b| self.hom_dims(a, b).get(&1).copied().unwrap_or(0)).collect())
            .collect();
        Heart { simples, ext }
    }

    pub fn canonical_heart(&self) -> Heart<F::Elem> {
        self.heart((0..self.alg.n()).map(|v| self.simple(v)).collect())
    }

    pub fn shift_heart(&self, h: &Heart<F::Elem>, k: i64) -> Heart<F::Elem> {
        Heart { simples: h.simples.iter().map(|s| self.shift(s, k)).collect(), ext: h.ext.clone() }
    }

    /// Sphericals, `Hom^0(X_i, X_j) = δ_ij`, no negative Homs, cached ext.
    pub fn check_heart(&self, h: &Heart<F::Elem>) -> Result<()> {
        for (i, a) in h.simples.iter().enumerate() {
            for (j, b) in h.simples.iter().enumerate() {
                let d = self.hom_dims(a, b);
                let h0 = d.get(&0).copied().unwrap_or(0);
                if h0 != usize::from(i == j) {
                    return Err(DmsError::Identity(format!("dim Hom^0(X{}, X{}) = {h0}", i + 1, j + 1)));
                }
                if let Some((t, _)) = d.iter().find(|(t, _)| **t < 0) {
                    return Err(DmsError::Identity(format!("Hom^{t}(X{}, X{}) is nonzero", i + 1, j + 1)));
                }
                if d.get(&1).copied().unwrap_or(0) != h.ext[i][j] {
                    return Err(DmsError::Identity("cached ext quiver is stale".into()));
                }
            }
        }
        Ok(())
    }

    /// Simple tilt at `j` (1-based).
    pub fn tilt(&self, h: &Heart<F::Elem>, j: usize, dir: FlipDirection) -> Result<Heart<F::Elem>> {
        let n = h.n();
        if j == 0 || j > n {
            return Err(DmsError::Input(format!("tilt index {j} out of range 1..={n}")));
        }
        let j = j - 1;
        let xj = &h.simples[j];
        let mut out = Vec::with_capacity(n);
        for (i, xi) in h.simples.iter().enumerate() {
            let y = match dir {
                _ if i == j => self.shift(xj, if dir == FlipDirection::Forward { 1 } else { -1 }),
                FlipDirection::Forward if h.ext[i][j] > 0 => self.spherical_twist(xj, xi, -1)?,
                FlipDirection::Backward if h.ext[j][i] > 0 => self.spherical_twist(xj, xi, 1)?,
                _ => xi.clone(),
            };
            out.push(y);
        }
        Ok(self.heart(out))
    }

    /// A permutation `p` with `a_i ≅ b_{p[i]}`, if one exists.
    pub fn heart_iso(&self, a: &Heart<F::Elem>, b: &Heart<F::Elem>) -> Result<Option<Vec<usize>>> {
        if a.n() != b.n() {
            return Ok(None);
        }
        let mut p = Vec::with_capacity(a.n());
        let mut used = vec![false; b.n()];
        for x in &a.simples {
            let mut hit = None;
            for (k, y) in b.simples.iter().enumerate() {
                if !used[k] && x.census() == y.census() && self.iso(x, y)? {
                    hit = Some(k);
                    break;
                }
            }
            // simples are pairwise non-isomorphic, so a greedy match is exact
            match hit {
                Some(k) => {
                    used[k] = true;
                    p.push(k);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(p))
    }

    /// Breadth-first search over tilts from `h0`, deduplicating hearts up to
    /// isomorphism. `forward_only` restricts to forward tilts.
    pub fn exchange_graph(
        &self,
        h0: &Heart<F::Elem>,
        radius: usize,
        cap: usize,
        forward_only: bool,
    ) -> Result<(ExchangeGraph, Vec<Heart<F::Elem>>)> {
        let mut hearts = vec![h0.clone()];
        let mut buckets: HashMap<Vec<Vec<Summand>>, Vec<usize>> = HashMap::new();
        buckets.entry(h0.census_key()).or_default().push(0);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        let dirs: &[FlipDirection] =
            if forward_only { &[FlipDirection::Forward] } else { &[FlipDirection::Forward, FlipDirection::Backward] };
        while let Some((u, depth)) = queue.pop_front() {
            if depth == radius {
                continue;
            }
            for j in 1..=h0.n() {
                for &dir in dirs {
                    let h = self.tilt(&hearts[u], j, dir)?;
                    let key = h.census_key();
                    let mut found = None;
                    for &k in buckets.get(&key).map(|v| v.as_slice()).unwrap_or(&[]) {
                        if self.heart_iso(&h, &hearts[k])?.is_some() {
                            found = Some(k);
                            break;
                        }
                    }
                    let v = match found {
                        Some(v) => v,
                        None => {
                            if hearts.len() >= cap {
                                return Err(DmsError::CapExceeded(format!("exchange graph exceeds {cap} hearts")));
                            }
                            hearts.push(h);
                            let v = hearts.len() - 1;
                            buckets.entry(key).or_default().push(v);
                            queue.push_back((v, depth + 1));
                            v
                        }
                    };
                    edges.push((u, v, j, dir == FlipDirection::Forward));
                }
            }
        }
        let nodes = hearts
            .iter()
            .map(|h| h.simples.iter().map(|s| s.census().iter().map(|m| (m.vertex, m.shift)).collect()).collect())
            .collect();
        Ok((ExchangeGraph { nodes, edges }, hearts))
    }

    /// Hearts between the canonical heart and its shift: forward tilts at
    /// simples concentrated in shift 0.
    pub fn interval_graph(&self, cap: usize) -> Result<(ExchangeGraph, Vec<Heart<F::Elem>>)> {
        let h0 = self.canonical_heart();
        let mut hearts = vec![h0.clone()];
        let mut buckets: HashMap<Vec<Vec<Summand>>, Vec<usize>> = HashMap::new();
        buckets.entry(h0.census_key()).or_default().push(0);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for j in green_vertices(&hearts[u]) {
                let h = self.tilt(&hearts[u], j, FlipDirection::Forward)?;
                let key = h.census_key();
                let mut found = None;
                for &k in buckets.get(&key).map(|v| v.as_slice()).unwrap_or(&[]) {
                    if self.heart_iso(&h, &hearts[k])?.is_some() {
                        found = Some(k);
                        break;
                    }
                }
                let v = match found {
                    Some(v) => v,
                    None => {
                        if hearts.len() >= cap {
                            return Err(DmsError::CapExceeded(format!("interval exceeds {cap} hearts")));
                        }
                        hearts.push(h);
                        buckets.entry(key).or_default().push(hearts.len() - 1);
                        queue.push_back(hearts.len() - 1);
                        hearts.len() - 1
                    }
                };
                edges.push((u, v, j, true));
            }
        }
        let nodes = hearts
            .iter()
            .map(|h| h.simples.iter().map(|s| s.census().iter().map(|m| (m.vertex, m.shift)).collect()).collect())
            .collect();
        Ok((ExchangeGraph { nodes, edges }, hearts))
    }

    /// Forward tilt sequences from the canonical heart `H_0` to `H_0[1]` of
    /// length at most `max_len`. Only simples lying in `H_0` are tilted,
    /// which keeps the search inside the interval. At most `cap` tilts
    /// are computed.
    pub fn green_sequences(&self, max_len: usize, cap: usize) -> Result<GreenSequences> {
        let h0 = self.canonical_heart();
        let target = self.shift_heart(&h0, 1);
        let mut out = GreenSequences::default();
        let mut budget = cap;
        let mut path = Vec::new();
        self.green_dfs(&h0, &target, max_len, &mut budget, &mut path, &mut out)?;
        for seq in &out.sequences {
            let mut h = h0.clone();
            for &j in seq {
                h = self.tilt(&h, j, FlipDirection::Forward)?;
            }
            if self.heart_iso(&h, &target)?.is_none() {
                return Err(DmsError::Identity(format!("green sequence {seq:?} does not replay to H0[1]")));
            }
        }
        Ok(out)
    }

    fn green_dfs(
        &self,
        h: &Heart<F::Elem>,
        target: &Heart<F::Elem>,
        max_len: usize,
        budget: &mut usize,
        path: &mut Vec<usize>,
        out: &mut GreenSequences,
    ) -> Result<()> {
        let green = green_vertices(h);
        if green.is_empty() {
            if self.heart_iso(h, target)?.is_some() {
                out.sequences.push(path.clone());
            }
            return Ok(());
        }
        if path.len() == max_len || *budget == 0 {
            out.truncated = true;
            return Ok(());
        }
        for j in green {
            *budget = budget.saturating_sub(1);
            let next = self.tilt(h, j, FlipDirection::Forward)?;
            path.push(j);
            self.green_dfs(&next, target, max_len, budget, path, out)?;
            path.pop();
        }
        Ok(())
    }
}

/// Indices (1-based) of simples with every summand in shift 0.
fn green_vertices<E>(h: &Heart<E>) -> Vec<usize> {
    (0..h.n()).filter(|&i| h.simples[i].summands.iter().all(|s| s.shift == 0)).map(|i| i + 1).collect()
}

/// A heart together with the triangulation and dual arcs it corresponds to.
#[derive(Clone, Debug)]
pub struct EGNode<E> {
    pub heart: Heart<E>,
    pub tri: Triangulation,
    pub duals: Vec<ArcClass>,
    /// `X̃(duals[i])[shifts[i]] ≅ simples[i]`.
    pub shifts: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WalkReport {
    pub steps: usize,
    /// Moves skipped because they would exceed the intersection cap.
    pub rejected: usize,
    pub max_total_int: usize,
    pub forward: usize,
    pub backward: usize,
}

impl<F: Field> StringModel<F> {
    pub fn initial_node(&self) -> EGNode<F::Elem> {
        EGNode {
            heart: self.cat.canonical_heart(),
            tri: self.base.clone(),
            duals: (1..=self.n()).map(|i| self.s(i)).collect(),
            shifts: vec![0; self.n()],
        }
    }

    /// Each dual arc matches its simple; the ext quiver is the quiver of the
    /// triangulation; each dual arc joins the decorations on the two sides
    /// of its arc.
    pub fn check_node(&self, node: &EGNode<F::Elem>) -> Result<()> {
        for (i, (w, x)) in node.duals.iter().zip(&node.heart.simples).enumerate() {
            let y = self.build_string(w, node.shifts[i])?;
            if !self.cat.iso(&y, x)? {
                return Err(DmsError::Identity(format!("dual arc {} does not match simple {}", i + 1, i + 1)));
            }
            let (a, b) = w.endpoints(&self.base);
            if (a.min(b), a.max(b)) != node.tri.arc_decorations(i + 1) {
                return Err(DmsError::Identity(format!(
                    "dual arc {} ends at {:?}, arc {} separates {:?}",
                    i + 1,
                    (a, b),
                    i + 1,
                    node.tri.arc_decorations(i + 1)
                )));
            }
        }
        let adj = quiver_of(&node.tri).adjacency();
        if adj != node.heart.ext {
            return Err(DmsError::Identity(format!(
                "ext quiver {:?} differs from the triangulation quiver {:?}",
                node.heart.ext, adj
            )));
        }
        Ok(())
    }

    /// Flips arc `label` and tilts the heart at the same index.
    pub fn sync_flip(&self, node: &EGNode<F::Elem>, label: usize, dir: FlipDirection) -> Result<EGNode<F::Elem>> {
        let tri = node.tri.flip(label, dir)?;
        let heart = self.cat.tilt(&node.heart, label, dir)?;
        let mut duals = Vec::with_capacity(self.n());
        let mut shifts = Vec::with_capacity(self.n());
        for (i, x) in heart.simples.iter().enumerate() {
            if heart.simples[i] == node.heart.simples[i] {
                duals.push(node.duals[i].clone());
                shifts.push(node.shifts[i]);
                continue;
            }
            let hints = self.tilt_hints(&node.duals[label - 1], &node.duals[i], dir);
            let d = self.decode_with_hints(x, &hints).map_err(|e| {
                DmsError::Identity(format!("tilted simple {} is not a string module: {e}", i + 1))
            })?;
            duals.push(d.arc);
            shifts.push(d.shift);
        }
        let out = EGNode { heart, tri, duals, shifts };
        self.check_node(&out)?;
        Ok(out)
    }

    /// Candidate images of `eta` under the twist a tilt at `sigma` applies.
    fn tilt_hints(&self, sigma: &ArcClass, eta: &ArcClass, dir: FlipDirection) -> Vec<ArcClass> {
        let t = &self.base;
        let sign = if dir == FlipDirection::Forward { -1 } else { 1 };
        let z = shared_endpoints(t, sigma, eta);
        match z.len() {
            1 => twist_adjacent(t, sigma, eta, sign).into_iter().collect(),
            2 => {
                // arcs bounding a bigon: the image runs along sigma, eta, sigma
                let mut out = Vec::new();
                for &z0 in &z {
                    let z1 = if z0 == z[0] { z[1] } else { z[0] };
                    let a1 = ending_at(t, sigma, z0).unwrap();
                    let b = ending_at(t, eta, z0).unwrap().reversed(t);
                    let a2 = ending_at(t, sigma, z1).unwrap().reversed(t);
                    for s1 in [true, false] {
                        for s2 in [true, false] {
                            if let Ok(w) = join(t, &a1, &b, s1).and_then(|ab| join(t, &ab, &a2, s2)) {
                                out.push(w.canonical(t));
                            }
                        }
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Equal up to relabelling arcs by the permutation matching simples.
    pub fn node_equal(&self, a: &EGNode<F::Elem>, b: &EGNode<F::Elem>) -> Result<bool> {
        let Some(p) = self.cat.heart_iso(&a.heart, &b.heart)? else { return Ok(false) };
        if (0..p.len()).any(|i| a.duals[i] != b.duals[p[i]]) {
            return Ok(false);
        }
        let perm: Vec<usize> = p.iter().map(|k| k + 1).collect();
        let relabelled = a.tri.relabel(&perm)?;
        Ok(relabelled.canonical_code(true, true) == b.tri.canonical_code(true, true))
    }

    /// Replays flips `(label, direction)` from `node`.
    pub fn replay(&self, node: &EGNode<F::Elem>, moves: &[(usize, FlipDirection)]) -> Result<EGNode<F::Elem>> {
        let mut cur = node.clone();
        for &(l, d) in moves {
            cur = self.sync_flip(&cur, l, d)?;
        }
        Ok(cur)
    }

    /// Random synchronized flips. Moves whose dual arcs would cross the
    /// base triangulation more than `int_cap` times in total are skipped.
    pub fn random_walk(&self, steps: usize, seed: u64, int_cap: usize) -> Result<WalkReport> {
        self.random_walk_with(steps, seed, int_cap, &mut |_| {})
    }

    /// [`StringModel::random_walk`], calling `visit` on every accepted node.
    pub fn random_walk_with(
        &self,
        steps: usize,
        seed: u64,
        int_cap: usize,
        visit: &mut dyn FnMut(&EGNode<F::Elem>),
    ) -> Result<WalkReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut node = self.initial_node();
        let mut report = WalkReport::default();
        let mut stuck = 0usize;
        let mut cache: BTreeMap<(Vec<ArcClass>, usize, bool), usize> = BTreeMap::new();
        while report.steps < steps {
            let label = rng.gen_range(1..=self.n());
            let fwd = rng.gen_bool(0.5);
            let dir = if fwd { FlipDirection::Forward } else { FlipDirection::Backward };
            let code = node.duals.clone();
            if cache.contains_key(&(code.clone(), label, fwd)) {
                report.rejected += 1;
                stuck += 1;
                if stuck > 1000 {
                    return Err(DmsError::CapExceeded("random walk cannot move under the intersection cap".into()));
                }
                continue;
            }
            let next = self.sync_flip(&node, label, dir)?;
            let total: usize = next.duals.iter().map(|w| int_with_base(&self.base, w).1).sum();
            if total > int_cap {
                cache.insert((code, label, fwd), total);
                report.rejected += 1;
                stuck += 1;
                if stuck > 1000 {
                    return Err(DmsError::CapExceeded("random walk cannot move under the intersection cap".into()));
                }
                continue;
            }
            stuck = 0;
            report.max_total_int = report.max_total_int.max(total);
            if fwd {
                report.forward += 1;
            } else {
                report.backward += 1;
            }
            report.steps += 1;
            visit(&next);
            node = next;
        }
        Ok(report)
    }
}
