//! Unpunctured marked surfaces and their decorated ideal triangulations.
//!
//! A triangulation is a list of triangles, each with three side slots
//! listed counterclockwise. Internal sides carry an arc label in `1..=n`
//! and are glued in pairs; boundary sides carry a stable boundary-edge id.
//! Every triangle holds one decorating point, identified by an integer.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{DmsError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedSurface {
    pub genus: u32,
    /// Marked-point count on each boundary component.
    pub boundaries: Vec<u32>,
}

impl MarkedSurface {
    pub fn new(genus: u32, boundaries: Vec<u32>) -> Result<Self> {
        let s = MarkedSurface { genus, boundaries };
        surface_invariants(&s)?;
        Ok(s)
    }

    pub fn disk(m: u32) -> Result<Self> {
        Self::new(0, vec![m])
    }

    pub fn annulus(p: u32, q: u32) -> Result<Self> {
        Self::new(0, vec![p, q])
    }

    pub fn marked_points(&self) -> u32 {
        self.boundaries.iter().sum()
    }

    /// Number of arcs in any triangulation.
    pub fn arc_count(&self) -> usize {
        let n = 6 * self.genus as i64 + 3 * self.boundaries.len() as i64 + self.marked_points() as i64 - 6;
        n.max(0) as usize
    }

    /// Number of triangles in any triangulation.
    pub fn triangle_count(&self) -> usize {
        (2 * self.arc_count() + self.marked_points() as usize) / 3
    }

    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.boundaries.len() == 1
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundaries.len() == 2
    }
}

/// Returns `(n, aleph)`: the arc count and the triangle count.
pub fn surface_invariants(s: &MarkedSurface) -> Result<(usize, usize)> {
    if s.boundaries.is_empty() {
        return Err(DmsError::Input("a marked surface needs at least one boundary component".into()));
    }
    if s.boundaries.contains(&0) {
        return Err(DmsError::Input("every boundary component needs a marked point".into()));
    }
    let n = 6 * s.genus as i64 + 3 * s.boundaries.len() as i64 + s.marked_points() as i64 - 6;
    if n < 1 {
        return Err(DmsError::Input(format!(
            "surface has n = {n} arcs; at least one is required"
        )));
    }
    let twice = 2 * n + s.marked_points() as i64;
    if twice % 3 != 0 {
        return Err(DmsError::Input("triangle count is not integral".into()));
    }
    Ok((n as usize, (twice / 3) as usize))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// Internal arc with label in `1..=n`.
    Arc(usize),
    /// Boundary edge `index` of component `component`, running from marked
    /// point `index` to marked point `index + 1`.
    Boundary { component: usize, index: usize },
}

impl Side {
    pub fn arc(&self) -> Option<usize> {
        match self {
            Side::Arc(l) => Some(*l),
            Side::Boundary { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub tri: usize,
    pub side: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub sides: [Side; 3],
    pub decoration: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipDirection {
    Forward,
    Backward,
}

impl FlipDirection {
    pub fn inverse(self) -> Self {
        match self {
            FlipDirection::Forward => FlipDirection::Backward,
            FlipDirection::Backward => FlipDirection::Forward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Fan,
    Snake,
    Star,
    AnnulusStandard,
}

impl std::str::FromStr for Scheme {
    type Err = DmsError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fan" => Ok(Scheme::Fan),
            "snake" => Ok(Scheme::Snake),
            "star" => Ok(Scheme::Star),
            "annulus_standard" | "annulus" => Ok(Scheme::AnnulusStandard),
            _ => Err(DmsError::Input(format!("unknown scheme '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Triangulation {
    surface: MarkedSurface,
    triangles: Vec<Triangle>,
    #[serde(skip)]
    arcs: Vec<[Slot; 2]>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.triangles == other.triangles
    }
}

impl Eq for Triangulation {}

fn rotate_to_min(sides: [Side; 3]) -> ([Side; 3], usize) {
    let r = (0..3).min_by_key(|&r| sides[r]).unwrap();
    ([sides[r], sides[(r + 1) % 3], sides[(r + 2) % 3]], r)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

impl Triangulation {
    /// Builds and validates a triangulation from triangle side lists.
    /// Decorations are assigned `1..=aleph` in triangle order.
    pub fn from_sides(surface: MarkedSurface, sides: Vec<[Side; 3]>) -> Result<Self> {
        let triangles = sides
            .into_iter()
            .enumerate()
            .map(|(i, s)| Triangle {
                sides: rotate_to_min(s).0,
                decoration: i + 1,
            })
            .collect();
        Self::from_triangles(surface, triangles)
    }

    pub fn from_triangles(surface: MarkedSurface, triangles: Vec<Triangle>) -> Result<Self> {
        let mut t = Triangulation {
            surface,
            triangles,
            arcs: Vec::new(),
        };
        t.rebuild_slots()?;
        t.validate()?;
        Ok(t)
    }

    fn rebuild_slots(&mut self) -> Result<()> {
        let n = self.surface.arc_count();
        let mut found: Vec<Vec<Slot>> = vec![Vec::new(); n];
        for (ti, tri) in self.triangles.iter().enumerate() {
            for (k, side) in tri.sides.iter().enumerate() {
                if let Side::Arc(l) = side {
                    if *l == 0 || *l > n {
                        return Err(DmsError::Input(format!("arc label {l} out of range 1..={n}")));
                    }
                    found[l - 1].push(Slot { tri: ti, side: k });
                }
            }
        }
        self.arcs = found
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() == 2 {
                    Ok([v[0], v[1]])
                } else {
                    Err(DmsError::Input(format!(
                        "arc {} appears {} times, expected 2",
                        i + 1,
                        v.len()
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// Checks slot counts, gluing, decorations and the Euler characteristic.
    pub fn validate(&self) -> Result<()> {
        let (n, aleph) = surface_invariants(&self.surface)?;
        if self.triangles.len() != aleph {
            return Err(DmsError::Input(format!(
                "expected {aleph} triangles, found {}",
                self.triangles.len()
            )));
        }
        if self.arcs.len() != n {
            return Err(DmsError::Input("arc table out of date".into()));
        }
        let mut decs: Vec<usize> = self.triangles.iter().map(|t| t.decoration).collect();
        decs.sort_unstable();
        decs.dedup();
        if decs.len() != aleph {
            return Err(DmsError::Input("decorating ids must be distinct".into()));
        }

        let mut boundary_seen: BTreeMap<(usize, usize), Slot> = BTreeMap::new();
        for (ti, tri) in self.triangles.iter().enumerate() {
            for (k, side) in tri.sides.iter().enumerate() {
                if let Side::Boundary { component, index } = *side {
                    let ok = component < self.surface.boundaries.len()
                        && index < self.surface.boundaries[component] as usize;
                    if !ok || boundary_seen.insert((component, index), Slot { tri: ti, side: k }).is_some() {
                        return Err(DmsError::Input(format!(
                            "boundary edge ({component},{index}) invalid or repeated"
                        )));
                    }
                }
            }
        }
        let m = self.surface.marked_points() as usize;
        if boundary_seen.len() != m {
            return Err(DmsError::Input("missing boundary edges".into()));
        }

        // Corners w_k of each triangle plus one node per named marked point.
        let offsets: Vec<usize> = self
            .surface
            .boundaries
            .iter()
            .scan(0usize, |acc, &c| {
                let o = *acc;
                *acc += c as usize;
                Some(o)
            })
            .collect();
        let corner = |t: usize, k: usize| 3 * t + (k % 3);
        let point = |c: usize, i: usize| 3 * aleph + offsets[c] + i;
        let mut uf = UnionFind((0..3 * aleph + m).collect());
        for [a, b] in &self.arcs {
            uf.union(corner(a.tri, a.side), corner(b.tri, b.side + 1));
            uf.union(corner(a.tri, a.side + 1), corner(b.tri, b.side));
        }
        for (&(c, i), s) in &boundary_seen {
            let count = self.surface.boundaries[c] as usize;
            uf.union(corner(s.tri, s.side), point(c, i));
            uf.union(corner(s.tri, s.side + 1), point(c, (i + 1) % count));
        }
        let mut classes: HashMap<usize, usize> = HashMap::new();
        for c in 0..self.surface.boundaries.len() {
            for i in 0..self.surface.boundaries[c] as usize {
                *classes.entry(uf.find(point(c, i))).or_default() += 1;
            }
        }
        let mut roots: Vec<usize> = (0..3 * aleph).map(|x| uf.find(x)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() != m || classes.len() != m || classes.values().any(|&v| v != 1) {
            return Err(DmsError::Input(
                "vertex classes do not match the marked points (Euler characteristic mismatch)".into(),
            ));
        }
        let chi = m as i64 - (n + m) as i64 + aleph as i64;
        let expected = 2 - 2 * self.surface.genus as i64 - self.surface.boundaries.len() as i64;
        if chi != expected {
            return Err(DmsError::Input(format!("Euler characteristic {chi}, expected {expected}")));
        }
        Ok(())
    }

    pub fn surface(&self) -> &MarkedSurface {
        &self.surface
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn side(&self, s: Slot) -> Side {
        self.triangles[s.tri].sides[s.side % 3]
    }

    pub fn decoration(&self, tri: usize) -> usize {
        self.triangles[tri].decoration
    }

    /// The two slots carrying arc `label`.
    pub fn arc_slots(&self, label: usize) -> [Slot; 2] {
        self.arcs[label - 1]
    }

    /// The slot glued to `s`, if `s` is internal.
    pub fn partner(&self, s: Slot) -> Option<Slot> {
        let l = self.side(s).arc()?;
        let [a, b] = self.arcs[l - 1];
        Some(if a == s { b } else { a })
    }

    /// Side index of arc `label` in triangle `tri`.
    pub fn side_of(&self, tri: usize, label: usize) -> Option<usize> {
        self.triangles[tri].sides.iter().position(|s| *s == Side::Arc(label))
    }

    /// Decorations of the two triangles adjacent to arc `label`, sorted.
    pub fn arc_decorations(&self, label: usize) -> (usize, usize) {
        let [a, b] = self.arcs[label - 1];
        let (x, y) = (self.decoration(a.tri), self.decoration(b.tri));
        (x.min(y), x.max(y))
    }

    /// True iff no two triangles share two or more arcs, equivalently the
    /// quiver has no double arrows.
    pub fn is_valid_initial(&self) -> bool {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for [a, b] in &self.arcs {
            if a.tri == b.tri {
                return false;
            }
            let key = (a.tri.min(b.tri), a.tri.max(b.tri));
            *count.entry(key).or_default() += 1;
        }
        count.values().all(|&c| c < 2)
    }

    /// Re-diagonalizes the quadrilateral around arc `label`. The new arc
    /// keeps the label. Decorations move with the direction of the flip.
    pub fn flip(&self, label: usize, dir: FlipDirection) -> Result<Triangulation> {
        let n = self.arc_count();
        if label == 0 || label > n {
            return Err(DmsError::Input(format!("arc label {label} out of range 1..={n}")));
        }
        let [s1, s2] = self.arcs[label - 1];
        if s1.tri == s2.tri {
            return Err(DmsError::Unsupported(format!(
                "arc {label} bounds a single triangle on both sides"
            )));
        }
        let t1 = &self.triangles[s1.tri];
        let t2 = &self.triangles[s2.tri];
        let a = t1.sides[(s1.side + 1) % 3];
        let b = t1.sides[(s1.side + 2) % 3];
        let c = t2.sides[(s2.side + 1) % 3];
        let d = t2.sides[(s2.side + 2) % 3];
        let g = Side::Arc(label);
        let (z1, z2) = (t1.decoration, t2.decoration);
        // A triangle index stays with its decoration.
        let (with_z1, with_z2) = match dir {
            FlipDirection::Forward => ([g, b, c], [g, d, a]),
            FlipDirection::Backward => ([g, d, a], [g, b, c]),
        };
        let mut triangles = self.triangles.clone();
        triangles[s1.tri] = Triangle {
            sides: rotate_to_min(with_z1).0,
            decoration: z1,
        };
        triangles[s2.tri] = Triangle {
            sides: rotate_to_min(with_z2).0,
            decoration: z2,
        };
        let mut out = Triangulation {
            surface: self.surface.clone(),
            triangles,
            arcs: Vec::new(),
        };
        out.rebuild_slots()?;
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// A code equal for two triangulations iff they are combinatorially
    /// isomorphic by a map fixing every boundary edge.
    pub fn canonical_code(&self, with_decorations: bool, with_labels: bool) -> Vec<i64> {
        let mut start = None;
        for (ti, tri) in self.triangles.iter().enumerate() {
            for (k, s) in tri.sides.iter().enumerate() {
                if let Side::Boundary { component: 0, index: 0 } = s {
                    start = Some(Slot { tri: ti, side: k });
                }
            }
        }
        let start = start.expect("boundary edge (0,0) exists");
        let aleph = self.triangles.len();
        let mut order: Vec<Option<(usize, usize)>> = vec![None; aleph];
        order[start.tri] = Some((0, start.side));
        let mut queue = VecDeque::from([start.tri]);
        let mut next = 1usize;
        let mut code = Vec::with_capacity(aleph * 10);
        while let Some(t) = queue.pop_front() {
            let (_, rot) = order[t].unwrap();
            if with_decorations {
                code.push(self.triangles[t].decoration as i64);
            }
            for j in 0..3 {
                let slot = Slot { tri: t, side: (rot + j) % 3 };
                match self.side(slot) {
                    Side::Boundary { component, index } => {
                        code.extend([-1, component as i64, index as i64]);
                    }
                    Side::Arc(l) => {
                        let p = self.partner(slot).unwrap();
                        if order[p.tri].is_none() {
                            order[p.tri] = Some((next, p.side));
                            next += 1;
                            queue.push_back(p.tri);
                        }
                        let (idx, prot) = order[p.tri].unwrap();
                        code.extend([
                            idx as i64,
                            ((p.side + 3 - prot) % 3) as i64,
                            if with_labels { l as i64 } else { 0 },
                        ]);
                    }
                }
            }
        }
        code
    }

    /// Same triangulation up to boundary-fixing isomorphism, ignoring labels
    /// and decorations.
    pub fn same_underlying(&self, other: &Triangulation) -> bool {
        self.surface == other.surface && self.canonical_code(false, false) == other.canonical_code(false, false)
    }

    /// Relabels arcs: arc `l` becomes `perm[l - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Triangulation> {
        let triangles = self
            .triangles
            .iter()
            .map(|t| Triangle {
                sides: rotate_to_min(t.sides.map(|s| match s {
                    Side::Arc(l) => Side::Arc(perm[l - 1]),
                    b => b,
                }))
                .0,
                decoration: t.decoration,
            })
            .collect();
        Triangulation::from_triangles(self.surface.clone(), triangles)
    }
}

/// Triangulation of a polygon with vertices `0..m` listed counterclockwise.
/// Triangles are vertex triples in cyclic order; `diagonals[k]` receives
/// label `k + 1`.
pub fn polygon_triangulation(m: usize, tris: &[[usize; 3]], diagonals: &[(usize, usize)]) -> Result<Triangulation> {
    let surface = MarkedSurface::disk(m as u32)?;
    let label: HashMap<(usize, usize), usize> = diagonals
        .iter()
        .enumerate()
        .flat_map(|(k, &(u, v))| [((u, v), k + 1), ((v, u), k + 1)])
        .collect();
    let side = |u: usize, v: usize| -> Result<Side> {
        if v == (u + 1) % m {
            Ok(Side::Boundary { component: 0, index: u })
        } else {
            label
                .get(&(u, v))
                .map(|&l| Side::Arc(l))
                .ok_or_else(|| DmsError::Input(format!("diagonal ({u},{v}) has no label")))
        }
    };
    let sides = tris
        .iter()
        .map(|&[a, b, c]| Ok([side(a, b)?, side(b, c)?, side(c, a)?]))
        .collect::<Result<Vec<_>>>()?;
    Triangulation::from_sides(surface, sides)
}

fn diagonals_in_order(m: usize, tris: &[[usize; 3]]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &[a, b, c] in tris {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let key = (u.min(v), u.max(v));
            let boundary = v == (u + 1) % m || u == (v + 1) % m;
            if !boundary && !out.contains(&key) {
                out.push(key);
            }
        }
    }
    out
}

fn annulus_standard(p: u32, q: u32) -> Result<Triangulation> {
    if p == 1 && q == 1 {
        return Err(DmsError::Unsupported(
            "annulus with one marked point on each boundary has a double arrow, not a valid initial triangulation".into(),
        ));
    }
    let surface = MarkedSurface::annulus(p, q)?;
    let (p, q) = (p as usize, q as usize);
    let total = p + q;
    let arc = |t: usize| Side::Arc(t % total + 1);
    let (mut k_out, mut k_in) = (0usize, 0usize);
    let mut sides = Vec::with_capacity(total);
    for t in 0..total {
        let outer = k_in == q || (k_out < p && (k_out + 1) * q <= (k_in + 1) * p);
        if outer {
            sides.push([Side::Boundary { component: 0, index: k_out }, arc(t + 1), arc(t)]);
            k_out += 1;
        } else {
            // inner edge from point i_{l+1} to i_l carries index q - l - 1
            let index = (q - k_in - 1) % q;
            sides.push([Side::Boundary { component: 1, index }, arc(t), arc(t + 1)]);
            k_in += 1;
        }
    }
    Triangulation::from_sides(surface, sides)
}

pub fn standard_triangulation(s: &MarkedSurface, scheme: Scheme) -> Result<Triangulation> {
    match scheme {
        Scheme::Fan | Scheme::Snake | Scheme::Star if !s.is_disk() => Err(DmsError::Input(format!(
            "scheme {scheme:?} needs a disk"
        ))),
        Scheme::Fan => {
            let m = s.boundaries[0] as usize;
            let tris: Vec<[usize; 3]> = (0..m - 2).map(|i| [0, i + 1, i + 2]).collect();
            polygon_triangulation(m, &tris, &diagonals_in_order(m, &tris))
        }
        Scheme::Snake => {
            let m = s.boundaries[0] as usize;
            let mut tris = vec![[0, 1, m - 1]];
            let (mut a, mut b) = (1usize, m - 1);
            let mut toggle = true;
            while b - a > 1 {
                if toggle {
                    tris.push([a, b - 1, b]);
                    b -= 1;
                } else {
                    tris.push([a, a + 1, b]);
                    a += 1;
                }
                toggle = !toggle;
            }
            polygon_triangulation(m, &tris, &diagonals_in_order(m, &tris))
        }
        Scheme::Star => {
            if s.boundaries[0] != 6 {
                return Err(DmsError::Input("the star scheme is defined on the hexagon only".into()));
            }
            // Central triangle first; labels make the quiver 1 -> 2 -> 3 -> 1.
            let tris = [[2, 4, 0], [0, 1, 2], [2, 3, 4], [4, 5, 0]];
            polygon_triangulation(6, &tris, &[(0, 2), (4, 0), (2, 4)])
        }
        Scheme::AnnulusStandard => {
            if !s.is_annulus() {
                return Err(DmsError::Input("annulus_standard needs an annulus".into()));
            }
            annulus_standard(s.boundaries[0], s.boundaries[1])
        }
    }
}

/// The flip graph on underlying triangulations.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    pub nodes: Vec<Triangulation>,
    /// `(from, to, arc label)`, one entry per flip of each node.
    pub edges: Vec<(usize, usize, usize)>,
}

impl FlipGraph {
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Flip count per node (always n).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for e in &self.edges {
            d[e.0] += 1;
        }
        d
    }

    /// True iff the graph is a single simple cycle through every node.
    pub fn is_single_cycle(&self) -> bool {
        self.nodes.len() >= 3
            && self.is_connected()
            && (0..self.nodes.len()).all(|v| self.neighbours(v).len() == 2)
    }
}

fn default_start(s: &MarkedSurface) -> Result<Triangulation> {
    if s.is_disk() {
        standard_triangulation(s, Scheme::Fan)
    } else if s.is_annulus() && s.boundaries != [1, 1] {
        standard_triangulation(s, Scheme::AnnulusStandard)
    } else {
        Err(DmsError::Unsupported(
            "no standard triangulation for this surface; pass one explicitly".into(),
        ))
    }
}

/// BFS over flips from `start`, deduplicating by boundary-fixing isomorphism.
pub fn flip_graph_from(start: &Triangulation, max_count: usize) -> Result<FlipGraph> {
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut nodes = vec![start.clone()];
    index.insert(start.canonical_code(false, false), 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < nodes.len() {
        let t = nodes[head].clone();
        for l in 1..=t.arc_count() {
            let u = t.flip(l, FlipDirection::Forward)?;
            let code = u.canonical_code(false, false);
            let j = match index.get(&code) {
                Some(&j) => j,
                None => {
                    if nodes.len() >= max_count {
                        return Err(DmsError::CapExceeded(format!(
                            "more than {max_count} triangulations"
                        )));
                    }
                    index.insert(code, nodes.len());
                    nodes.push(u);
                    nodes.len() - 1
                }
            };
            edges.push((head, j, l));
        }
        head += 1;
    }
    Ok(FlipGraph { nodes, edges })
}

pub fn flip_graph(s: &MarkedSurface, max_count: usize) -> Result<FlipGraph> {
    flip_graph_from(&default_start(s)?, max_count)
}

pub fn enumerate_triangulations(s: &MarkedSurface, max_count: usize) -> Result<Vec<Triangulation>> {
    Ok(flip_graph(s, max_count)?.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_table() {
        assert_eq!(surface_invariants(&MarkedSurface { genus: 0, boundaries: vec![5] }).unwrap(), (2, 3));
        assert_eq!(surface_invariants(&MarkedSurface { genus: 0, boundaries: vec![6] }).unwrap(), (3, 4));
        assert_eq!(surface_invariants(&MarkedSurface { genus: 0, boundaries: vec![2, 3] }).unwrap(), (5, 5));
        assert!(MarkedSurface::disk(3).is_err());
        assert!(MarkedSurface::new(0, vec![]).is_err());
        assert!(MarkedSurface::new(0, vec![3, 0]).is_err());
    }

    #[test]
    fn schemes_validate() {
        for m in 4..10 {
            let s = MarkedSurface::disk(m).unwrap();
            for sc in [Scheme::Fan, Scheme::Snake] {
                let t = standard_triangulation(&s, sc).unwrap();
                assert_eq!(t.arc_count(), m as usize - 3);
                assert!(t.is_valid_initial());
            }
        }
        for (p, q) in [(1, 2), (2, 1), (2, 3), (3, 3), (1, 4)] {
            let s = MarkedSurface::annulus(p, q).unwrap();
            let t = standard_triangulation(&s, Scheme::AnnulusStandard).unwrap();
            assert!(t.is_valid_initial(), "{p},{q}");
        }
        let a11 = MarkedSurface::annulus(1, 1).unwrap();
        assert!(standard_triangulation(&a11, Scheme::AnnulusStandard).is_err());
        let pent = MarkedSurface::disk(5).unwrap();
        assert!(standard_triangulation(&pent, Scheme::Star).is_err());
    }

    #[test]
    fn flip_round_trip() {
        let s = MarkedSurface::disk(6).unwrap();
        let t = standard_triangulation(&s, Scheme::Star).unwrap();
        for l in 1..=3 {
            for d in [FlipDirection::Forward, FlipDirection::Backward] {
                let u = t.flip(l, d).unwrap().flip(l, d.inverse()).unwrap();
                assert_eq!(u, t);
            }
        }
    }

    #[test]
    fn double_forward_flip_swaps_decorations() {
        let s = MarkedSurface::disk(6).unwrap();
        let t = standard_triangulation(&s, Scheme::Star).unwrap();
        let u = t.flip(1, FlipDirection::Forward).unwrap().flip(1, FlipDirection::Forward).unwrap();
        assert!(u.same_underlying(&t));
        assert_ne!(u, t);
        assert_eq!(u.arc_decorations(1), t.arc_decorations(1));
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_triangulations(&MarkedSurface::disk(4).unwrap(), 100).unwrap().len(), 2);
        assert_eq!(enumerate_triangulations(&MarkedSurface::disk(5).unwrap(), 100).unwrap().len(), 5);
        assert_eq!(enumerate_triangulations(&MarkedSurface::disk(6).unwrap(), 100).unwrap().len(), 14);
        assert!(enumerate_triangulations(&MarkedSurface::disk(7).unwrap(), 10).is_err());
    }

    #[test]
    fn bad_gluing_rejected() {
        let s = MarkedSurface::disk(4).unwrap();
        let b = |i| Side::Boundary { component: 0, index: i };
        // both triangles list the boundary edges in the wrong cyclic order
        let bad = vec![[b(0), b(2), Side::Arc(1)], [b(1), b(3), Side::Arc(1)]];
        assert!(Triangulation::from_sides(s, bad).is_err());
    }
}
