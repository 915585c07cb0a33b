//! The graded CY3 algebra `E` of a quiver with potential, and the symbolic
//! Ginzburg dg algebra data.
//!
//! `E` is a category on the vertices. Basis elements are morphisms
//! `S_i -> S_j` of degree 0..=3: identities, one degree-1 element per
//! arrow `i -> j`, one degree-2 dual per arrow `j -> i`, and a degree-3
//! loop at every vertex. Vertices are 0-based here, arc label minus one.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{DmsError, Result};
use crate::quiver::QuiverWithPotential;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisKind {
    Idem,
    Arrow(usize),
    Dual(usize),
    Loop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElem {
    pub kind: BasisKind,
    pub source: usize,
    pub target: usize,
    pub degree: u8,
}

#[derive(Clone, Debug)]
pub struct CY3Algebra {
    n: usize,
    arrows: Vec<(usize, usize)>,
    names: Vec<String>,
    basis: Vec<BasisElem>,
    /// `mul[g * dim + f]` is `g∘f`.
    mul: Vec<Option<(usize, i8)>>,
    /// Basis ids per `(source, target)`, listed by degree.
    by_pair: Vec<Vec<usize>>,
}

impl CY3Algebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn elem(&self, id: usize) -> &BasisElem {
        &self.basis[id]
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn idem(&self, v: usize) -> usize {
        v
    }

    pub fn arrow(&self, a: usize) -> usize {
        self.n + a
    }

    pub fn dual(&self, a: usize) -> usize {
        self.n + self.arrows.len() + a
    }

    pub fn omega(&self, v: usize) -> usize {
        self.n + 2 * self.arrows.len() + v
    }

    /// Index of the arrow `i -> j`, if any.
    pub fn arrow_index(&self, i: usize, j: usize) -> Option<usize> {
        self.arrows.iter().position(|&a| a == (i, j))
    }

    /// Basis ids of `Hom(S_i, S_j)`.
    pub fn between(&self, i: usize, j: usize) -> &[usize] {
        &self.by_pair[i * self.n + j]
    }

    /// Basis ids of `Hom^d(S_i, S_j)`.
    pub fn between_deg(&self, i: usize, j: usize, d: i64) -> impl Iterator<Item = usize> + '_ {
        self.between(i, j)
            .iter()
            .copied()
            .filter(move |&b| self.basis[b].degree as i64 == d)
    }

    /// `g∘f` as `(basis id, coefficient)`, or `None` if zero.
    pub fn mul(&self, g: usize, f: usize) -> Option<(usize, i8)> {
        self.mul[g * self.basis.len() + f]
    }

    pub fn name(&self, id: usize) -> String {
        let b = &self.basis[id];
        match b.kind {
            BasisKind::Idem => format!("e{}", b.source + 1),
            BasisKind::Arrow(a) => self.names[a].clone(),
            BasisKind::Dual(a) => format!("{}*", self.names[a]),
            BasisKind::Loop => format!("w{}", b.source + 1),
        }
    }

    /// `dims[i][j][d]` = dimension of `Hom^d(S_i, S_j)`.
    pub fn hom_dim_table(&self) -> Vec<Vec<[usize; 4]>> {
        let mut t = vec![vec![[0usize; 4]; self.n]; self.n];
        for b in &self.basis {
            t[b.source][b.target][b.degree as usize] += 1;
        }
        t
    }

    fn check_structure(&self) -> Result<()> {
        let dim = self.dim();
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    let left = self.mul(x, y).and_then(|(xy, c)| self.mul(xy, z).map(|(r, d)| (r, c * d)));
                    let right = self.mul(y, z).and_then(|(yz, c)| self.mul(x, yz).map(|(r, d)| (r, c * d)));
                    if left != right {
                        return Err(DmsError::Identity(format!(
                            "associativity fails on ({}, {}, {})",
                            self.name(x),
                            self.name(y),
                            self.name(z)
                        )));
                    }
                }
            }
        }
        for (id, b) in self.basis.iter().enumerate() {
            if self.mul(self.idem(b.target), id) != Some((id, 1)) || self.mul(id, self.idem(b.source)) != Some((id, 1)) {
                return Err(DmsError::Identity(format!("unit fails on {}", self.name(id))));
            }
            let paired = self.between(b.target, b.source).iter().any(|&y| {
                let xy = self.mul(id, y);
                let yx = self.mul(y, id);
                xy.map(|(r, _)| r) == Some(self.omega(b.target)) && yx.map(|(r, _)| r) == Some(self.omega(b.source))
            });
            if !paired {
                return Err(DmsError::Identity(format!("pairing degenerate at {}", self.name(id))));
            }
        }
        Ok(())
    }
}

/// Builds `E` with all structure constants `+1` and checks associativity,
/// the unit and the CY pairing exhaustively.
pub fn build_cy3(qp: &QuiverWithPotential) -> Result<CY3Algebra> {
    if qp.double_arrows {
        return Err(DmsError::Unsupported(
            "double arrows: the triangulation has two triangles sharing two arcs (Kronecker-type case)".into(),
        ));
    }
    if qp.has_loops() {
        return Err(DmsError::Unsupported("quiver has loops".into()));
    }
    let n = qp.n;
    let arrows: Vec<(usize, usize)> = qp.arrows.iter().map(|a| (a.source - 1, a.target - 1)).collect();
    let names: Vec<String> = qp.arrows.iter().map(|a| a.name.clone()).collect();
    let na = arrows.len();

    let mut basis = Vec::with_capacity(2 * n + 2 * na);
    for v in 0..n {
        basis.push(BasisElem { kind: BasisKind::Idem, source: v, target: v, degree: 0 });
    }
    for (a, &(s, t)) in arrows.iter().enumerate() {
        basis.push(BasisElem { kind: BasisKind::Arrow(a), source: s, target: t, degree: 1 });
    }
    for (a, &(s, t)) in arrows.iter().enumerate() {
        basis.push(BasisElem { kind: BasisKind::Dual(a), source: t, target: s, degree: 2 });
    }
    for v in 0..n {
        basis.push(BasisElem { kind: BasisKind::Loop, source: v, target: v, degree: 3 });
    }
    let dim = basis.len();

    // (outer, inner) -> remaining arrow, for consecutive arrows of a term
    let mut consecutive = std::collections::HashMap::new();
    for t in &qp.potential {
        for r in 0..3 {
            consecutive.insert((t[r], t[(r + 1) % 3]), t[(r + 2) % 3]);
        }
    }

    let mut mul = vec![None; dim * dim];
    for g in 0..dim {
        for f in 0..dim {
            let (bg, bf) = (basis[g], basis[f]);
            if bg.source != bf.target || bg.degree + bf.degree > 3 {
                continue;
            }
            let r = match (bg.kind, bf.kind) {
                (BasisKind::Idem, _) => Some(f),
                (_, BasisKind::Idem) => Some(g),
                (BasisKind::Arrow(b), BasisKind::Arrow(a)) => consecutive.get(&(b, a)).map(|&c| n + na + c),
                (BasisKind::Dual(x), BasisKind::Arrow(a)) if x == a => Some(n + 2 * na + arrows[a].0),
                (BasisKind::Arrow(a), BasisKind::Dual(x)) if x == a => Some(n + 2 * na + arrows[a].1),
                _ => None,
            };
            mul[g * dim + f] = r.map(|r| (r, 1));
        }
    }

    let mut by_pair = vec![Vec::new(); n * n];
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&b| (basis[b].degree, b));
    for b in order {
        by_pair[basis[b].source * n + basis[b].target].push(b);
    }

    let e = CY3Algebra { n, arrows, names, basis, mul, by_pair };
    e.check_structure()?;
    Ok(e)
}

/// Ext-quiver DOT: one edge per basis element of positive degree.
pub fn ext_quiver_dot(e: &CY3Algebra) -> String {
    let mut s = String::from("digraph ext {\n");
    for v in 0..e.n() {
        let _ = writeln!(s, "  S{};", v + 1);
    }
    for (id, b) in e.basis().iter().enumerate() {
        if b.degree > 0 {
            let _ = writeln!(
                s,
                "  S{} -> S{} [label=\"{}\", taillabel=\"{}\"];",
                b.source + 1,
                b.target + 1,
                b.degree,
                e.name(id)
            );
        }
    }
    s.push_str("}\n");
    s
}

/// Noncommutative polynomial: signed words of symbols in composition order.
pub type NcPoly = Vec<(i64, Vec<String>)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedArrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GinzburgData {
    pub vertices: usize,
    pub arrows: Vec<GradedArrow>,
    /// `(generator, d(generator))`; generators with zero differential and
    /// degree 0 are omitted.
    pub differential: Vec<(String, NcPoly)>,
}

fn render_poly(p: &NcPoly) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (c, w)) in p.iter().enumerate() {
        let word: String = w.concat();
        let mag = c.abs();
        let body = if mag == 1 { word } else { format!("{mag}{word}") };
        match (i, *c < 0) {
            (0, false) => s.push_str(&body),
            (0, true) => {
                s.push('-');
                s.push_str(&body);
            }
            (_, false) => {
                s.push_str(" + ");
                s.push_str(&body);
            }
            (_, true) => {
                s.push_str(" - ");
                s.push_str(&body);
            }
        }
    }
    s
}

impl GinzburgData {
    /// One line per generator, in the notation `d(a*) = bc`.
    pub fn to_text(&self) -> String {
        self.differential
            .iter()
            .map(|(g, p)| format!("d({g}) = {}\n", render_poly(p)))
            .collect()
    }
}

pub fn ginzburg_export(qp: &QuiverWithPotential) -> GinzburgData {
    let name = |a: usize| qp.arrows[a].name.clone();
    let star = |a: usize| format!("{}*", qp.arrows[a].name);
    let mut arrows = Vec::new();
    for a in &qp.arrows {
        arrows.push(GradedArrow { name: a.name.clone(), source: a.source, target: a.target, degree: 0 });
    }
    for a in &qp.arrows {
        arrows.push(GradedArrow { name: format!("{}*", a.name), source: a.target, target: a.source, degree: -1 });
    }
    for v in 1..=qp.n {
        arrows.push(GradedArrow { name: format!("f_{v}"), source: v, target: v, degree: -2 });
    }
    let mut differential = Vec::new();
    for a in 0..qp.arrows.len() {
        let mut p: NcPoly = Vec::new();
        for t in &qp.potential {
            for r in 0..3 {
                if t[r] == a {
                    p.push((1, vec![name(t[(r + 1) % 3]), name(t[(r + 2) % 3])]));
                }
            }
        }
        differential.push((star(a), p));
    }
    differential.sort_by(|x, y| x.0.cmp(&y.0));
    for v in 1..=qp.n {
        let mut p: NcPoly = Vec::new();
        for (a, arr) in qp.arrows.iter().enumerate() {
            if arr.target == v {
                p.push((1, vec![name(a), star(a)]));
            }
        }
        for (a, arr) in qp.arrows.iter().enumerate() {
            if arr.source == v {
                p.push((-1, vec![star(a), name(a)]));
            }
        }
        differential.push((format!("f_{v}"), p));
    }
    GinzburgData { vertices: qp.n, arrows, differential }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let q = QuiverWithPotential::new(1, vec![], vec![]);
        let e = build_cy3(&q).unwrap();
        assert_eq!(e.dim(), 2);
        assert_eq!(e.mul(e.idem(0), e.omega(0)), Some((e.omega(0), 1)));
        assert_eq!(e.mul(e.omega(0), e.idem(0)), Some((e.omega(0), 1)));
        assert_eq!(e.mul(e.omega(0), e.omega(0)), None);
    }

    #[test]
    fn a2_products() {
        let q = QuiverWithPotential::new(2, vec![(1, 2, 0)], vec![]);
        let e = build_cy3(&q).unwrap();
        assert_eq!(e.dim(), 6);
        assert_eq!(e.mul(e.dual(0), e.arrow(0)), Some((e.omega(0), 1)));
        assert_eq!(e.mul(e.arrow(0), e.dual(0)), Some((e.omega(1), 1)));
        let t = e.hom_dim_table();
        assert_eq!(t[0][1], [0, 1, 0, 0]);
        assert_eq!(t[1][0], [0, 0, 1, 0]);
    }

    #[test]
    fn disconnected_pair() {
        let q = QuiverWithPotential::new(2, vec![], vec![]);
        let t = build_cy3(&q).unwrap().hom_dim_table();
        assert_eq!(t[0][1], [0; 4]);
        assert_eq!(t[0][0], [1, 0, 0, 1]);
    }

    #[test]
    fn double_arrows_rejected() {
        let q = QuiverWithPotential::new(2, vec![(1, 2, 0), (1, 2, 1)], vec![]);
        assert!(matches!(build_cy3(&q), Err(DmsError::Unsupported(_))));
    }

    #[test]
    fn empty_potential_export() {
        let q = QuiverWithPotential::new(2, vec![(1, 2, 0)], vec![]);
        let text = ginzburg_export(&q).to_text();
        assert_eq!(text, "d(a*) = 0\nd(f_1) = -a*a\nd(f_2) = aa*\n");
    }
}
