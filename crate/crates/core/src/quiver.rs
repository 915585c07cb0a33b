//! The quiver with potential of a triangulation.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::surface::Triangulation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    /// Arc label of the source vertex.
    pub source: usize,
    /// Arc label of the target vertex.
    pub target: usize,
    /// Index of the triangle the arrow comes from.
    pub triangle: usize,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverWithPotential {
    /// Vertices are `1..=n`.
    pub n: usize,
    /// Sorted by `(source, target, triangle)`.
    pub arrows: Vec<Arrow>,
    /// Each term `[x, y, z]` is the cycle `x∘y∘z` (apply `z` first).
    pub potential: Vec<[usize; 3]>,
    pub double_arrows: bool,
}

fn letter_name(k: usize, total: usize) -> String {
    if total <= 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("a{}", k + 1)
    }
}

impl QuiverWithPotential {
    /// Builds from raw arrows `(source, target, triangle)` and terms given as
    /// indices into that list. Arrow order and term order do not matter.
    pub fn new(n: usize, raw: Vec<(usize, usize, usize)>, terms: Vec<[usize; 3]>) -> Self {
        let mut idx: Vec<usize> = (0..raw.len()).collect();
        idx.sort_by_key(|&i| raw[i]);
        let mut pos = vec![0; raw.len()];
        for (new, &old) in idx.iter().enumerate() {
            pos[old] = new;
        }
        let mut potential: Vec<[usize; 3]> = terms
            .iter()
            .map(|t| {
                let t = t.map(|i| pos[i]);
                // rotate so the outermost arrow ends at the largest vertex
                let r = (0..3).max_by_key(|&r| raw[idx[t[r]]].1).unwrap();
                [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
            })
            .collect();
        potential.sort_by_key(|t| raw[idx[t[0]]].2);

        let total = raw.len();
        let mut names: Vec<Option<String>> = vec![None; total];
        let mut k = 0;
        for t in &potential {
            for &a in t {
                if names[a].is_none() {
                    names[a] = Some(letter_name(k, total));
                    k += 1;
                }
            }
        }
        for name in names.iter_mut() {
            if name.is_none() {
                *name = Some(letter_name(k, total));
                k += 1;
            }
        }
        let arrows: Vec<Arrow> = idx
            .iter()
            .zip(names)
            .map(|(&old, name)| Arrow {
                source: raw[old].0,
                target: raw[old].1,
                triangle: raw[old].2,
                name: name.unwrap(),
            })
            .collect();

        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for a in &arrows {
            *pairs.entry((a.source.min(a.target), a.source.max(a.target))).or_default() += 1;
        }
        let double_arrows = pairs.values().any(|&c| c > 1);
        QuiverWithPotential {
            n,
            arrows,
            potential,
            double_arrows,
        }
    }

    /// `adj[i][j]` = number of arrows from vertex `i + 1` to `j + 1`.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for a in &self.arrows {
            m[a.source - 1][a.target - 1] += 1;
        }
        m
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(|a| a.source == a.target)
    }

    /// Arrow index of the arrow from `i` to `j`, if unique.
    pub fn arrow_between(&self, i: usize, j: usize) -> Option<usize> {
        let mut it = self.arrows.iter().enumerate().filter(|(_, a)| a.source == i && a.target == j);
        let first = it.next()?.0;
        it.next().is_none().then_some(first)
    }

    pub fn potential_string(&self) -> String {
        if self.potential.is_empty() {
            return "0".to_string();
        }
        self.potential
            .iter()
            .map(|t| t.iter().map(|&a| self.arrows[a].name.as_str()).collect::<String>())
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "// potential: {}", self.potential_string());
        for t in &self.potential {
            let _ = writeln!(
                s,
                "// term from triangle {}: {}",
                self.arrows[t[0]].triangle,
                t.iter().map(|&a| self.arrows[a].name.as_str()).collect::<String>()
            );
        }
        s.push_str("digraph quiver {\n");
        for v in 1..=self.n {
            let _ = writeln!(s, "  {v};");
        }
        for a in &self.arrows {
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{} (t{})\"];",
                a.source, a.target, a.name, a.triangle
            );
        }
        s.push_str("}\n");
        s
    }
}

/// Reads off the quiver: in a triangle with sides `s0, s1, s2` listed
/// counterclockwise there is an arrow `s(k+1) -> s(k)` for each pair of
/// internal sides, and a potential term when all three sides are internal.
pub fn quiver_of(t: &Triangulation) -> QuiverWithPotential {
    let mut raw = Vec::new();
    let mut terms = Vec::new();
    for (ti, tri) in t.triangles().iter().enumerate() {
        let mut local = [None; 3];
        for k in 0..3 {
            if let (Some(tgt), Some(src)) = (tri.sides[k].arc(), tri.sides[(k + 1) % 3].arc()) {
                local[k] = Some(raw.len());
                raw.push((src, tgt, ti));
            }
        }
        if let [Some(x), Some(y), Some(z)] = local {
            terms.push([x, y, z]);
        }
    }
    QuiverWithPotential::new(t.arc_count(), raw, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{standard_triangulation, FlipDirection, MarkedSurface, Scheme};

    #[test]
    fn hexagon_star_is_oriented_cycle() {
        let t = standard_triangulation(&MarkedSurface::disk(6).unwrap(), Scheme::Star).unwrap();
        let q = quiver_of(&t);
        let pairs: Vec<_> = q.arrows.iter().map(|a| (a.source, a.target, a.name.as_str())).collect();
        assert_eq!(pairs, vec![(1, 2, "b"), (2, 3, "a"), (3, 1, "c")]);
        assert_eq!(q.potential_string(), "abc");
        assert!(!q.double_arrows);
    }

    #[test]
    fn pentagon_fan_is_a2() {
        let t = standard_triangulation(&MarkedSurface::disk(5).unwrap(), Scheme::Fan).unwrap();
        let q = quiver_of(&t);
        assert_eq!(q.arrows.len(), 1);
        assert!(q.potential.is_empty());
    }

    #[test]
    fn annulus_quiver_is_connected_affine() {
        let t = standard_triangulation(&MarkedSurface::annulus(2, 3).unwrap(), Scheme::AnnulusStandard).unwrap();
        let q = quiver_of(&t);
        assert_eq!(q.n, 5);
        assert_eq!(q.arrows.len(), 5);
        assert!(q.potential.is_empty());
        assert!(!q.double_arrows);
        let fwd = q.arrows.iter().filter(|a| a.target == a.source % 5 + 1).count();
        assert_eq!(fwd, 2);
    }

    #[test]
    fn star_flip_breaks_cycle() {
        let t = standard_triangulation(&MarkedSurface::disk(6).unwrap(), Scheme::Star).unwrap();
        for l in 1..=3 {
            let q = quiver_of(&t.flip(l, FlipDirection::Forward).unwrap());
            assert_eq!(q.arrows.len(), 2);
            assert!(q.potential.is_empty());
        }
    }
}
