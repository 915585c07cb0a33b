//! Spherical twists, the braid-twist action on arcs, and relator checks.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dgmod::{DGModule, DgCat, HomMap};
use crate::error::{DmsError, Result};
use crate::field::Field;
use crate::quiver::QuiverWithPotential;
use crate::strings::{shared_endpoints, twist_adjacent, ArcClass, HalfInt, StringModel};

/// Letters `(generator, ±1)`; generators are 1-based. The word
/// `b1 b2' b3` is the composite `b1 ∘ b2^-1 ∘ b3`, so the rightmost
/// letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub letters: Vec<(usize, i8)>,
}

impl BraidWord {
    pub fn new(letters: Vec<(usize, i8)>) -> Self {
        BraidWord { letters }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn gen(i: usize, e: i8) -> Self {
        BraidWord { letters: vec![(i, e)] }
    }

    /// Word from generator indices, all with exponent +1.
    pub fn positive(gens: &[usize]) -> Self {
        BraidWord { letters: gens.iter().map(|&g| (g, 1)).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        BraidWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { letters }
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.letters.iter().find(|(g, _)| *g == 0 || *g > n) {
            Some((g, _)) => Err(DmsError::Input(format!("generator b{g} out of range 1..={n}"))),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.letters.iter().map(|&(g, e)| g as i64 * e as i64).collect::<Vec<_>>())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || DmsError::Input("braid word json must be a list of nonzero integers".into());
        let arr = v.as_array().ok_or_else(bad)?;
        let letters = arr
            .iter()
            .map(|x| match x.as_i64() {
                Some(0) | None => Err(bad()),
                Some(k) => Ok((k.unsigned_abs() as usize, k.signum() as i8)),
            })
            .collect::<Result<_>>()?;
        Ok(BraidWord { letters })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> =
            self.letters.iter().map(|&(g, e)| if e > 0 { format!("b{g}") } else { format!("b{g}'") }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = DmsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(BraidWord::identity());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (body, e) = match tok.strip_suffix('\'') {
                Some(b) => (b, -1),
                None => (tok, 1),
            };
            let g: usize = body
                .strip_prefix('b')
                .and_then(|d| d.parse().ok())
                .filter(|&g| g > 0)
                .ok_or_else(|| DmsError::Input(format!("bad braid letter '{tok}'")))?;
            letters.push((g, e));
        }
        Ok(BraidWord { letters })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelatorKind {
    Commutation,
    Braid,
    Cyclic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relator {
    pub kind: RelatorKind,
    pub lhs: BraidWord,
    pub rhs: BraidWord,
}

impl Relator {
    pub fn id(&self) -> String {
        format!("{:?}: {} = {}", self.kind, self.lhs, self.rhs)
    }
}

pub type RelatorSet = Vec<Relator>;

/// `R_i = t_{v_i} t_{v_{i+1}} ... ` of length `2m - 2` along a cycle.
pub fn cyclic_word(cycle: &[usize], i: usize) -> BraidWord {
    let m = cycle.len();
    BraidWord::positive(&(0..2 * m - 2).map(|k| cycle[(i + k) % m]).collect::<Vec<_>>())
}

/// Vertices (1-based) of a potential term in path order.
pub fn term_cycle(qp: &QuiverWithPotential, term: &[usize; 3]) -> Vec<usize> {
    // the term is a0 a1 a2 as a composite, so a2 is traversed first
    let a2 = &qp.arrows[term[2]];
    let a1 = &qp.arrows[term[1]];
    vec![a2.source, a2.target, a1.target]
}

/// With `cycle_extra`, also the pair `(R_1, R_3)` per term.
pub fn relators_with(qp: &QuiverWithPotential, cycle_extra: bool) -> Result<RelatorSet> {
    if qp.double_arrows {
        return Err(DmsError::Unsupported("quiver has double arrows".into()));
    }
    let adj = qp.adjacency();
    let mut out = Vec::new();
    for i in 1..=qp.n {
        for j in i + 1..=qp.n {
            let edges = adj[i - 1][j - 1] + adj[j - 1][i - 1];
            let (kind, lhs, rhs) = match edges {
                0 => (RelatorKind::Commutation, vec![i, j], vec![j, i]),
                _ => (RelatorKind::Braid, vec![i, j, i], vec![j, i, j]),
            };
            out.push(Relator { kind, lhs: BraidWord::positive(&lhs), rhs: BraidWord::positive(&rhs) });
        }
    }
    for term in &qp.potential {
        let cycle = term_cycle(qp, term);
        let r1 = cyclic_word(&cycle, 0);
        out.push(Relator { kind: RelatorKind::Cyclic, lhs: r1.clone(), rhs: cyclic_word(&cycle, 1) });
        if cycle_extra {
            out.push(Relator { kind: RelatorKind::Cyclic, lhs: r1, rhs: cyclic_word(&cycle, 2) });
        }
    }
    Ok(out)
}

pub fn relators_of(qp: &QuiverWithPotential) -> Result<RelatorSet> {
    relators_with(qp, false)
}

impl<F: Field> DgCat<F> {
    /// `φ_S(X)` for `sign = 1`, `φ_S^-1(X)` for `sign = -1`; minimized.
    pub fn spherical_twist(&self, s: &DGModule<F::Elem>, x: &DGModule<F::Elem>, sign: i8) -> Result<DGModule<F::Elem>> {
        if !self.is_spherical(s) {
            return Err(DmsError::NotSpherical);
        }
        if sign > 0 {
            // ⊕ S[-t] ⊗ H^t(S, X) -> X
            let reps = self.cohomology_basis(s, x);
            let copies: Vec<(DGModule<F::Elem>, &HomMap<F::Elem>)> = reps
                .iter()
                .flat_map(|(t, maps)| maps.iter().map(move |m| (*t, m)))
                .map(|(t, m)| (self.shift(s, -t), m))
                .collect();
            let src = self.direct_sum(&copies.iter().map(|(c, _)| c).collect::<Vec<_>>());
            let mut ev = HomMap { degree: 0, comps: Default::default() };
            for (k, (_, m)) in copies.iter().enumerate() {
                let off = k * s.len();
                for (&(a, b), l) in &m.comps {
                    ev.comps.insert((off + a, b), l.clone());
                }
            }
            let c = self.cone(&src, x, &ev)?;
            Ok(c)
        } else {
            // X -> ⊕ S[t] ⊗ H^t(X, S)^∨, then [-1]
            let reps = self.cohomology_basis(x, s);
            let copies: Vec<(DGModule<F::Elem>, &HomMap<F::Elem>)> = reps
                .iter()
                .flat_map(|(t, maps)| maps.iter().map(move |m| (*t, m)))
                .map(|(t, m)| (self.shift(s, t), m))
                .collect();
            let tgt = self.direct_sum(&copies.iter().map(|(c, _)| c).collect::<Vec<_>>());
            let mut co = HomMap { degree: 0, comps: Default::default() };
            for (k, (_, m)) in copies.iter().enumerate() {
                let off = k * s.len();
                for (&(a, b), l) in &m.comps {
                    co.comps.insert((a, off + b), l.clone());
                }
            }
            let c = self.cone(x, &tgt, &co)?;
            Ok(self.shift(&c, -1))
        }
    }

    /// Applies a braid word through generator twists `b_i ↦ φ_{S_i}`.
    pub fn act(&self, w: &BraidWord, x: &DGModule<F::Elem>) -> Result<DGModule<F::Elem>> {
        w.check_range(self.alg.n())?;
        let mut y = x.clone();
        for &(g, e) in w.letters.iter().rev() {
            y = self.spherical_twist(&self.simple(g - 1), &y, e)?;
        }
        Ok(y)
    }

    /// Applies `w` with twists along arbitrary sphericals `gens[i-1]`.
    pub fn act_with(&self, gens: &[DGModule<F::Elem>], w: &BraidWord, x: &DGModule<F::Elem>) -> Result<DGModule<F::Elem>> {
        w.check_range(gens.len())?;
        let mut y = x.clone();
        for &(g, e) in w.letters.iter().rev() {
            y = self.spherical_twist(&gens[g - 1], &y, e)?;
        }
        Ok(y)
    }

    /// Whether `w1` and `w2` agree on every probe up to one common shift.
    /// On failure returns the index of the first witness probe.
    pub fn action_equal_modules(
        &self,
        w1: &BraidWord,
        w2: &BraidWord,
        probes: &[DGModule<F::Elem>],
    ) -> Result<std::result::Result<i64, usize>> {
        let mut common: Option<i64> = None;
        for (i, p) in probes.iter().enumerate() {
            let a = self.act(w1, p)?;
            let b = self.act(w2, p)?;
            match self.iso_up_to_shift(&a, &b)? {
                Some(k) if common.is_none_or(|c| c == k) => common = Some(k),
                _ => return Ok(Err(i)),
            }
        }
        Ok(Ok(common.unwrap_or(0)))
    }
}

/// Result of acting on an arc: the image with base shift normalized to 0
/// and the shift it carried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActedArc {
    pub arc: ArcClass,
    pub shift: i64,
}

/// Memo for word-level generator twists.
pub type TwistMemo = HashMap<(usize, i8, ArcClass), ArcClass>;

impl<F: Field> StringModel<F> {
    /// `B_{s_g}^{sign}(η)` on words. A generator moves `s_i` only when the
    /// two dual arcs share an endpoint; longer arcs are split with
    /// [`StringModel::decompose`] and rebuilt from the images of the parts,
    /// using `B_{ψ(α)}(ψ(β)) = ψ(B_α(β))`.
    pub fn generator_twist_arc(&self, g: usize, eta: &ArcClass, sign: i8, memo: &mut TwistMemo) -> Result<ArcClass> {
        let key = (g, sign, eta.clone());
        if let Some(r) = memo.get(&key) {
            return Ok(r.clone());
        }
        let t = &self.base;
        let out = if eta.turns.is_empty() {
            let sg = self.s(g);
            if *eta != sg && shared_endpoints(t, &sg, eta).len() == 1 {
                twist_adjacent(t, &sg, eta, sign)?
            } else {
                eta.clone()
            }
        } else {
            let (a, b, _) = self.decompose(eta)?;
            let a2 = self.generator_twist_arc(g, &a, sign, memo)?;
            let b2 = self.generator_twist_arc(g, &b, sign, memo)?;
            twist_adjacent(t, &a2, &b2, 1)?
        };
        memo.insert(key, out.clone());
        Ok(out)
    }

    /// The image of `arc` under `w`, computed on words only.
    pub fn braid_arc(&self, w: &BraidWord, arc: &ArcClass, memo: &mut TwistMemo) -> Result<ArcClass> {
        w.check_range(self.n())?;
        let mut cur = arc.clone();
        for &(g, e) in w.letters.iter().rev() {
            cur = self.generator_twist_arc(g, &cur, e, memo)?;
        }
        Ok(cur)
    }

    /// Twists the module of `arc` by `w` and identifies the image, first
    /// against the word-level prediction, then by decoding.
    pub fn braid_act(&self, w: &BraidWord, arc: &ArcClass) -> Result<ActedArc> {
        self.braid_act_with(w, arc, &mut TwistMemo::new())
    }

    pub fn braid_act_with(&self, w: &BraidWord, arc: &ArcClass, memo: &mut TwistMemo) -> Result<ActedArc> {
        Ok(self.braid_act_module(w, arc, memo)?.1)
    }

    /// As [`StringModel::braid_act`], also returning the twisted module.
    pub fn braid_act_module(
        &self,
        w: &BraidWord,
        arc: &ArcClass,
        memo: &mut TwistMemo,
    ) -> Result<(DGModule<F::Elem>, ActedArc)> {
        let x = self.module(arc);
        let y = self.cat.act(w, &x)?;
        let hint: Vec<ArcClass> = self.braid_arc(w, arc, memo).into_iter().collect();
        let d = self.decode_with_hints(&y, &hint).map_err(|e| {
            DmsError::Identity(format!("image of {} under {w} is not a string: {e}", arc.to_text(&self.base)))
        })?;
        Ok((y, ActedArc { arc: d.arc, shift: d.shift }))
    }

    /// The standard probes `s_1..s_n` followed by `extra`.
    pub fn probe_modules(&self, extra: &[ArcClass]) -> Vec<DGModule<F::Elem>> {
        (1..=self.n()).map(|i| self.module(&self.s(i))).chain(extra.iter().map(|a| self.module(a))).collect()
    }

    pub fn action_equal(&self, w1: &BraidWord, w2: &BraidWord, probes: &[ArcClass]) -> Result<bool> {
        let mods: Vec<_> = probes.iter().map(|a| self.module(a)).collect();
        Ok(self.cat.action_equal_modules(w1, w2, &mods)?.is_ok())
    }

    /// Half the total dimension of `Hom•(X_a1, X_a2)`.
    pub fn int_categorical(&self, a1: &ArcClass, a2: &ArcClass) -> HalfInt {
        HalfInt(self.cat.hom_total(&self.module(a1), &self.module(a2)) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_word_syntax() {
        let w: BraidWord = "b1 b2' b3".parse().unwrap();
        assert_eq!(w.letters, vec![(1, 1), (2, -1), (3, 1)]);
        assert_eq!(w.to_string(), "b1 b2' b3");
        assert_eq!(w.inverse().to_string(), "b3' b2 b1'");
        assert_eq!(BraidWord::from_json(&w.to_json()).unwrap(), w);
        assert!("b0".parse::<BraidWord>().is_err());
        assert!("c1".parse::<BraidWord>().is_err());
        assert_eq!("id".parse::<BraidWord>().unwrap(), BraidWord::identity());
    }

    #[test]
    fn cyclic_words() {
        assert_eq!(cyclic_word(&[1, 2, 3], 0).to_string(), "b1 b2 b3 b1");
        assert_eq!(cyclic_word(&[1, 2, 3], 1).to_string(), "b2 b3 b1 b2");
    }
}
