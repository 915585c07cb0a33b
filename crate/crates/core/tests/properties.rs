use std::sync::LazyLock;

use dms_core::field::{PrimeField, Rationals};
use dms_core::strings::{parse_word, reduce, reduce_at, walk, CrossingWord, StringModel};
use dms_core::surface::Slot;
use dms_core::twists::BraidWord;
use dms_core::verify::parse_surface;
use proptest::prelude::*;

const SURFACES: [&str; 3] = ["hexagon-star", "annulus(1,2)", "disk(7)-snake"];

static PRIME: LazyLock<Vec<StringModel<PrimeField>>> = LazyLock::new(|| {
    SURFACES.iter().map(|s| StringModel::new(parse_surface(s).unwrap(), PrimeField::default()).unwrap()).collect()
});

static RATIONAL: LazyLock<Vec<StringModel<Rationals>>> =
    LazyLock::new(|| SURFACES.iter().map(|s| StringModel::new(parse_surface(s).unwrap(), Rationals).unwrap()).collect());

fn braid(n: usize, raw: &[(usize, bool)]) -> BraidWord {
    BraidWord::new(raw.iter().map(|&(g, inv)| (g % n + 1, if inv { -1 } else { 1 })).collect())
}

fn braid_strategy() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..8, any::<bool>()), 0..5)
}

/// Image of a dual arc under a short braid, or `None` if it grows too long.
fn arc(m: &StringModel<PrimeField>, raw: &[(usize, bool)], probe: usize) -> Option<CrossingWord> {
    let a = m.braid_act(&braid(m.n(), raw), &m.s(probe % m.n() + 1)).ok()?;
    (a.arc.len() <= 14).then_some(a.arc)
}

/// Starts at a slot and keeps only those proposed turns that stay inside the surface.
fn rough_walk(m: &StringModel<PrimeField>, slot: usize, proposals: &[i8]) -> Option<(Slot, Vec<i8>)> {
    let t = &m.base;
    let slots: Vec<Slot> =
        (0..t.triangles().len()).flat_map(|tri| (0..3).map(move |side| Slot { tri, side })).filter(|&s| t.side(s).arc().is_some()).collect();
    let start = slots[slot % slots.len()];
    let mut turns = Vec::new();
    for &r in proposals {
        turns.push(r);
        if walk(t, start, &turns).is_err() {
            turns.pop();
        }
    }
    Some((start, turns))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digon_removal_is_confluent(
        s in 0usize..3,
        slot in 0usize..64,
        proposals in prop::collection::vec(-3i8..=3, 0..12),
        order in prop::collection::vec(any::<usize>(), 12),
    ) {
        let m = &PRIME[s];
        let (start, turns) = rough_walk(m, slot, &proposals).unwrap();
        let Ok(expected) = reduce(&m.base, start, &turns) else { return Ok(()) };
        let mut cur = (Some(start), turns);
        let mut k = 0;
        while let (Some(st), ref t) = cur {
            let zeros: Vec<usize> = (0..t.len()).filter(|&i| t[i] == 0).collect();
            if zeros.is_empty() {
                break;
            }
            let i = zeros[order[k % order.len()] % zeros.len()];
            k += 1;
            cur = reduce_at(st, t, i);
        }
        match (cur, expected) {
            (( None, _), None) => {}
            ((Some(st), t), Some(w)) => {
                prop_assert_eq!(CrossingWord::new(&m.base, st, t).unwrap(), w);
            }
            (got, want) => prop_assert!(false, "{:?} vs {:?}", got, want),
        }
    }

    #[test]
    fn canonical_form_and_reversal(s in 0usize..3, raw in braid_strategy(), probe in 0usize..8) {
        let m = &PRIME[s];
        let Some(w) = arc(m, &raw, probe) else { return Ok(()) };
        let t = &m.base;
        prop_assert!(w.is_canonical(t));
        prop_assert_eq!(w.reversed(t).reversed(t), w.clone());
        prop_assert_eq!(w.reversed(t).canonical(t), w.clone());
        prop_assert_eq!(parse_word(t, &w.to_text(t)).unwrap(), w);
    }

    #[test]
    fn inverse_braids_undo(s in 0usize..3, raw in braid_strategy(), probe in 0usize..8) {
        let m = &PRIME[s];
        let b = braid(m.n(), &raw);
        let x = m.s(probe % m.n() + 1);
        let Ok(y) = m.braid_act(&b, &x) else { return Ok(()) };
        prop_assume!(y.arc.len() <= 14);
        let back = m.braid_act(&b.inverse(), &y.arc).unwrap();
        prop_assert_eq!(back.arc, x.clone());
        prop_assert_eq!(back.shift + y.shift, 0);
        prop_assert_eq!(m.braid_act(&b.compose(&b.inverse()), &x).unwrap().shift, 0);
    }

    #[test]
    fn braid_images_are_spherical_and_decode(s in 0usize..3, raw in braid_strategy(), probe in 0usize..8) {
        let m = &PRIME[s];
        let Some(w) = arc(m, &raw, probe) else { return Ok(()) };
        let x = m.module(&w);
        m.cat.validate(&x).unwrap();
        prop_assert!(m.cat.is_spherical(&x));
        prop_assert_eq!(m.decode_string(&x).unwrap().arc, w.clone());
        let shifted = m.build_string(&w, 3).unwrap();
        prop_assert_eq!(m.decode_string(&shifted).unwrap().shift, 3);
    }

    #[test]
    fn serre_duality_and_shifts(
        s in 0usize..3,
        ra in braid_strategy(), pa in 0usize..8,
        rb in braid_strategy(), pb in 0usize..8,
        k in -3i64..=3,
    ) {
        let m = &PRIME[s];
        let (Some(a), Some(b)) = (arc(m, &ra, pa), arc(m, &rb, pb)) else { return Ok(()) };
        let (x, y) = (m.module(&a), m.module(&b));
        let xy = m.cat.hom_dims(&x, &y);
        let yx = m.cat.hom_dims(&y, &x);
        for (&t, &d) in &xy {
            prop_assert_eq!(yx.get(&(3 - t)).copied().unwrap_or(0), d);
        }
        let shifted = m.cat.hom_dims(&x, &m.cat.shift(&y, k));
        for (&t, &d) in &xy {
            prop_assert_eq!(shifted.get(&(t - k)).copied().unwrap_or(0), d);
        }
    }

    #[test]
    fn hom_totals_agree_across_fields(
        s in 0usize..3,
        ra in braid_strategy(), pa in 0usize..8,
        rb in braid_strategy(), pb in 0usize..8,
    ) {
        let (p, q) = (&PRIME[s], &RATIONAL[s]);
        let (Some(a), Some(b)) = (arc(p, &ra, pa), arc(p, &rb, pb)) else { return Ok(()) };
        prop_assert_eq!(
            p.cat.hom_dims(&p.module(&a), &p.module(&b)),
            q.cat.hom_dims(&q.module(&a), &q.module(&b))
        );
    }
}
