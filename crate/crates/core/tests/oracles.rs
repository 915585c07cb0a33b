//! Worked examples with known answers.

use dms_core::algebra::{build_cy3, ginzburg_export};
use dms_core::dgmod::DGModule;
use dms_core::field::{Field, PrimeField, Rationals};
use dms_core::quiver::{quiver_of, QuiverWithPotential};
use dms_core::strings::{parse_word, CrossingWord, StringModel};
use dms_core::surface::{
    enumerate_triangulations, flip_graph, surface_invariants, FlipDirection, MarkedSurface,
};
use dms_core::twists::{relators_of, relators_with, BraidWord, RelatorKind};
use dms_core::verify::{brute_force_polygon_count, parse_surface, run, RunConfig, Suite};
use dms_core::DmsError;

fn model(spec: &str) -> StringModel<PrimeField> {
    StringModel::new(parse_surface(spec).unwrap(), PrimeField::default()).unwrap()
}

fn word(m: &StringModel<PrimeField>, text: &str) -> CrossingWord {
    parse_word(&m.base, text).unwrap()
}

#[test]
fn arc_and_triangle_counts() {
    assert_eq!(surface_invariants(&MarkedSurface::disk(5).unwrap()).unwrap(), (2, 3));
    assert_eq!(surface_invariants(&MarkedSurface::disk(6).unwrap()).unwrap(), (3, 4));
    assert_eq!(surface_invariants(&MarkedSurface::annulus(2, 3).unwrap()).unwrap(), (5, 5));
    assert!(matches!(MarkedSurface::disk(3), Err(DmsError::Input(_))));
}

#[test]
fn polygon_triangulation_counts() {
    let catalan = [1, 2, 5, 14, 42, 132];
    for (k, &c) in catalan.iter().enumerate() {
        let m = k + 3;
        assert_eq!(brute_force_polygon_count(m), c, "brute force {m}-gon");
        if m >= 4 {
            assert_eq!(enumerate_triangulations(&MarkedSurface::disk(m as u32).unwrap(), 1000).unwrap().len(), c);
        }
    }
}

#[test]
fn pentagon_flip_graph_is_a_five_cycle() {
    let g = flip_graph(&MarkedSurface::disk(5).unwrap(), 100).unwrap();
    assert_eq!(g.nodes.len(), 5);
    assert!(g.is_single_cycle());
}

#[test]
fn flip_graphs_are_regular_and_connected() {
    for m in 4..=7 {
        let s = MarkedSurface::disk(m).unwrap();
        let g = flip_graph(&s, 1000).unwrap();
        assert!(g.is_connected());
        assert!(g.degrees().iter().all(|&d| d == s.arc_count()), "{m}-gon");
    }
}

#[test]
fn flips_are_involutions() {
    for spec in ["hexagon-star", "pentagon-fan", "annulus(2,3)", "disk(7)-snake"] {
        let t = parse_surface(spec).unwrap();
        for a in 1..=t.arc_count() {
            let f = t.flip(a, FlipDirection::Forward).unwrap();
            assert!(f.flip(a, FlipDirection::Backward).unwrap().same_underlying(&t), "{spec} arc {a}");
            assert!(!f.same_underlying(&t));
        }
    }
}

#[test]
fn hexagon_star_quiver_is_a_three_cycle() {
    let q = quiver_of(&parse_surface("hexagon-star").unwrap());
    let mut edges: Vec<(usize, usize)> = q.arrows.iter().map(|a| (a.source, a.target)).collect();
    edges.sort_unstable();
    assert_eq!(edges, vec![(1, 2), (2, 3), (3, 1)]);
    assert_eq!(q.potential.len(), 1);
    assert_eq!(q.potential_string(), "abc");
}

#[test]
fn hexagon_ginzburg_differentials() {
    let q = quiver_of(&parse_surface("hexagon-star").unwrap());
    let text = ginzburg_export(&q).to_text();
    assert!(text.contains("d(a*) = bc\n"));
    assert!(text.contains("d(f_1) = cc* - b*b\n"));
    assert!(text.contains("d(f_3) = aa* - c*c\n"));
}

#[test]
fn empty_potential_has_commutator_differentials_only() {
    let q = QuiverWithPotential::new(2, vec![(1, 2, 0)], vec![]);
    let g = ginzburg_export(&q).to_text();
    assert_eq!(g, "d(a*) = 0\nd(f_1) = -a*a\nd(f_2) = aa*\n");
}

#[test]
fn algebra_dimension_and_serre_symmetry() {
    for spec in ["hexagon-star", "hexagon-fan", "annulus(1,2)", "annulus(2,3)", "disk(7)-snake"] {
        let q = quiver_of(&parse_surface(spec).unwrap());
        let e = build_cy3(&q).unwrap();
        assert_eq!(e.dim(), 2 * q.n + 2 * q.arrows.len(), "{spec}");
        let t = e.hom_dim_table();
        for i in 0..q.n {
            for j in 0..q.n {
                for d in 0..4 {
                    assert_eq!(t[i][j][d], t[j][i][3 - d], "{spec} ({i},{j},{d})");
                }
            }
        }
    }
}

fn unique_cone<F: Field>(m: &StringModel<F>, x: &DGModule<F::Elem>, y: &DGModule<F::Elem>) -> DGModule<F::Elem> {
    let basis = m.cat.cohomology_basis(x, y);
    assert_eq!(basis[&0].len(), 1);
    m.cat.cone(x, y, &basis[&0][0]).unwrap()
}

#[test]
fn example_arcs_match_their_cones() {
    let m = model("hexagon-star");
    let c = &m.cat;
    let eta1 = unique_cone(&m, &c.simple(0), &c.shift(&c.simple(1), 1));
    let x = unique_cone(&m, &c.shift(&c.simple(0), -2), &c.simple(2));
    let eta2 = unique_cone(&m, &x, &c.shift(&c.simple(2), 3));
    let w1 = word(&m, "1 (0:0/2/-) 2");
    let w2 = word(&m, "3 (2:0/0/ccw) 3 (0:1/0/w) 1");
    assert_eq!(eta1.len(), 2);
    assert_eq!(eta2.len(), 3);
    assert!(c.iso_up_to_shift(&m.module(&w1), &eta1).unwrap().is_some());
    assert!(c.iso_up_to_shift(&m.module(&w2), &eta2).unwrap().is_some());
    assert_eq!(m.decode_string(&eta1).unwrap().arc, w1);
    assert_eq!(m.decode_string(&eta2).unwrap().arc, w2);
    assert!(c.is_spherical(&eta1) && c.is_spherical(&eta2));
}

#[test]
fn single_crossing_is_a_simple() {
    let m = model("hexagon-star");
    for i in 1..=3 {
        let x = m.build_string(&m.s(i), 2).unwrap();
        assert!(m.cat.iso(&x, &m.cat.shift(&m.cat.simple(i - 1), 2)).unwrap());
    }
}

#[test]
fn digons_are_rejected_with_their_position() {
    let m = model("hexagon-star");
    assert_eq!(parse_word(&m.base, "1 (0:0/0/-) 1"), Err(DmsError::NotReduced { position: 0 }));
}

#[test]
fn word_text_round_trip() {
    let m = model("hexagon-star");
    for text in ["1 (0:0/2/-) 2", "3 (2:0/0/ccw) 3 (0:1/0/w) 1"] {
        let w = word(&m, text);
        assert_eq!(w.to_text(&m.base), text);
        assert_eq!(dms_core::strings::word_from_json(&m.base, &w.to_json(&m.base)).unwrap(), w);
    }
}

#[test]
fn generator_twists_on_the_hexagon() {
    let m = model("hexagon-star");
    let b1: BraidWord = "b1".parse().unwrap();
    assert_eq!(m.braid_act(&b1, &m.s(2)).unwrap().arc, word(&m, "1 (0:0/2/-) 2"));
    assert_eq!(m.braid_act(&"b1 b1'".parse().unwrap(), &m.s(2)).unwrap().arc, m.s(2));
    assert_eq!(m.braid_act(&BraidWord::identity(), &m.s(3)).unwrap().arc, m.s(3));
    // a twist moves its own arc only by a shift
    let own = m.braid_act(&b1, &m.s(1)).unwrap();
    assert_eq!(own.arc, m.s(1));
    assert_eq!(own.shift, -2);
}

#[test]
fn relator_sets() {
    let a2 = model("pentagon-fan");
    let r = relators_of(&a2.quiver).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].kind, RelatorKind::Braid);

    let hex = model("hexagon-star");
    let r = relators_of(&hex.quiver).unwrap();
    assert_eq!(r.iter().filter(|x| x.kind == RelatorKind::Braid).count(), 3);
    assert_eq!(r.iter().filter(|x| x.kind == RelatorKind::Commutation).count(), 0);
    let cyclic: Vec<_> = r.iter().filter(|x| x.kind == RelatorKind::Cyclic).collect();
    assert_eq!(cyclic.len(), 1);
    assert_eq!(cyclic[0].lhs.len(), 4);
    assert_eq!(relators_with(&hex.quiver, true).unwrap().len(), 5);
}

#[test]
fn relators_hold_and_false_relations_fail() {
    let m = model("hexagon-star");
    let probes: Vec<_> = (1..=3).map(|i| m.s(i)).collect();
    for r in relators_with(&m.quiver, true).unwrap() {
        assert!(m.action_equal(&r.lhs, &r.rhs, &probes).unwrap(), "{}", r.id());
    }
    let commute = |a: &str, b: &str| m.action_equal(&a.parse().unwrap(), &b.parse().unwrap(), &probes).unwrap();
    assert!(!commute("b1 b2", "b2 b1"));
    assert!(!commute("b1 b2 b3 b1", "b1 b3 b2 b1"));
}

#[test]
fn green_sequences_of_small_quivers() {
    let a1 = model("square");
    assert_eq!(a1.cat.green_sequences(6, 1000).unwrap().lengths(), vec![1]);
    let a2 = model("pentagon-fan");
    let g = a2.cat.green_sequences(6, 1000).unwrap();
    assert_eq!(g.lengths(), vec![2, 3]);
    assert!(!g.truncated);
}

#[test]
fn tilting_back_and_forth_is_the_identity() {
    let m = model("hexagon-star");
    let h0 = m.cat.canonical_heart();
    for j in 1..=3 {
        let f = m.cat.tilt(&h0, j, FlipDirection::Forward).unwrap();
        m.cat.check_heart(&f).unwrap();
        let b = m.cat.tilt(&f, j, FlipDirection::Backward).unwrap();
        assert!(m.cat.heart_iso(&b, &h0).unwrap().is_some());
    }
}

#[test]
fn pentagon_relation_in_synchronized_flips() {
    use FlipDirection::Forward;
    let m = model("pentagon-fan");
    let n0 = m.initial_node();
    let a = m.replay(&n0, &[(1, Forward), (2, Forward)]).unwrap();
    let b = m.replay(&n0, &[(2, Forward), (1, Forward), (2, Forward)]).unwrap();
    assert!(m.node_equal(&a, &b).unwrap());
    assert!(!m.node_equal(&a, &n0).unwrap());
}

#[test]
fn hom_dimensions_agree_across_fields() {
    let t = parse_surface("annulus(1,2)").unwrap();
    let p = StringModel::new(t.clone(), PrimeField::default()).unwrap();
    let q = StringModel::new(t, Rationals).unwrap();
    let w: BraidWord = "b1 b2' b3".parse().unwrap();
    let a = p.braid_act(&w, &p.s(2)).unwrap();
    let b = q.braid_act(&w, &q.s(2)).unwrap();
    assert_eq!(a, b);
    for i in 1..=3 {
        assert_eq!(p.cat.hom_dims(&p.module(&a.arc), &p.module(&p.s(i))), q.cat.hom_dims(&q.module(&b.arc), &q.module(&q.s(i))));
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = RunConfig { fleet: 40, pairs: 10, decompositions: 10, ..RunConfig::default() };
    let a = run(Suite::Spherical, &cfg).unwrap();
    let b = run(Suite::Spherical, &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.pass);
    let other = RunConfig { seed: 1, ..cfg };
    assert_ne!(run(Suite::Spherical, &other).unwrap().config_hash, a.config_hash);
}

#[test]
fn surface_specs() {
    assert_eq!(parse_surface("hexagon").unwrap(), parse_surface("hexagon-star").unwrap());
    assert_eq!(parse_surface("annulus(2,3)").unwrap().arc_count(), 5);
    assert!(parse_surface("torus").is_err());
    assert!(parse_surface("pentagon-star").is_err());
}
