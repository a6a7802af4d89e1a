//! Cross-module property tests: randomized descriptions against brute
//! rasterization, closure properties of the arithmetic, fold confluence on
//! random words, and the word-evaluation oracle web.

mod common;

use common::{walk_triple, words_up_to};
use fi1::eset::{Axis, IdemPoint, PeriodicSet, Ray};
use fi1::stephen::{linear_graph, stephen_limit, words_equal, FoldSchedule, Presentation, Verdict};
use fi1::triple::{canonical_form, Triple};
use fi1::word::{Sign, Word};
use proptest::prelude::*;

fn arb_triple() -> impl Strategy<Value = Triple> {
    (0i64..=12, 0i64..=12)
        .prop_filter("nontrivial reach", |(a, b)| a + b >= 1)
        .prop_flat_map(|(a, b)| (-a..=b).prop_map(move |p| Triple::new(a, p, b).unwrap()))
}

fn arb_point() -> impl Strategy<Value = IdemPoint> {
    (0u64..=14, 0u64..=14)
        .prop_filter("origin excluded", |(a, b)| a + b >= 1)
        .prop_map(|(a, b)| IdemPoint::new(a, b).unwrap())
}

fn arb_ray() -> impl Strategy<Value = Ray> {
    (
        arb_point(),
        prop_oneof![Just(Axis::A), Just(Axis::B), Just(Axis::Both)],
        1u64..=4,
    )
        .prop_map(|(origin, axis, step)| Ray { origin, axis, step })
}

fn arb_periodic_set() -> impl Strategy<Value = PeriodicSet> {
    (
        proptest::collection::btree_set(arb_point(), 0..5),
        proptest::collection::vec(arb_ray(), 0..4),
        1u64..=4,
    )
        .prop_map(|(cells, rays, period)| PeriodicSet::new(cells, rays, period))
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(
        prop_oneof![Just(Sign::Plus), Just(Sign::Minus)],
        1..=max_len,
    )
    .prop_map(|signs| {
        let letters = signs.into_iter().map(|s| ("x".to_string(), s)).collect();
        Word::new(vec!["x".to_string()], letters).unwrap()
    })
}

proptest! {
    #[test]
    fn products_and_inverses_stay_valid(u in arb_triple(), v in arb_triple()) {
        let prod = u.mul(&v);
        prop_assert!(Triple::new(prod.a(), prod.p(), prod.b()).is_ok());
        let inv = u.inv();
        prop_assert!(Triple::new(inv.a(), inv.p(), inv.b()).is_ok());
    }

    #[test]
    fn associativity_random_larger_samples(
        u in arb_triple(),
        v in arb_triple(),
        w in arb_triple(),
    ) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn contains_agrees_with_rasterization(s in arb_periodic_set()) {
        // Membership by divisibility arithmetic vs per-primitive grid
        // enumeration, on the 30-box.
        let pts = s.points_within(30, 30);
        for a in 0..=30u64 {
            for b in 0..=30u64 {
                if a + b == 0 {
                    continue;
                }
                let p = IdemPoint::new(a, b).unwrap();
                prop_assert_eq!(s.contains(p), pts.contains(&p), "at {}", p);
            }
        }
    }

    #[test]
    fn union_laws_up_to_membership(
        s1 in arb_periodic_set(),
        s2 in arb_periodic_set(),
        s3 in arb_periodic_set(),
    ) {
        let box_eq = |x: &PeriodicSet, y: &PeriodicSet| {
            x.points_within(30, 30) == y.points_within(30, 30)
        };
        prop_assert!(box_eq(&s1.union(&s2), &s2.union(&s1)));
        prop_assert!(box_eq(&s1.union(&s2).union(&s3), &s1.union(&s2.union(&s3))));
        prop_assert!(box_eq(&s1.union(&s1), &s1));
    }

    #[test]
    fn fold_confluence_random_words(w in arb_word(12)) {
        let a = linear_graph(&w).fold_with(FoldSchedule::Batch);
        let b = linear_graph(&w).fold_with(FoldSchedule::OneAtATime);
        prop_assert!(a.is_deterministic());
        prop_assert!(b.is_deterministic());
        prop_assert!(a.isomorphic_to(&b));
    }

    #[test]
    fn eval_matches_walk_on_random_words(w in arb_word(40)) {
        prop_assert_eq!(canonical_form(&w).unwrap(), walk_triple(&w));
    }
}

#[test]
fn certified_semilattices_on_random_specs() {
    // The covering construction certifies itself against exact membership
    // point by point; driving it over randomized small specs (with and
    // without idempotent families) makes sure the recipe has no holes.
    // The non-idempotent-generated part is cross-checked against a direct
    // ideal closure.
    use fi1::eset::{Axis, Ray};
    use fi1::subsemigroup::{
        idempotent_semilattice, sbar_bounded_closure, sbar_semilattice, SubsemigroupSpec,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..25 {
        let n_gens = rng.gen_range(1..=2);
        let mut gens: Vec<Triple> = Vec::new();
        while gens.len() < n_gens {
            let a = rng.gen_range(0..=2i64);
            let b = rng.gen_range(0..=2i64);
            if a + b == 0 {
                continue;
            }
            let p = rng.gen_range(-a..=b);
            if p == 0 {
                continue;
            }
            gens.push(Triple::new(a, p, b).unwrap());
        }
        let idems = if rng.gen_bool(0.5) {
            let mut cells = BTreeSet::new();
            for _ in 0..rng.gen_range(1..=2) {
                let a = rng.gen_range(0..=3u64);
                let b = rng.gen_range(0..=3u64);
                if a + b >= 1 {
                    cells.insert(IdemPoint::new(a, b).unwrap());
                }
            }
            let mut rays = Vec::new();
            let mut period = 1;
            if rng.gen_bool(0.5) {
                let axis = [Axis::A, Axis::B, Axis::Both][rng.gen_range(0..3)];
                let step = rng.gen_range(1..=2);
                period = step;
                let a = rng.gen_range(0..=3u64);
                let b = rng.gen_range(0..=3u64);
                if a + b >= 1 {
                    rays.push(Ray {
                        origin: IdemPoint::new(a, b).unwrap(),
                        axis,
                        step,
                    });
                }
            }
            if cells.is_empty() && rays.is_empty() {
                None
            } else {
                Some(PeriodicSet::new(cells, rays, period))
            }
        } else {
            None
        };
        let spec = SubsemigroupSpec::new(gens, idems).unwrap();
        let maxd = spec.gens().iter().map(Triple::dindex).max().unwrap();
        let box_side = 2 * maxd + 2;

        let es = idempotent_semilattice(&spec, box_side)
            .unwrap_or_else(|e| panic!("trial {trial}: certification failed: {e} ({spec:?})"));

        let sbar_desc = sbar_semilattice(&spec, box_side).unwrap();
        let direct: BTreeSet<IdemPoint> = sbar_bounded_closure(&spec, 2 * box_side)
            .iter()
            .filter(|t| t.is_idempotent())
            .map(|t| IdemPoint::new(t.a() as u64, t.b() as u64).unwrap())
            .collect();
        for a in 0..=box_side {
            for b in 0..=box_side {
                if a + b == 0 {
                    continue;
                }
                let p = IdemPoint::new(a, b).unwrap();
                assert!(
                    !es.contains(p) || sbar_desc.contains(p) == direct.contains(&p),
                    "trial {trial}: ideal-part mismatch at {p} ({spec:?})"
                );
                assert!(
                    !sbar_desc.contains(p) || es.contains(p),
                    "trial {trial}: ideal part escapes the semilattice at {p}"
                );
            }
        }
    }
}

#[test]
fn munn_graph_vertex_count_is_reach_span() {
    // The Munn tree of a single-letter word is a line with a+b+1 vertices.
    let free = Presentation::free(vec!["x".to_string()]);
    for w in words_up_to(8) {
        let t = walk_triple(&w);
        let res = stephen_limit(&w, &free, 2);
        assert!(res.converged);
        assert_eq!(
            res.graph.vertex_count() as i64,
            t.a() + t.b() + 1,
            "vertex count of {w}"
        );
    }
}

#[test]
fn oracle_equivalence_eval_vs_munn_acceptance_of_words() {
    // Two words are triple-equal iff each lies in the other's Munn-graph
    // language (mutual acceptance), checked across all short words.
    let free = Presentation::free(vec!["x".to_string()]);
    let words = words_up_to(6);
    let graphs: Vec<_> = words
        .iter()
        .map(|w| stephen_limit(w, &free, 2).graph)
        .collect();
    let triples: Vec<Triple> = words.iter().map(|w| canonical_form(w).unwrap()).collect();
    for i in 0..words.len() {
        for j in 0..words.len() {
            let mutual = graphs[i].in_language(&words[j]) && graphs[j].in_language(&words[i]);
            assert_eq!(
                mutual,
                triples[i] == triples[j],
                "mutual acceptance mismatch: {} vs {}",
                words[i],
                words[j]
            );
        }
    }
}

#[test]
fn order_oracle_exhaustive_to_length_eight() {
    // Language membership on the Munn graph recognizes the natural order:
    // u is in L(munn(v)) exactly when eval(v) <= eval(u).
    let free = Presentation::free(vec!["x".to_string()]);
    let words = words_up_to(8);
    let graphs: Vec<_> = words
        .iter()
        .map(|w| stephen_limit(w, &free, 2).graph)
        .collect();
    let triples: Vec<Triple> = words.iter().map(|w| canonical_form(w).unwrap()).collect();
    for (v, munn) in words.iter().zip(&graphs) {
        let tv = canonical_form(v).unwrap();
        for (u, tu) in words.iter().zip(&triples) {
            assert_eq!(
                munn.in_language(u),
                tv.leq(tu),
                "order oracle mismatch: {u} vs {v}"
            );
        }
    }
}

#[test]
fn words_equal_never_contradicts_triples_under_free_presentation() {
    let free = Presentation::free(vec!["x".to_string()]);
    let words = words_up_to(6);
    for w in words.iter().step_by(7) {
        for v in words.iter().step_by(5) {
            let verdict = words_equal(&free, w, v, 2);
            let truth = canonical_form(w).unwrap() == canonical_form(v).unwrap();
            match verdict {
                Verdict::Equal => assert!(truth),
                Verdict::Distinct => assert!(!truth),
                Verdict::Unknown => panic!("free presentation always converges"),
            }
        }
    }
}
