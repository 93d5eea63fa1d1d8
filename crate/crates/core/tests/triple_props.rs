mod common;

use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;
use rigid_core::group::make_group;
use rigid_core::triples::{
    braid_move, conjugate_triple, elliptic_signature, enumerate_generating_triples, hurwitz_genus,
    orbit_decomposition,
};
use rigid_core::Triple;

use common::small_groups;

#[test]
fn braid_relation_and_validity() {
    for g in small_groups(24) {
        for t in enumerate_generating_triples(&g, None) {
            let s1 = |t: &Triple| braid_move(&g, 1, t).unwrap();
            let s2 = |t: &Triple| braid_move(&g, 2, t).unwrap();
            assert_eq!(s1(&s2(&s1(&t))), s2(&s1(&s2(&t))));
            for moved in [s1(&t), s2(&t)] {
                let [a, b, c] = moved.0;
                assert_eq!(g.mul(g.mul(a, b), c), g.identity());
                assert!(g.generates(&moved.0));
                assert_eq!(moved.sorted_type(&g), t.sorted_type(&g));
            }
        }
    }
}

#[test]
fn conjugation_is_an_involution_commuting_with_automorphisms() {
    for g in small_groups(24) {
        let auts = g.automorphism_group().unwrap();
        for t in enumerate_generating_triples(&g, None) {
            let c = conjugate_triple(&g, &t);
            assert_eq!(conjugate_triple(&g, &c), t);
            assert_eq!(c.sorted_type(&g), t.sorted_type(&g));
            for alpha in auts.iter() {
                assert_eq!(
                    conjugate_triple(&g, &t.apply_automorphism(alpha)),
                    c.apply_automorphism(alpha)
                );
            }
        }
    }
}

#[test]
fn orbit_decomposition_partitions_input() {
    for g in small_groups(24) {
        let triples = enumerate_generating_triples(&g, None);
        let auts = g.automorphism_group().unwrap();
        for with_auts in [false, true] {
            let orbits = orbit_decomposition(&g, &triples, with_auts.then_some(&auts));
            let mut seen = BTreeSet::new();
            for o in &orbits {
                assert_eq!(o.representative, o.members[0]);
                for m in &o.members {
                    assert!(seen.insert(*m), "triple in two orbits");
                }
            }
            assert_eq!(seen.len(), triples.len());
            let again = orbit_decomposition(&g, &triples, with_auts.then_some(&auts));
            assert_eq!(orbits, again);
        }
    }
}

fn genus_oracle(order: u64, ty: [u32; 3]) -> Option<u64> {
    let rest = Ratio::from_integer(1) - ty.iter().map(|&m| Ratio::new(1, m as i64)).sum::<Ratio<i64>>();
    let two_g_minus_two = Ratio::from_integer(order as i64) * rest;
    let g = (two_g_minus_two + 2) / 2;
    (g.is_integer() && g >= Ratio::from_integer(0)).then(|| g.to_integer() as u64)
}

#[test]
fn elliptic_signatures_have_genus_one() {
    for g in small_groups(200) {
        let sig = elliptic_signature(g.d()).unwrap();
        assert_eq!(hurwitz_genus(g.order() as u64, sig).unwrap(), 1);
    }
}

#[test]
fn curve_genera() {
    let g21 = make_group(7, 3, &[[1, 3]]).unwrap();
    let g20 = make_group(5, 4, &[[1, 2]]).unwrap();
    let g18 = make_group(3, 6, &[[1, 1]]).unwrap();
    assert_eq!(hurwitz_genus(21, [3, 3, 7]).unwrap(), 3);
    assert_eq!(hurwitz_genus(20, [4, 4, 5]).unwrap(), 4);
    assert_eq!(hurwitz_genus(18, [6, 6, 3]).unwrap(), 4);
    assert_eq!(hurwitz_genus(6, [3, 6, 6]).unwrap(), 2);
    for (g, ty) in [(&g21, [3, 3, 7]), (&g20, [4, 4, 5]), (&g18, [3, 6, 6])] {
        assert!(!enumerate_generating_triples(g, Some(ty)).is_empty());
    }
}

proptest! {
    #[test]
    fn hurwitz_matches_rational_oracle(order in 1u64..500, a in 2u32..13, b in 2u32..13, c in 2u32..13) {
        let ty = [a, b, c];
        match genus_oracle(order, ty) {
            Some(expected) => prop_assert_eq!(hurwitz_genus(order, ty).unwrap(), expected),
            None => prop_assert!(hurwitz_genus(order, ty).is_err()),
        }
    }

    #[test]
    fn orbit_representatives_ignore_input_order(seed in any::<u64>(), pick in 0usize..64) {
        let groups = small_groups(24);
        let g = &groups[pick % groups.len()];
        let triples = enumerate_generating_triples(g, None);
        let mut shuffled = triples.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a: Vec<Triple> = orbit_decomposition(g, &triples, None).into_iter().map(|o| o.representative).collect();
        let b: Vec<Triple> = orbit_decomposition(g, &shuffled, None).into_iter().map(|o| o.representative).collect();
        prop_assert_eq!(a, b);
    }
}
