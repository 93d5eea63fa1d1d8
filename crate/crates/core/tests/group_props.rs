mod common;

use proptest::prelude::*;
use rigid_core::group::{enumerate_invariant_subgroups, make_group, AbelianSubgroup, TwistAction};
use rigid_core::{Elem, Group};

use common::small_groups;

fn check_axioms(g: &Group) {
    let id = g.identity();
    let elems: Vec<Elem> = g.elems().collect();
    for &x in &elems {
        assert_eq!(g.mul(id, x), x);
        assert_eq!(g.mul(x, id), x);
        assert_eq!(g.mul(x, g.inv(x)), id);
        for &y in &elems {
            let xy = g.mul(x, y);
            for &z in &elems {
                assert_eq!(g.mul(xy, z), g.mul(x, g.mul(y, z)));
            }
        }
    }
}

#[test]
fn axioms_exhaustive_up_to_64() {
    let groups = small_groups(64);
    assert!(groups.len() > 20);
    for g in &groups {
        check_axioms(g);
    }
}

#[test]
fn order_outside_a_is_order_of_image() {
    for g in small_groups(120) {
        let d = g.d();
        for x in g.elems().filter(|&x| !g.in_a(x)) {
            let k = g.k_part(x);
            assert_eq!(g.element_order(x), d / num_integer::gcd(k, d), "{:?}", g.element(x));
        }
    }
}

#[test]
fn enumerated_subgroups_are_invariant() {
    for d in [3, 4, 6] {
        let twist = TwistAction::new(d).unwrap();
        for n in 1..=14 {
            for sub in enumerate_invariant_subgroups(n, d, 196).unwrap() {
                let elems = sub.elements();
                assert_eq!(elems.len(), sub.order());
                for v in &elems {
                    let w = twist.apply(*v, n);
                    assert!(elems.binary_search(&w).is_ok(), "{sub} not invariant under φ_{d}");
                }
            }
        }
    }
}

#[test]
fn automorphism_groups_are_groups() {
    for g in small_groups(24) {
        let auts = g.automorphism_group().unwrap();
        let images: Vec<Vec<Elem>> = auts.iter().map(|a| a.images(&auts.generators)).collect();
        for a in auts.iter() {
            assert!(images.contains(&a.inverse().images(&auts.generators)));
            for b in auts.iter().take(8) {
                assert!(images.contains(&a.compose(b).images(&auts.generators)));
            }
            for x in g.elems() {
                for y in g.elems().step_by(3) {
                    assert_eq!(a.apply(g.mul(x, y)), g.mul(a.apply(x), a.apply(y)));
                }
            }
        }
        let again = g.automorphism_group().unwrap();
        let again: Vec<Vec<Elem>> = again.iter().map(|a| a.images(&auts.generators)).collect();
        assert_eq!(images, again);
    }
}

#[test]
fn quotient_projection_is_homomorphism() {
    for g in small_groups(48) {
        let twist = g.twist();
        let n = g.modulus();
        for sub in enumerate_invariant_subgroups(n, g.d(), g.subgroup().order()).unwrap() {
            if !sub.is_subgroup_of(g.subgroup()) || !sub.is_invariant(twist) {
                continue;
            }
            let (q, pi) = g.quotient_group(&sub).unwrap();
            assert_eq!(q.order(), g.order() / sub.order());
            for x in g.elems() {
                for y in g.elems() {
                    assert_eq!(pi.apply(g.mul(x, y)), q.mul(pi.apply(x), pi.apply(y)));
                }
            }
        }
    }
}

#[test]
fn named_groups() {
    let g21 = make_group(7, 3, &[[1, 3]]).unwrap();
    let g20 = make_group(5, 4, &[[1, 2]]).unwrap();
    let g18 = make_group(3, 6, &[[1, 1]]).unwrap();
    assert_eq!((g21.order(), g20.order(), g18.order()), (21, 20, 18));
    assert!(make_group(7, 3, &[[1, 2]]).is_err());
    for g in small_groups(32) {
        let expected = matches!(
            (g.order(), g.d(), g.subgroup().order()),
            (9, 3, 3) | (27, 3, 9) | (8, 4, 2) | (16, 4, 4)
        );
        assert_eq!(g.is_exceptional(), expected, "{}", g.subgroup());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity_sampled(n in 2u32..40, d in prop::sample::select(vec![3u32, 4, 6]),
                             x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let g = Group::new(TwistAction::new(d).unwrap(), AbelianSubgroup::full(n)).unwrap();
        let pick = |r: u32| g.elems().nth(r as usize % g.order()).unwrap();
        let (x, y, z) = (pick(x), pick(y), pick(z));
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
    }

    #[test]
    fn subgroup_from_generators_is_closed(n in 1u32..30, gens in prop::collection::vec((0u32..30, 0u32..30), 0..3)) {
        let gens: Vec<[u32; 2]> = gens.into_iter().map(|(a, b)| [a % n, b % n]).collect();
        let sub = AbelianSubgroup::from_generators(n, &gens).unwrap();
        let elems = sub.elements();
        prop_assert_eq!(elems.len(), sub.order());
        for v in &gens {
            prop_assert!(sub.contains(*v));
        }
        for u in elems.iter().take(10) {
            for v in &elems {
                let w = [(u[0] + v[0]) % n, (u[1] + v[1]) % n];
                prop_assert!(sub.contains(w));
            }
        }
        // the subgroup generated by the Hermite generators is the same
        let again = AbelianSubgroup::from_generators(n, &sub.generators()).unwrap();
        prop_assert_eq!(again, sub);
    }
}
