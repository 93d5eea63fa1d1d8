use proptest::prelude::*;
use rigid_core::arith::{
    invariant_cyclic_bruteforce, invariant_cyclic_exists, is_prime, minimal_group_candidates,
    minimal_group_search, qualifying_triples, select_minimal,
};

#[test]
fn criterion_matches_bruteforce_below_200() {
    for p in (2..200).filter(|&p| is_prime(p)) {
        for d in [3, 4, 6] {
            let fast = invariant_cyclic_exists(p, d).unwrap();
            let slow = !invariant_cyclic_bruteforce(p, d).unwrap().is_empty();
            assert_eq!(fast, slow, "p = {p}, d = {d}");
        }
    }
}

#[test]
fn criterion_is_a_congruence() {
    for p in (5..200).filter(|&p| is_prime(p)) {
        assert_eq!(invariant_cyclic_exists(p, 4).unwrap(), p % 4 == 1);
        assert_eq!(invariant_cyclic_exists(p, 3).unwrap(), p % 3 == 1);
        assert_eq!(invariant_cyclic_exists(p, 6).unwrap(), p % 3 == 1);
    }
}

#[test]
fn smaller_candidates_have_no_qualifying_triple() {
    for d in [3, 4, 6] {
        let answer = minimal_group_search(d, 50).unwrap();
        for c in minimal_group_candidates(d, answer.group.order() - 1).unwrap() {
            assert!(qualifying_triples(&c.group).is_empty(), "{}", c.group.subgroup());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_ignores_candidate_order(seed in any::<u64>(), d in prop::sample::select(vec![3u32, 4, 6])) {
        let mut candidates = minimal_group_candidates(d, 30).unwrap();
        let expected = select_minimal(candidates.clone()).unwrap();
        let mut state = seed;
        for i in (1..candidates.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            candidates.swap(i, (state >> 33) as usize % (i + 1));
        }
        let got = select_minimal(candidates).unwrap();
        prop_assert_eq!(got.group.spec(), expected.group.spec());
        prop_assert_eq!(got.witness, expected.witness);
    }
}
