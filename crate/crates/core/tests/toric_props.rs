use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rigid_core::toric::{
    cartier_data, cone_multiplicity, exceptional_divisor_structure, rational_vector, resolution_fan,
    ExceptionalStructure, Fan, LatticeData, TorusDivisor,
};

type Q = Ratio<i64>;

fn params() -> Vec<(usize, i64, i64)> {
    let mut out = Vec::new();
    for n in 3..=6 {
        for ell in [2, 3, 4, 6] {
            let mut weights = vec![1, ell - 1];
            weights.dedup();
            for a in weights {
                out.push((n, ell, a));
            }
        }
    }
    out
}

fn lat(n: usize, ell: i64, a: i64) -> LatticeData {
    LatticeData::new(n, ell, a).unwrap()
}

#[test]
fn multiplicities() {
    for (n, ell, a) in params() {
        let l = lat(n, ell, a);
        let sigma = Fan::standard(l);
        assert_eq!(cone_multiplicity(&sigma.cone(0), &l).unwrap(), ell as u64);
        let fan = resolution_fan(&l).unwrap();
        for idx in 0..fan.maximal_cones.len() {
            assert_eq!(cone_multiplicity(&fan.cone(idx), &l).unwrap(), 1);
        }
        let expected_cones = if a == ell - 1 { (n - 1) * (ell as usize - 1) + 1 } else { n };
        assert_eq!(fan.maximal_cones.len(), expected_cones);
    }
}

#[test]
fn support_is_preserved() {
    let bound = 2i64;
    for (n, ell, a) in params().into_iter().filter(|p| p.0 <= 4) {
        let fan = resolution_fan(&lat(n, ell, a)).unwrap();
        let side = (2 * bound + 1) as usize;
        for code in 0..side.pow(n as u32) {
            let mut rest = code;
            let w: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (rest % side) as i64;
                    rest /= side;
                    c
                })
                .collect();
            if w.iter().all(|&c| c == 0) {
                continue;
            }
            let inside_sigma = w.iter().all(|&c| c > 0);
            let mut interior = 0;
            let mut closed = 0;
            for idx in 0..fan.maximal_cones.len() {
                let c = fan.cone_coordinates(idx, &w).unwrap();
                if c.iter().all(|x| !x.is_negative()) {
                    closed += 1;
                    if c.iter().all(|x| x.is_positive()) {
                        interior += 1;
                    }
                }
            }
            assert!(closed >= 1, "{w:?} is not covered for {n} {ell} {a}");
            assert!(interior <= 1);
            if inside_sigma && closed == 1 {
                assert_eq!(interior, 1, "{w:?} lies on a boundary of one cone only");
            }
        }
    }
}

#[test]
fn cartier_data_glues_along_walls() {
    for (n, ell, a) in params() {
        let fan = resolution_fan(&lat(n, ell, a)).unwrap();
        let divisors: Vec<TorusDivisor> = (0..fan.rays.len()).map(|r| TorusDivisor::prime(&fan, r)).collect();
        for d in &divisors {
            let m = cartier_data(&fan, d).unwrap();
            for i in 0..fan.maximal_cones.len() {
                for j in i + 1..fan.maximal_cones.len() {
                    let a: BTreeSet<usize> = fan.maximal_cones[i].iter().copied().collect();
                    let b: BTreeSet<usize> = fan.maximal_cones[j].iter().copied().collect();
                    let shared: Vec<usize> = a.intersection(&b).copied().collect();
                    if shared.len() + 1 != n {
                        continue;
                    }
                    for r in shared {
                        let pair = |m: &[Q]| -> Q {
                            m.iter().zip(&fan.rays[r]).map(|(x, &u)| *x * Q::from_integer(u)).sum()
                        };
                        assert_eq!(pair(&m[i]), pair(&m[j]));
                    }
                }
            }
        }
    }
}

fn cone_index(fan: &Fan, rays: &[Vec<i64>]) -> usize {
    let mut idx: Vec<usize> = rays.iter().map(|r| fan.ray_index(r).unwrap()).collect();
    idx.sort_unstable();
    fan.maximal_cones.iter().position(|c| *c == idx).unwrap()
}

#[test]
fn cartier_data_of_d1_and_dn() {
    for (n, ell, a) in params().into_iter().filter(|p| p.2 == p.1 - 1 && p.1 > 2) {
        let l = lat(n, ell, a);
        let fan = resolution_fan(&l).unwrap();
        let unit = |i: usize, c: i64| -> Vec<i64> { (1..=n).map(|j| if j == i { c } else { 0 }).collect() };
        let add = |x: Vec<i64>, y: Vec<i64>| -> Vec<i64> { x.iter().zip(&y).map(|(p, q)| p + q).collect() };
        let e = |i: usize| l.e(i);
        // σ_n, σ_i^{(0)}, σ_i^{(k)}
        let sigma_n: Vec<Vec<i64>> = (1..n).map(e).chain([l.v(ell - 1)]).collect();
        let sigma_0 = |i: usize| -> Vec<Vec<i64>> { (1..=n).filter(|&j| j != i).map(e).chain([l.v(1)]).collect() };
        let sigma_k = |i: usize, k: i64| -> Vec<Vec<i64>> {
            (1..n).filter(|&j| j != i).map(e).chain([l.v(k), l.v(k + 1)]).collect()
        };

        let d1 = cartier_data(&fan, &TorusDivisor::d(&fan, 1).unwrap()).unwrap();
        assert_eq!(d1[cone_index(&fan, &sigma_n)], rational_vector(&add(unit(1, -1), unit(n, ell - 1))));
        assert_eq!(d1[cone_index(&fan, &sigma_0(1))], rational_vector(&vec![0; n]));
        for i in 2..n {
            let expected = rational_vector(&add(unit(1, -1), unit(i, 1)));
            assert_eq!(d1[cone_index(&fan, &sigma_0(i))], expected);
            for k in 1..ell - 1 {
                assert_eq!(d1[cone_index(&fan, &sigma_k(i, k))], expected);
                assert!(d1[cone_index(&fan, &sigma_k(1, k))].iter().all(|x| x.is_zero()));
            }
        }

        let dn = cartier_data(&fan, &TorusDivisor::d(&fan, n).unwrap()).unwrap();
        assert!(dn[cone_index(&fan, &sigma_n)].iter().all(|x| x.is_zero()));
        for i in 1..n {
            let expected = rational_vector(&add(unit(n, -1), unit(i, ell - 1)));
            assert_eq!(dn[cone_index(&fan, &sigma_0(i))], expected);
            for k in 1..ell - 1 {
                assert!(dn[cone_index(&fan, &sigma_k(i, k))].iter().all(|x| x.is_zero()));
            }
        }
    }
}

#[test]
fn exceptional_structures() {
    for (n, ell, a) in params() {
        let l = lat(n, ell, a);
        let ks: Vec<i64> = if a == ell - 1 { (1..ell).collect() } else { vec![1] };
        for k in ks {
            let s = exceptional_divisor_structure(k, &l).unwrap();
            assert_eq!(s, exceptional_divisor_structure(k, &l).unwrap());
            let expected = if a != ell - 1 || k == ell - 1 {
                ExceptionalStructure::ProjectiveSpace { dim: n - 1 }
            } else {
                ExceptionalStructure::Bundle { twist: ell - k }
            };
            assert_eq!(s, expected, "n = {n}, ℓ = {ell}, a = {a}, k = {k}");
        }
    }
}

proptest! {
    #[test]
    fn divisibility_identity(n in 3usize..7, ell_idx in 0usize..4, k_raw in 1i64..6,
                             x in prop::collection::vec(-20i64..20, 6)) {
        let ell = [2i64, 3, 4, 6][ell_idx];
        let k = 1 + (k_raw - 1) % (ell - 1);
        let l = lat(n, ell, ell - 1);
        let x = &x[..n];
        let head: i64 = x[..n - 1].iter().sum();
        let lhs = k * (head + (ell - 1) * x[n - 1]) - ell * (k - 1) * x[n - 1];
        // ℓ⟨x, v_k⟩ from the stored (ℓ-scaled) ray
        let pairing: i64 = x.iter().zip(l.v(k)).map(|(a, b)| a * b).sum();
        prop_assert_eq!(lhs, pairing);
        if l.in_dual(x) {
            prop_assert_eq!(pairing.rem_euclid(ell), 0);
        }
    }
}
