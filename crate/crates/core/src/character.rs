//! One-dimensional characters trivial on `A`, the Chevalley–Weil
//! multiplicity formula, the rigidity test for diagonal actions, and
//! invariant plurigenera of triangle curves.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::triples::{elliptic_signature, ActionTuple, Triple};

/// The root of unity `ζ_m^k`, kept in lowest terms with `0 ≤ k < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    k: u32,
    m: u32,
}

impl RootOfUnity {
    pub fn new(k: i64, m: u32) -> Self {
        assert!(m > 0, "root of unity of order zero");
        let k = k.rem_euclid(m as i64) as u32;
        let g = k.gcd(&m);
        if k == 0 {
            return RootOfUnity { k: 0, m: 1 };
        }
        RootOfUnity { k: k / g, m: m / g }
    }

    pub fn one() -> Self {
        RootOfUnity { k: 0, m: 1 }
    }

    pub fn numerator(&self) -> u32 {
        self.k
    }

    /// Multiplicative order.
    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let m = self.m.lcm(&other.m);
        let k = self.k as i64 * (m / self.m) as i64 + other.k as i64 * (m / other.m) as i64;
        RootOfUnity::new(k, m)
    }

    pub fn conj(&self) -> RootOfUnity {
        RootOfUnity::new(-(self.k as i64), self.m)
    }

    pub fn pow(&self, e: i64) -> RootOfUnity {
        RootOfUnity::new(self.k as i64 * e, self.m)
    }

    /// The angle `k/m ∈ [0, 1)`.
    pub fn fraction(&self) -> Ratio<i64> {
        Ratio::new(self.k as i64, self.m as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "1")
        } else {
            write!(f, "ζ_{}^{}", self.m, self.k)
        }
    }
}

/// `χ_e(a, k) = ζ_d^{ek}`, a character of `A ⋊ Z_d` trivial on `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneDimCharacter {
    pub d: u32,
    pub e: u32,
}

impl OneDimCharacter {
    pub fn new(d: u32, e: i64) -> Self {
        OneDimCharacter {
            d,
            e: e.rem_euclid(d as i64) as u32,
        }
    }

    pub fn value(&self, g: &Group, x: Elem) -> RootOfUnity {
        RootOfUnity::new(self.e as i64 * g.k_part(x) as i64, self.d)
    }

    pub fn conj(&self) -> OneDimCharacter {
        OneDimCharacter::new(self.d, -(self.e as i64))
    }

    pub fn mul(&self, other: &OneDimCharacter) -> OneDimCharacter {
        OneDimCharacter::new(self.d, self.e as i64 + other.e as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    /// Every character trivial on `A`.
    pub fn all(d: u32) -> impl Iterator<Item = OneDimCharacter> {
        (0..d).map(move |e| OneDimCharacter { d, e })
    }
}

/// The character `χ_E` of an elliptic triple: `χ_E(h_i) = ζ_{m_i}^{−1}` for
/// every entry, since `h_i` rotates a neighborhood of its fixed points by
/// `ζ_{m_i}`.
pub fn elliptic_character(g: &Group, t: &Triple) -> Result<OneDimCharacter> {
    if g.is_exceptional() {
        return Err(Error::Exceptional { order: g.order() });
    }
    let signature = elliptic_signature(g.d())?;
    if t.sorted_type(g) != signature {
        return Err(Error::invalid(format!(
            "{} has type {:?}, not the elliptic signature {signature:?}",
            t.display(g),
            t.type_of(g)
        )));
    }
    let mut found = OneDimCharacter::all(g.d()).filter(|chi| {
        t.0.iter()
            .all(|&h| chi.value(g, h) == RootOfUnity::new(-1, g.element_order(h)))
    });
    match (found.next(), found.next()) {
        (Some(chi), None) => Ok(chi),
        (None, _) => Err(Error::contradiction(format!(
            "no character trivial on A takes the value ζ_m^-1 on every entry of {}",
            t.display(g)
        ))),
        (Some(_), Some(_)) => Err(Error::contradiction(format!(
            "the elliptic character of {} is not unique",
            t.display(g)
        ))),
    }
}

/// Multiplicity of a nontrivial `χ` in the canonical representation of the
/// triangle curve of `t`: `−1 + Σ k_i/m_i` where `χ(g_i) = ζ_{m_i}^{k_i}`.
pub fn chevalley_weil_mult(g: &Group, chi: &OneDimCharacter, t: &Triple) -> Result<u32> {
    if chi.is_trivial() {
        return Err(Error::invalid(
            "the trivial character has multiplicity equal to the genus of the quotient, which is zero",
        ));
    }
    let total = t
        .0
        .iter()
        .map(|&x| chi.value(g, x).fraction())
        .fold(Ratio::from_integer(-1), |acc, f| acc + f);
    if !total.is_integer() || total < Ratio::from_integer(0) {
        return Err(Error::contradiction(format!(
            "Chevalley-Weil gives {total} for χ_{} on {}",
            chi.e,
            t.display(g)
        )));
    }
    Ok(total.to_integer() as u32)
}

/// A failed rigidity condition. Condition 1: a factor is not a valid
/// triangle cover of the required kind; 2: `χ̄_{E_i}` occurs in the canonical
/// representation of `C`; 3: `χ_{E_i}·χ_{E_j}` is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: u8,
    pub factor_pair: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rigid: bool,
    pub violations: Vec<Violation>,
}

/// Decides whether the diagonal action given by `tuple` is rigid. Factor
/// indices `0..n−1` are the elliptic curves, `n−1` is the curve `C`.
pub fn is_rigid_action(g: &Group, tuple: &ActionTuple) -> Result<RigidityReport> {
    if g.is_exceptional() {
        return Err(Error::Exceptional { order: g.order() });
    }
    let signature = elliptic_signature(g.d())?;
    let curve_index = tuple.elliptic.len();
    let mut violations = Vec::new();
    let valid = |t: &Triple| Triple::new(g, t.0).is_ok();

    let mut characters = Vec::new();
    for (i, t) in tuple.elliptic.iter().enumerate() {
        if !valid(t) || t.sorted_type(g) != signature {
            violations.push(Violation { condition: 1, factor_pair: vec![i] });
            characters.push(None);
        } else {
            characters.push(Some(elliptic_character(g, t)?));
        }
    }
    let curve_ok = valid(&tuple.curve) && tuple.curve.genus(g).is_ok_and(|genus| genus >= 2);
    if !curve_ok {
        violations.push(Violation { condition: 1, factor_pair: vec![curve_index] });
    }

    if curve_ok {
        for (i, chi) in characters.iter().enumerate() {
            if let Some(chi) = chi {
                if chevalley_weil_mult(g, &chi.conj(), &tuple.curve)? != 0 {
                    violations.push(Violation {
                        condition: 2,
                        factor_pair: vec![i, curve_index],
                    });
                }
            }
        }
    }
    for i in 0..characters.len() {
        for j in i + 1..characters.len() {
            if let (Some(a), Some(b)) = (characters[i], characters[j]) {
                if a.mul(&b).is_trivial() {
                    violations.push(Violation { condition: 3, factor_pair: vec![i, j] });
                }
            }
        }
    }
    Ok(RigidityReport {
        rigid: violations.is_empty(),
        violations,
    })
}

/// Dimension of the `G`-invariant `k`-canonical forms of a triangle curve
/// of type `ty`: `h⁰(O_{P¹}(−2k + Σ ⌊k(m_i − 1)/m_i⌋))`.
pub fn invariant_plurigenus(k: u32, ty: [u32; 3]) -> u64 {
    let k = k as i64;
    let deg: i64 = -2 * k + ty.iter().map(|&m| Integer::div_floor(&(k * (m as i64 - 1)), &(m as i64))).sum::<i64>();
    (deg + 1).max(0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn z6() -> Group {
        make_group(1, 6, &[[0, 0]]).unwrap()
    }

    fn z6_triple(g: &Group, ks: [u32; 3]) -> Triple {
        Triple::new(g, ks.map(|k| g.elem_of([0, 0], k))).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(RootOfUnity::new(3, 6), RootOfUnity::new(1, 2));
        assert_eq!(RootOfUnity::new(-1, 4).numerator(), 3);
        assert!(RootOfUnity::new(6, 6).is_one());
        let z = RootOfUnity::new(1, 6).mul(&RootOfUnity::new(1, 3));
        assert_eq!(z, RootOfUnity::new(1, 2));
        assert_eq!(RootOfUnity::new(1, 4).conj(), RootOfUnity::new(3, 4));
    }

    #[test]
    fn elliptic_characters_of_z6() {
        let g = z6();
        let chi = elliptic_character(&g, &z6_triple(&g, [3, 2, 1])).unwrap();
        assert_eq!(chi.value(&g, g.s()), RootOfUnity::new(-1, 6));
        let chi = elliptic_character(&g, &z6_triple(&g, [3, 4, 5])).unwrap();
        assert_eq!(chi.value(&g, g.s()), RootOfUnity::new(1, 6));
    }

    #[test]
    fn chevalley_weil_on_z6() {
        let g = z6();
        let t = z6_triple(&g, [3, 2, 1]);
        assert_eq!(chevalley_weil_mult(&g, &OneDimCharacter::new(6, 1), &t).unwrap(), 0);
        assert_eq!(chevalley_weil_mult(&g, &OneDimCharacter::new(6, 5), &t).unwrap(), 1);
        assert!(chevalley_weil_mult(&g, &OneDimCharacter::new(6, 0), &t).is_err());
        let exc = z6_triple(&g, [4, 1, 1]);
        assert_eq!(chevalley_weil_mult(&g, &OneDimCharacter::new(6, 5), &exc).unwrap(), 1);
        assert_eq!(chevalley_weil_mult(&g, &OneDimCharacter::new(6, 1), &exc).unwrap(), 0);
    }

    #[test]
    fn rigidity_on_z6() {
        let g = z6();
        let curve = z6_triple(&g, [4, 1, 1]);
        let good = ActionTuple::new(&g, vec![z6_triple(&g, [3, 2, 1])], curve).unwrap();
        assert!(is_rigid_action(&g, &good).unwrap().rigid);
        let bad = ActionTuple::new(&g, vec![z6_triple(&g, [3, 4, 5])], curve).unwrap();
        let report = is_rigid_action(&g, &bad).unwrap();
        assert!(!report.rigid);
        assert_eq!(report.violations, vec![Violation { condition: 2, factor_pair: vec![0, 1] }]);
    }

    #[test]
    fn mixed_elliptic_characters_violate_condition_three() {
        let g = make_group(3, 6, &[[1, 1]]).unwrap();
        let sig = crate::triples::enumerate_generating_triples(&g, Some([2, 3, 6]));
        let a = sig.iter().find(|t| elliptic_character(&g, t).unwrap().e == 5).unwrap();
        let b = sig.iter().find(|t| elliptic_character(&g, t).unwrap().e == 1).unwrap();
        let curve = crate::triples::enumerate_generating_triples(&g, None)
            .into_iter()
            .find(|t| t.genus(&g).unwrap_or(0) >= 2)
            .unwrap();
        let tuple = ActionTuple::new(&g, vec![*a, *b], curve).unwrap();
        let report = is_rigid_action(&g, &tuple).unwrap();
        assert!(report.violations.contains(&Violation { condition: 3, factor_pair: vec![0, 1] }));
    }

    #[test]
    fn exceptional_groups_are_rejected() {
        let g = make_group(3, 3, &[[1, 0], [0, 1]]).unwrap();
        let t = crate::triples::enumerate_generating_triples(&g, Some([3, 3, 3]))[0];
        assert!(matches!(elliptic_character(&g, &t), Err(Error::Exceptional { order: 27 })));
    }

    #[test]
    fn plurigenera() {
        assert_eq!(invariant_plurigenus(3, [4, 4, 5]), 1);
        assert_eq!(invariant_plurigenus(1, [2, 3, 7]), 0);
        assert_eq!(invariant_plurigenus(2, [2, 3, 7]), 0);
        // −12 + 3 + 4 + 5 = 0
        assert_eq!(invariant_plurigenus(6, [2, 3, 7]), 1);
    }
}
