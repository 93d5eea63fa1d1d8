//! Spherical generating triples, the braid moves `σ₁, σ₂`, complex
//! conjugation `ι`, and orbit computations on triples and on action tuples.

use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Automorphism, AutomorphismGroup, Elem, Group, GroupElement};

/// An ordered triple `[g₁, g₂, g₃]` of elements of one [`Group`].
///
/// The derived ordering compares entries by element index, which is the
/// lexicographic order on `(a, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple(pub [Elem; 3]);

/// Wire form of a triple: three `[a0, a1, k]` encodings.
pub type TripleSpec = [GroupElement; 3];

impl Triple {
    /// Validates `g₁g₂g₃ = 1`, nontrivial entries and generation of `G`.
    pub fn new(g: &Group, entries: [Elem; 3]) -> Result<Self> {
        let t = Triple(entries);
        if g.mul(g.mul(entries[0], entries[1]), entries[2]) != g.identity() {
            return Err(Error::invalid(format!("{} does not have product one", t.display(g))));
        }
        if entries.contains(&g.identity()) {
            return Err(Error::invalid(format!("{} has a trivial entry", t.display(g))));
        }
        if !g.generates(&entries) {
            return Err(Error::invalid(format!("{} does not generate {g}", t.display(g))));
        }
        Ok(t)
    }

    pub fn from_spec(g: &Group, spec: &TripleSpec) -> Result<Self> {
        let mut entries = [g.identity(); 3];
        for (slot, x) in entries.iter_mut().zip(spec) {
            *slot = g
                .elem(x)
                .ok_or_else(|| Error::invalid(format!("{x} is not an element of {g}")))?;
        }
        Triple::new(g, entries)
    }

    pub fn spec(&self, g: &Group) -> TripleSpec {
        self.0.map(|x| g.element(x))
    }

    /// Element orders in entry order.
    pub fn type_of(&self, g: &Group) -> [u32; 3] {
        self.0.map(|x| g.element_order(x))
    }

    pub fn sorted_type(&self, g: &Group) -> [u32; 3] {
        let mut t = self.type_of(g);
        t.sort_unstable();
        t
    }

    pub fn genus(&self, g: &Group) -> Result<u64> {
        hurwitz_genus(g.order() as u64, self.type_of(g))
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Triple {
        Triple(self.0.map(f))
    }

    pub fn apply_automorphism(&self, alpha: &Automorphism) -> Triple {
        self.map(|x| alpha.apply(x))
    }

    /// Cyclic rotation `[g₂, g₃, g₁]`, again a generating triple.
    pub fn rotate(&self) -> Triple {
        let [a, b, c] = self.0;
        Triple([b, c, a])
    }

    pub fn display(&self, g: &Group) -> String {
        let parts: Vec<String> = self.0.iter().map(|&x| g.element(x).to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// `g` from `2g − 2 = |G|(1 − 1/n₁ − 1/n₂ − 1/n₃)`.
pub fn hurwitz_genus(group_order: u64, ty: [u32; 3]) -> Result<u64> {
    if ty.iter().any(|&m| m < 2) {
        return Err(Error::invalid(format!("branching orders must be at least 2, got {ty:?}")));
    }
    let [a, b, c] = ty.map(|m| m as i128);
    let denom = a * b * c;
    let numer = group_order as i128 * (denom - b * c - a * c - a * b);
    if numer % denom != 0 {
        return Err(Error::invalid(format!(
            "group order {group_order} is incompatible with type {ty:?}: 2g-2 is not an integer"
        )));
    }
    let two_g = numer / denom + 2;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(Error::invalid(format!(
            "group order {group_order} and type {ty:?} give no valid genus (2g = {two_g})"
        )));
    }
    Ok((two_g / 2) as u64)
}

/// All generating triples of `G`, ordered by `(g₁, g₂)`, optionally
/// restricted to a type given in entry order.
pub fn enumerate_generating_triples(g: &Group, type_filter: Option<[u32; 3]>) -> Vec<Triple> {
    let id = g.identity();
    let mut out = Vec::new();
    for g1 in g.elems() {
        if g1 == id || type_filter.is_some_and(|t| g.element_order(g1) != t[0]) {
            continue;
        }
        for g2 in g.elems() {
            if g2 == id || type_filter.is_some_and(|t| g.element_order(g2) != t[1]) {
                continue;
            }
            let g3 = g.inv(g.mul(g1, g2));
            if g3 == id || type_filter.is_some_and(|t| g.element_order(g3) != t[2]) {
                continue;
            }
            if g.generates(&[g1, g2]) {
                out.push(Triple([g1, g2, g3]));
            }
        }
    }
    out
}

/// `σ₁([g₁,g₂,g₃]) = [g₁g₂g₁⁻¹, g₁, g₃]` and `σ₂([g₁,g₂,g₃]) = [g₁, g₂g₃g₂⁻¹, g₂]`.
pub fn braid_move(g: &Group, j: u8, t: &Triple) -> Result<Triple> {
    let [a, b, c] = t.0;
    match j {
        1 => Ok(Triple([g.conj(a, b), a, c])),
        2 => Ok(Triple([a, g.conj(b, c), b])),
        _ => Err(Error::invalid(format!("braid generator must be 1 or 2, got {j}"))),
    }
}

fn sigma(g: &Group, j: u8, t: &Triple) -> Triple {
    braid_move(g, j, t).expect("braid index is 1 or 2")
}

/// `ι([g₁,g₂,g₃]) = [g₁⁻¹, g₁g₃, g₃⁻¹]`.
pub fn conjugate_triple(g: &Group, t: &Triple) -> Triple {
    let [a, _, c] = t.0;
    Triple([g.inv(a), g.mul(a, c), g.inv(c)])
}

/// One orbit of [`orbit_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least input triple in the orbit.
    pub representative: Triple,
    /// Input triples in the orbit, sorted.
    pub members: Vec<Triple>,
    /// Size of the full orbit, including triples outside the input.
    pub closure_size: usize,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Report form of an orbit: `{"representative": …, "size": …}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub representative: TripleSpec,
    pub size: usize,
}

impl Orbit {
    pub fn report(&self, g: &Group) -> OrbitReport {
        OrbitReport {
            representative: self.representative.spec(g),
            size: self.size(),
        }
    }
}

fn closure(g: &Group, seed: Triple, auts: Option<&AutomorphismGroup>) -> Vec<Triple> {
    let mut seen = HashSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    let mut out = vec![seed];
    while let Some(t) = queue.pop_front() {
        let mut next = vec![sigma(g, 1, &t), sigma(g, 2, &t)];
        if let Some(auts) = auts {
            next.extend(auts.iter().map(|a| t.apply_automorphism(a)));
        }
        for u in next {
            if seen.insert(u) {
                out.push(u);
                queue.push_back(u);
            }
        }
    }
    out
}

/// Partitions `triples` into orbits of the group generated by `σ₁, σ₂` and,
/// when given, the automorphisms. Orbits are sorted by representative.
pub fn orbit_decomposition(
    g: &Group,
    triples: &[Triple],
    auts: Option<&AutomorphismGroup>,
) -> Vec<Orbit> {
    let input: HashSet<Triple> = triples.iter().copied().collect();
    let mut assigned: HashSet<Triple> = HashSet::new();
    let mut sorted: Vec<Triple> = input.iter().copied().collect();
    sorted.sort_unstable();
    let mut orbits = Vec::new();
    for t in sorted {
        if assigned.contains(&t) {
            continue;
        }
        let full = closure(g, t, auts);
        let mut members: Vec<Triple> = full.iter().copied().filter(|u| input.contains(u)).collect();
        members.sort_unstable();
        assigned.extend(members.iter().copied());
        orbits.push(Orbit {
            representative: members[0],
            members,
            closure_size: full.len(),
        });
    }
    orbits
}

/// Braid-orbit labels: every triple maps to the least triple of its
/// `⟨σ₁, σ₂⟩`-orbit. Orbits are computed lazily and cached.
#[derive(Default)]
pub struct BraidOrbitIndex {
    label: HashMap<Triple, Triple>,
}

impl BraidOrbitIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn label(&mut self, g: &Group, t: &Triple) -> Triple {
        if let Some(&l) = self.label.get(t) {
            return l;
        }
        let orbit = closure(g, *t, None);
        let least = *orbit.iter().min().expect("orbit contains its seed");
        for u in orbit {
            self.label.insert(u, least);
        }
        least
    }
}

/// A diagonal action on `E^{n−1} × C`: one elliptic triple per factor `E`
/// and the triple of the curve `C`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionTuple {
    pub elliptic: Vec<Triple>,
    pub curve: Triple,
}

/// Wire form of an [`ActionTuple`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTupleSpec {
    pub elliptic: Vec<TripleSpec>,
    pub curve: TripleSpec,
}

/// The braid-group signature of each elliptic factor.
pub fn elliptic_signature(d: u32) -> Result<[u32; 3]> {
    match d {
        3 => Ok([3, 3, 3]),
        4 => Ok([2, 4, 4]),
        6 => Ok([2, 3, 6]),
        _ => Err(Error::invalid(format!("twist order must be 3, 4 or 6, got {d}"))),
    }
}

impl ActionTuple {
    pub fn new(g: &Group, elliptic: Vec<Triple>, curve: Triple) -> Result<Self> {
        let signature = elliptic_signature(g.d())?;
        for (i, t) in elliptic.iter().enumerate() {
            Triple::new(g, t.0)?;
            if t.sorted_type(g) != signature {
                return Err(Error::invalid(format!(
                    "elliptic factor {i} has type {:?}, expected a permutation of {signature:?}",
                    t.type_of(g)
                )));
            }
        }
        Triple::new(g, curve.0)?;
        let genus = curve.genus(g)?;
        if genus < 2 {
            return Err(Error::invalid(format!("curve triple has genus {genus}, expected at least 2")));
        }
        Ok(ActionTuple { elliptic, curve })
    }

    pub fn from_spec(g: &Group, spec: &ActionTupleSpec) -> Result<Self> {
        let elliptic = spec
            .elliptic
            .iter()
            .map(|t| Triple::from_spec(g, t))
            .collect::<Result<Vec<_>>>()?;
        ActionTuple::new(g, elliptic, Triple::from_spec(g, &spec.curve)?)
    }

    pub fn spec(&self, g: &Group) -> ActionTupleSpec {
        ActionTupleSpec {
            elliptic: self.elliptic.iter().map(|t| t.spec(g)).collect(),
            curve: self.curve.spec(g),
        }
    }

    /// Dimension `n` of `E^{n−1} × C`.
    pub fn dimension(&self) -> usize {
        self.elliptic.len() + 1
    }

    pub fn factors(&self) -> impl Iterator<Item = &Triple> {
        self.elliptic.iter().chain(std::iter::once(&self.curve))
    }

    pub fn map(&self, f: impl Fn(&Triple) -> Triple) -> ActionTuple {
        ActionTuple {
            elliptic: self.elliptic.iter().map(&f).collect(),
            curve: f(&self.curve),
        }
    }

    /// `ι` applied to every factor.
    pub fn conjugate(&self, g: &Group) -> ActionTuple {
        self.map(|t| conjugate_triple(g, t))
    }
}

/// One isomorphism class of action tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleClass {
    pub representative: ActionTuple,
    /// Indices into the input list, ascending.
    pub members: Vec<usize>,
    /// Index of the class containing the componentwise conjugates, if that
    /// class occurs in the input.
    pub conjugate: Option<usize>,
}

/// Canonical key of a tuple under `Aut(G) × B₃ⁿ × S_{n−1}`: the least, over
/// all automorphisms, of the sorted elliptic braid labels and the curve label.
fn tuple_key(
    g: &Group,
    t: &ActionTuple,
    auts: &AutomorphismGroup,
    index: &mut BraidOrbitIndex,
) -> (Vec<Triple>, Triple) {
    auts.iter()
        .map(|alpha| {
            let mut ell: Vec<Triple> = t
                .elliptic
                .iter()
                .map(|s| index.label(g, &s.apply_automorphism(alpha)))
                .collect();
            ell.sort_unstable();
            (ell, index.label(g, &t.curve.apply_automorphism(alpha)))
        })
        .min()
        .expect("the automorphism group contains the identity")
}

/// Partitions `tuples` into isomorphism classes and pairs classes swapped by
/// componentwise conjugation. Classes are ordered by their least member.
pub fn tuple_classes(g: &Group, tuples: &[ActionTuple], auts: &AutomorphismGroup) -> Vec<TupleClass> {
    let mut index = BraidOrbitIndex::new();
    let mut by_key: HashMap<(Vec<Triple>, Triple), usize> = HashMap::new();
    let mut classes: Vec<TupleClass> = Vec::new();
    let mut keys = Vec::new();
    let mut order: Vec<usize> = (0..tuples.len()).collect();
    order.sort_by(|&i, &j| tuples[i].cmp(&tuples[j]));
    for i in order {
        let key = tuple_key(g, &tuples[i], auts, &mut index);
        match by_key.get(&key) {
            Some(&c) => classes[c].members.push(i),
            None => {
                by_key.insert(key.clone(), classes.len());
                keys.push(key);
                classes.push(TupleClass {
                    representative: tuples[i].clone(),
                    members: vec![i],
                    conjugate: None,
                });
            }
        }
    }
    for c in 0..classes.len() {
        let conj = classes[c].representative.conjugate(g);
        let key = tuple_key(g, &conj, auts, &mut index);
        classes[c].conjugate = by_key.get(&key).copied();
        classes[c].members.sort_unstable();
    }
    classes
}

/// Shape of a generating triple of `A ⋊ Z_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TripleShape {
    /// `[sh, s⁻¹k, c]` with `c ∈ A`.
    General,
    /// `[s⁴h, sk, sc]`, every entry outside `A`; only for `d = 6`.
    Exc366,
}

/// A triple together with its shape and the rotation exhibiting it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapedTriple {
    pub shape: TripleShape,
    /// Number of left rotations applied to the input.
    pub rotation: usize,
    /// The rotated triple: entry in `A` last for `General`, the entry with
    /// `Z_6`-part `4` first for `Exc366`.
    pub rotated: Triple,
}

pub fn triple_shape(g: &Group, t: &Triple) -> Result<ShapedTriple> {
    let mut rotated = *t;
    for rotation in 0..3 {
        if g.in_a(rotated.0[2]) {
            return Ok(ShapedTriple { shape: TripleShape::General, rotation, rotated });
        }
        rotated = rotated.rotate();
    }
    let d = g.d();
    let sorted = t.sorted_type(g);
    if d != 6 || sorted != [3, 6, 6] {
        return Err(Error::contradiction(format!(
            "{} has no entry in A but d = {d} and type {:?}; only d = 6 with type [3,6,6] is possible",
            t.display(g),
            t.type_of(g)
        )));
    }
    let parts = t.0.map(|x| g.k_part(x));
    // units u with all k-parts in {4u, u, u}
    for rotation in 0..3 {
        let r = [parts[rotation], parts[(rotation + 1) % 3], parts[(rotation + 2) % 3]];
        if r[1] == r[2] && r[1].gcd(&6) == 1 && r[0] == (4 * r[1]) % 6 {
            let mut rotated = *t;
            for _ in 0..rotation {
                rotated = rotated.rotate();
            }
            return Ok(ShapedTriple { shape: TripleShape::Exc366, rotation, rotated });
        }
    }
    Err(Error::contradiction(format!(
        "{} has Z_6-parts {parts:?}, not of the form (4u, u, u)",
        t.display(g)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn z6() -> Group {
        make_group(1, 6, &[[0, 0]]).unwrap()
    }

    fn zk(g: &Group, k: u32) -> Elem {
        g.elem_of([0, 0], k)
    }

    fn additive(g: &Group, ts: &[Triple]) -> Vec<[u32; 3]> {
        ts.iter().map(|t| t.0.map(|x| g.k_part(x))).collect()
    }

    #[test]
    fn z6_triples_by_type() {
        let g = z6();
        let t = enumerate_generating_triples(&g, Some([6, 6, 3]));
        assert_eq!(additive(&g, &t), vec![[1, 1, 4], [5, 5, 2]]);
        let t = enumerate_generating_triples(&g, Some([2, 3, 6]));
        assert_eq!(additive(&g, &t), vec![[3, 2, 1], [3, 4, 5]]);
        let z3 = make_group(1, 3, &[[0, 0]]).unwrap();
        assert!(enumerate_generating_triples(&z3, Some([2, 2, 2])).is_empty());
    }

    #[test]
    fn genus_values() {
        assert_eq!(hurwitz_genus(21, [3, 3, 7]).unwrap(), 3);
        assert_eq!(hurwitz_genus(20, [4, 4, 5]).unwrap(), 4);
        assert_eq!(hurwitz_genus(6, [2, 3, 6]).unwrap(), 1);
        assert_eq!(hurwitz_genus(7, [2, 3, 6]).unwrap(), 1);
        assert!(hurwitz_genus(5, [2, 3, 7]).is_err());
        assert!(hurwitz_genus(6, [1, 3, 6]).is_err());
        // 2g - 2 = -1
        assert!(hurwitz_genus(2, [2, 2, 2]).is_err());
    }

    #[test]
    fn braid_and_conjugation_in_g21() {
        let g = make_group(7, 3, &[[1, 3]]).unwrap();
        let s = g.s();
        let t = g.elem_of([1, 3], 0);
        let tp = |e| g.pow(t, e);
        let s2t = g.mul(g.pow(s, 2), t);
        let triple = Triple::new(&g, [s, s2t, tp(6)]).unwrap();
        let expected = Triple([g.mul(g.pow(s, 2), tp(4)), s, tp(6)]);
        assert_eq!(braid_move(&g, 1, &triple).unwrap(), expected);
        let iota = conjugate_triple(&g, &triple);
        assert_eq!(iota, Triple([g.pow(s, 2), g.mul(s, tp(6)), t]));
        assert_eq!(conjugate_triple(&g, &iota), triple);
        assert!(braid_move(&g, 3, &triple).is_err());
        assert_eq!(triple_shape(&g, &triple).unwrap().shape, TripleShape::General);
    }

    #[test]
    fn z6_orbits() {
        let g = z6();
        let triples = enumerate_generating_triples(&g, Some([2, 3, 6]));
        assert_eq!(orbit_decomposition(&g, &triples, None).len(), 2);
        let auts = g.automorphism_group().unwrap();
        let orbits = orbit_decomposition(&g, &triples, Some(&auts));
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].size(), 2);
    }

    #[test]
    fn shapes_in_z6() {
        let g = z6();
        let exc = Triple::new(&g, [zk(&g, 4), zk(&g, 1), zk(&g, 1)]).unwrap();
        let shaped = triple_shape(&g, &exc).unwrap();
        assert_eq!(shaped.shape, TripleShape::Exc366);
        assert_eq!(shaped.rotation, 0);
        let rotated = Triple::new(&g, [zk(&g, 1), zk(&g, 1), zk(&g, 4)]).unwrap();
        let shaped = triple_shape(&g, &rotated).unwrap();
        assert_eq!(shaped.shape, TripleShape::Exc366);
        assert_eq!(shaped.rotated, exc);
        let elliptic = Triple::new(&g, [zk(&g, 3), zk(&g, 2), zk(&g, 1)]).unwrap();
        assert!(matches!(triple_shape(&g, &elliptic), Err(Error::Contradiction(_))));
    }

    #[test]
    fn invalid_triples_are_rejected() {
        let g = z6();
        assert!(Triple::new(&g, [zk(&g, 1), zk(&g, 1), zk(&g, 1)]).is_err());
        assert!(Triple::new(&g, [zk(&g, 2), zk(&g, 2), zk(&g, 2)]).is_err());
        assert!(Triple::new(&g, [zk(&g, 0), zk(&g, 1), zk(&g, 5)]).is_err());
    }
}
