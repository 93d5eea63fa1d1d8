//! Semidirect products `G = A ⋊_φ Z_d` where `A` is a twist-invariant
//! subgroup of `Z_n²` and `φ(1)` is the order-`d` matrix of [`TwistAction`].
//!
//! Elements are pairs `(a, k)` with `a ∈ A` and `k ∈ Z_d`, multiplied by
//! `(a, k)·(b, l) = (a + φ^k(b), k + l)`. A [`Group`] enumerates its elements
//! once, sorted by `(a, k)`, and hands out [`Elem`] indices into that list, so
//! comparing indices is the same as comparing elements lexicographically.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `|G|` for the brute-force automorphism search.
pub const AUTOMORPHISM_BOUND: usize = 512;

const NONE: u32 = u32::MAX;

/// The twist `φ_d(1)` acting on `Z_n²`.
///
/// * `d = 3`: `(a, b) ↦ (−b, a − b)`
/// * `d = 4`: `(a, b) ↦ (−b, a)`
/// * `d = 6`: `(a, b) ↦ (−b, a + b)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistAction {
    d: u32,
}

impl TwistAction {
    pub fn new(d: u32) -> Result<Self> {
        match d {
            3 | 4 | 6 => Ok(TwistAction { d }),
            _ => Err(Error::invalid(format!("twist order must be 3, 4 or 6, got {d}"))),
        }
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    /// Integer matrix of `φ_d(1)`, acting on column vectors.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        match self.d {
            3 => [[0, -1], [1, -1]],
            4 => [[0, -1], [1, 0]],
            _ => [[0, -1], [1, 1]],
        }
    }

    pub fn apply(&self, v: [u32; 2], modulus: u32) -> [u32; 2] {
        let m = self.matrix();
        let n = modulus as i64;
        let (x, y) = (v[0] as i64, v[1] as i64);
        [
            (m[0][0] * x + m[0][1] * y).rem_euclid(n) as u32,
            (m[1][0] * x + m[1][1] * y).rem_euclid(n) as u32,
        ]
    }

    pub fn apply_pow(&self, k: u32, v: [u32; 2], modulus: u32) -> [u32; 2] {
        (0..k % self.d).fold(v, |w, _| self.apply(w, modulus))
    }
}

/// A subgroup `A ≤ Z_n²`, stored through the Hermite normal form of its
/// preimage lattice `L = A + nZ² ⊆ Z²`: rows `(a, b)` and `(0, c)` with
/// `a | n`, `c | n` and `0 ≤ b < c`. Two subgroups of the same `Z_n²` are
/// equal exactly when these forms are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianSubgroup {
    modulus: u32,
    a: u32,
    b: u32,
    c: u32,
}

impl AbelianSubgroup {
    pub fn from_generators(modulus: u32, gens: &[[u32; 2]]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        if let Some(v) = gens.iter().find(|v| v[0] >= modulus || v[1] >= modulus) {
            return Err(Error::invalid(format!("vector {v:?} is not reduced mod {modulus}")));
        }
        let n = modulus as i64;
        let (mut a, mut b, mut c) = (n, 0i64, n);
        for v in gens {
            let (x, y) = (v[0] as i64, v[1] as i64);
            let eg = a.extended_gcd(&x);
            let g = eg.gcd;
            let new_b = eg.x * b + eg.y * y;
            // (x/g)·(a, b) − (a/g)·(x, y) has vanishing first coordinate
            let rest = (x / g) * b - (a / g) * y;
            c = c.gcd(&rest);
            a = g;
            b = new_b.rem_euclid(c);
        }
        Ok(AbelianSubgroup {
            modulus,
            a: a as u32,
            b: b as u32,
            c: c as u32,
        })
    }

    pub fn trivial(modulus: u32) -> Self {
        AbelianSubgroup { modulus, a: modulus, b: 0, c: modulus }
    }

    pub fn full(modulus: u32) -> Self {
        AbelianSubgroup { modulus, a: 1, b: 0, c: 1 }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Hermite rows `[[a, b], [0, c]]` of the preimage lattice.
    pub fn canonical_form(&self) -> [[u32; 2]; 2] {
        [[self.a, self.b], [0, self.c]]
    }

    pub fn order(&self) -> usize {
        let n = self.modulus as usize;
        (n / self.a as usize) * (n / self.c as usize)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Nonzero generators reduced mod `n`, read off the Hermite rows.
    pub fn generators(&self) -> Vec<[u32; 2]> {
        let n = self.modulus;
        [[self.a % n, self.b % n], [0, self.c % n]]
            .into_iter()
            .filter(|v| *v != [0, 0])
            .collect()
    }

    pub fn contains(&self, v: [u32; 2]) -> bool {
        let n = self.modulus;
        let (x, y) = (v[0] % n, v[1] % n);
        if x % self.a != 0 {
            return false;
        }
        let i = (x / self.a) as i64;
        (y as i64 - i * self.b as i64).rem_euclid(self.c as i64) == 0
    }

    pub fn is_subgroup_of(&self, other: &AbelianSubgroup) -> bool {
        self.modulus == other.modulus && self.generators().iter().all(|&v| other.contains(v))
    }

    pub fn is_invariant(&self, twist: TwistAction) -> bool {
        self.generators()
            .iter()
            .all(|&v| self.contains(twist.apply(v, self.modulus)))
    }

    /// All elements, sorted lexicographically.
    pub fn elements(&self) -> Vec<[u32; 2]> {
        let n = self.modulus;
        let mut out = Vec::with_capacity(self.order());
        for i in 0..n / self.a {
            for j in 0..n / self.c {
                let x = (i * self.a) % n;
                let y = ((i as u64 * self.b as u64 + j as u64 * self.c as u64) % n as u64) as u32;
                out.push([x, y]);
            }
        }
        out.sort_unstable();
        out
    }

    /// Largest element order, i.e. the exponent of `A`.
    pub fn exponent(&self) -> u32 {
        let n = self.modulus;
        self.generators()
            .iter()
            .map(|v| vector_order(*v, n))
            .fold(1, |acc, o| acc.lcm(&o))
    }
}

impl fmt::Display for AbelianSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.generators();
        if gens.is_empty() {
            return write!(f, "0 ≤ Z_{}²", self.modulus);
        }
        let parts: Vec<String> = gens.iter().map(|v| format!("({},{})", v[0], v[1])).collect();
        write!(f, "⟨{}⟩ ≤ Z_{}²", parts.join(", "), self.modulus)
    }
}

fn vector_order(v: [u32; 2], n: u32) -> u32 {
    let o0 = n / n.gcd(&v[0]);
    let o1 = n / n.gcd(&v[1]);
    o0.lcm(&o1)
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// All `φ_d`-invariant subgroups of `Z_n²` of order at most `max_order`,
/// sorted by `(order, canonical form)`.
pub fn enumerate_invariant_subgroups(
    modulus: u32,
    d: u32,
    max_order: usize,
) -> Result<Vec<AbelianSubgroup>> {
    let twist = TwistAction::new(d)?;
    if modulus == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let n = modulus;
    let mut out = Vec::new();
    for &a in &divisors(n) {
        for &c in &divisors(n) {
            if ((n / a) as usize) * ((n / c) as usize) > max_order {
                continue;
            }
            for b in 0..c {
                // (n, 0) must lie in the lattice
                if !((n / a) as u64 * b as u64).is_multiple_of(c as u64) {
                    continue;
                }
                let sub = AbelianSubgroup { modulus: n, a, b, c };
                if sub.is_invariant(twist) {
                    out.push(sub);
                }
            }
        }
    }
    out.sort_by_key(|s| (s.order(), s.canonical_form()));
    Ok(out)
}

/// Every group `A ⋊ Z_d` with `|G| ≤ max_order`, each `A` realized in the
/// smallest ambient `Z_n²` (`n` = exponent of `A`), sorted by
/// `(|G|, n, Hermite form)`.
pub fn enumerate_groups(d: u32, max_order: usize) -> Result<Vec<Group>> {
    let twist = TwistAction::new(d)?;
    let max_a = max_order / d as usize;
    let mut out = Vec::new();
    for n in 1..=max_a as u32 {
        for sub in enumerate_invariant_subgroups(n, d, max_a)? {
            if sub.exponent() == n {
                out.push(Group::new(twist, sub)?);
            }
        }
    }
    out.sort_by_key(|g| (g.order(), g.modulus(), g.subgroup().canonical_form()));
    Ok(out)
}

/// Index of an element inside its [`Group`]. Index order coincides with the
/// lexicographic order of `(a, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An element `(a, k)` of `A ⋊ Z_d` in coordinates. Serializes as `[a0, a1, k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct GroupElement {
    pub a: [u32; 2],
    pub k: u32,
}

impl From<[u32; 3]> for GroupElement {
    fn from(v: [u32; 3]) -> Self {
        GroupElement { a: [v[0], v[1]], k: v[2] }
    }
}

impl From<GroupElement> for [u32; 3] {
    fn from(g: GroupElement) -> Self {
        [g.a[0], g.a[1], g.k]
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.a[0], self.a[1], self.k)
    }
}

/// Wire form of a group: `{"n": …, "d": …, "A_gens": [[a, b], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub n: u32,
    pub d: u32,
    #[serde(rename = "A_gens")]
    pub a_gens: Vec<[u32; 2]>,
}

#[derive(Clone, Debug)]
pub struct Group {
    twist: TwistAction,
    subgroup: AbelianSubgroup,
    vectors: Vec<[u32; 2]>,
    /// `modulus²` slots mapping a vector to its index in `vectors`.
    lookup: Vec<u32>,
    /// `phi[k][i]`: index of `φ^k(vectors[i])`.
    phi: Vec<Vec<u32>>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.twist == other.twist && self.subgroup == other.subgroup
    }
}

impl Eq for Group {}

/// Builds `A ⋊_{φ_d} Z_d` with `A = ⟨gens⟩ ≤ Z_n²`.
pub fn make_group(modulus: u32, d: u32, gens: &[[u32; 2]]) -> Result<Group> {
    let twist = TwistAction::new(d)?;
    if gens.is_empty() {
        return Err(Error::invalid("at least one generator is required"));
    }
    let sub = AbelianSubgroup::from_generators(modulus, gens)?;
    if !sub.is_invariant(twist) {
        return Err(Error::NotInvariant {
            modulus,
            d,
            generators: gens.to_vec(),
        });
    }
    Group::new(twist, sub)
}

impl Group {
    pub fn new(twist: TwistAction, subgroup: AbelianSubgroup) -> Result<Self> {
        if !subgroup.is_invariant(twist) {
            return Err(Error::NotInvariant {
                modulus: subgroup.modulus(),
                d: twist.order(),
                generators: subgroup.generators(),
            });
        }
        let n = subgroup.modulus();
        let d = twist.order();
        let vectors = subgroup.elements();
        let mut lookup = vec![NONE; (n as usize) * (n as usize)];
        for (i, v) in vectors.iter().enumerate() {
            lookup[(v[0] * n + v[1]) as usize] = i as u32;
        }
        let phi = (0..d)
            .map(|k| {
                vectors
                    .iter()
                    .map(|&v| lookup[slot(twist.apply_pow(k, v, n), n)])
                    .collect()
            })
            .collect();
        let mut group = Group {
            twist,
            subgroup,
            vectors,
            lookup,
            phi,
            inverses: Vec::new(),
            orders: Vec::new(),
        };
        let size = group.order();
        group.inverses = (0..size as u32)
            .map(|x| group.compute_inverse(Elem(x)).0)
            .collect();
        group.orders = (0..size as u32)
            .map(|x| group.compute_order(Elem(x)))
            .collect();
        Ok(group)
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        if spec.a_gens.is_empty() {
            return make_group(spec.n, spec.d, &[[0, 0]]);
        }
        make_group(spec.n, spec.d, &spec.a_gens)
    }

    pub fn spec(&self) -> GroupSpec {
        let gens = self.subgroup.generators();
        GroupSpec {
            n: self.subgroup.modulus(),
            d: self.d(),
            a_gens: if gens.is_empty() { vec![[0, 0]] } else { gens },
        }
    }

    pub fn d(&self) -> u32 {
        self.twist.order()
    }

    pub fn twist(&self) -> TwistAction {
        self.twist
    }

    pub fn modulus(&self) -> u32 {
        self.subgroup.modulus()
    }

    pub fn subgroup(&self) -> &AbelianSubgroup {
        &self.subgroup
    }

    pub fn order(&self) -> usize {
        self.vectors.len() * self.d() as usize
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order() as u32).map(Elem)
    }

    pub fn identity(&self) -> Elem {
        // (0,0) sorts first
        Elem(0)
    }

    pub fn element(&self, x: Elem) -> GroupElement {
        let d = self.d() as usize;
        GroupElement {
            a: self.vectors[x.index() / d],
            k: (x.index() % d) as u32,
        }
    }

    pub fn elem(&self, g: &GroupElement) -> Option<Elem> {
        let n = self.modulus();
        if g.a[0] >= n || g.a[1] >= n || g.k >= self.d() {
            return None;
        }
        let i = self.lookup[slot(g.a, n)];
        (i != NONE).then(|| Elem(i * self.d() + g.k))
    }

    /// The element `(a, k)`; panics if `a ∉ A`.
    pub fn elem_of(&self, a: [u32; 2], k: u32) -> Elem {
        self.elem(&GroupElement { a, k: k % self.d() })
            .unwrap_or_else(|| panic!("({},{}) is not in {}", a[0], a[1], self.subgroup))
    }

    /// The twist generator `s = (0, 1)`.
    pub fn s(&self) -> Elem {
        self.elem_of([0, 0], 1)
    }

    /// Every `(0, u)` with `u` a unit mod `d`: the admissible choices of `s`.
    pub fn twist_generators(&self) -> Vec<Elem> {
        let d = self.d();
        (1..d)
            .filter(|u| u.gcd(&d) == 1)
            .map(|u| self.elem_of([0, 0], u))
            .collect()
    }

    fn split(&self, x: Elem) -> (usize, u32) {
        let d = self.d() as usize;
        (x.index() / d, (x.index() % d) as u32)
    }

    fn join(&self, vi: u32, k: u32) -> Elem {
        Elem(vi * self.d() + k)
    }

    /// `(a, k)·(b, l) = (a + φ^k(b), k + l)`.
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let (xa, xk) = self.split(x);
        let (ya, yk) = self.split(y);
        let n = self.modulus();
        let u = self.vectors[xa];
        let w = self.vectors[self.phi[xk as usize][ya] as usize];
        let sum = [(u[0] + w[0]) % n, (u[1] + w[1]) % n];
        self.join(self.lookup[slot(sum, n)], (xk + yk) % self.d())
    }

    pub fn inv(&self, x: Elem) -> Elem {
        Elem(self.inverses[x.index()])
    }

    pub fn pow(&self, x: Elem, e: i64) -> Elem {
        let ord = self.element_order(x) as i64;
        let e = e.rem_euclid(ord);
        (0..e).fold(self.identity(), |acc, _| self.mul(acc, x))
    }

    /// `x·y·x⁻¹`.
    pub fn conj(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(x, y), self.inv(x))
    }

    pub fn element_order(&self, x: Elem) -> u32 {
        self.orders[x.index()]
    }

    pub fn in_a(&self, x: Elem) -> bool {
        self.split(x).1 == 0
    }

    /// Image of `x` in `G/A ≅ Z_d`.
    pub fn k_part(&self, x: Elem) -> u32 {
        self.split(x).1
    }

    fn compute_inverse(&self, x: Elem) -> Elem {
        // (a, k)⁻¹ = (−φ^{−k}(a), −k)
        let (xa, xk) = self.split(x);
        let d = self.d();
        let back = (d - xk) % d;
        let w = self.vectors[self.phi[back as usize][xa] as usize];
        let n = self.modulus();
        let neg = [(n - w[0]) % n, (n - w[1]) % n];
        self.join(self.lookup[slot(neg, n)], back)
    }

    fn compute_order(&self, x: Elem) -> u32 {
        let id = self.identity();
        let mut acc = x;
        let mut m = 1;
        while acc != id {
            acc = self.mul(acc, x);
            m += 1;
        }
        m
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[Elem]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        let id = self.identity();
        seen[id.index()] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn generated_order(&self, gens: &[Elem]) -> usize {
        self.generated(gens).iter().filter(|&&b| b).count()
    }

    pub fn generates(&self, gens: &[Elem]) -> bool {
        self.generated_order(gens) == self.order()
    }

    /// Membership mask of the commutator subgroup.
    pub fn commutator_subgroup(&self) -> Vec<bool> {
        let mut commutators = Vec::new();
        for x in self.elems() {
            for y in self.elems() {
                let c = self.mul(self.mul(x, y), self.inv(self.mul(y, x)));
                commutators.push(c);
            }
        }
        commutators.sort_unstable();
        commutators.dedup();
        self.generated(&commutators)
    }

    /// Invariant factors `[m_1, …, m_r]` (`m_i | m_{i+1}`, all `> 1`) of
    /// `G/[G, G]`.
    pub fn abelianization(&self) -> Vec<u32> {
        let derived = self.commutator_subgroup();
        let derived_order = derived.iter().filter(|&&b| b).count();
        let index = (self.order() / derived_order) as u32;
        // For each prime p, the number of cosets killed by p^j determines
        // how many cyclic p-factors have order at least p^j.
        let mut factors: Vec<u32> = Vec::new();
        let mut rest = index;
        let mut p = 2;
        while rest > 1 {
            if !rest.is_multiple_of(p) {
                p += 1;
                continue;
            }
            let mut top = 1;
            while rest.is_multiple_of(p) {
                rest /= p;
                top += 1;
            }
            let mut logs = vec![0u32];
            let mut q = 1i64;
            for _ in 1..top {
                q *= p as i64;
                let killed = self.elems().filter(|&x| derived[self.pow(x, q).index()]).count() / derived_order;
                logs.push(killed.ilog(p as usize));
            }
            // at_least[j] = number of cyclic factors of order ≥ p^j
            let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
            let rank = at_least.first().copied().unwrap_or(0) as usize;
            if factors.len() < rank {
                factors.splice(0..0, std::iter::repeat_n(1, rank - factors.len()));
            }
            let len = factors.len();
            for &count in &at_least {
                for f in &mut factors[len - count as usize..] {
                    *f *= p;
                }
            }
        }
        factors
    }

    /// A short generating list: one element if `G` is cyclic, otherwise the
    /// first generating pair (elements of high order tried first), otherwise
    /// the generators of `A` together with `s`.
    pub fn small_generating_set(&self) -> Vec<Elem> {
        let mut by_order: Vec<Elem> = self.elems().collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        if let Some(&x) = by_order.first() {
            if self.element_order(x) as usize == self.order() {
                return vec![x];
            }
        }
        for &x in &by_order {
            for y in self.elems() {
                if self.generates(&[x, y]) {
                    return vec![x, y];
                }
            }
        }
        let mut gens: Vec<Elem> = self
            .subgroup
            .generators()
            .into_iter()
            .map(|v| self.elem_of(v, 0))
            .collect();
        gens.push(self.s());
        gens
    }

    /// Breadth-first spanning tree over `gens`: `(x, parent, generator index)`
    /// for every non-identity element, parents listed before children.
    fn spanning_tree(&self, gens: &[Elem]) -> Vec<(Elem, Elem, usize)> {
        let mut seen = vec![false; self.order()];
        let id = self.identity();
        seen[id.index()] = true;
        let mut tree = Vec::with_capacity(self.order());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for (j, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    tree.push((y, x, j));
                    queue.push_back(y);
                }
            }
        }
        tree
    }

    /// Extends `gens[j] ↦ images[j]` to a homomorphism `self → target`, if
    /// one exists. Returns the full element map.
    fn extend_homomorphism(
        &self,
        gens: &[Elem],
        tree: &[(Elem, Elem, usize)],
        target: &Group,
        images: &[Elem],
    ) -> Option<Vec<Elem>> {
        let mut map = vec![target.identity(); self.order()];
        for &(x, parent, j) in tree {
            map[x.index()] = target.mul(map[parent.index()], images[j]);
        }
        for x in self.elems() {
            for (j, &g) in gens.iter().enumerate() {
                if map[self.mul(x, g).index()] != target.mul(map[x.index()], images[j]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Every bijective homomorphism `self → target`, as full element maps.
    fn isomorphisms_to(&self, target: &Group, stop_at_first: bool) -> Vec<Vec<Elem>> {
        if self.order() != target.order() {
            return Vec::new();
        }
        let gens = self.small_generating_set();
        let tree = self.spanning_tree(&gens);
        let candidates: Vec<Vec<Elem>> = gens
            .iter()
            .map(|&g| {
                target
                    .elems()
                    .filter(|&y| target.element_order(y) == self.element_order(g))
                    .collect()
            })
            .collect();
        let mut found = Vec::new();
        if candidates.iter().any(|c| c.is_empty()) {
            return found;
        }
        let mut pick = vec![0usize; gens.len()];
        loop {
            let images: Vec<Elem> = pick.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.extend_homomorphism(&gens, &tree, target, &images) {
                let mut hit = vec![false; target.order()];
                if map.iter().all(|y| !std::mem::replace(&mut hit[y.index()], true)) {
                    found.push(map);
                    if stop_at_first {
                        return found;
                    }
                }
            }
            // odometer over candidate images
            let mut j = gens.len();
            loop {
                if j == 0 {
                    return found;
                }
                j -= 1;
                pick[j] += 1;
                if pick[j] < candidates[j].len() {
                    break;
                }
                pick[j] = 0;
            }
        }
    }

    pub fn is_isomorphic(&self, other: &Group) -> bool {
        !self.isomorphisms_to(other, true).is_empty()
    }

    /// True iff `G` is one of `Z_3²`, `Z_3² ⋊ Z_3`, `Z_2 × Z_4`, `Z_2² ⋊ Z_4`.
    pub fn is_exceptional(&self) -> bool {
        if !matches!(self.order(), 8 | 9 | 16 | 27) {
            return false;
        }
        exceptional_groups()
            .iter()
            .any(|h| h.order() == self.order() && self.is_isomorphic(h))
    }

    pub fn automorphism_group(&self) -> Result<AutomorphismGroup> {
        self.automorphism_group_bounded(AUTOMORPHISM_BOUND)
    }

    pub fn automorphism_group_bounded(&self, bound: usize) -> Result<AutomorphismGroup> {
        if self.order() > bound {
            return Err(Error::Capacity {
                order: self.order(),
                bound,
            });
        }
        let generators = self.small_generating_set();
        let mut elements: Vec<Automorphism> = self
            .isomorphisms_to(self, false)
            .into_iter()
            .map(|map| Automorphism { map })
            .collect();
        elements.sort_by_key(|x| x.images(&generators));
        Ok(AutomorphismGroup { generators, elements })
    }

    /// `G/A'` for a twist-invariant `A' ≤ A`, realized again as
    /// `(A/A') ⋊ Z_d` inside some `Z_m²`, with the projection `G → G/A'`.
    pub fn quotient_group(&self, sub: &AbelianSubgroup) -> Result<(Group, Projection)> {
        if sub.modulus() != self.modulus() {
            return Err(Error::invalid(format!(
                "subgroup lives in Z_{}², group in Z_{}²",
                sub.modulus(),
                self.modulus()
            )));
        }
        if !sub.is_subgroup_of(&self.subgroup) {
            return Err(Error::invalid(format!("{sub} is not contained in {}", self.subgroup)));
        }
        if !sub.is_invariant(self.twist) {
            return Err(Error::NotInvariant {
                modulus: sub.modulus(),
                d: self.d(),
                generators: sub.generators(),
            });
        }
        if sub.is_trivial() {
            let map = self.elems().collect();
            return Ok((self.clone(), Projection { target: self.clone(), map }));
        }

        let n = self.modulus();
        let twist = self.twist;
        // A is a cyclic Z[φ]-module: find v with A = ⟨v, φ(v)⟩.
        let v = self
            .vectors
            .iter()
            .copied()
            .find(|&v| {
                AbelianSubgroup::from_generators(n, &[v, twist.apply(v, n)])
                    .map(|s| s == self.subgroup)
                    .unwrap_or(false)
            })
            .ok_or_else(|| Error::contradiction(format!("{} is not a cyclic module", self.subgroup)))?;
        let fv = twist.apply(v, n);
        let combo = |x: u32, y: u32| -> [u32; 2] {
            let (x, y, n64) = (x as u64, y as u64, n as u64);
            [
                ((x * v[0] as u64 + y * fv[0] as u64) % n64) as u32,
                ((x * v[1] as u64 + y * fv[1] as u64) % n64) as u32,
            ]
        };

        // Annihilator of A/A' in coordinates x + y·φ, as a lattice containing nZ².
        let mut kernel = Vec::new();
        let mut coords = vec![None; self.vectors.len()];
        for x in 0..n {
            for y in 0..n {
                let w = combo(x, y);
                if sub.contains(w) {
                    kernel.push([x, y]);
                }
                let i = self.lookup[slot(w, n)] as usize;
                coords[i].get_or_insert([x, y]);
            }
        }
        let ann = AbelianSubgroup::from_generators(n, &kernel)?;
        let quotient_order = self.subgroup.order() / sub.order();
        let ann_rows = ann.canonical_form();
        // exponent of Z²/ann
        let m = divisors(n)
            .into_iter()
            .find(|&m| ann.contains([m % n, 0]) && ann.contains([0, m % n]))
            .unwrap_or(n);

        // Embed Z²/ann ≅ A/A' equivariantly into Z_m².
        let mut embedding = None;
        'search: for w0 in 0..m {
            for w1 in 0..m {
                let w = [w0, w1];
                let fw = twist.apply(w, m);
                let image = |x: u32, y: u32| -> [u32; 2] {
                    let (x, y, m64) = (x as u64, y as u64, m as u64);
                    [
                        ((x * w[0] as u64 + y * fw[0] as u64) % m64) as u32,
                        ((x * w[1] as u64 + y * fw[1] as u64) % m64) as u32,
                    ]
                };
                let kills = image(ann_rows[0][0], ann_rows[0][1]) == [0, 0]
                    && image(ann_rows[1][0], ann_rows[1][1]) == [0, 0];
                if !kills {
                    continue;
                }
                let target_sub = AbelianSubgroup::from_generators(m, &[w, fw])?;
                if target_sub.order() == quotient_order {
                    embedding = Some((w, fw, target_sub));
                    break 'search;
                }
            }
        }
        let (w, fw, target_sub) = embedding
            .ok_or_else(|| Error::contradiction("no equivariant embedding of the quotient module"))?;
        let target = Group::new(twist, target_sub)?;
        let mut map = Vec::with_capacity(self.order());
        for x in self.elems() {
            let (ai, k) = self.split(x);
            let [cx, cy] = coords[ai].expect("every vector of A is a combination of v and φ(v)");
            let (cx, cy, m64) = (cx as u64, cy as u64, m as u64);
            let img = [
                ((cx * w[0] as u64 + cy * fw[0] as u64) % m64) as u32,
                ((cx * w[1] as u64 + cy * fw[1] as u64) % m64) as u32,
            ];
            map.push(target.elem_of(img, k));
        }
        Ok((target.clone(), Projection { target, map }))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ⋊ Z_{} [order {}]", self.subgroup, self.d(), self.order())
    }
}

fn slot(v: [u32; 2], n: u32) -> usize {
    (v[0] * n + v[1]) as usize
}

fn exceptional_groups() -> Vec<Group> {
    let build = |n, d, gens: &[[u32; 2]]| make_group(n, d, gens).expect("reference group");
    vec![
        build(3, 3, &[[1, 2]]),
        build(3, 3, &[[1, 0], [0, 1]]),
        build(2, 4, &[[1, 1]]),
        build(2, 4, &[[1, 0], [0, 1]]),
    ]
}

/// An automorphism stored as its full element map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    map: Vec<Elem>,
}

impl Automorphism {
    pub fn identity(g: &Group) -> Self {
        Automorphism { map: g.elems().collect() }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x.index()]
    }

    pub fn images(&self, gens: &[Elem]) -> Vec<Elem> {
        gens.iter().map(|&x| self.apply(x)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = self.map.clone();
        for (x, &y) in self.map.iter().enumerate() {
            map[y.index()] = Elem(x as u32);
        }
        Automorphism { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, x)| x.index() == i)
    }
}

#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    /// The fixed generating set whose images identify each automorphism.
    pub generators: Vec<Elem>,
    pub elements: Vec<Automorphism>,
}

impl AutomorphismGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Automorphism> {
        self.elements.iter()
    }
}

/// The projection `G → G/A'` produced by [`Group::quotient_group`].
#[derive(Clone, Debug)]
pub struct Projection {
    pub target: Group,
    map: Vec<Elem>,
}

impl Projection {
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x.index()]
    }

    pub fn apply_all<const N: usize>(&self, xs: [Elem; N]) -> [Elem; N] {
        xs.map(|x| self.apply(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelianizations() {
        assert_eq!(make_group(7, 3, &[[1, 3]]).unwrap().abelianization(), vec![3]);
        assert_eq!(make_group(3, 3, &[[1, 2]]).unwrap().abelianization(), vec![3, 3]);
        assert_eq!(make_group(5, 4, &[[1, 2]]).unwrap().abelianization(), vec![4]);
        assert_eq!(make_group(2, 4, &[[1, 1]]).unwrap().abelianization(), vec![2, 4]);
        assert_eq!(make_group(3, 6, &[[1, 1]]).unwrap().abelianization(), vec![6]);
        assert_eq!(make_group(1, 6, &[[0, 0]]).unwrap().abelianization(), vec![6]);
        assert!(make_group(1, 6, &[[0, 0]]).unwrap().commutator_subgroup().iter().filter(|&&b| b).count() == 1);
    }

    fn g21() -> Group {
        make_group(7, 3, &[[1, 3]]).unwrap()
    }

    fn g18() -> Group {
        make_group(3, 6, &[[1, 1]]).unwrap()
    }

    #[test]
    fn twist_matrices_have_order_d() {
        for d in [3, 4, 6] {
            let t = TwistAction::new(d).unwrap();
            for n in [2, 3, 5, 7, 12] {
                for v in [[1, 0], [0, 1], [1, 1]] {
                    assert_eq!(t.apply_pow(d, v, n), v);
                }
            }
            // faithful on Z_7²
            for k in 1..d {
                assert_ne!(t.apply_pow(k, [1, 0], 7), [1, 0], "d={d} k={k}");
            }
        }
        assert!(TwistAction::new(5).is_err());
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = AbelianSubgroup::from_generators(7, &[[1, 3]]).unwrap();
        let b = AbelianSubgroup::from_generators(7, &[[2, 6], [3, 2]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.canonical_form(), [[1, 3], [0, 7]]);
        assert_eq!(a.order(), 7);
        let full = AbelianSubgroup::from_generators(6, &[[2, 0], [3, 0], [0, 1]]).unwrap();
        assert_eq!(full, AbelianSubgroup::full(6));
        assert_eq!(AbelianSubgroup::from_generators(4, &[[0, 0]]).unwrap(), AbelianSubgroup::trivial(4));
        assert!(AbelianSubgroup::from_generators(4, &[[4, 0]]).is_err());
    }

    #[test]
    fn g21_relations() {
        let g = g21();
        assert_eq!(g.order(), 21);
        let t = g.elem_of([1, 3], 0);
        let s = g.s();
        assert_eq!(g.conj(s, t), g.pow(t, 4));
        assert_eq!(g.element_order(t), 7);
        assert_eq!(g.element_order(s), 3);
        assert_eq!(g.element_order(g.identity()), 1);
    }

    #[test]
    fn g18_relations() {
        let g = g18();
        assert_eq!(g.order(), 18);
        let t = g.elem_of([1, 1], 0);
        assert_eq!(g.conj(g.s(), t), g.pow(t, 2));
        for a in g.subgroup().elements() {
            assert_eq!(g.element_order(g.elem_of(a, 1)), 6);
        }
    }

    #[test]
    fn trivial_a_gives_cyclic_group() {
        let g = make_group(1, 3, &[[0, 0]]).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.small_generating_set().len(), 1);
        assert_eq!(g.automorphism_group().unwrap().len(), 2);
    }

    #[test]
    fn rejects_non_invariant_subgroup() {
        let err = make_group(7, 3, &[[1, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotInvariant { modulus: 7, d: 3, .. }));
        assert!(make_group(7, 3, &[]).is_err());
        assert!(make_group(7, 5, &[[1, 3]]).is_err());
    }

    #[test]
    fn group_axioms_hold() {
        for g in [g21(), g18(), make_group(5, 4, &[[1, 2]]).unwrap()] {
            let id = g.identity();
            for x in g.elems() {
                assert_eq!(g.mul(x, g.inv(x)), id);
                assert_eq!(g.mul(id, x), x);
                for y in g.elems() {
                    for z in g.elems() {
                        assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn element_order_matches_image_order_outside_a() {
        for g in [g21(), g18(), make_group(5, 4, &[[1, 2]]).unwrap(), make_group(6, 6, &[[1, 0], [0, 1]]).unwrap()] {
            let d = g.d();
            for x in g.elems().filter(|&x| !g.in_a(x)) {
                let k = g.k_part(x);
                assert_eq!(g.element_order(x), d / d.gcd(&k));
            }
        }
    }

    #[test]
    fn invariant_subgroups_of_z7_squared() {
        let subs = enumerate_invariant_subgroups(7, 3, 49).unwrap();
        let forms: Vec<_> = subs.iter().map(|s| s.canonical_form()).collect();
        assert_eq!(
            forms,
            vec![[[7, 0], [0, 7]], [[1, 3], [0, 7]], [[1, 5], [0, 7]], [[1, 0], [0, 1]]]
        );
        assert_eq!(enumerate_invariant_subgroups(1, 4, 10).unwrap().len(), 1);
        let five = enumerate_invariant_subgroups(5, 4, 25).unwrap();
        let cyclic: Vec<_> = five.iter().filter(|s| s.order() == 5).map(|s| s.generators()).collect();
        assert_eq!(cyclic, vec![vec![[1, 2]], vec![[1, 3]]]);
    }

    #[test]
    fn automorphism_counts() {
        let aut = g21().automorphism_group().unwrap();
        assert_eq!(aut.len(), 42);
        let g = g18();
        let aut = g.automorphism_group().unwrap();
        assert!(aut.iter().any(|a| a.is_identity()));
        let set: std::collections::HashSet<_> = aut.elements.iter().cloned().collect();
        for x in aut.iter() {
            assert!(set.contains(&x.inverse()));
            for y in aut.iter() {
                assert!(set.contains(&x.compose(y)));
            }
        }
        let err = make_group(12, 6, &[[1, 0], [0, 1]]).unwrap().automorphism_group().unwrap_err();
        assert!(matches!(err, Error::Capacity { order: 864, bound: 512 }));
    }

    #[test]
    fn exceptional_detection() {
        assert!(make_group(3, 3, &[[1, 0], [0, 1]]).unwrap().is_exceptional());
        assert!(make_group(3, 3, &[[1, 2]]).unwrap().is_exceptional());
        assert!(make_group(2, 4, &[[1, 1]]).unwrap().is_exceptional());
        assert!(make_group(2, 4, &[[1, 0], [0, 1]]).unwrap().is_exceptional());
        assert!(!g21().is_exceptional());
        assert!(!make_group(5, 4, &[[1, 2]]).unwrap().is_exceptional());
        // order 8 but A cyclic of order 2 inside Z_4², not Z_2 × Z_4 ... still order 8
        let z2z4 = make_group(4, 4, &[[2, 2]]).unwrap();
        assert_eq!(z2z4.order(), 8);
        assert!(z2z4.is_exceptional());
    }

    #[test]
    fn quotient_by_everything_is_cyclic() {
        let g = g21();
        let (q, proj) = g.quotient_group(g.subgroup()).unwrap();
        assert_eq!(q.order(), 3);
        for x in g.elems() {
            assert_eq!(q.k_part(proj.apply(x)), g.k_part(x));
        }
        let (same, proj) = g.quotient_group(&AbelianSubgroup::trivial(7)).unwrap();
        assert_eq!(same, g);
        assert!(g.elems().all(|x| proj.apply(x) == x));
    }

    #[test]
    fn quotient_of_full_z7_squared() {
        let g = make_group(7, 3, &[[1, 0], [0, 1]]).unwrap();
        let sub = AbelianSubgroup::from_generators(7, &[[1, 3]]).unwrap();
        let (q, proj) = g.quotient_group(&sub).unwrap();
        assert_eq!(q.order(), 21);
        assert!(q.is_isomorphic(&g21()));
        for x in g.elems() {
            for y in g.elems() {
                assert_eq!(proj.apply(g.mul(x, y)), q.mul(proj.apply(x), proj.apply(y)));
            }
        }
        let bad = AbelianSubgroup::from_generators(7, &[[1, 0]]).unwrap();
        assert!(g.quotient_group(&bad).is_err());
        let outside = AbelianSubgroup::from_generators(7, &[[1, 5]]).unwrap();
        assert!(g21().quotient_group(&outside).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let g = g21();
        let back = Group::from_spec(&g.spec()).unwrap();
        assert_eq!(back, g);
        let z3 = make_group(1, 3, &[[0, 0]]).unwrap();
        assert_eq!(Group::from_spec(&z3.spec()).unwrap(), z3);
    }
}
