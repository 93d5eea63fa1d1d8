//! Existence of twist-invariant cyclic subgroups of `Z_p²`, and the search
//! for the smallest groups `A ⋊ Z_d` with a rigid genus ≥ 2 action whose
//! generating triple meets `A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_groups, AbelianSubgroup, Elem, Group, TwistAction};
use crate::triples::{enumerate_generating_triples, Triple};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    (2..).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q))
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Euler's criterion: is `a` a nonzero square mod the odd prime `p`?
fn is_quadratic_residue(a: i64, p: u64) -> bool {
    let a = a.rem_euclid(p as i64) as u64;
    a != 0 && pow_mod(a, (p - 1) / 2, p) == 1
}

/// Whether `Z_p²` has a `φ_d`-invariant subgroup of order `p`.
///
/// Such a subgroup is an eigenline of `φ_d(1)`, which exists iff its
/// characteristic polynomial (`x² + 1` for `d = 4`, `x² ± x + 1` for
/// `d = 3, 6`) has a root mod `p`: for odd `p` iff `−1`, resp. `−3`, is a
/// square or zero.
pub fn invariant_cyclic_exists(p: u64, d: u32) -> Result<bool> {
    TwistAction::new(d)?;
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(match (d, p) {
        (4, 2) => true,
        (4, _) => is_quadratic_residue(-1, p),
        (_, 2) => false,
        (_, 3) => true,
        _ => is_quadratic_residue(-3, p),
    })
}

/// All `φ_d`-invariant subgroups of order `p` in `Z_p²`, by checking the
/// `p + 1` lines `⟨(1, c)⟩` and `⟨(0, 1)⟩` directly.
pub fn invariant_cyclic_bruteforce(p: u64, d: u32) -> Result<Vec<AbelianSubgroup>> {
    let twist = TwistAction::new(d)?;
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p > 10_000 {
        return Err(Error::invalid(format!("{p} exceeds the brute-force limit 10000")));
    }
    let p = p as u32;
    let lines = (0..p).map(|c| [1, c]).chain(std::iter::once([0, 1]));
    let mut out = Vec::new();
    for v in lines {
        let image = twist.apply(v, p);
        // image ∈ ⟨v⟩ iff the 2×2 determinant vanishes mod p
        let det = (v[0] as i64 * image[1] as i64 - v[1] as i64 * image[0] as i64).rem_euclid(p as i64);
        if det == 0 {
            out.push(AbelianSubgroup::from_generators(p, &[v])?);
        }
    }
    Ok(out)
}

/// A candidate `A ⋊ Z_d` in the minimal-group search.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub group: Group,
}

impl Candidate {
    /// Canonical encoding used to break ties: `(|G|, n, Hermite form of A)`.
    pub fn key(&self) -> (usize, u32, [[u32; 2]; 2]) {
        (self.group.order(), self.group.modulus(), self.group.subgroup().canonical_form())
    }
}

/// The groups `A ⋊ Z_d` with `A ≠ 0` and `|G| ≤ max_order`, each `A` taken
/// in the smallest ambient `Z_n²` (`n` = exponent of `A`), sorted by key.
pub fn minimal_group_candidates(d: u32, max_order: usize) -> Result<Vec<Candidate>> {
    Ok(enumerate_groups(d, max_order)?
        .into_iter()
        .filter(|g| !g.subgroup().is_trivial())
        .map(|group| Candidate { group })
        .collect())
}

/// Generating triples meeting `A` whose curve has genus at least two.
pub fn qualifying_triples(g: &Group) -> Vec<Triple> {
    enumerate_generating_triples(g, None)
        .into_iter()
        .filter(|t| t.0.iter().any(|&x| g.in_a(x)))
        .filter(|t| t.genus(g).is_ok_and(|genus| genus >= 2))
        .collect()
}

#[derive(Clone, Debug)]
pub struct MinimalGroup {
    pub group: Group,
    /// Least qualifying triple.
    pub witness: Triple,
    /// `(s, t)` satisfying the expected two-generator presentation, if any.
    pub presentation: Option<(Elem, Elem)>,
}

/// Report form of a [`MinimalGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalGroupReport {
    pub d: u32,
    pub order: usize,
    pub group: crate::group::GroupSpec,
    pub witness: crate::triples::TripleSpec,
    pub witness_type: [u32; 3],
    pub genus: u64,
    pub presentation: Option<String>,
    pub presentation_holds: bool,
}

impl MinimalGroup {
    pub fn report(&self) -> MinimalGroupReport {
        let g = &self.group;
        let (p, r) = expected_presentation(g.d()).expect("d is 3, 4 or 6");
        MinimalGroupReport {
            d: g.d(),
            order: g.order(),
            group: g.spec(),
            witness: self.witness.spec(g),
            witness_type: self.witness.type_of(g),
            genus: self.witness.genus(g).expect("witness has a valid genus"),
            presentation: Some(format!(
                "<s,t | s^{}=t^{p}=1, sts^-1=t^{r}>",
                g.d()
            )),
            presentation_holds: self.presentation.is_some(),
        }
    }
}

/// First group (by key) of least order among `candidates` with a
/// qualifying triple.
pub fn select_minimal(mut candidates: Vec<Candidate>) -> Option<MinimalGroup> {
    candidates.sort_by_key(|c| c.key());
    let mut i = 0;
    while i < candidates.len() {
        let order = candidates[i].group.order();
        let mut j = i;
        while j < candidates.len() && candidates[j].group.order() == order {
            j += 1;
        }
        for c in &candidates[i..j] {
            if let Some(&witness) = qualifying_triples(&c.group).iter().min() {
                let presentation = find_presentation(&c.group);
                return Some(MinimalGroup {
                    group: c.group.clone(),
                    witness,
                    presentation,
                });
            }
        }
        i = j;
    }
    None
}

pub fn minimal_group_search(d: u32, max_order: usize) -> Result<MinimalGroup> {
    if max_order < d as usize {
        return Err(Error::invalid(format!("bound {max_order} is below d = {d}")));
    }
    select_minimal(minimal_group_candidates(d, max_order)?)
        .ok_or_else(|| Error::NotFound(format!("no group A ⋊ Z_{d} of order at most {max_order} qualifies")))
}

/// `(p, r)` in `⟨s, t | s^d = t^p = 1, sts⁻¹ = t^r⟩` for the minimal groups.
pub fn expected_presentation(d: u32) -> Result<(u32, i64)> {
    match d {
        3 => Ok((7, 4)),
        4 => Ok((5, 3)),
        6 => Ok((3, 2)),
        _ => Err(Error::invalid(format!("twist order must be 3, 4 or 6, got {d}"))),
    }
}

/// Elements `s, t` generating `G` with `ord s = d`, `ord t = p` and
/// `sts⁻¹ = t^r`, where `|G| = dp`.
pub fn find_presentation(g: &Group) -> Option<(Elem, Elem)> {
    let (p, r) = expected_presentation(g.d()).ok()?;
    if g.order() != (g.d() * p) as usize {
        return None;
    }
    for s in g.elems().filter(|&s| g.element_order(s) == g.d()) {
        for t in g.elems().filter(|&t| g.element_order(t) == p) {
            if g.conj(s, t) == g.pow(t, r) && g.generates(&[s, t]) {
                return Some((s, t));
            }
        }
    }
    None
}
