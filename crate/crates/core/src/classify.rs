//! End-to-end classification of rigid diagonal actions of a fixed group on
//! `E^{n−1} × C`: orbit representatives of elliptic and curve triples, the
//! rigid tuples among their combinations, and the isomorphism classes of
//! those tuples.

use crate::arith::minimal_group_search;
use crate::character::{elliptic_character, is_rigid_action};
use crate::error::{Error, Result};
use crate::group::{make_group, AutomorphismGroup, Group};
use crate::triples::{
    elliptic_signature, enumerate_generating_triples, orbit_decomposition, triple_shape, tuple_classes,
    ActionTuple, Triple, TripleShape, TupleClass,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Also admit curve triples with every entry outside `A`.
    pub include_exc366: bool,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub group: Group,
    pub n: usize,
    /// One triple per braid orbit of elliptic-signature triples.
    pub elliptic_reps: Vec<Triple>,
    /// One triple per `Aut(G) × B₃`-orbit of admissible curve triples.
    pub curve_reps: Vec<Triple>,
    /// Rigid tuples with entries from the representatives, elliptic
    /// entries as a sorted multiset.
    pub rigid_tuples: Vec<ActionTuple>,
    pub classes: Vec<TupleClass>,
    pub automorphisms: AutomorphismGroup,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Whether componentwise conjugation swaps the two classes (for two
    /// classes) or fixes the class (for one).
    pub fn conjugation_pairing(&self) -> Vec<Option<usize>> {
        self.classes.iter().map(|c| c.conjugate).collect()
    }
}

/// Curve triples admitted by `options`: genus at least two and, unless
/// `include_exc366`, some entry in `A`.
pub fn curve_triples(g: &Group, options: ClassifyOptions) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for t in enumerate_generating_triples(g, None) {
        if !t.genus(g).is_ok_and(|genus| genus >= 2) {
            continue;
        }
        let shape = triple_shape(g, &t)?.shape;
        if shape == TripleShape::General || options.include_exc366 {
            out.push(t);
        }
    }
    Ok(out)
}

pub fn elliptic_triples(g: &Group) -> Result<Vec<Triple>> {
    let signature = elliptic_signature(g.d())?;
    Ok(enumerate_generating_triples(g, None)
        .into_iter()
        .filter(|t| t.sorted_type(g) == signature)
        .collect())
}

/// Multisets of size `k` from `0..m`, as ascending index lists.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i, cur, out);
            cur.pop();
        }
    }
    rec(m, k, 0, &mut cur, &mut out);
    out
}

pub fn classify(g: &Group, n: usize, options: ClassifyOptions) -> Result<Classification> {
    if n < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {n}")));
    }
    if g.is_exceptional() {
        return Err(Error::Exceptional { order: g.order() });
    }
    let automorphisms = g.automorphism_group()?;
    let elliptic_reps: Vec<Triple> = orbit_decomposition(g, &elliptic_triples(g)?, None)
        .into_iter()
        .map(|o| o.representative)
        .collect();
    let curve_reps: Vec<Triple> = orbit_decomposition(g, &curve_triples(g, options)?, Some(&automorphisms))
        .into_iter()
        .map(|o| o.representative)
        .collect();

    let mut rigid_tuples = Vec::new();
    for combo in multisets(elliptic_reps.len(), n - 1) {
        let elliptic: Vec<Triple> = combo.iter().map(|&i| elliptic_reps[i]).collect();
        for &curve in &curve_reps {
            let tuple = ActionTuple::new(g, elliptic.clone(), curve)?;
            if is_rigid_action(g, &tuple)?.rigid {
                rigid_tuples.push(tuple);
            }
        }
    }
    let classes = tuple_classes(g, &rigid_tuples, &automorphisms);
    Ok(Classification {
        group: g.clone(),
        n,
        elliptic_reps,
        curve_reps,
        rigid_tuples,
        classes,
        automorphisms,
    })
}

/// The minimal group `G_d` (orders 21, 20, 18 for `d = 3, 4, 6`).
pub fn minimal_group(d: u32) -> Result<Group> {
    Ok(minimal_group_search(d, 50)?.group)
}

/// A rigid tuple for `G_d` on `E^{n−1} × C_d`.
pub fn minimal_rigid_tuple(d: u32, n: usize) -> Result<(Group, ActionTuple)> {
    let g = minimal_group(d)?;
    let c = classify(&g, n, ClassifyOptions::default())?;
    let t = c
        .rigid_tuples
        .first()
        .cloned()
        .ok_or_else(|| Error::NotFound(format!("no rigid tuple for d = {d}, n = {n}")))?;
    Ok((g, t))
}

/// The action of `Z_6` on `E^{n−1} × C'` with `C'` of genus two: curve
/// triple `[s⁴, s, s]` and the elliptic triple `[s³, s², s]` repeated.
pub fn xmin_tuple(n: usize) -> Result<(Group, ActionTuple)> {
    if n < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {n}")));
    }
    let g = make_group(1, 6, &[[0, 0]])?;
    let z = |k| g.elem_of([0, 0], k);
    let curve = Triple::new(&g, [z(4), z(1), z(1)])?;
    let elliptic = Triple::new(&g, [z(3), z(2), z(1)])?;
    debug_assert_eq!(elliptic_character(&g, &elliptic)?.e, 5);
    let tuple = ActionTuple::new(&g, vec![elliptic; n - 1], curve)?;
    if !is_rigid_action(&g, &tuple)?.rigid {
        return Err(Error::contradiction("the Z_6 action on E^{n-1} × C' is not rigid"));
    }
    Ok((g, tuple))
}
