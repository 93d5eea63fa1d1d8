//! Fixed points of triangle covers and the cyclic quotient singularities of
//! `(E^{n−1} × C)/G`, computed from generating triples alone.
//!
//! The points of the fiber over the `i`-th branch point are the cosets
//! `x⟨g_i⟩`. The stabilizer of `x⟨g_i⟩` is `x⟨g_i⟩x⁻¹`, and `x g_i^r x⁻¹`
//! rotates its tangent line by `ζ_{m_i}^r`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::character::{elliptic_character, RootOfUnity};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::triples::{ActionTuple, Triple};

const NONE: u32 = u32::MAX;

/// A point with nontrivial stabilizer on the curve of one factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpecialPoint {
    pub factor: usize,
    /// Branch index `0..3`.
    pub branch: usize,
    /// Least element of the coset `x⟨g_i⟩`.
    pub coset: Elem,
}

/// The three special fibers of one triangle cover.
#[derive(Clone, Debug)]
struct Fibers {
    triple: Triple,
    /// `rep[i][x]`: least element of `x⟨g_i⟩`.
    rep: [Vec<Elem>; 3],
    /// Sorted coset representatives per branch.
    points: [Vec<Elem>; 3],
    /// `power[i][y]`: the `r` with `y = g_i^r`, or `NONE` if `y ∉ ⟨g_i⟩`.
    power: [Vec<u32>; 3],
}

impl Fibers {
    fn new(g: &Group, t: &Triple) -> Self {
        let build = |i: usize| {
            let gi = t.0[i];
            let m = g.element_order(gi);
            let mut power = vec![NONE; g.order()];
            let mut cyc = Vec::with_capacity(m as usize);
            let mut acc = g.identity();
            for r in 0..m {
                power[acc.index()] = r;
                cyc.push(acc);
                acc = g.mul(acc, gi);
            }
            let rep: Vec<Elem> = g
                .elems()
                .map(|x| cyc.iter().map(|&h| g.mul(x, h)).min().expect("nonempty cyclic group"))
                .collect();
            let mut points: Vec<Elem> = rep.iter().copied().collect::<HashSet<_>>().into_iter().collect();
            points.sort_unstable();
            (rep, points, power)
        };
        let [b0, b1, b2] = [0, 1, 2].map(build);
        Fibers {
            triple: *t,
            rep: [b0.0, b1.0, b2.0],
            points: [b0.1, b1.1, b2.1],
            power: [b0.2, b1.2, b2.2],
        }
    }

    fn order(&self, g: &Group, branch: usize) -> u32 {
        g.element_order(self.triple.0[branch])
    }

    /// `r` with `y = x g_i^r x⁻¹`, if `y` stabilizes `x⟨g_i⟩`.
    fn rotation(&self, g: &Group, branch: usize, x: Elem, y: Elem) -> Option<u32> {
        let z = g.mul(g.mul(g.inv(x), y), x);
        let r = self.power[branch][z.index()];
        (r != NONE).then_some(r)
    }

    fn all_points(&self, factor: usize) -> Vec<SpecialPoint> {
        (0..3)
            .flat_map(|branch| {
                self.points[branch]
                    .iter()
                    .map(move |&coset| SpecialPoint { factor, branch, coset })
            })
            .collect()
    }
}

/// All points of the triple's curve with nontrivial stabilizer, fiber by
/// fiber; there are `Σ |G|/m_i` of them.
pub fn special_points(g: &Group, t: &Triple, factor: usize) -> Vec<SpecialPoint> {
    Fibers::new(g, t).all_points(factor)
}

/// Points of the curve of `t` fixed by `y`.
pub fn fixed_points(g: &Group, y: Elem, t: &Triple) -> Result<Vec<SpecialPoint>> {
    if y == g.identity() {
        return Err(Error::invalid("the identity fixes every point"));
    }
    let fibers = Fibers::new(g, t);
    Ok(fibers
        .all_points(0)
        .into_iter()
        .filter(|p| fibers.rotation(g, p.branch, p.coset, y).is_some())
        .collect())
}

pub fn fixed_point_count(g: &Group, y: Elem, t: &Triple) -> Result<usize> {
    fixed_points(g, y, t).map(|pts| pts.len())
}

/// True iff no nontrivial element of `h` fixes a point of the curve of `t`.
pub fn is_free_on_curve(g: &Group, h: &[Elem], t: &Triple) -> bool {
    let fibers = Fibers::new(g, t);
    h.iter().filter(|&&y| y != g.identity()).all(|&y| {
        (0..3).all(|branch| {
            fibers.points[branch]
                .iter()
                .all(|&x| fibers.rotation(g, branch, x, y).is_none())
        })
    })
}

/// The stabilizer of a point of `E^{n−1} × C`, given one special point per
/// factor (`None` for a point with trivial stabilizer on that factor).
/// Returns a generator and its order, or `None` if the stabilizer is trivial.
pub fn tuple_stabilizer(
    g: &Group,
    tuple: &ActionTuple,
    points: &[Option<SpecialPoint>],
) -> Result<Option<(Elem, u32)>> {
    if points.len() != tuple.dimension() {
        return Err(Error::invalid(format!(
            "expected {} points, got {}",
            tuple.dimension(),
            points.len()
        )));
    }
    let mut members: Vec<Elem> = g.elems().collect();
    for (f, (p, t)) in points.iter().zip(tuple.factors()).enumerate() {
        let Some(p) = p else { return Ok(None) };
        if p.factor != f || p.branch > 2 {
            return Err(Error::invalid(format!("point {p:?} does not belong to factor {f}")));
        }
        let fibers = Fibers::new(g, t);
        members.retain(|&y| fibers.rotation(g, p.branch, p.coset, y).is_some());
    }
    cyclic_generator(g, &members)
}

fn cyclic_generator(g: &Group, members: &[Elem]) -> Result<Option<(Elem, u32)>> {
    let size = members.len() as u32;
    if size <= 1 {
        return Ok(None);
    }
    members
        .iter()
        .copied()
        .find(|&y| g.element_order(y) == size)
        .map(|y| Some((y, size)))
        .ok_or_else(|| Error::contradiction(format!("stabilizer of order {size} is not cyclic")))
}

/// The cyclic quotient singularity `1/ℓ(a₁, …, a_n)` in normal form: weights
/// sorted ascending and lexicographically least among all unit multiples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SingularityType {
    pub ell: u32,
    pub weights: Vec<u32>,
}

impl SingularityType {
    pub fn new(ell: u32, weights: &[u32]) -> Result<Self> {
        if ell < 2 {
            return Err(Error::invalid(format!("order must be at least 2, got {ell}")));
        }
        if weights.is_empty() {
            return Err(Error::invalid("at least one weight is required"));
        }
        let best = (1..ell)
            .filter(|u| u.gcd(&ell) == 1)
            .map(|u| {
                let mut w: Vec<u32> = weights.iter().map(|&a| (a * u) % ell).collect();
                w.sort_unstable();
                w
            })
            .min()
            .expect("1 is a unit");
        Ok(SingularityType { ell, weights: best })
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// `1/ℓ(1, …, 1)` or `1/ℓ(1, …, 1, ℓ − 1)`.
    pub fn is_standard_shape(&self) -> bool {
        let (last, rest) = self.weights.split_last().expect("nonempty weights");
        rest.iter().all(|&a| a == 1) && (*last == 1 || *last == self.ell - 1)
    }

    /// Age criterion: `Σ_j {r a_j / ℓ} ≥ 1` for every `r = 1, …, ℓ − 1`.
    pub fn is_canonical(&self) -> bool {
        (1..self.ell).all(|r| {
            let total: u64 = self.weights.iter().map(|&a| ((r * a) % self.ell) as u64).sum();
            total >= self.ell as u64
        })
    }
}

pub fn is_canonical_type(t: &SingularityType) -> bool {
    t.is_canonical()
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        write!(f, "1/{}({})", self.ell, w.join(","))
    }
}

impl FromStr for SingularityType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse singularity type {s:?}"));
        let rest = s.trim().strip_prefix("1/").ok_or_else(bad)?;
        let (ell, weights) = rest.split_once('(').ok_or_else(bad)?;
        let weights = weights.strip_suffix(')').ok_or_else(bad)?;
        let ell: u32 = ell.parse().map_err(|_| bad())?;
        let weights = weights
            .split(',')
            .map(|w| w.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        SingularityType::new(ell, &weights)
    }
}

impl Serialize for SingularityType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SingularityType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    #[serde(rename = "type")]
    pub ty: SingularityType,
    pub count: u64,
}

/// Singular points of the quotient by type, sorted by type.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CensusTable {
    pub rows: Vec<CensusRow>,
}

impl CensusTable {
    pub fn from_counts(counts: impl IntoIterator<Item = (SingularityType, u64)>) -> Self {
        let mut map: BTreeMap<SingularityType, u64> = BTreeMap::new();
        for (ty, c) in counts {
            *map.entry(ty).or_default() += c;
        }
        CensusTable {
            rows: map
                .into_iter()
                .filter(|(_, c)| *c > 0)
                .map(|(ty, count)| CensusRow { ty, count })
                .collect(),
        }
    }

    pub fn count(&self, ty: &SingularityType) -> u64 {
        self.rows.iter().find(|r| &r.ty == ty).map_or(0, |r| r.count)
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("type,count\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}\n", r.ty, r.count));
        }
        out
    }
}

/// Census details beyond the table, used for consistency checks.
#[derive(Clone, Debug)]
pub struct Census {
    pub table: CensusTable,
    /// Points of `E^{n−1} × C` with nontrivial stabilizer.
    pub stabilized_points: u64,
    /// Orbit representatives with their stabilizer orders.
    pub orbits: Vec<(Vec<SpecialPoint>, u32, SingularityType)>,
}

/// Tabulates the singular points of `(E^{n−1} × C)/G`.
pub fn singularity_census(g: &Group, tuple: &ActionTuple) -> Result<CensusTable> {
    census_details(g, tuple).map(|c| c.table)
}

pub fn census_details(g: &Group, tuple: &ActionTuple) -> Result<Census> {
    let fibers: Vec<Fibers> = tuple.factors().map(|t| Fibers::new(g, t)).collect();
    let elliptic_chars = tuple
        .elliptic
        .iter()
        .map(|t| elliptic_character(g, t))
        .collect::<Result<Vec<_>>>()?;
    let dim = fibers.len();
    let order = g.order() as u64;

    let mut stabilized = 0u64;
    let mut weighted: BTreeMap<SingularityType, u64> = BTreeMap::new();
    let mut seen: HashSet<Vec<(usize, Elem)>> = HashSet::new();
    let mut orbits = Vec::new();

    let mut stack: Vec<(Vec<(usize, Elem)>, Vec<Elem>)> = vec![(Vec::new(), g.elems().skip(1).collect())];
    while let Some((chosen, stab)) = stack.pop() {
        let f = chosen.len();
        if f == dim {
            let mut members = stab.clone();
            members.push(g.identity());
            let (y, ell) = cyclic_generator(g, &members)?
                .ok_or_else(|| Error::contradiction("empty stabilizer reached the leaf"))?;
            let mut weights = Vec::with_capacity(dim);
            for (j, &(branch, x)) in chosen.iter().enumerate() {
                let r = fibers[j]
                    .rotation(g, branch, x, y)
                    .ok_or_else(|| Error::contradiction("generator does not fix the point"))?;
                let m = fibers[j].order(g, branch);
                if j < elliptic_chars.len() {
                    let rotation = RootOfUnity::new(r as i64, m);
                    if rotation != elliptic_chars[j].value(g, y).conj() {
                        return Err(Error::contradiction(format!(
                            "rotation {rotation} on elliptic factor {j} differs from the conjugate elliptic character"
                        )));
                    }
                }
                // ζ_m^r = ζ_ℓ^{rℓ/m}, and ℓ | m since y has order ℓ inside ⟨x g_i x⁻¹⟩
                weights.push(r * ell / m);
            }
            let ty = SingularityType::new(ell, &weights)?;
            if !ty.is_standard_shape() || !g.d().is_multiple_of(ell) {
                return Err(Error::contradiction(format!(
                    "singularity {ty} is not of the form 1/ℓ(1,…,1) or 1/ℓ(1,…,1,ℓ−1) with ℓ | {}",
                    g.d()
                )));
            }
            stabilized += 1;
            *weighted.entry(ty.clone()).or_default() += ell as u64;
            let canonical = canonical_tuple(g, &fibers, &chosen);
            if seen.insert(canonical.clone()) {
                let pts = canonical
                    .iter()
                    .enumerate()
                    .map(|(factor, &(branch, coset))| SpecialPoint { factor, branch, coset })
                    .collect();
                orbits.push((pts, ell, ty));
            }
            continue;
        }
        for branch in (0..3).rev() {
            for &x in fibers[f].points[branch].iter().rev() {
                let next: Vec<Elem> = stab
                    .iter()
                    .copied()
                    .filter(|&y| fibers[f].rotation(g, branch, x, y).is_some())
                    .collect();
                if !next.is_empty() {
                    let mut c = chosen.clone();
                    c.push((branch, x));
                    stack.push((c, next));
                }
            }
        }
    }

    // each orbit of a point with stabilizer of order ℓ has |G|/ℓ points
    let mut table = Vec::new();
    for (ty, w) in &weighted {
        if w % order != 0 {
            return Err(Error::contradiction(format!("orbit count for {ty} is not an integer")));
        }
        table.push((ty.clone(), w / order));
    }
    let table = CensusTable::from_counts(table);
    let mut explicit: BTreeMap<SingularityType, u64> = BTreeMap::new();
    for (_, _, ty) in &orbits {
        *explicit.entry(ty.clone()).or_default() += 1;
    }
    if CensusTable::from_counts(explicit) != table {
        return Err(Error::contradiction("explicit orbit count disagrees with the orbit-stabilizer count"));
    }
    orbits.sort();
    Ok(Census {
        table,
        stabilized_points: stabilized,
        orbits,
    })
}

/// Least image of a point tuple under the diagonal `G`-action.
fn canonical_tuple(g: &Group, fibers: &[Fibers], chosen: &[(usize, Elem)]) -> Vec<(usize, Elem)> {
    g.elems()
        .map(|h| {
            chosen
                .iter()
                .enumerate()
                .map(|(j, &(branch, x))| (branch, fibers[j].rep[branch][g.mul(h, x).index()]))
                .collect::<Vec<_>>()
        })
        .min()
        .expect("group is nonempty")
}
