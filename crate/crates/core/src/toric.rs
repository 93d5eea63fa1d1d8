//! Toric resolutions of the cyclic quotient singularities
//! `1/ℓ(1, …, 1, a)` with `a ∈ {1, ℓ − 1}`.
//!
//! The singularity is the affine toric variety of `σ = cone(e₁, …, e_n)`
//! over `N = Zⁿ + Z·(1/ℓ)(1, …, 1, a)`. Every vector of `N ⊗ Q` used here has
//! denominator dividing `ℓ` and is stored scaled by `ℓ` as an integer vector.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Q = Ratio<i64>;

/// The lattice `N = Zⁿ + Z·(1/ℓ)(1, …, 1, a)` and its dual
/// `N^∨ = {x ∈ Zⁿ : x₁ + … + x_{n−1} + a·x_n ≡ 0 mod ℓ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeData {
    pub n: usize,
    pub ell: i64,
    pub a: i64,
}

impl LatticeData {
    pub fn new(n: usize, ell: i64, a: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if ell < 1 {
            return Err(Error::invalid(format!("order must be positive, got {ell}")));
        }
        if !(0..ell.max(1)).contains(&a) && !(ell == 1 && a == 0) {
            return Err(Error::invalid(format!("weight {a} is not reduced mod {ell}")));
        }
        Ok(LatticeData { n, ell, a })
    }

    /// `ℓ·(1/ℓ)(1, …, 1, a)`.
    pub fn generator(&self) -> Vec<i64> {
        let mut v = vec![1; self.n];
        v[self.n - 1] = self.a;
        v
    }

    /// `ℓ·e_i` for `i` in `1..=n`.
    pub fn e(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[i - 1] = self.ell;
        v
    }

    /// `ℓ·v_k = (k, …, k, ℓ − k)`; `v₀ = e_n`.
    pub fn v(&self, k: i64) -> Vec<i64> {
        let mut v = vec![k; self.n];
        v[self.n - 1] = self.ell - k;
        v
    }

    /// Whether the scaled vector `w` (meaning `w/ℓ`) lies in `N`.
    pub fn contains(&self, w: &[i64]) -> bool {
        let gen = self.generator();
        let j = w[0].rem_euclid(self.ell);
        w.iter()
            .zip(&gen)
            .all(|(&x, &g)| (x - j * g).rem_euclid(self.ell) == 0)
    }

    pub fn in_dual(&self, x: &[i64]) -> bool {
        dot(x, &self.generator()).rem_euclid(self.ell) == 0
    }

    /// Whether `w/ℓ` is primitive in `N`.
    pub fn is_primitive(&self, w: &[i64]) -> bool {
        if w.iter().all(|&x| x == 0) || !self.contains(w) {
            return false;
        }
        let g = w.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        (2..=g).all(|m| g % m != 0 || !self.contains(&w.iter().map(|x| x / m).collect::<Vec<_>>()))
    }
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Integer determinant by fraction-free elimination.
pub fn determinant(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Solves `A x = b` over `Q` for square `A`; `None` if `A` is singular.
fn solve(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            r.push(Q::from_integer(rhs));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in col..=n {
                    let delta = f * m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

/// Coefficients `c` with `Σ c_j cols[j] = w`.
fn coordinates(cols: &[Vec<i64>], w: &[i64]) -> Option<Vec<Q>> {
    let n = w.len();
    let a: Vec<Vec<i64>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    solve(&a, w)
}

fn integral(v: &[Q]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// A simplicial cone given by generators stored scaled by `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<Vec<i64>>,
}

/// Index of the sublattice spanned by the generators of a full-dimensional
/// simplicial cone inside `N`; `1` means smooth.
pub fn cone_multiplicity(c: &Cone, lattice: &LatticeData) -> Result<u64> {
    let n = lattice.n;
    if c.generators.len() != n || c.generators.iter().any(|g| g.len() != n) {
        return Err(Error::invalid(format!("cone is not a simplicial {n}-dimensional cone")));
    }
    let det = determinant(&c.generators).unsigned_abs();
    if det == 0 {
        return Err(Error::invalid("cone generators are linearly dependent"));
    }
    // covolume of N is 1/ℓ, generators are scaled by ℓ
    let scale = (lattice.ell as u128).pow(n as u32 - 1);
    if !det.is_multiple_of(scale) {
        return Err(Error::contradiction(format!(
            "determinant {det} of lattice vectors is not divisible by ℓ^(n-1) = {scale}"
        )));
    }
    Ok((det / scale) as u64)
}

/// A simplicial fan: rays (scaled by `ℓ`) and maximal cones as sorted ray
/// index lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub lattice: LatticeData,
    /// Common denominator of the ray coordinates.
    pub denominator: i64,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(lattice: LatticeData, rays: Vec<Vec<i64>>, mut maximal_cones: Vec<Vec<usize>>) -> Result<Self> {
        for r in &rays {
            if r.len() != lattice.n || !lattice.is_primitive(r) {
                return Err(Error::invalid(format!("ray {r:?} is not a primitive vector of N")));
            }
        }
        for c in maximal_cones.iter_mut() {
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::invalid(format!("cone {c:?} refers to a missing ray")));
            }
            c.sort_unstable();
        }
        maximal_cones.sort();
        Ok(Fan {
            lattice,
            denominator: lattice.ell,
            rays,
            maximal_cones,
        })
    }

    /// The cone `σ = cone(e₁, …, e_n)`.
    pub fn standard(lattice: LatticeData) -> Self {
        let rays = (1..=lattice.n).map(|i| lattice.e(i)).collect();
        Fan {
            lattice,
            denominator: lattice.ell,
            rays,
            maximal_cones: vec![(0..lattice.n).collect()],
        }
    }

    pub fn cone(&self, idx: usize) -> Cone {
        Cone {
            generators: self.maximal_cones[idx].iter().map(|&r| self.rays[r].clone()).collect(),
        }
    }

    pub fn ray_index(&self, w: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r == w)
    }

    /// Star subdivision along the primitive vector `w`.
    pub fn star_subdivide(&mut self, w: Vec<i64>) -> Result<usize> {
        if !self.lattice.is_primitive(&w) {
            return Err(Error::invalid(format!("{w:?} is not primitive in N")));
        }
        let new = match self.ray_index(&w) {
            Some(_) => return Err(Error::invalid(format!("{w:?} is already a ray"))),
            None => {
                self.rays.push(w.clone());
                self.rays.len() - 1
            }
        };
        let mut cones = Vec::new();
        for cone in &self.maximal_cones {
            let gens: Vec<Vec<i64>> = cone.iter().map(|&r| self.rays[r].clone()).collect();
            let coeffs = coordinates(&gens, &w)
                .ok_or_else(|| Error::invalid("fan contains a degenerate cone"))?;
            if coeffs.iter().any(|c| c.is_negative()) {
                cones.push(cone.clone());
                continue;
            }
            for (j, c) in coeffs.iter().enumerate() {
                if c.is_positive() {
                    let mut replaced = cone.clone();
                    replaced[j] = new;
                    replaced.sort_unstable();
                    cones.push(replaced);
                }
            }
        }
        cones.sort();
        self.maximal_cones = cones;
        Ok(new)
    }

    pub fn is_smooth(&self) -> Result<bool> {
        for i in 0..self.maximal_cones.len() {
            if cone_multiplicity(&self.cone(i), &self.lattice)? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of the rays other than `e₁, …, e_n`.
    pub fn exceptional_rays(&self) -> Vec<usize> {
        let standard: Vec<Vec<i64>> = (1..=self.lattice.n).map(|i| self.lattice.e(i)).collect();
        (0..self.rays.len()).filter(|&r| !standard.contains(&self.rays[r])).collect()
    }

    /// Coefficients of `w` in the maximal cone `idx`.
    pub fn cone_coordinates(&self, idx: usize, w: &[i64]) -> Option<Vec<Q>> {
        let gens = self.cone(idx).generators;
        coordinates(&gens, w)
    }
}

/// The resolution fan of `1/ℓ(1, …, 1, a)`: successive star subdivisions of
/// `σ` along `v₁, …, v_{ℓ−1}` when `a = ℓ − 1`, one star subdivision along
/// `(1/ℓ)(1, …, 1)` when `a = 1`.
pub fn resolution_fan(lattice: &LatticeData) -> Result<Fan> {
    let (n, ell, a) = (lattice.n, lattice.ell, lattice.a);
    if n < 2 || ell < 2 {
        return Err(Error::invalid(format!("need n ≥ 2 and ℓ ≥ 2, got n = {n}, ℓ = {ell}")));
    }
    let mut fan = Fan::standard(*lattice);
    if a == ell - 1 {
        for k in 1..ell {
            fan.star_subdivide(lattice.v(k))?;
        }
        if fan.maximal_cones != listed_cones(lattice, &fan)? {
            return Err(Error::contradiction("subdivision does not produce the cones σ_i^(k), σ_n"));
        }
    } else if a == 1 {
        fan.star_subdivide(lattice.generator())?;
    } else {
        return Err(Error::invalid(format!("weight must be 1 or ℓ − 1, got {a}")));
    }
    Ok(fan)
}

/// The cones `σ_i^{(0)}`, `σ_i^{(k)}` and `σ_n` written out directly, as ray
/// index lists of `fan`.
fn listed_cones(lattice: &LatticeData, fan: &Fan) -> Result<Vec<Vec<usize>>> {
    let n = lattice.n;
    let ell = lattice.ell;
    let idx = |w: Vec<i64>| fan.ray_index(&w).ok_or_else(|| Error::contradiction(format!("missing ray {w:?}")));
    let mut cones = Vec::new();
    for i in 1..n {
        let mut c: Vec<usize> = Vec::new();
        for j in (1..=n).filter(|&j| j != i) {
            c.push(idx(lattice.e(j))?);
        }
        c.push(idx(lattice.v(1))?);
        cones.push(c);
        for k in 1..ell - 1 {
            let mut c: Vec<usize> = Vec::new();
            for j in (1..n).filter(|&j| j != i) {
                c.push(idx(lattice.e(j))?);
            }
            c.push(idx(lattice.v(k))?);
            c.push(idx(lattice.v(k + 1))?);
            cones.push(c);
        }
    }
    let mut last: Vec<usize> = (1..n).map(|j| idx(lattice.e(j))).collect::<Result<_>>()?;
    last.push(idx(lattice.v(ell - 1))?);
    cones.push(last);
    for c in cones.iter_mut() {
        c.sort_unstable();
    }
    cones.sort();
    Ok(cones)
}

/// A torus-invariant divisor `Σ a_ρ D_ρ`, one coefficient per ray of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusDivisor {
    pub coefficients: Vec<i64>,
}

impl TorusDivisor {
    pub fn zero(fan: &Fan) -> Self {
        TorusDivisor { coefficients: vec![0; fan.rays.len()] }
    }

    /// The prime divisor of ray `r`.
    pub fn prime(fan: &Fan, r: usize) -> Self {
        let mut d = Self::zero(fan);
        d.coefficients[r] = 1;
        d
    }

    /// `D_i`, the divisor of the ray through `e_i`.
    pub fn d(fan: &Fan, i: usize) -> Result<Self> {
        let r = fan
            .ray_index(&fan.lattice.e(i))
            .ok_or_else(|| Error::invalid(format!("fan has no ray e_{i}")))?;
        Ok(Self::prime(fan, r))
    }

    /// Whether `x` lies in `P_D = {x : ⟨x, u_ρ⟩ ≥ −a_ρ for every ray}`.
    pub fn polyhedron_contains(&self, fan: &Fan, x: &[Q]) -> bool {
        let ell = Q::from_integer(fan.lattice.ell);
        fan.rays.iter().zip(&self.coefficients).all(|(u, &a)| {
            let pairing: Q = x.iter().zip(u).map(|(xi, &ui)| *xi * Q::from_integer(ui)).sum::<Q>() / ell;
            pairing >= Q::from_integer(-a)
        })
    }
}

/// The Cartier data `m_σ` of `D` on every maximal cone: the solution of
/// `⟨m_σ, u_ρ⟩ = −a_ρ` for the rays of `σ`. Requires a smooth fan.
pub fn cartier_data(fan: &Fan, d: &TorusDivisor) -> Result<Vec<Vec<Q>>> {
    if d.coefficients.len() != fan.rays.len() {
        return Err(Error::invalid("divisor has the wrong number of coefficients"));
    }
    let ell = fan.lattice.ell;
    (0..fan.maximal_cones.len())
        .map(|idx| {
            if cone_multiplicity(&fan.cone(idx), &fan.lattice)? != 1 {
                return Err(Error::invalid(format!(
                    "cone {:?} is singular; Cartier data needs a smooth fan",
                    fan.maximal_cones[idx]
                )));
            }
            let rows: Vec<Vec<i64>> = fan.maximal_cones[idx].iter().map(|&r| fan.rays[r].clone()).collect();
            let rhs: Vec<i64> = fan.maximal_cones[idx]
                .iter()
                .map(|&r| -d.coefficients[r] * ell)
                .collect();
            let m = solve(&rows, &rhs).ok_or_else(|| Error::invalid("degenerate cone"))?;
            let integral = integral(&m)
                .filter(|m| fan.lattice.in_dual(m))
                .ok_or_else(|| Error::contradiction(format!("Cartier data {m:?} is not in the dual lattice")))?;
            Ok(integral.into_iter().map(Q::from_integer).collect())
        })
        .collect()
}

/// `D` is globally generated iff every `m_σ` lies in `P_D`.
pub fn is_globally_generated(fan: &Fan, d: &TorusDivisor) -> Result<bool> {
    Ok(cartier_data(fan, d)?.iter().all(|m| d.polyhedron_contains(fan, m)))
}

/// Result of the bounded check `P_{D_i} ∩ N^∨ = P_{D_i'} ∩ N^∨`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedraCheck {
    pub i: usize,
    pub holds: bool,
    /// A point of `P_{D_i'} ∩ N^∨` outside `P_{D_i}`.
    pub witness: Option<Vec<i64>>,
}

/// Checks on every `x ∈ N^∨` with `x_i ≥ −1`, `x_j ≥ 0` and all `|x_j| ≤ B`
/// that `⟨x, u⟩ ≥ 0` for every exceptional ray `u` of the resolution fan.
pub fn polyhedra_equal_on_lattice(i: usize, lattice: &LatticeData, bound: i64) -> Result<PolyhedraCheck> {
    let fan = resolution_fan(lattice)?;
    polyhedra_equal_in_fan(&fan, i, bound)
}

pub fn polyhedra_equal_in_fan(fan: &Fan, i: usize, bound: i64) -> Result<PolyhedraCheck> {
    let lattice = fan.lattice;
    let n = lattice.n;
    if i == 0 || i > n {
        return Err(Error::invalid(format!("ray index must be in 1..={n}, got {i}")));
    }
    if bound < 1 {
        return Err(Error::invalid("bound must be positive"));
    }
    let forms: Vec<Vec<i64>> = fan.exceptional_rays().into_iter().map(|r| fan.rays[r].clone()).collect();
    if forms.iter().flatten().any(|&c| c < 0) {
        return Err(Error::contradiction("an exceptional ray leaves the cone σ"));
    }
    let lower: Vec<i64> = (1..=n).map(|j| if j == i { -1 } else { 0 }).collect();
    // suffix[f][j]: least value of form f over coordinates j.. at their lower bounds
    let suffix: Vec<Vec<i64>> = forms
        .iter()
        .map(|f| {
            let mut s = vec![0; n + 1];
            for j in (0..n).rev() {
                s[j] = s[j + 1] + f[j] * lower[j];
            }
            s
        })
        .collect();
    let mut x = vec![0i64; n];
    let mut partial = vec![0i64; forms.len()];
    let witness = search(&lattice, &forms, &suffix, &lower, bound, 0, &mut x, &mut partial);
    Ok(PolyhedraCheck {
        i,
        holds: witness.is_none(),
        witness,
    })
}

/// Depth-first search over the box; a branch is closed as soon as its least
/// completion satisfies every form, since all form coefficients are ≥ 0.
#[allow(clippy::too_many_arguments)]
fn search(
    lattice: &LatticeData,
    forms: &[Vec<i64>],
    suffix: &[Vec<i64>],
    lower: &[i64],
    bound: i64,
    j: usize,
    x: &mut Vec<i64>,
    partial: &mut Vec<i64>,
) -> Option<Vec<i64>> {
    let n = x.len();
    if (0..forms.len()).all(|f| partial[f] + suffix[f][j] >= 0) {
        return None;
    }
    if j == n {
        return lattice.in_dual(x).then(|| x.clone());
    }
    for value in lower[j]..=bound {
        x[j] = value;
        for f in 0..forms.len() {
            partial[f] += forms[f][j] * value;
        }
        let found = search(lattice, forms, suffix, lower, bound, j + 1, x, partial);
        for f in 0..forms.len() {
            partial[f] -= forms[f][j] * value;
        }
        if found.is_some() {
            x[j] = 0;
            return found;
        }
    }
    x[j] = 0;
    None
}

/// Toric structure of an exceptional divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExceptionalStructure {
    /// `P^dim`.
    ProjectiveSpace { dim: usize },
    /// `P(O ⊕ O(twist))` over `P^{n−2}`.
    Bundle { twist: i64 },
}

/// Identifies the exceptional divisor of the ray `v_k` (of the single
/// exceptional ray when `a = 1`) through its quotient fan in `N/Zv_k`.
pub fn exceptional_divisor_structure(k: i64, lattice: &LatticeData) -> Result<ExceptionalStructure> {
    let fan = resolution_fan(lattice)?;
    exceptional_structure_in_fan(&fan, k)
}

pub fn exceptional_structure_in_fan(fan: &Fan, k: i64) -> Result<ExceptionalStructure> {
    let lattice = fan.lattice;
    let (n, ell, a) = (lattice.n, lattice.ell, lattice.a);
    if n < 3 {
        return Err(Error::invalid("exceptional divisor structure needs n ≥ 3"));
    }
    if a == ell - 1 {
        if !(1..ell).contains(&k) {
            return Err(Error::invalid(format!("k must be in 1..{ell}, got {k}")));
        }
        if k == ell - 1 {
            projective_space(fan, &lattice.v(k))
        } else {
            bundle(fan, k)
        }
    } else {
        if k != 1 {
            return Err(Error::invalid("the blowup has a single exceptional divisor, k = 1"));
        }
        projective_space(fan, &lattice.generator())
    }
}

/// Quotient cones of the star of `v`: for every maximal cone containing `v`,
/// its other rays expressed in `basis`, which must be a lattice basis of `N`
/// ending with `v`. The last coordinate is dropped.
fn quotient_cones(fan: &Fan, v: &[i64], basis: &[Vec<i64>]) -> Result<Vec<Vec<Vec<i64>>>> {
    let lattice = fan.lattice;
    let det = cone_multiplicity(&Cone { generators: basis.to_vec() }, &lattice)?;
    if det != 1 {
        return Err(Error::contradiction(format!("chosen vectors span a sublattice of index {det}")));
    }
    let vi = fan.ray_index(v).ok_or_else(|| Error::contradiction("exceptional ray missing from fan"))?;
    let mut out = Vec::new();
    for cone in fan.maximal_cones.iter().filter(|c| c.contains(&vi)) {
        let mut rays = Vec::new();
        for &r in cone.iter().filter(|&&r| r != vi) {
            rays.push(class_of(&fan.rays[r], basis)?);
        }
        out.push(rays);
    }
    Ok(out)
}

/// `[w] ∈ N/Zv` in the coordinates of `basis` (last entry `v` dropped).
fn class_of(w: &[i64], basis: &[Vec<i64>]) -> Result<Vec<i64>> {
    let c = coordinates(basis, w).ok_or_else(|| Error::contradiction("basis is singular"))?;
    let mut c = integral(&c).ok_or_else(|| Error::contradiction(format!("{w:?} has non-integral coordinates")))?;
    c.pop();
    Ok(c)
}

fn projective_space(fan: &Fan, v: &[i64]) -> Result<ExceptionalStructure> {
    let lattice = fan.lattice;
    let n = lattice.n;
    let mut basis: Vec<Vec<i64>> = (1..n).map(|i| lattice.e(i)).collect();
    basis.push(v.to_vec());
    let cones = quotient_cones(fan, v, &basis)?;
    let rays: BTreeSet<Vec<i64>> = cones.iter().flatten().cloned().collect();
    let sum: Vec<i64> = (0..n - 1).map(|j| rays.iter().map(|r| r[j]).sum()).collect();
    let fail = |what: &str| Err(Error::contradiction(format!("quotient fan is not the fan of P^{}: {what}", n - 1)));
    if rays.len() != n || cones.len() != n {
        return fail("wrong number of rays or cones");
    }
    if sum.iter().any(|&s| s != 0) {
        return fail("rays do not sum to zero");
    }
    let expected: BTreeSet<BTreeSet<Vec<i64>>> = rays
        .iter()
        .map(|skip| rays.iter().filter(|r| *r != skip).cloned().collect())
        .collect();
    let actual: BTreeSet<BTreeSet<Vec<i64>>> = cones.iter().map(|c| c.iter().cloned().collect()).collect();
    if actual != expected {
        return fail("cones are not all (n−1)-subsets of the rays");
    }
    if cones.iter().any(|c| determinant(c).abs() != 1) {
        return fail("a cone is not unimodular");
    }
    Ok(ExceptionalStructure::ProjectiveSpace { dim: n - 1 })
}

/// `k ∈ 1..ℓ−1`, `a = ℓ − 1`: the quotient by `v_k` with basis
/// `[e₂], …, [e_{n−1}], [v_{k−1}]` mapped to `u₁, …, u_{n−2}, −e`.
fn bundle(fan: &Fan, k: i64) -> Result<ExceptionalStructure> {
    let lattice = fan.lattice;
    let n = lattice.n;
    let ell = lattice.ell;
    let mut basis: Vec<Vec<i64>> = (2..n).map(|i| lattice.e(i)).collect();
    basis.push(lattice.v(k - 1));
    basis.push(lattice.v(k));
    let phi = |w: &[i64]| -> Result<Vec<i64>> {
        let mut c = class_of(w, &basis)?;
        let last = c.len() - 1;
        c[last] = -c[last];
        Ok(c)
    };
    // e₁ = −e₂ − … − e_{n−1} + (k − ℓ)v_{k−1} + μ v_k, so φ([e₁]) = u₀ + c·e
    let image = phi(&lattice.e(1))?;
    let (head, twist) = image.split_at(n - 2);
    if head.iter().any(|&x| x != -1) {
        return Err(Error::contradiction(format!("φ([e_1]) = {image:?} is not of the form u_0 + c·e")));
    }
    let twist = twist[0];
    let e_vec: Vec<i64> = (0..n - 1).map(|j| i64::from(j == n - 2)).collect();
    if phi(&lattice.v(k + 1))? != e_vec {
        return Err(Error::contradiction("v_{k+1} is not −v_{k−1} + λ v_k"));
    }

    let quotient: BTreeSet<BTreeSet<Vec<i64>>> = quotient_cones(fan, &lattice.v(k), &basis)?
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|mut r| {
                    let last = r.len() - 1;
                    r[last] = -r[last];
                    r
                })
                .collect()
        })
        .collect();
    let reference = bundle_reference_fan(n, twist);
    if quotient != reference {
        return Err(Error::contradiction(format!(
            "quotient fan of v_{k} for ℓ = {ell} differs from the fan of P(O ⊕ O({twist}))"
        )));
    }
    Ok(ExceptionalStructure::Bundle { twist })
}

/// Maximal cones `cone(u₀ + c·e, u₁, …, û_{i−1}, …, u_{n−2}, ±e)` in `Z^{n−1}`.
pub fn bundle_reference_fan(n: usize, twist: i64) -> BTreeSet<BTreeSet<Vec<i64>>> {
    let dim = n - 1;
    let unit = |j: usize| -> Vec<i64> { (0..dim).map(|t| i64::from(t + 1 == j)).collect() };
    let mut u0: Vec<i64> = vec![-1; dim];
    u0[dim - 1] = twist;
    let base: Vec<Vec<i64>> = std::iter::once(u0).chain((1..=n - 2).map(unit)).collect();
    let e = unit(dim);
    let minus_e: Vec<i64> = e.iter().map(|x| -x).collect();
    let mut fan = BTreeSet::new();
    for skip in 0..base.len() {
        for top in [&e, &minus_e] {
            let mut cone: BTreeSet<Vec<i64>> = base
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != skip)
                .map(|(_, r)| r.clone())
                .collect();
            cone.insert(top.clone());
            fan.insert(cone);
        }
    }
    fan
}

/// Per-check outcome of [`verify_resolution`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub lattice: LatticeData,
    pub bound: i64,
    pub maximal_cones: usize,
    pub unresolved_multiplicity: u64,
    pub smooth: bool,
    pub polyhedra: Vec<PolyhedraCheck>,
    /// `(i, D_i globally generated)`.
    pub global_generation: Vec<(usize, bool)>,
    /// `(k, structure)` or the error met while identifying it.
    pub exceptional: Vec<ExceptionalCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCheck {
    pub k: i64,
    pub structure: Option<ExceptionalStructure>,
    pub expected: ExceptionalStructure,
    pub error: Option<String>,
}

/// Runs every check on the resolution of `1/ℓ(1, …, 1, a)`.
pub fn verify_resolution(lattice: &LatticeData, bound: i64) -> Result<ResolutionReport> {
    let fan = resolution_fan(lattice)?;
    let n = lattice.n;
    let ell = lattice.ell;
    let unresolved_multiplicity = cone_multiplicity(&Fan::standard(*lattice).cone(0), lattice)?;
    let smooth = fan.is_smooth()?;
    let polyhedra = (1..=n)
        .map(|i| polyhedra_equal_in_fan(&fan, i, bound))
        .collect::<Result<Vec<_>>>()?;
    let global_generation = (1..=n)
        .map(|i| Ok((i, is_globally_generated(&fan, &TorusDivisor::d(&fan, i)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let ks: Vec<i64> = if lattice.a == ell - 1 { (1..ell).collect() } else { vec![1] };
    let exceptional: Vec<ExceptionalCheck> = if n >= 3 {
        ks.into_iter()
            .map(|k| {
                let expected = if lattice.a != ell - 1 || k == ell - 1 {
                    ExceptionalStructure::ProjectiveSpace { dim: n - 1 }
                } else {
                    ExceptionalStructure::Bundle { twist: ell - k }
                };
                match exceptional_structure_in_fan(&fan, k) {
                    Ok(s) => ExceptionalCheck { k, structure: Some(s), expected, error: None },
                    Err(e) => ExceptionalCheck { k, structure: None, expected, error: Some(e.to_string()) },
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let passed = smooth
        && unresolved_multiplicity == ell as u64
        && polyhedra.iter().all(|p| p.holds)
        && global_generation.iter().all(|(_, g)| *g)
        && exceptional.iter().all(|e| e.structure == Some(e.expected));
    Ok(ResolutionReport {
        lattice: *lattice,
        bound,
        maximal_cones: fan.maximal_cones.len(),
        unresolved_multiplicity,
        smooth,
        polyhedra,
        global_generation,
        exceptional,
        passed,
    })
}

/// `Q` helper for callers comparing Cartier data with integer vectors.
pub fn rational_vector(x: &[i64]) -> Vec<Q> {
    x.iter().map(|&v| Q::from_integer(v)).collect()
}
