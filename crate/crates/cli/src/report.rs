//! Report builders shared by the subcommands and `reproduce`.

use std::collections::BTreeSet;

use anyhow::{bail, Result};
use rigid_core::arith::minimal_group_search;
use rigid_core::census::{singularity_census, CensusTable};
use rigid_core::character::invariant_plurigenus;
use rigid_core::classify::{classify, minimal_group, xmin_tuple, Classification, ClassifyOptions};
use rigid_core::group::{enumerate_groups, make_group};
use rigid_core::toric::{verify_resolution, LatticeData, ResolutionReport};
use rigid_core::triples::{
    elliptic_signature, enumerate_generating_triples, hurwitz_genus, orbit_decomposition, OrbitReport,
};
use rigid_core::{Group, TwistAction};
use serde::Serialize;
use serde_json::{json, Value};

/// A command result in all supported formats.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub text: String,
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

/// `G_d` by default, or `A ⋊ Z_d` with `A = ⟨gens⟩ ≤ Z_modulus²`.
pub fn select_group(d: u32, modulus: Option<u32>, gens: &[[u32; 2]]) -> Result<Group> {
    TwistAction::new(d)?;
    match modulus {
        None if gens.is_empty() => Ok(minimal_group(d)?),
        None => bail!("--gen needs --modulus"),
        Some(m) => Ok(make_group(m, d, gens)?),
    }
}

/// Lattice of `E` forced by the twist: its characteristic polynomial is
/// `x² + 1` (trace 0) or `x² ± x + 1`.
fn elliptic_lattice(d: u32) -> Result<&'static str> {
    let m = TwistAction::new(d)?.matrix();
    Ok(if m[0][0] + m[1][1] == 0 { "Z[i]" } else { "Z[zeta_3]" })
}

pub fn groups(d: u32, bound: usize) -> Result<Report> {
    let mut rows = Vec::new();
    let mut csv = csv_line(&["order", "modulus", "A_gens", "abelianization", "exceptional"].map(String::from));
    let mut text = format!("groups A ⋊ Z_{d} of order at most {bound}\n");
    for g in enumerate_groups(d, bound)? {
        let ab = g.abelianization();
        let spec = g.spec();
        rows.push(json!({
            "group": spec,
            "order": g.order(),
            "abelianization": ab,
            "exceptional": g.is_exceptional(),
        }));
        csv += &csv_line(&[
            g.order().to_string(),
            g.modulus().to_string(),
            format!("{:?}", spec.a_gens),
            format!("{ab:?}"),
            g.is_exceptional().to_string(),
        ]);
        text += &format!(
            "  |G| = {:3}  A = {}  G^ab = {:?}{}\n",
            g.order(),
            g.subgroup(),
            ab,
            if g.is_exceptional() { "  (exceptional)" } else { "" }
        );
    }
    Ok(Report { json: json!({ "d": d, "bound": bound, "groups": rows }), csv: Some(csv), text })
}

pub fn signatures(d: u32, bound: usize) -> Result<Value> {
    let abelianizations: BTreeSet<Vec<u32>> = enumerate_groups(d, bound)?.iter().map(|g| g.abelianization()).collect();
    Ok(json!({
        "signature": elliptic_signature(d)?,
        "abelianizations": abelianizations,
        "lattice": elliptic_lattice(d)?,
    }))
}

pub fn triples(g: &Group, type_filter: Option<[u32; 3]>, with_automorphisms: bool) -> Result<Report> {
    let all = enumerate_generating_triples(g, type_filter);
    let auts = if with_automorphisms { Some(g.automorphism_group()?) } else { None };
    let orbits = orbit_decomposition(g, &all, auts.as_ref());
    let reports: Vec<OrbitReport> = orbits.iter().map(|o| o.report(g)).collect();
    let mut csv = csv_line(&["orbit", "representative", "type", "size"].map(String::from));
    let mut text = format!(
        "{} generating triples of |G| = {} in {} {} orbits\n",
        all.len(),
        g.order(),
        orbits.len(),
        if with_automorphisms { "Aut(G) × B_3" } else { "B_3" }
    );
    for (i, o) in orbits.iter().enumerate() {
        let ty = o.representative.type_of(g);
        csv += &csv_line(&[i.to_string(), o.representative.display(g), format!("{ty:?}"), o.size().to_string()]);
        text += &format!("  {i}: {}  type {ty:?}  size {}\n", o.representative.display(g), o.size());
    }
    let json = json!({
        "group": g.spec(),
        "triples": all.len(),
        "automorphisms": with_automorphisms,
        "orbits": reports,
    });
    Ok(Report { json, csv: Some(csv), text })
}

fn classification_value(c: &Classification) -> Value {
    let g = &c.group;
    let classes: Vec<Value> = c
        .classes
        .iter()
        .map(|cl| {
            json!({
                "representative": cl.representative.spec(g),
                "members": cl.members,
                "conjugate": cl.conjugate,
            })
        })
        .collect();
    json!({
        "group": g.spec(),
        "n": c.n,
        "elliptic_orbits": c.elliptic_reps.len(),
        "curve_orbits": c.curve_reps.len(),
        "rigid_tuples": c.rigid_tuples.len(),
        "class_count": c.class_count(),
        "conjugation_pairing": c.conjugation_pairing(),
        "classes": classes,
    })
}

pub fn classify_report(g: &Group, n: usize, options: ClassifyOptions) -> Result<Report> {
    let c = classify(g, n, options)?;
    let mut csv = csv_line(&["class", "representative", "members", "conjugate"].map(String::from));
    let mut text = format!(
        "|G| = {}, n = {n}: {} elliptic orbits, {} curve orbits, {} rigid tuples, {} isomorphism classes\n",
        g.order(),
        c.elliptic_reps.len(),
        c.curve_reps.len(),
        c.rigid_tuples.len(),
        c.class_count()
    );
    for (i, cl) in c.classes.iter().enumerate() {
        let rep: Vec<String> = cl.representative.factors().map(|t| t.display(g)).collect();
        let conj = cl.conjugate.map_or("-".to_string(), |j| j.to_string());
        csv += &csv_line(&[i.to_string(), rep.join(" "), format!("{:?}", cl.members), conj.clone()]);
        text += &format!("  class {i}: {}  conjugate class {conj}\n", rep.join(" "));
    }
    Ok(Report { json: classification_value(&c), csv: Some(csv), text })
}

pub fn classes_value(d: u32, n: usize) -> Result<Value> {
    let c = classify(&minimal_group(d)?, n, ClassifyOptions::default())?;
    let v = classification_value(&c);
    Ok(json!({
        "class_count": v["class_count"],
        "conjugation_pairing": v["conjugation_pairing"],
        "elliptic_orbits": v["elliptic_orbits"],
        "curve_orbits": v["curve_orbits"],
        "rigid_tuples": v["rigid_tuples"],
    }))
}

fn table_text(title: &str, t: &CensusTable) -> String {
    let mut out = format!("{title}\n");
    for row in &t.rows {
        out += &format!("  {:<20} {}\n", row.ty.to_string(), row.count);
    }
    out
}

/// Census of every isomorphism class for `G`; all classes must agree.
pub fn census_table(g: &Group, n: usize) -> Result<CensusTable> {
    let c = classify(g, n, ClassifyOptions::default())?;
    let mut tables = c
        .classes
        .iter()
        .map(|cl| singularity_census(g, &cl.representative))
        .collect::<rigid_core::Result<Vec<_>>>()?;
    let Some(first) = tables.pop() else { bail!("no rigid action for |G| = {}, n = {n}", g.order()) };
    if tables.iter().any(|t| *t != first) {
        return Err(rigid_core::Error::contradiction("conjugate classes have different singularity tables").into());
    }
    Ok(first)
}

pub fn xmin_table(n: usize) -> Result<CensusTable> {
    let (g, tuple) = xmin_tuple(n)?;
    Ok(singularity_census(&g, &tuple)?)
}

pub fn census_report(title: String, table: CensusTable) -> Report {
    Report {
        json: to_value(&table),
        csv: Some(table.to_csv()),
        text: table_text(&title, &table),
    }
}

pub fn minimal_value(d: u32, bound: usize) -> Result<Value> {
    Ok(to_value(&minimal_group_search(d, bound)?.report()))
}

pub fn minimal_report(d: u32, bound: usize) -> Result<Report> {
    let m = minimal_group_search(d, bound)?;
    let r = m.report();
    let csv = csv_line(&["d", "order", "A_gens", "witness_type", "genus", "presentation_holds"].map(String::from))
        + &csv_line(&[
            d.to_string(),
            r.order.to_string(),
            format!("{:?}", r.group.a_gens),
            format!("{:?}", r.witness_type),
            r.genus.to_string(),
            r.presentation_holds.to_string(),
        ]);
    let text = format!(
        "minimal group for d = {d}: order {} (A = {}), witness {} of type {:?}, genus {}\n  {} {}\n",
        r.order,
        m.group.subgroup(),
        m.witness.display(&m.group),
        r.witness_type,
        r.genus,
        r.presentation.clone().unwrap_or_default(),
        if r.presentation_holds { "holds" } else { "fails" }
    );
    Ok(Report { json: to_value(&r), csv: Some(csv), text })
}

pub fn toric_result(n: usize, ell: i64, a: i64, bound: i64) -> Result<ResolutionReport> {
    let lattice = LatticeData::new(n, ell, a)?;
    Ok(verify_resolution(&lattice, bound)?)
}

pub fn toric_value(n: usize, ell: i64, a: i64, bound: i64) -> Result<Value> {
    let r = toric_result(n, ell, a, bound)?;
    Ok(json!({
        "passed": r.passed,
        "maximal_cones": r.maximal_cones,
        "unresolved_multiplicity": r.unresolved_multiplicity,
        "exceptional": r.exceptional.iter().map(|e| to_value(&e.structure)).collect::<Vec<_>>(),
    }))
}

pub fn toric_report(r: &ResolutionReport) -> Report {
    let l = r.lattice;
    let mut csv = csv_line(&["check", "index", "holds"].map(String::from));
    csv += &csv_line(&["smooth".into(), String::new(), r.smooth.to_string()]);
    for p in &r.polyhedra {
        csv += &csv_line(&["polyhedra".into(), p.i.to_string(), p.holds.to_string()]);
    }
    for (i, ok) in &r.global_generation {
        csv += &csv_line(&["globally_generated".into(), i.to_string(), ok.to_string()]);
    }
    for e in &r.exceptional {
        csv += &csv_line(&["exceptional".into(), e.k.to_string(), (e.structure == Some(e.expected)).to_string()]);
    }
    let mut text = format!(
        "resolution of 1/{}(1,…,1,{}) in dimension {}: {}\n  {} maximal cones, smooth: {}, multiplicity of σ {}\n",
        l.ell,
        l.a,
        l.n,
        if r.passed { "pass" } else { "FAIL" },
        r.maximal_cones,
        r.smooth,
        r.unresolved_multiplicity
    );
    for e in &r.exceptional {
        text += &format!("  E_{}: {:?} (expected {:?})\n", e.k, e.structure, e.expected);
    }
    Report { json: to_value(r), csv: Some(csv), text }
}

pub fn genus_value(order: u64, ty: [u32; 3]) -> Result<Value> {
    Ok(json!(hurwitz_genus(order, ty)?))
}

pub fn plurigenus_value(k: u32, ty: [u32; 3]) -> Value {
    json!(invariant_plurigenus(k, ty))
}
