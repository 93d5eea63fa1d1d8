//! Golden fixtures and the `reproduce` diff.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report;

pub const BUNDLED: &str = include_str!("../fixtures/golden.json");

#[derive(Debug, Deserialize)]
pub struct FixtureFile {
    pub fixtures: Vec<Fixture>,
}

#[derive(Debug, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub source: String,
    pub kind: String,
    #[serde(default)]
    pub params: Value,
    pub expected: Value,
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub name: String,
    pub source: String,
    pub matched: bool,
    pub differences: Vec<String>,
}

fn param<T: for<'de> Deserialize<'de>>(params: &Value, key: &str) -> Result<T> {
    let v = params.get(key).with_context(|| format!("missing parameter {key:?}"))?;
    serde_json::from_value(v.clone()).with_context(|| format!("bad parameter {key:?}"))
}

fn compute(f: &Fixture) -> Result<Value> {
    let p = &f.params;
    Ok(match f.kind.as_str() {
        "signatures" => report::signatures(param(p, "d")?, param(p, "bound")?)?,
        "minimal_group" => {
            let full = report::minimal_value(param(p, "d")?, param(p, "bound")?)?;
            json!({
                "order": full["order"],
                "presentation": full["presentation"],
                "presentation_holds": full["presentation_holds"],
                "witness_type": full["witness_type"],
                "genus": full["genus"],
            })
        }
        "classes" => report::classes_value(param(p, "d")?, param(p, "n")?)?,
        "census_minimal" => {
            let g = report::select_group(param(p, "d")?, None, &[])?;
            serde_json::to_value(report::census_table(&g, param(p, "n")?)?)?
        }
        "census_xmin" => serde_json::to_value(report::xmin_table(param(p, "n")?)?)?,
        "genus" => report::genus_value(param(p, "order")?, param(p, "type")?)?,
        "plurigenus" => report::plurigenus_value(param(p, "k")?, param(p, "type")?),
        "toric" => report::toric_value(param(p, "n")?, param(p, "ell")?, param(p, "a")?, param(p, "bound")?)?,
        other => bail!("unknown fixture kind {other:?}"),
    })
}

/// Paths at which `expected` and `actual` differ.
pub fn diff(path: &str, expected: &Value, actual: &Value, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(a), Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                let sub = format!("{path}/{k}");
                match (a.get(k), b.get(k)) {
                    (Some(x), Some(y)) => diff(&sub, x, y, out),
                    (Some(x), None) => out.push(format!("{sub}: expected {x}, missing")),
                    (None, Some(y)) => out.push(format!("{sub}: unexpected {y}")),
                    (None, None) => {}
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff(&format!("{path}/{i}"), x, y, out);
            }
        }
        _ if expected != actual => out.push(format!("{}: expected {expected}, got {actual}", if path.is_empty() { "/" } else { path })),
        _ => {}
    }
}

pub fn load(text: &str) -> Result<FixtureFile> {
    serde_json::from_str(text).context("cannot parse fixture file")
}

pub fn run(file: &FixtureFile) -> Result<Vec<Outcome>> {
    file.fixtures
        .iter()
        .map(|f| {
            let actual = compute(f).with_context(|| format!("fixture {}", f.name))?;
            let mut differences = Vec::new();
            diff("", &f.expected, &actual, &mut differences);
            Ok(Outcome {
                name: f.name.clone(),
                source: f.source.clone(),
                matched: differences.is_empty(),
                differences,
            })
        })
        .collect()
}
