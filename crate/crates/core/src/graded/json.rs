//! JSON descriptions of rings and modules.
//!
//! Structure constants are listed sparsely: an absent `(i, j)` entry is the
//! zero vector. Serialization emits exactly the nonzero entries in index
//! order, so a serialized object parses back to an equal one and
//! re-serializes to identical text.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::module::GradedModule;
use super::ring::{BasisElement, GradedRing};
use crate::abgroup::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub name: String,
    pub degree: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub value: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingJson {
    pub field: String,
    pub group: FgAbGroup,
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub mul: Vec<EntryJson>,
    pub one: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub action: Vec<EntryJson>,
}

fn basis_from(json: &[BasisJson]) -> Vec<BasisElement> {
    json.iter().map(|b| BasisElement::new(b.name.clone(), b.degree.clone())).collect()
}

fn basis_to(basis: &[BasisElement]) -> Vec<BasisJson> {
    basis.iter().map(|b| BasisJson { name: b.name.clone(), degree: b.degree.clone() }).collect()
}

fn vector_from<F: Field>(field: &F, values: &[Value], n: usize, what: &str) -> Result<Vec<F::Elem>> {
    if values.len() != n {
        return Err(Error::Parse(format!("{what} has length {}, expected {n}", values.len())));
    }
    values.iter().map(|v| field.elem_from_json(v)).collect()
}

/// Dense table of `rows * cols` vectors of length `n` from sparse entries.
fn table_from<F: Field>(
    field: &F,
    entries: &[EntryJson],
    rows: usize,
    cols: usize,
    n: usize,
    what: &str,
) -> Result<Vec<Vec<F::Elem>>> {
    let mut table = vec![vec![field.zero(); n]; rows * cols];
    let mut seen = vec![false; rows * cols];
    for e in entries {
        if e.i >= rows || e.j >= cols {
            return Err(Error::Parse(format!("{what} entry ({}, {}) is out of range", e.i, e.j)));
        }
        let k = e.i * cols + e.j;
        if seen[k] {
            return Err(Error::Parse(format!("{what} entry ({}, {}) is listed twice", e.i, e.j)));
        }
        seen[k] = true;
        table[k] = vector_from(field, &e.value, n, what)?;
    }
    Ok(table)
}

fn table_to<F: Field>(field: &F, table: &[Vec<F::Elem>], cols: usize) -> Vec<EntryJson> {
    table
        .iter()
        .enumerate()
        .filter(|(_, v)| v.iter().any(|x| !field.is_zero(x)))
        .map(|(k, v)| EntryJson { i: k / cols.max(1), j: k % cols.max(1), value: v.iter().map(|x| field.elem_to_json(x)).collect() })
        .collect()
}

pub fn ring_from_json<F: Field>(field: F, json: &RingJson) -> Result<GradedRing<F>> {
    if json.field != field.name() {
        return Err(Error::UnsupportedField(format!("ring declared over {}, expected {}", json.field, field.name())));
    }
    let n = json.basis.len();
    let mul = table_from(&field, &json.mul, n, n, n, "mul")?;
    let one = vector_from(&field, &json.one, n, "one")?;
    GradedRing::new(field, json.group.clone(), basis_from(&json.basis), mul, one)
}

pub fn ring_to_json<F: Field>(ring: &GradedRing<F>) -> RingJson {
    let f = ring.field();
    RingJson {
        field: f.name(),
        group: ring.group().clone(),
        basis: basis_to(ring.basis()),
        mul: table_to(f, ring.structure_constants(), ring.dim()),
        one: ring.one().iter().map(|x| f.elem_to_json(x)).collect(),
    }
}

pub fn module_from_json<F: Field>(ring: Arc<GradedRing<F>>, json: &ModuleJson) -> Result<GradedModule<F>> {
    let n = json.basis.len();
    let action = table_from(ring.field(), &json.action, ring.dim(), n, n, "action")?;
    GradedModule::new(ring, basis_from(&json.basis), action)
}

pub fn module_to_json<F: Field>(module: &GradedModule<F>) -> ModuleJson {
    ModuleJson {
        basis: basis_to(module.basis()),
        action: table_to(module.field(), module.action_constants(), module.dim()),
    }
}
