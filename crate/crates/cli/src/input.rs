use std::fs;
use std::path::Path;
use std::sync::Arc;

use latsuper_core::families;
use latsuper_core::group::{make_group_with, GroupSpec, GroupTable, Limits, Subgroup};
use latsuper_core::lattice::{normal_lattice, LatticeJson, NodeId, NormalLattice};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input("io", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input("json", format!("{}: {e}", path.display())))
}

/// What `--group` pointed at.
pub struct GroupInput {
    pub spec: GroupSpec,
    /// Lattice stored in a table artifact, used when no `--sublattice` is given.
    pub lattice: Option<LatticeJson>,
    /// Character rows stored in a table artifact.
    pub characters: Option<Value>,
}

pub fn read_group(path: &Path) -> Result<GroupInput, CliError> {
    let v = read_json(path)?;
    let parse_spec = |v: Value| {
        GroupSpec::deserialize(v).map_err(|e| CliError::input("group_spec", format!("{}: {e}", path.display())))
    };
    if let Some(obj) = v.as_object().filter(|o| o.contains_key("group") && o.contains_key("lattice")) {
        let lattice = LatticeJson::deserialize(obj["lattice"].clone())
            .map_err(|e| CliError::input("lattice_json", e.to_string()))?;
        return Ok(GroupInput {
            spec: parse_spec(obj["group"].clone())?,
            lattice: Some(lattice),
            characters: obj.get("characters").cloned(),
        });
    }
    Ok(GroupInput {
        spec: parse_spec(v)?,
        lattice: None,
        characters: None,
    })
}

pub fn limits(seed: u64) -> Limits {
    Limits {
        seed,
        ..Limits::from_env()
    }
}

pub fn build_group(spec: &GroupSpec, seed: u64) -> Result<Arc<GroupTable>, CliError> {
    Ok(Arc::new(make_group_with(spec, &limits(seed))?))
}

/// The lattice named by a sublattice file, or every normal subgroup.
pub fn build_lattice(
    group: Arc<GroupTable>,
    sublattice: Option<&Path>,
    stored: Option<LatticeJson>,
) -> Result<NormalLattice, CliError> {
    let v = match (sublattice, stored) {
        (Some(p), _) => read_json(p)?,
        (None, Some(stored)) => return Ok(stored.into_lattice(group)?),
        (None, None) => return Ok(normal_lattice(group)),
    };
    sublattice_from_json(group, v)
}

fn subgroups(group: &GroupTable, items: &Value) -> Result<Vec<Subgroup>, CliError> {
    let lists: Vec<Vec<usize>> = serde_json::from_value(items.clone())
        .map_err(|e| CliError::input("sublattice", format!("expected lists of element indices: {e}")))?;
    lists
        .into_iter()
        .enumerate()
        .map(|(i, els)| {
            if let Some(&bad) = els.iter().find(|&&g| g >= group.order()) {
                return Err(CliError::input("sublattice", "element index out of range")
                    .with_witness(json!({ "input": i, "element": bad })));
            }
            Ok(group.subgroup_generated(els))
        })
        .collect()
}

pub fn sublattice_from_json(group: Arc<GroupTable>, v: Value) -> Result<NormalLattice, CliError> {
    if v.is_array() {
        let gens = subgroups(&group, &v)?;
        return Ok(NormalLattice::generated_by(group, gens)?);
    }
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::input("sublattice", "expected a JSON array or object"))?;
    if obj.contains_key("nodes") {
        let lj = LatticeJson::deserialize(v.clone()).map_err(|e| CliError::input("sublattice", e.to_string()))?;
        return Ok(lj.into_lattice(group)?);
    }
    match obj.get("kind").and_then(Value::as_str) {
        Some("subspaces") => Ok(families::subspace_lattice(group)?),
        Some("basis") => {
            let basis = match obj.get("basis") {
                Some(b) => serde_json::from_value(b.clone())
                    .map_err(|e| CliError::input("sublattice", format!("basis: {e}")))?,
                None => families::standard_basis(&group)?,
            };
            Ok(families::basis_lattice(group, &basis)?)
        }
        Some("generators") => {
            let gens = subgroups(&group, obj.get("generators").unwrap_or(&Value::Null))?;
            Ok(NormalLattice::generated_by(group, gens)?)
        }
        Some("full") => Ok(normal_lattice(group)),
        other => Err(CliError::input("sublattice", format!("unknown sublattice kind {other:?}"))),
    }
}

/// `node:<index>`, or generators `3`, `2,3` or `[0,4,8]` of a lattice node.
pub fn node_ref(lat: &NormalLattice, text: &str) -> Result<NodeId, CliError> {
    let t = text.trim();
    if let Some(idx) = t.strip_prefix("node:") {
        let i: usize = idx
            .trim()
            .parse()
            .map_err(|_| CliError::input("node", format!("bad node index {idx:?}")))?;
        if i >= lat.len() {
            return Err(CliError::input("node", format!("node {i} is out of range")));
        }
        return Ok(NodeId(i));
    }
    let inner = t.trim_start_matches('[').trim_end_matches(']');
    let els = inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::input("node", format!("bad node reference {text:?}")))?;
    let group = lat.group();
    if els.iter().any(|&g| g >= group.order()) {
        return Err(CliError::input("node", format!("{text:?} names elements outside the group")));
    }
    let sub = group.subgroup_generated(els);
    lat.find(&sub).ok_or_else(|| {
        CliError::input("node", format!("the subgroup generated by {text:?} is not a lattice node"))
            .with_witness(json!({ "members": sub.to_vec() }))
    })
}
