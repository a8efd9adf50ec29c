use std::fmt::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{LatticeError, NormalLattice};
use crate::group::{GroupTable, Subgroup};

/// `{"nodes": [[elements], ...], "hasse": [[lower, upper], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub nodes: Vec<Vec<usize>>,
    #[serde(default)]
    pub hasse: Vec<[usize; 2]>,
}

impl LatticeJson {
    /// Rebuilds the lattice; the node set must already be closed.
    pub fn into_lattice(self, group: Arc<GroupTable>) -> Result<NormalLattice, LatticeError> {
        let n = group.order();
        let subs = self
            .nodes
            .into_iter()
            .map(|els| {
                if els.iter().any(|&e| e >= n) {
                    Err(LatticeError::OutOfRange)
                } else {
                    Ok(Subgroup::from_elements(n, els))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        NormalLattice::from_subgroups(group, subs)
    }
}

impl NormalLattice {
    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            nodes: self.nodes.iter().map(Subgroup::to_vec).collect(),
            hasse: self.hasse_edges().map(|(a, b)| [a, b]).collect(),
        }
    }

    /// Cover relations as `(lower, upper)` index pairs.
    pub fn hasse_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ids()
            .flat_map(move |i| self.covers(i).iter().map(move |&j| (i.0, j.0)))
    }

    /// Hasse diagram in Graphviz DOT; nodes are labelled `|N|:name`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", self.group.name().replace('"', "'"));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=plaintext];");
        for id in self.ids() {
            let _ = writeln!(
                out,
                "  n{} [label=\"{}:{}\"];",
                id.0,
                self.order_of(id),
                self.label(id).replace('"', "'")
            );
        }
        for (a, b) in self.hasse_edges() {
            let _ = writeln!(out, "  n{a} -- n{b};");
        }
        out.push_str("}\n");
        out
    }
}
