use std::sync::Arc;

use serde::Serialize;

use crate::group::GroupTable;
use crate::lattice::{NodeId, NormalLattice};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Superclass {
    pub node: NodeId,
    /// Sorted element indices.
    pub members: Vec<usize>,
}

impl Superclass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

/// The superclasses `N∘` of a lattice, one block per node with `N∘` nonempty,
/// ordered by node index. Block 0 is always `{1}`.
#[derive(Debug, Clone)]
pub struct SuperclassPartition {
    lattice: Arc<NormalLattice>,
    blocks: Vec<Superclass>,
    block_of: Vec<usize>,
    block_of_node: Vec<Option<usize>>,
    degenerate: Vec<NodeId>,
}

pub fn build_superclasses(lattice: Arc<NormalLattice>) -> SuperclassPartition {
    let group = lattice.group().clone();
    let n = group.order();
    // the smallest node containing g is the meet of all nodes containing g
    let mut smallest = vec![lattice.top(); n];
    for id in lattice.ids().rev() {
        for g in lattice.node(id).elements() {
            smallest[g] = id;
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); lattice.len()];
    for (g, id) in smallest.iter().enumerate() {
        members[id.0].push(g);
    }
    let mut blocks = Vec::new();
    let mut block_of_node = vec![None; lattice.len()];
    let mut degenerate = Vec::new();
    for (i, m) in members.into_iter().enumerate() {
        if m.is_empty() {
            degenerate.push(NodeId(i));
        } else {
            block_of_node[i] = Some(blocks.len());
            blocks.push(Superclass {
                node: NodeId(i),
                members: m,
            });
        }
    }
    let block_of = smallest.iter().map(|id| block_of_node[id.0].unwrap()).collect();
    SuperclassPartition {
        lattice,
        blocks,
        block_of,
        block_of_node,
        degenerate,
    }
}

impl SuperclassPartition {
    pub fn lattice(&self) -> &Arc<NormalLattice> {
        &self.lattice
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.lattice.group()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Superclass] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Superclass {
        &self.blocks[i]
    }

    /// Block index of element `g`.
    pub fn block_of(&self, g: usize) -> usize {
        self.block_of[g]
    }

    /// Block index of `N∘`, or `None` when `N∘` is empty.
    pub fn block_of_node(&self, id: NodeId) -> Option<usize> {
        self.block_of_node[id.0]
    }

    /// Nodes whose superclass is empty.
    pub fn degenerate_nodes(&self) -> &[NodeId] {
        &self.degenerate
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Superclass::size).collect()
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.blocks.iter().map(Superclass::representative).collect()
    }
}
