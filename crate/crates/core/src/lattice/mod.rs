//! Lattices of normal subgroups.
//!
//! A [`NormalLattice`] is a set of normal subgroups of one group that contains
//! `{1}` and `G` and is closed under products and intersections. Nodes are
//! sorted by order, so [`NormalLattice::bottom`] is always node 0 and
//! [`NormalLattice::top`] the last node.

mod birkhoff;
mod export;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupError, GroupSpec, GroupTable, Subgroup};

pub use birkhoff::{DistributiveAnalysis, GeneralPosition};
pub use export::LatticeJson;

/// Index of a node within one [`NormalLattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LatticeError {
    #[error("input {index} is not a subgroup (witness {witness:?})")]
    NotSubgroup { index: usize, witness: (usize, usize) },
    #[error("input {index} is not normal: conjugating {} by {} leaves it", witness.0, witness.1)]
    NotNormal { index: usize, witness: (usize, usize) },
    #[error("node set is missing the {0} subgroup")]
    MissingBound(&'static str),
    #[error("node set is not closed: the {op} of inputs {left} and {right} is missing")]
    NotClosed {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("subgroup has elements outside the group")]
    OutOfRange,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("operation requires a distributive lattice")]
    NotDistributive,
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub struct NormalLattice {
    group: Arc<GroupTable>,
    nodes: Vec<Subgroup>,
    index: HashMap<FixedBitSet, NodeId>,
    /// `above[i]` holds every `j` with `node i ⊆ node j`.
    above: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    covers: Vec<Vec<NodeId>>,
    lower_covers: Vec<Vec<NodeId>>,
    moebius_rows: Vec<OnceLock<Vec<i64>>>,
    analysis: OnceLock<DistributiveAnalysis>,
}

impl fmt::Debug for NormalLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalLattice")
            .field("group", &self.group.name())
            .field("nodes", &self.nodes)
            .finish()
    }
}

/// The lattice of all normal subgroups of `group`.
///
/// Every normal subgroup is the product of the normal closures of its
/// elements, so the join-closure of the class closures is exactly ker(G).
pub fn normal_lattice(group: Arc<GroupTable>) -> NormalLattice {
    let n = group.order();
    let generators: Vec<Subgroup> = {
        let mut seen = HashSet::new();
        group
            .conjugacy_classes()
            .into_iter()
            .skip(1)
            .map(|class| group.normal_closure([class[0]]))
            .filter(|s| seen.insert(s.bits().clone()))
            .collect()
    };
    let mut found: HashSet<FixedBitSet> = HashSet::new();
    let trivial = Subgroup::trivial(n);
    found.insert(trivial.bits().clone());
    let mut frontier = vec![trivial];
    let mut all = frontier.clone();
    while let Some(x) = frontier.pop() {
        for g in &generators {
            if g.is_subset(&x) {
                continue;
            }
            let y = group.product_set(&x, g);
            if found.insert(y.bits().clone()) {
                frontier.push(y.clone());
                all.push(y);
            }
        }
    }
    NormalLattice::assemble(group, all).expect("normal subgroups are closed under meet and join")
}

impl NormalLattice {
    /// Builds the lattice on exactly the given subgroups, which must be
    /// normal, contain `{1}` and `G`, and be closed under meet and join.
    pub fn from_subgroups(group: Arc<GroupTable>, subgroups: Vec<Subgroup>) -> Result<Self, LatticeError> {
        let subgroups = validate_inputs(&group, subgroups)?;
        let n = group.order();
        let has = |s: &Subgroup| subgroups.iter().any(|t| t == s);
        if !has(&Subgroup::trivial(n)) {
            return Err(LatticeError::MissingBound("trivial"));
        }
        if !has(&Subgroup::whole(n)) {
            return Err(LatticeError::MissingBound("whole"));
        }
        let keys: HashSet<&FixedBitSet> = subgroups.iter().map(Subgroup::bits).collect();
        for (i, a) in subgroups.iter().enumerate() {
            for (j, b) in subgroups.iter().enumerate().skip(i + 1) {
                if !keys.contains(a.intersection(b).bits()) {
                    return Err(LatticeError::NotClosed {
                        op: "meet",
                        left: i,
                        right: j,
                    });
                }
                if !keys.contains(group.product_set(a, b).bits()) {
                    return Err(LatticeError::NotClosed {
                        op: "join",
                        left: i,
                        right: j,
                    });
                }
            }
        }
        Self::assemble(group, subgroups)
    }

    /// Smallest sublattice of ker(G) containing the given normal subgroups.
    pub fn generated_by(group: Arc<GroupTable>, generators: Vec<Subgroup>) -> Result<Self, LatticeError> {
        let generators = validate_inputs(&group, generators)?;
        let n = group.order();
        let mut nodes: Vec<Subgroup> = vec![Subgroup::trivial(n), Subgroup::whole(n)];
        let mut seen: HashSet<FixedBitSet> = nodes.iter().map(|s| s.bits().clone()).collect();
        for g in generators {
            if seen.insert(g.bits().clone()) {
                nodes.push(g);
            }
        }
        let mut start = 0;
        while start < nodes.len() {
            let end = nodes.len();
            for i in start..end {
                for j in 0..i {
                    for candidate in [
                        nodes[i].intersection(&nodes[j]),
                        group.product_set(&nodes[i], &nodes[j]),
                    ] {
                        if seen.insert(candidate.bits().clone()) {
                            nodes.push(candidate);
                        }
                    }
                }
            }
            start = end;
        }
        Self::assemble(group, nodes)
    }

    /// Sorts, indexes, and tabulates a node set already known to be closed.
    fn assemble(group: Arc<GroupTable>, mut nodes: Vec<Subgroup>) -> Result<Self, LatticeError> {
        let mut seen = HashSet::new();
        nodes.retain(|s| seen.insert(s.bits().clone()));
        nodes.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.to_vec().cmp(&b.to_vec())));
        for s in nodes.iter_mut() {
            if s.label().is_none() {
                s.set_label(default_label(&group, s));
            }
        }
        let count = nodes.len();
        let index: HashMap<FixedBitSet, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bits().clone(), NodeId(i)))
            .collect();
        let above: Vec<FixedBitSet> = nodes
            .iter()
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(count);
                for (j, b) in nodes.iter().enumerate() {
                    if a.is_subset(b) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let mut meet = vec![0u32; count * count];
        let mut join = vec![0u32; count * count];
        for i in 0..count {
            for j in 0..=i {
                let (m, k) = if above[j].contains(i) {
                    (j, i)
                } else if above[i].contains(j) {
                    (i, j)
                } else {
                    let m = index
                        .get(nodes[i].intersection(&nodes[j]).bits())
                        .ok_or(LatticeError::NotClosed {
                            op: "meet",
                            left: i,
                            right: j,
                        })?
                        .0;
                    let k = index
                        .get(group.product_set(&nodes[i], &nodes[j]).bits())
                        .ok_or(LatticeError::NotClosed {
                            op: "join",
                            left: i,
                            right: j,
                        })?
                        .0;
                    (m, k)
                };
                meet[i * count + j] = m as u32;
                meet[j * count + i] = m as u32;
                join[i * count + j] = k as u32;
                join[j * count + i] = k as u32;
            }
        }
        // transitive reduction of the order
        let mut covers = vec![Vec::new(); count];
        let mut lower_covers = vec![Vec::new(); count];
        for i in 0..count {
            let strict: Vec<usize> = above[i].ones().filter(|&j| j != i).collect();
            for &j in &strict {
                let direct = !strict.iter().any(|&k| k != j && above[k].contains(j));
                if direct {
                    covers[i].push(NodeId(j));
                    lower_covers[j].push(NodeId(i));
                }
            }
        }
        Ok(NormalLattice {
            group,
            index,
            above,
            meet,
            join,
            covers,
            lower_covers,
            moebius_rows: (0..count).map(|_| OnceLock::new()).collect(),
            analysis: OnceLock::new(),
            nodes,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn nodes(&self) -> &[Subgroup] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Subgroup {
        &self.nodes[id.0]
    }

    pub fn order_of(&self, id: NodeId) -> usize {
        self.nodes[id.0].order()
    }

    /// Display name used in tables and diagrams.
    pub fn label(&self, id: NodeId) -> String {
        self.nodes[id.0]
            .label()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("N{}", id.0))
    }

    pub fn bottom(&self) -> NodeId {
        NodeId(0)
    }

    pub fn top(&self) -> NodeId {
        NodeId(self.nodes.len() - 1)
    }

    /// Node whose members are exactly `s`, if present.
    pub fn find(&self, s: &Subgroup) -> Option<NodeId> {
        self.index.get(s.bits()).copied()
    }

    pub fn contains_id(&self, id: NodeId) -> bool {
        id.0 < self.nodes.len()
    }

    pub fn leq(&self, a: NodeId, b: NodeId) -> bool {
        self.above[a.0].contains(b.0)
    }

    pub fn lt(&self, a: NodeId, b: NodeId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Nodes `O` with `a ⊆ O`.
    pub fn up_set(&self, a: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.above[a.0].ones().map(NodeId)
    }

    pub fn meet(&self, a: NodeId, b: NodeId) -> NodeId {
        NodeId(self.meet[a.0 * self.nodes.len() + b.0] as usize)
    }

    pub fn join(&self, a: NodeId, b: NodeId) -> NodeId {
        NodeId(self.join[a.0 * self.nodes.len() + b.0] as usize)
    }

    /// Join of a set; `None` when empty.
    pub fn join_all(&self, set: impl IntoIterator<Item = NodeId>) -> Option<NodeId> {
        set.into_iter().reduce(|a, b| self.join(a, b))
    }

    /// Meet of a set; `None` when empty.
    pub fn meet_all(&self, set: impl IntoIterator<Item = NodeId>) -> Option<NodeId> {
        set.into_iter().reduce(|a, b| self.meet(a, b))
    }

    /// (join, meet) of a nonempty set.
    pub fn bounds(&self, set: &[NodeId]) -> Result<(NodeId, NodeId), LatticeError> {
        self.check_ids(set)?;
        match (self.join_all(set.iter().copied()), self.meet_all(set.iter().copied())) {
            (Some(over), Some(under)) => Ok((over, under)),
            _ => Err(LatticeError::Argument("bounds of an empty set".into())),
        }
    }

    pub fn covers(&self, a: NodeId) -> &[NodeId] {
        &self.covers[a.0]
    }

    pub fn lower_covers(&self, a: NodeId) -> &[NodeId] {
        &self.lower_covers[a.0]
    }

    /// `M` joined with all of its covers: the join of `C(M)`, or `M` itself
    /// when `M` has no covers.
    pub fn cover_join(&self, m: NodeId) -> NodeId {
        self.covers(m).iter().fold(m, |acc, &o| self.join(acc, o))
    }

    /// Möbius function of the lattice order, memoized per lower argument.
    pub fn moebius(&self, lower: NodeId, upper: NodeId) -> Result<i64, LatticeError> {
        self.check_ids(&[lower, upper])?;
        if !self.leq(lower, upper) {
            return Err(LatticeError::Argument(format!(
                "moebius({lower}, {upper}) needs {lower} <= {upper}"
            )));
        }
        Ok(self.moebius_row(lower)[upper.0])
    }

    /// `μ(lower, ·)`, zero outside the up-set of `lower`.
    pub fn moebius_row(&self, lower: NodeId) -> &[i64] {
        self.moebius_rows[lower.0].get_or_init(|| {
            let mut row = vec![0i64; self.nodes.len()];
            // nodes are sorted by order, so every P < O comes before O
            for o in self.up_set(lower) {
                row[o.0] = if o == lower {
                    1
                } else {
                    -self
                        .up_set(lower)
                        .filter(|&p| self.lt(p, o))
                        .map(|p| row[p.0])
                        .sum::<i64>()
                };
            }
            row
        })
    }

    /// A triple `(m, n, l)` with `m ⊆ n` violating `(m ∨ l) ∧ n = m ∨ (l ∧ n)`.
    pub fn modularity_violation(&self) -> Option<[NodeId; 3]> {
        for m in self.ids() {
            for n in self.up_set(m) {
                for l in self.ids() {
                    if self.meet(self.join(m, l), n) != self.join(m, self.meet(l, n)) {
                        return Some([m, n, l]);
                    }
                }
            }
        }
        None
    }

    /// Smallest sublattice containing `gens` together with bottom and top.
    pub fn sublattice_closure(&self, gens: &[NodeId]) -> Result<NormalLattice, LatticeError> {
        self.check_ids(gens)?;
        let mut member = FixedBitSet::with_capacity(self.len());
        let mut list = vec![self.bottom(), self.top()];
        member.insert(self.bottom().0);
        member.insert(self.top().0);
        for &g in gens {
            if !member.put(g.0) {
                list.push(g);
            }
        }
        let mut start = 0;
        while start < list.len() {
            let end = list.len();
            for i in start..end {
                for j in 0..i {
                    for c in [self.meet(list[i], list[j]), self.join(list[i], list[j])] {
                        if !member.put(c.0) {
                            list.push(c);
                        }
                    }
                }
            }
            start = end;
        }
        let subs = member.ones().map(|i| self.nodes[i].clone()).collect();
        Self::assemble(self.group.clone(), subs)
    }

    pub(crate) fn check_ids(&self, ids: &[NodeId]) -> Result<(), LatticeError> {
        match ids.iter().find(|id| !self.contains_id(**id)) {
            Some(bad) => Err(LatticeError::Argument(format!("node {bad} is not in the lattice"))),
            None => Ok(()),
        }
    }

    pub fn is_antichain(&self, set: &[NodeId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set.iter().skip(i + 1).all(|&b| !self.leq(a, b) && !self.leq(b, a)))
    }
}

fn validate_inputs(group: &GroupTable, subs: Vec<Subgroup>) -> Result<Vec<Subgroup>, LatticeError> {
    subs.into_iter()
        .enumerate()
        .map(|(i, s)| {
            let s = if s.bits().len() == group.order() {
                s
            } else {
                s.resized(group.order()).ok_or(LatticeError::OutOfRange)?
            };
            s.check_closed(group)
                .map_err(|witness| LatticeError::NotSubgroup { index: i, witness })?;
            if let Some(witness) = group.normality_witness(&s) {
                return Err(LatticeError::NotNormal { index: i, witness });
            }
            Ok(s)
        })
        .collect()
}

fn default_label(group: &GroupTable, s: &Subgroup) -> Option<String> {
    match group.spec() {
        GroupSpec::Cyclic { .. } => Some(format!("C_{}", s.order())),
        _ if s.order() == 1 => Some("1".into()),
        _ if s.order() == group.order() => Some("G".into()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, GroupSpec};

    fn cyclic_lattice(n: usize) -> NormalLattice {
        normal_lattice(Arc::new(make_group(&GroupSpec::cyclic(n)).unwrap()))
    }

    fn by_order(l: &NormalLattice, order: usize) -> NodeId {
        l.ids().find(|&i| l.order_of(i) == order).unwrap()
    }

    #[test]
    fn c12_is_the_divisor_lattice() {
        let l = cyclic_lattice(12);
        let orders: Vec<usize> = l.ids().map(|i| l.order_of(i)).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 6, 12]);
        for a in l.ids() {
            for b in l.ids() {
                let (x, y) = (l.order_of(a), l.order_of(b));
                assert_eq!(l.order_of(l.meet(a, b)), num_integer::gcd(x, y));
                assert_eq!(l.order_of(l.join(a, b)), num_integer::lcm(x, y));
                assert_eq!(l.leq(a, b), y % x == 0);
            }
        }
        let c2 = by_order(&l, 2);
        let covers: Vec<usize> = l.covers(c2).iter().map(|&c| l.order_of(c)).collect();
        assert_eq!(covers, vec![4, 6]);
    }

    #[test]
    fn trivial_group_has_one_node() {
        let l = cyclic_lattice(1);
        assert_eq!(l.len(), 1);
        assert_eq!(l.bottom(), l.top());
    }

    #[test]
    fn bounds_in_c12() {
        let l = cyclic_lattice(12);
        let (c4, c6) = (by_order(&l, 4), by_order(&l, 6));
        assert_eq!(l.bounds(&[c4, c6]).unwrap(), (by_order(&l, 12), by_order(&l, 2)));
        assert_eq!(l.bounds(&[c4]).unwrap(), (c4, c4));
        assert!(matches!(l.bounds(&[]), Err(LatticeError::Argument(_))));
    }

    #[test]
    fn moebius_on_divisors_of_12() {
        let l = cyclic_lattice(12);
        let (c1, c2, c4, c12) = (by_order(&l, 1), by_order(&l, 2), by_order(&l, 4), by_order(&l, 12));
        assert_eq!(l.moebius(c4, c4).unwrap(), 1);
        assert_eq!(l.moebius(c1, c4).unwrap(), 0);
        assert_eq!(l.moebius(c2, c12).unwrap(), 1);
        assert!(l.moebius(c4, c2).is_err());
    }

    #[test]
    fn sublattice_closure_in_c12() {
        let l = cyclic_lattice(12);
        let sub = l.sublattice_closure(&[by_order(&l, 2), by_order(&l, 3)]).unwrap();
        let orders: Vec<usize> = sub.ids().map(|i| sub.order_of(i)).collect();
        assert_eq!(orders, vec![1, 2, 3, 6, 12]);
        assert_eq!(l.sublattice_closure(&[]).unwrap().len(), 2);
        assert_eq!(l.sublattice_closure(&l.ids().collect::<Vec<_>>()).unwrap().len(), 6);
    }

    #[test]
    fn strict_constructor_reports_missing_join() {
        let g = Arc::new(make_group(&GroupSpec::cyclic(12)).unwrap());
        let subs = vec![
            Subgroup::trivial(12),
            g.subgroup_generated([6]),
            g.subgroup_generated([4]),
            Subgroup::whole(12),
        ];
        assert_eq!(
            NormalLattice::from_subgroups(g.clone(), subs.clone()).unwrap_err(),
            LatticeError::NotClosed {
                op: "join",
                left: 1,
                right: 2
            }
        );
        let mut closed = subs;
        closed.push(g.subgroup_generated([2]));
        assert_eq!(NormalLattice::from_subgroups(g, closed).unwrap().len(), 5);
    }

    #[test]
    fn strict_constructor_rejects_non_subgroups() {
        let g = Arc::new(make_group(&GroupSpec::cyclic(6)).unwrap());
        let bad = Subgroup::from_elements(6, [0, 1]);
        let err = NormalLattice::generated_by(g, vec![bad]).unwrap_err();
        assert!(matches!(err, LatticeError::NotSubgroup { index: 0, .. }));
    }
}
