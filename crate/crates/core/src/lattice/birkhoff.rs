//! Distributivity, irreducibles, and the antichain encodings of nodes.

use serde::Serialize;

use super::{LatticeError, NodeId, NormalLattice};

#[derive(Debug, Clone, Serialize)]
pub struct DistributiveAnalysis {
    pub is_distributive: bool,
    /// A triple `(k, l, m)` with `k ∨ (l ∧ m) != (k ∨ l) ∧ (k ∨ m)`.
    pub violation: Option<[NodeId; 3]>,
    /// Nodes with exactly one cover.
    pub meet_irreducibles: Vec<NodeId>,
    /// Nodes with exactly one lower cover.
    pub product_irreducibles: Vec<NodeId>,
    /// Per node, the antichain of meet irreducibles meeting to it. Empty when
    /// the lattice is not distributive.
    pub antichain_of: Vec<Vec<NodeId>>,
    /// Per node, the antichain of product irreducibles joining to it.
    pub join_antichain_of: Vec<Vec<NodeId>>,
}

impl DistributiveAnalysis {
    pub fn is_meet_irreducible(&self, id: NodeId) -> bool {
        self.meet_irreducibles.binary_search(&id).is_ok()
    }

    pub fn is_product_irreducible(&self, id: NodeId) -> bool {
        self.product_irreducibles.binary_search(&id).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneralPosition {
    /// No member can be dropped without shrinking the join.
    pub general_position: bool,
    /// `join(A - {O}) ∧ O = M` for every `O` in `A`.
    pub meet_condition: bool,
}

impl NormalLattice {
    pub fn distributive_analysis(&self) -> &DistributiveAnalysis {
        self.analysis.get_or_init(|| self.analyze())
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive_analysis().is_distributive
    }

    fn analyze(&self) -> DistributiveAnalysis {
        let mut violation = None;
        'outer: for k in self.ids() {
            for l in self.ids() {
                for m in self.ids().take(l.0) {
                    let lhs = self.join(k, self.meet(l, m));
                    let rhs = self.meet(self.join(k, l), self.join(k, m));
                    if lhs != rhs {
                        violation = Some([k, l, m]);
                        break 'outer;
                    }
                }
            }
        }
        let meet_irreducibles: Vec<NodeId> = self.ids().filter(|&i| self.covers(i).len() == 1).collect();
        let product_irreducibles: Vec<NodeId> =
            self.ids().filter(|&i| self.lower_covers(i).len() == 1).collect();
        let is_distributive = violation.is_none();
        let (antichain_of, join_antichain_of) = if is_distributive {
            let meets = self
                .ids()
                .map(|k| {
                    let ups: Vec<NodeId> = meet_irreducibles.iter().copied().filter(|&p| self.leq(k, p)).collect();
                    let minimal: Vec<NodeId> = ups
                        .iter()
                        .copied()
                        .filter(|&p| !ups.iter().any(|&q| self.lt(q, p)))
                        .collect();
                    debug_assert_eq!(self.meet_all(minimal.iter().copied()).unwrap_or(self.top()), k);
                    minimal
                })
                .collect();
            let joins = self
                .ids()
                .map(|k| {
                    let downs: Vec<NodeId> =
                        product_irreducibles.iter().copied().filter(|&p| self.leq(p, k)).collect();
                    let maximal: Vec<NodeId> = downs
                        .iter()
                        .copied()
                        .filter(|&p| !downs.iter().any(|&q| self.lt(p, q)))
                        .collect();
                    debug_assert_eq!(self.join_all(maximal.iter().copied()).unwrap_or(self.bottom()), k);
                    maximal
                })
                .collect();
            (meets, joins)
        } else {
            (Vec::new(), Vec::new())
        };
        DistributiveAnalysis {
            is_distributive,
            violation,
            meet_irreducibles,
            product_irreducibles,
            antichain_of,
            join_antichain_of,
        }
    }

    /// Meet of a set, with the empty set meeting to the top node.
    pub fn underline(&self, set: &[NodeId]) -> NodeId {
        self.meet_all(set.iter().copied()).unwrap_or(self.top())
    }

    /// Join of a set, with the empty set joining to the bottom node.
    pub fn overline(&self, set: &[NodeId]) -> NodeId {
        self.join_all(set.iter().copied()).unwrap_or(self.bottom())
    }

    /// Join of `base` with every member of `set`; the join of `set` taken
    /// inside the interval above `base`.
    pub fn overline_over(&self, base: NodeId, set: &[NodeId]) -> NodeId {
        set.iter().fold(base, |acc, &o| self.join(acc, o))
    }

    /// Whether `set ⊆ C(base)` is in general position over `base`.
    pub fn is_general_position(&self, set: &[NodeId], base: NodeId) -> Result<GeneralPosition, LatticeError> {
        self.check_ids(set)?;
        self.check_ids(&[base])?;
        if let Some(bad) = set.iter().find(|o| !self.covers(base).contains(o)) {
            return Err(LatticeError::Argument(format!("node {bad} does not cover {base}")));
        }
        let full = self.overline_over(base, set);
        let mut general_position = true;
        let mut meet_condition = true;
        for (i, &o) in set.iter().enumerate() {
            let rest: Vec<NodeId> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            let rest_join = self.overline_over(base, &rest);
            general_position &= rest_join != full;
            meet_condition &= self.meet(rest_join, o) == base;
        }
        Ok(GeneralPosition {
            general_position,
            meet_condition,
        })
    }

    fn require_distributive(&self) -> Result<&DistributiveAnalysis, LatticeError> {
        let a = self.distributive_analysis();
        if a.is_distributive {
            Ok(a)
        } else {
            Err(LatticeError::NotDistributive)
        }
    }

    /// For an antichain `B` of product irreducibles, pairs each lower cover
    /// `L` of `join(B)` with the unique `K ∈ B` not contained in `L`.
    ///
    /// The inverse `K ↦ M_K ∨ join(B - {K})` is checked before returning.
    pub fn product_to_cover_map(&self, antichain: &[NodeId]) -> Result<Vec<(NodeId, NodeId)>, LatticeError> {
        let analysis = self.require_distributive()?;
        self.check_ids(antichain)?;
        if !antichain.iter().all(|&k| analysis.is_product_irreducible(k)) || !self.is_antichain(antichain) {
            return Err(LatticeError::Argument("expected an antichain of product irreducibles".into()));
        }
        let top = self.overline(antichain);
        let mut pairs = Vec::new();
        for &l in self.lower_covers(top) {
            let hits: Vec<NodeId> = antichain
                .iter()
                .copied()
                .filter(|&k| self.meet(k, l) != k)
                .collect();
            match hits.as_slice() {
                [k] => pairs.push((l, *k)),
                _ => {
                    return Err(LatticeError::Argument(format!(
                        "lower cover {l} matches {} members of the antichain",
                        hits.len()
                    )))
                }
            }
        }
        if pairs.len() != antichain.len() {
            return Err(LatticeError::Argument("product-to-cover map is not a bijection".into()));
        }
        for &(l, k) in &pairs {
            let m_k = self.lower_covers(k)[0];
            let rest: Vec<NodeId> = antichain.iter().copied().filter(|&x| x != k).collect();
            if self.join(m_k, self.overline(&rest)) != l {
                return Err(LatticeError::Argument(format!("inverse map disagrees at {k}")));
            }
        }
        Ok(pairs)
    }

    /// For an antichain `A` of meet irreducibles, pairs each cover `O` of
    /// `meet(A)` with the unique `P ∈ A` such that `P ∨ O` covers `P`.
    ///
    /// The inverse `P ↦ cover(P) ∧ meet(A - {P})` is checked before returning.
    pub fn cover_to_irreducible_map(&self, antichain: &[NodeId]) -> Result<Vec<(NodeId, NodeId)>, LatticeError> {
        let analysis = self.require_distributive()?;
        self.check_ids(antichain)?;
        if !antichain.iter().all(|&p| analysis.is_meet_irreducible(p)) || !self.is_antichain(antichain) {
            return Err(LatticeError::Argument("expected an antichain of meet irreducibles".into()));
        }
        let bottom = self.underline(antichain);
        let mut pairs = Vec::new();
        for &o in self.covers(bottom) {
            let hits: Vec<NodeId> = antichain
                .iter()
                .copied()
                .filter(|&p| self.covers(p).contains(&self.join(p, o)))
                .collect();
            match hits.as_slice() {
                [p] => pairs.push((o, *p)),
                _ => {
                    return Err(LatticeError::Argument(format!(
                        "cover {o} matches {} members of the antichain",
                        hits.len()
                    )))
                }
            }
        }
        if pairs.len() != antichain.len() {
            return Err(LatticeError::Argument("cover-to-irreducible map is not a bijection".into()));
        }
        for &(o, p) in &pairs {
            let rest: Vec<NodeId> = antichain.iter().copied().filter(|&x| x != p).collect();
            if self.meet(self.covers(p)[0], self.underline(&rest)) != o {
                return Err(LatticeError::Argument(format!("inverse map disagrees at {p}")));
            }
        }
        Ok(pairs)
    }
}
