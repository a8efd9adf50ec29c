//! Restriction of normal-lattice supercharacters along a subgroup embedding.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::group::{GroupError, GroupTable, Subgroup};
use crate::lattice::{LatticeError, NodeId, NormalLattice};
use crate::product::{decompose_class_function, Term};
use crate::scalar::serde_rational;
use crate::sct::{degree_sum, moebius_degree, ClassFunction, SCTheory, SctError};
use crate::Rational;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RestrictionError {
    #[error("the {0} lattice is not distributive")]
    NotDistributive(&'static str),
    #[error("the lattices are not restriction favorable")]
    NotFavorable { witnesses: serde_json::Value },
    #[error("restricted character is not constant on the superclass of node {node} (elements {elements:?})")]
    NotConstant { node: NodeId, elements: [usize; 2] },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("restriction factorization fails on the superclass of node {node} (joins preserved: {joins_preserved}, cover indices preserved: {indices_preserved})")]
    FactorizationFails {
        node: NodeId,
        joins_preserved: bool,
        indices_preserved: bool,
    },
    #[error("anchor is not an antichain of meet irreducibles")]
    BadAntichain,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sct(#[from] SctError),
}

/// `{"map": [...]}`: image in the target of each source element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub map: Vec<usize>,
}

/// An injective homomorphism `H → G`.
#[derive(Debug, Clone)]
pub struct GroupEmbedding {
    source: Arc<GroupTable>,
    target: Arc<GroupTable>,
    map: Vec<usize>,
}

impl GroupEmbedding {
    pub fn new(source: Arc<GroupTable>, target: Arc<GroupTable>, map: Vec<usize>) -> Result<Self, GroupError> {
        let fail = |reason: &'static str, witness: Vec<usize>| GroupError::Embedding {
            reason: reason.into(),
            witness,
        };
        if map.len() != source.order() {
            return Err(fail("map length differs from the source order", vec![map.len()]));
        }
        if let Some(h) = map.iter().position(|&g| g >= target.order()) {
            return Err(fail("image outside the target", vec![h]));
        }
        if map[source.identity()] != target.identity() {
            return Err(fail("identity not sent to identity", vec![source.identity()]));
        }
        let mut preimage = vec![usize::MAX; target.order()];
        for (h, &g) in map.iter().enumerate() {
            if preimage[g] != usize::MAX {
                return Err(fail("map is not injective", vec![preimage[g], h]));
            }
            preimage[g] = h;
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(fail("map is not a homomorphism", vec![a, b]));
                }
            }
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(group: Arc<GroupTable>) -> Self {
        let map = (0..group.order()).collect();
        Self {
            source: group.clone(),
            target: group,
            map,
        }
    }

    pub fn source(&self) -> &Arc<GroupTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroupTable> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_elements(self.target.order(), self.map.iter().copied())
    }

    /// `N ∩ H`, as a subgroup of the source.
    pub fn preimage(&self, n: &Subgroup) -> Subgroup {
        Subgroup::from_elements(
            self.source.order(),
            (0..self.source.order()).filter(|&h| n.contains(self.map[h])),
        )
    }

    pub fn to_json(&self) -> EmbeddingJson {
        EmbeddingJson { map: self.map.clone() }
    }
}

/// A cover `N ∈ C(M)` of the `G` lattice whose intersections with `H` are
/// neither equal nor a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    pub lower: NodeId,
    pub upper: NodeId,
}

#[derive(Debug, Clone)]
pub struct RestrictionContext {
    embedding: GroupEmbedding,
    lattice_g: Arc<NormalLattice>,
    lattice_h: Arc<NormalLattice>,
    /// `N ↦ N ∩ H`, `None` where the intersection is not an `H` node.
    intersect: Vec<Option<NodeId>>,
    pub r1_missing: Vec<NodeId>,
    pub r2_witnesses: Vec<CoverWitness>,
    /// Pairs `M, N` with `(M ∨ N) ∩ H != (M ∩ H) ∨ (N ∩ H)`, at most a few.
    pub join_witnesses: Vec<CoverWitness>,
    /// Covers `N ∈ C(M)` with `M ∩ H != N ∩ H` but `|N ∩ H : M ∩ H| != |N : M|`.
    pub index_witnesses: Vec<CoverWitness>,
}

impl RestrictionContext {
    pub fn build(
        embedding: GroupEmbedding,
        lattice_g: Arc<NormalLattice>,
        lattice_h: Arc<NormalLattice>,
    ) -> Result<Self, RestrictionError> {
        if !Arc::ptr_eq(lattice_g.group(), embedding.target()) && **lattice_g.group() != **embedding.target() {
            return Err(RestrictionError::Inconsistent("G lattice is over a different group".into()));
        }
        if !Arc::ptr_eq(lattice_h.group(), embedding.source()) && **lattice_h.group() != **embedding.source() {
            return Err(RestrictionError::Inconsistent("H lattice is over a different group".into()));
        }
        if !lattice_g.is_distributive() {
            return Err(RestrictionError::NotDistributive("G"));
        }
        if !lattice_h.is_distributive() {
            return Err(RestrictionError::NotDistributive("H"));
        }
        let intersect: Vec<Option<NodeId>> = lattice_g
            .nodes()
            .iter()
            .map(|n| lattice_h.find(&embedding.preimage(n)))
            .collect();
        let r1_missing: Vec<NodeId> = lattice_g.ids().filter(|id| intersect[id.0].is_none()).collect();
        let mut r2_witnesses = Vec::new();
        for m in lattice_g.ids() {
            for &n in lattice_g.covers(m) {
                if let (Some(mh), Some(nh)) = (intersect[m.0], intersect[n.0]) {
                    if mh != nh && !lattice_h.covers(mh).contains(&nh) {
                        r2_witnesses.push(CoverWitness { lower: m, upper: n });
                    }
                }
            }
        }
        let mut join_witnesses = Vec::new();
        if r1_missing.is_empty() {
            'outer: for m in lattice_g.ids() {
                for n in lattice_g.ids().filter(|&n| n > m) {
                    let joined = intersect[lattice_g.join(m, n).0];
                    let split = lattice_h.join(intersect[m.0].unwrap(), intersect[n.0].unwrap());
                    if joined != Some(split) {
                        join_witnesses.push(CoverWitness { lower: m, upper: n });
                        if join_witnesses.len() == 8 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        let mut index_witnesses = Vec::new();
        if r1_missing.is_empty() {
            for m in lattice_g.ids() {
                for &n in lattice_g.covers(m) {
                    let (mh, nh) = (intersect[m.0].unwrap(), intersect[n.0].unwrap());
                    let index_h = lattice_h.order_of(nh) / lattice_h.order_of(mh);
                    if mh != nh && index_h != lattice_g.order_of(n) / lattice_g.order_of(m) {
                        index_witnesses.push(CoverWitness { lower: m, upper: n });
                    }
                }
            }
        }
        Ok(Self {
            embedding,
            lattice_g,
            lattice_h,
            intersect,
            r1_missing,
            r2_witnesses,
            join_witnesses,
            index_witnesses,
        })
    }

    pub fn embedding(&self) -> &GroupEmbedding {
        &self.embedding
    }

    pub fn lattice_g(&self) -> &Arc<NormalLattice> {
        &self.lattice_g
    }

    pub fn lattice_h(&self) -> &Arc<NormalLattice> {
        &self.lattice_h
    }

    pub fn favorable(&self) -> bool {
        self.r1_missing.is_empty() && self.r2_witnesses.is_empty()
    }

    /// `N ↦ N ∩ H` is a join homomorphism.
    pub fn preserves_joins(&self) -> bool {
        self.r1_missing.is_empty() && self.join_witnesses.is_empty()
    }

    /// Every cover that does not collapse keeps its index in `H`.
    pub fn preserves_cover_indices(&self) -> bool {
        self.r1_missing.is_empty() && self.index_witnesses.is_empty()
    }

    /// Joins and cover indices are preserved. Favorable pairs without this
    /// can break the factorization.
    pub fn factorization_conditions(&self) -> bool {
        self.preserves_joins() && self.preserves_cover_indices()
    }

    pub fn intersect(&self, n: NodeId) -> Option<NodeId> {
        self.intersect.get(n.0).copied().flatten()
    }

    fn require_favorable(&self) -> Result<(), RestrictionError> {
        if self.favorable() {
            Ok(())
        } else {
            Err(RestrictionError::NotFavorable {
                witnesses: json!({ "r1": self.r1_missing, "r2": self.r2_witnesses }),
            })
        }
    }

    fn cap(&self, n: NodeId) -> NodeId {
        self.intersect[n.0].expect("favorable context")
    }

    /// `A_H = {P_{O∩H} : O ∈ C(meet A), O∩H != meet(A)∩H}`, where `P_X` is the
    /// meet irreducible of the antichain of `meet(A)∩H` paired with the
    /// cover `X`.
    pub fn compute_a_h(&self, antichain: &[NodeId]) -> Result<Vec<NodeId>, RestrictionError> {
        self.require_favorable()?;
        let lg = &self.lattice_g;
        let analysis = lg.distributive_analysis();
        if !lg.is_antichain(antichain) || !antichain.iter().all(|&p| analysis.is_meet_irreducible(p)) {
            return Err(RestrictionError::BadAntichain);
        }
        let lh = &self.lattice_h;
        let base = lg.underline(antichain);
        let base_h = self.cap(base);
        let pairs = lh.cover_to_irreducible_map(&lh.distributive_analysis().antichain_of[base_h.0])?;
        let mut out: Vec<NodeId> = Vec::new();
        for &o in lg.covers(base) {
            let oh = self.cap(o);
            if oh == base_h {
                continue;
            }
            let p = pairs
                .iter()
                .find(|&&(cover, _)| cover == oh)
                .map(|&(_, p)| p)
                .ok_or_else(|| RestrictionError::Inconsistent(format!("{oh} is not a cover of {base_h} in H")))?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionTerm {
    pub node: NodeId,
    /// Closed-form coefficient of `χ^{K•}` in `Res χ / χ(1)`.
    #[serde(with = "serde_rational")]
    pub coefficient: Rational,
    /// The same coefficient by orthogonal projection.
    #[serde(with = "serde_rational")]
    pub projection: Rational,
    /// The degree-sum side of the coefficient identity, summed directly.
    #[serde(with = "serde_rational")]
    pub degree_sum_side: Rational,
    /// Coefficient of `χ^{K•}` in the unnormalized `Res χ`.
    #[serde(with = "serde_rational")]
    pub res_coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictionReport {
    /// `meet(A)` in the `G` lattice.
    pub anchor: NodeId,
    pub antichain: Vec<NodeId>,
    pub a_h: Vec<NodeId>,
    /// `meet(A_H)`, the top of `H` when `A_H` is empty.
    pub a_h_meet: NodeId,
    pub a_h_empty: bool,
    /// `overline(C(meet A)) ∩ H`
    pub cover_join_cap: NodeId,
    /// `overline(C(meet A)) ∩ meet(A_H)`, the bottom of the summation range.
    pub range_bottom: NodeId,
    /// `meet(A_H) ⊆ overline(C(meet A))`, the single-term case.
    pub collapsed: bool,
    pub constant_on_superclasses: bool,
    pub factorization_holds: bool,
    pub terms: Vec<RestrictionTerm>,
    /// `Res χ^{(meet A)•} / χ^{(meet A)•}(1)` per `H` superclass.
    #[serde(serialize_with = "serialize_rationals")]
    pub normalized_restriction: Vec<Rational>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&crate::scalar::rational_string(r))?;
    }
    seq.end()
}

/// Restricts `χ^{(meet A)•}` to `H` and checks the factorization and the
/// closed-form expansion against the direct computation.
pub fn restrict_decompose(
    ctx: &RestrictionContext,
    theory_g: &SCTheory,
    theory_h: &SCTheory,
    antichain: &[NodeId],
) -> Result<RestrictionReport, RestrictionError> {
    let lg = ctx.lattice_g();
    let lh = ctx.lattice_h();
    let a_h = ctx.compute_a_h(antichain)?;
    let anchor = lg.underline(antichain);
    let a_h_meet = lh.underline(&a_h);
    let cover_join_cap = ctx.cap(lg.cover_join(anchor));
    let range_bottom = lh.meet(cover_join_cap, a_h_meet);
    let ph = theory_h.partition();

    let chi = theory_g.bullet(anchor);
    let map = ctx.embedding().map();
    let mut restricted = Vec::with_capacity(ph.len());
    for block in ph.blocks() {
        let v = chi.function.at(theory_g.partition(), map[block.representative()]);
        if let Some(&h) = block
            .members
            .iter()
            .find(|&&h| chi.function.at(theory_g.partition(), map[h]) != v)
        {
            return Err(RestrictionError::NotConstant {
                node: block.node,
                elements: [block.representative(), h],
            });
        }
        restricted.push(v.clone() / chi.degree().clone());
    }
    let restricted = ClassFunction::new(restricted);

    let left = theory_h.bullet(a_h_meet).normalized();
    let perm = crate::sct::chi_subgroup::<Rational>(ph, cover_join_cap)?;
    let factorization_holds = left.mul(&perm.normalized())? == restricted;
    if !factorization_holds {
        let lhs = left.mul(&perm.normalized())?;
        let bad = (0..ph.len()).find(|&i| lhs.values()[i] != restricted.values()[i]).unwrap_or(0);
        return Err(RestrictionError::FactorizationFails {
            node: ph.blocks()[bad].node,
            joins_preserved: ctx.preserves_joins(),
            indices_preserved: ctx.preserves_cover_indices(),
        });
    }

    let projected = decompose_class_function(theory_h, &restricted)?;
    let projection_of = |k: NodeId| {
        projected
            .iter()
            .find(|t: &&Term| t.node == k)
            .map(|t| t.coefficient.clone())
            .unwrap_or_else(Rational::zero)
    };
    let int = |v: usize| Rational::from_integer((v as i64).into());
    let d_order = int(lh.order_of(range_bottom));
    let h_order = lh.group().order();
    let cap_degree = int(h_order / lh.order_of(cover_join_cap));
    let mut terms = Vec::new();
    for k in lh.ids().filter(|&k| lh.leq(range_bottom, k) && lh.leq(k, a_h_meet)) {
        let x = lh.meet(lh.cover_join(k), a_h_meet);
        let inside = lh.covers(k).iter().filter(|&&q| lh.leq(q, a_h_meet)).count();
        let chi_k = theory_h.bullet(k);
        let block = ph
            .block_of_node(x)
            .ok_or_else(|| RestrictionError::Inconsistent(format!("superclass of node {x} is empty")))?;
        let at_x = chi_k.function.value(block).clone();
        if at_x.is_zero() {
            return Err(RestrictionError::Inconsistent(format!("χ^{{{k}•}} vanishes on the superclass of {x}")));
        }
        let sign = if inside % 2 == 0 { Rational::one() } else { -Rational::one() };
        let coefficient = d_order.clone() * sign / (int(lh.order_of(x)) * at_x);
        let sum = degree_sum(lh, k, a_h_meet, cover_join_cap)?;
        let degree_sum_side = Rational::from_integer(sum.brute_force.into())
            / (cap_degree.clone() * Rational::from_integer(moebius_degree(lh, k).into()));
        terms.push(RestrictionTerm {
            node: k,
            projection: projection_of(k),
            res_coefficient: coefficient.clone() * chi.degree().clone(),
            coefficient,
            degree_sum_side,
        });
    }
    for t in &terms {
        if t.coefficient.is_zero() {
            return Err(RestrictionError::Inconsistent(format!("coefficient at node {} is zero", t.node)));
        }
        if t.coefficient != t.projection || t.coefficient != t.degree_sum_side {
            return Err(RestrictionError::Inconsistent(format!(
                "coefficient at node {} disagrees with the projection",
                t.node
            )));
        }
    }
    if let Some(stray) = projected.iter().find(|p| !terms.iter().any(|t| t.node == p.node)) {
        return Err(RestrictionError::Inconsistent(format!(
            "projection has a term at node {} outside the summation range",
            stray.node
        )));
    }
    Ok(RestrictionReport {
        anchor,
        antichain: antichain.to_vec(),
        a_h_empty: a_h.is_empty(),
        a_h,
        a_h_meet,
        cover_join_cap,
        range_bottom,
        collapsed: lh.leq(a_h_meet, cover_join_cap),
        constant_on_superclasses: true,
        factorization_holds,
        terms,
        normalized_restriction: restricted.into_values(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, GroupSpec};
    use crate::lattice::normal_lattice;

    fn cyclic(n: usize) -> Arc<NormalLattice> {
        Arc::new(normal_lattice(Arc::new(make_group(&GroupSpec::cyclic(n)).unwrap())))
    }

    fn node(l: &NormalLattice, order: usize) -> NodeId {
        l.ids().find(|&i| l.order_of(i) == order).unwrap()
    }

    fn c6_in_c12() -> RestrictionContext {
        let (lg, lh) = (cyclic(12), cyclic(6));
        let emb = GroupEmbedding::new(lh.group().clone(), lg.group().clone(), (0..6).map(|i| 2 * i).collect()).unwrap();
        RestrictionContext::build(emb, lg, lh).unwrap()
    }

    #[test]
    fn embedding_validation() {
        let g = Arc::new(make_group(&GroupSpec::cyclic(12)).unwrap());
        let h = Arc::new(make_group(&GroupSpec::cyclic(6)).unwrap());
        let err = GroupEmbedding::new(h.clone(), g.clone(), vec![0, 1, 2, 3, 4, 5]).unwrap_err();
        assert!(matches!(err, GroupError::Embedding { .. }));
        let err = GroupEmbedding::new(h, g, vec![0, 2, 4, 6, 8, 8]).unwrap_err();
        assert!(matches!(err, GroupError::Embedding { ref reason, .. } if reason.contains("injective")));
    }

    #[test]
    fn c6_in_c12_is_favorable() {
        let ctx = c6_in_c12();
        assert!(ctx.favorable());
        let (lg, lh) = (ctx.lattice_g().clone(), ctx.lattice_h().clone());
        assert_eq!(ctx.intersect(node(&lg, 4)), Some(node(&lh, 2)));
        assert_eq!(ctx.intersect(lg.top()), Some(lh.top()));
    }

    #[test]
    fn cyclic_restriction_is_gcd() {
        let ctx = c6_in_c12();
        let (lg, lh) = (ctx.lattice_g().clone(), ctx.lattice_h().clone());
        let tg = SCTheory::new(lg.clone());
        let th = SCTheory::new(lh.clone());
        for d in [1, 2, 3, 4, 6, 12] {
            let k = node(&lg, d);
            let anti = lg.distributive_analysis().antichain_of[k.0].clone();
            let rep = restrict_decompose(&ctx, &tg, &th, &anti).unwrap();
            let g = num_integer::gcd(d, 6);
            assert_eq!(rep.a_h_meet, node(&lh, g), "d = {d}");
            assert_eq!(rep.terms.len(), 1);
            assert_eq!(rep.terms[0].node, node(&lh, g));
            if d == 4 {
                assert_eq!(rep.terms[0].res_coefficient, Rational::one());
            }
            let want = th.bullet(node(&lh, g)).normalized();
            assert_eq!(rep.normalized_restriction, want.into_values());
        }
    }

    #[test]
    fn identity_restriction() {
        let l = cyclic(12);
        let emb = GroupEmbedding::identity(l.group().clone());
        let ctx = RestrictionContext::build(emb, l.clone(), l.clone()).unwrap();
        assert!(ctx.favorable());
        let t = SCTheory::new(l.clone());
        for k in l.ids() {
            let anti = l.distributive_analysis().antichain_of[k.0].clone();
            let rep = restrict_decompose(&ctx, &t, &t, &anti).unwrap();
            assert_eq!(rep.a_h_meet, k);
            assert_eq!(rep.terms.len(), 1);
            assert_eq!(rep.terms[0].res_coefficient, Rational::one());
        }
    }

    #[test]
    fn full_cyclic_pairs_meet_the_factorization_conditions() {
        for (m, n) in [(6, 12), (4, 8), (3, 18)] {
            let emb = crate::families::cyclic_embedding(m, n).unwrap();
            let ctx = RestrictionContext::build(emb, cyclic(n), cyclic(m)).unwrap();
            assert!(ctx.favorable() && ctx.factorization_conditions(), "C_{m} in C_{n}");
        }
    }

    #[test]
    fn lost_cover_index_breaks_the_factorization() {
        // 1 < C_2 < C_8 restricted to C_4: the cover C_2 < C_8 has index 4
        // but its trace C_2 < C_4 has index 2
        let full = cyclic(8);
        let lg = Arc::new(full.sublattice_closure(&[node(&full, 2)]).unwrap());
        let emb = crate::families::cyclic_embedding(4, 8).unwrap();
        let ctx = RestrictionContext::build(emb, lg.clone(), cyclic(4)).unwrap();
        assert!(ctx.favorable());
        assert!(ctx.preserves_joins() && !ctx.preserves_cover_indices());
        let (tg, th) = (SCTheory::new(lg.clone()), SCTheory::new(ctx.lattice_h().clone()));
        let anchor = node(&lg, 2);
        let anti = lg.distributive_analysis().antichain_of[anchor.0].clone();
        let err = restrict_decompose(&ctx, &tg, &th, &anti).unwrap_err();
        assert!(matches!(
            err,
            RestrictionError::FactorizationFails { indices_preserved: false, .. }
        ));
    }

    #[test]
    fn lost_join_breaks_the_factorization() {
        use crate::families::{basis_lattice, block_sums, linear_embedding, standard_basis};
        let v = Arc::new(make_group(&GroupSpec::vector_space(3, 3)).unwrap());
        let u = Arc::new(make_group(&GroupSpec::vector_space(3, 2)).unwrap());
        let images = block_sums(&v, &[vec![0, 1], vec![2]]).unwrap();
        let emb = linear_embedding(u.clone(), v.clone(), &images).unwrap();
        let lv = Arc::new(basis_lattice(v.clone(), &standard_basis(&v).unwrap()).unwrap());
        let lu = Arc::new(basis_lattice(u.clone(), &standard_basis(&u).unwrap()).unwrap());
        let ctx = RestrictionContext::build(emb, lv.clone(), lu.clone()).unwrap();
        assert!(ctx.favorable());
        assert!(!ctx.preserves_joins());
        let (tg, th) = (SCTheory::new(lv.clone()), SCTheory::new(lu));
        let anti = lv.distributive_analysis().antichain_of[lv.bottom().0].clone();
        let err = restrict_decompose(&ctx, &tg, &th, &anti).unwrap_err();
        assert!(matches!(err, RestrictionError::FactorizationFails { joins_preserved: false, .. }));
    }
}
