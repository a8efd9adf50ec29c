use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use super::{
    build_superclasses, chi_bullet_moebius, chi_subgroup, inner_product, ClassFunction, Supercharacter,
    SuperclassPartition,
};
use crate::group::GroupTable;
use crate::lattice::{NodeId, NormalLattice};
use crate::oracle;
use crate::report::VerificationReport;
use crate::scalar::rational_string;
use crate::Rational;

/// The supercharacter theory of a normal lattice: its superclasses together
/// with `χ^{N•}` for every node.
#[derive(Debug, Clone)]
pub struct SCTheory {
    partition: SuperclassPartition,
    bullets: Vec<Supercharacter<Rational>>,
    nonzero: Vec<NodeId>,
    report: VerificationReport,
}

#[derive(Debug, Clone, Error)]
#[error("verification failed at check {check}")]
pub struct VerificationFailure {
    pub check: String,
    pub witness: serde_json::Value,
    pub report: VerificationReport,
}

impl SCTheory {
    /// Builds the partition and every `χ^{N•}` without running any checks.
    pub fn new(lattice: Arc<NormalLattice>) -> Self {
        let partition = build_superclasses(lattice);
        let bullets: Vec<Supercharacter<Rational>> = partition
            .lattice()
            .ids()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|id| chi_bullet_moebius(&partition, id).expect("node ids come from the lattice"))
            .collect();
        let nonzero = bullets.iter().filter(|c| !c.function.is_zero()).map(|c| c.node).collect();
        Self {
            partition,
            bullets,
            nonzero,
            report: VerificationReport::new(),
        }
    }

    pub fn lattice(&self) -> &Arc<NormalLattice> {
        self.partition.lattice()
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.partition.group()
    }

    pub fn partition(&self) -> &SuperclassPartition {
        &self.partition
    }

    /// `χ^{N•}`, which may be the zero function.
    pub fn bullet(&self, id: NodeId) -> &Supercharacter<Rational> {
        &self.bullets[id.0]
    }

    /// The nonzero supercharacters in node order.
    pub fn characters(&self) -> impl Iterator<Item = &Supercharacter<Rational>> {
        self.nonzero.iter().map(|id| &self.bullets[id.0])
    }

    pub fn character_nodes(&self) -> &[NodeId] {
        &self.nonzero
    }

    /// Nodes whose `χ^{N•}` vanishes.
    pub fn zero_nodes(&self) -> Vec<NodeId> {
        self.bullets
            .iter()
            .filter(|c| c.function.is_zero())
            .map(|c| c.node)
            .collect()
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    pub fn inner(&self, f: &ClassFunction<Rational>, h: &ClassFunction<Rational>) -> Rational {
        inner_product(&self.partition, f, h).expect("functions on this partition")
    }
}

/// Builds the theory and runs the axiom checks plus the independent oracles.
pub fn verify_sct(lattice: Arc<NormalLattice>) -> Result<SCTheory, VerificationFailure> {
    let mut theory = SCTheory::new(lattice);
    let mut report = axiom_checks(&theory);
    report.extend(oracle::schur_closure_check(&theory));
    if theory.group().is_abelian() {
        report.extend(oracle::verify_sc3_abelian(&theory));
    } else {
        report.pass("sc3_abelian", "not applicable: group is nonabelian");
    }
    let first = report
        .failures()
        .next()
        .map(|bad| (bad.check.clone(), bad.witness.clone().unwrap_or_default()));
    if let Some((check, witness)) = first {
        return Err(VerificationFailure { check, witness, report });
    }
    theory.report = report;
    Ok(theory)
}

fn axiom_checks(t: &SCTheory) -> VerificationReport {
    let mut r = VerificationReport::new();
    let p = t.partition();
    let lat = t.lattice();
    let group = t.group();
    let n = group.order();

    r.record(
        "sc1",
        if p.block(0).members == [group.identity()] {
            Ok("identity forms its own superclass".into())
        } else {
            Err(("identity block is not {1}".into(), json!({ "block": p.block(0).members })))
        },
    );

    let mut seen = vec![0usize; n];
    for b in p.blocks() {
        for &g in &b.members {
            seen[g] += 1;
        }
    }
    r.record(
        "partition",
        match seen.iter().position(|&c| c != 1) {
            None => Ok(format!("{} blocks cover {n} elements", p.len())),
            Some(g) => Err(("element not in exactly one block".into(), json!({ "element": g, "count": seen[g] }))),
        },
    );

    let split = group
        .conjugacy_classes()
        .into_iter()
        .find_map(|class| class.iter().find(|&&g| p.block_of(g) != p.block_of(class[0])).map(|&g| (class[0], g)));
    r.record(
        "conjugacy_unions",
        match split {
            None => Ok("every superclass is a union of conjugacy classes".into()),
            Some((a, b)) => Err(("conjugate elements in different blocks".into(), json!({ "elements": [a, b] }))),
        },
    );

    // element-wise evaluation, independent of the block bookkeeping
    let g_order = n as i64;
    let drift = t.character_nodes().par_iter().find_map_any(|&id| {
        let mu = lat.moebius_row(id);
        let chi = t.bullet(id);
        (0..n).find_map(|g| {
            let v: i64 = lat
                .up_set(id)
                .filter(|&o| lat.node(o).contains(g))
                .map(|o| mu[o.0] * (g_order / lat.order_of(o) as i64))
                .sum();
            (Rational::from_integer(v.into()) != *chi.function.at(p, g)).then_some((id, g, v))
        })
    });
    r.record(
        "block_constancy",
        match drift {
            None => Ok("element-wise values agree with block values".into()),
            Some((id, g, v)) => Err((
                "value at an element differs from its block value".into(),
                json!({ "node": id, "element": g, "value": v }),
            )),
        },
    );

    let chars = t.character_nodes().len();
    r.record(
        "sc2",
        if chars == p.len() {
            Ok(format!("{chars} superclasses and {chars} supercharacters"))
        } else {
            Err((
                "superclass and supercharacter counts differ".into(),
                json!({ "superclasses": p.len(), "supercharacters": chars }),
            ))
        },
    );

    let bad_value = t.characters().find_map(|c| {
        if !c.degree().is_positive() {
            return Some(json!({ "node": c.node, "degree": rational_string(c.degree()) }));
        }
        c.values()
            .iter()
            .position(|v| !v.is_integer())
            .map(|b| json!({ "node": c.node, "block": b, "value": rational_string(&c.values()[b]) }))
    });
    r.record(
        "integrality",
        match bad_value {
            None => Ok("all values are integers and all degrees positive".into()),
            Some(w) => Err(("non-integral value or nonpositive degree".into(), w)),
        },
    );

    let nodes = t.character_nodes();
    let pairs: Vec<(usize, usize)> = (0..nodes.len()).flat_map(|i| (i..nodes.len()).map(move |j| (i, j))).collect();
    let bad_pair = pairs.par_iter().find_map_any(|&(i, j)| {
        let (a, b) = (t.bullet(nodes[i]), t.bullet(nodes[j]));
        let ip = t.inner(&a.function, &b.function);
        let want = if i == j { a.degree().clone() } else { Rational::zero() };
        (ip != want).then(|| json!({ "left": nodes[i], "right": nodes[j], "inner_product": rational_string(&ip) }))
    });
    r.record(
        "orthogonality",
        match bad_pair {
            None => Ok(format!("{} pairs orthogonal, each norm equals the degree", pairs.len())),
            Some(w) => Err(("inner product off".into(), w)),
        },
    );

    let bad_node = lat.ids().find(|&id| {
        let sum = lat.up_set(id).fold(ClassFunction::zero(p.len()), |acc, o| {
            acc.add(&t.bullet(o).function).expect("same partition")
        });
        let perm = chi_subgroup::<Rational>(p, id).expect("lattice node");
        sum != perm.function
    });
    r.record(
        "partition_of_unity",
        match bad_node {
            None => Ok("sum over O ⊇ N of χ^{O•} equals χ^N for every node".into()),
            Some(id) => Err(("decomposition of χ^N fails".into(), json!({ "node": id }))),
        },
    );

    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, GroupSpec};
    use crate::group::Subgroup;
    use crate::lattice::normal_lattice;

    #[test]
    fn c12_sublattice_verifies() {
        let g = Arc::new(make_group(&GroupSpec::cyclic(12)).unwrap());
        let sub = |d: usize| g.subgroup_generated([(12 / d) % 12]);
        let l = NormalLattice::from_subgroups(g.clone(), [1, 2, 3, 6, 12].map(sub).to_vec()).unwrap();
        let t = verify_sct(Arc::new(l)).unwrap();
        assert_eq!(t.partition().len(), 5);
        assert_eq!(t.characters().count(), 5);
        assert!(t.report().passed());
        assert!(t.report().get("sc3_values").is_some());
    }

    #[test]
    fn trivial_theory_on_c2() {
        let g = Arc::new(make_group(&GroupSpec::cyclic(2)).unwrap());
        let l = NormalLattice::from_subgroups(g, vec![Subgroup::trivial(2), Subgroup::whole(2)]).unwrap();
        let t = verify_sct(Arc::new(l)).unwrap();
        let vals: Vec<Vec<Rational>> = t.characters().map(|c| c.values().to_vec()).collect();
        let r = |v: i64| Rational::from_integer(v.into());
        assert_eq!(vals, vec![vec![r(1), r(-1)], vec![r(1), r(1)]]);
    }

    #[test]
    fn diamond_keeps_only_nonzero_characters() {
        let l = Arc::new(normal_lattice(Arc::new(make_group(&GroupSpec::vector_space(2, 2)).unwrap())));
        let t = verify_sct(l).unwrap();
        assert_eq!(t.partition().len(), 4);
        assert_eq!(t.characters().count(), 4);
        assert_eq!(t.zero_nodes().len(), 1);
    }
}
