//! Brute-force verifiers. None of these share code with the formula paths:
//! they work from the group table, the dual group, and raw convolution
//! counts.

mod cyclotomic;
mod dual;

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::group::{GroupTable, Subgroup};
use crate::report::VerificationReport;
use crate::sct::SCTheory;

pub use cyclotomic::{cyclotomic_polynomial, poly_rem, CyclotomicElement};
pub use dual::{dual_characters, DualCharacter};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("the oracle needs an abelian group")]
    NotAbelian,
    #[error("group of order {order} exceeds the oracle cap {cap}")]
    TooLarge { order: usize, cap: usize },
}

/// Largest group the subgroup scan accepts.
pub const BRUTE_FORCE_CAP: usize = 256;

/// Checks the dual side of the theory directly: characters of an abelian
/// group grouped by the largest lattice node in their kernel, summed, and
/// compared with `χ^{N•}` element by element.
pub fn verify_sc3_abelian(theory: &SCTheory) -> VerificationReport {
    let mut r = VerificationReport::new();
    let group = theory.group();
    let chars = match dual_characters(group) {
        Ok(c) => c,
        Err(e) => {
            r.fail("sc3_dual", e.to_string(), json!(null));
            return r;
        }
    };
    let n = group.order();
    r.record(
        "sc3_dual_size",
        if chars.len() == n {
            Ok(format!("{n} linear characters"))
        } else {
            Err(("dual group has the wrong size".into(), json!({ "order": n, "characters": chars.len() })))
        },
    );

    let lat = theory.lattice();
    // ψ ∈ X^{N•} iff N ⊆ ker ψ and no cover of N is
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); lat.len()];
    let mut misplaced = None;
    for (i, psi) in chars.iter().enumerate() {
        let homes: Vec<usize> = lat
            .ids()
            .filter(|&id| {
                lat.node(id).is_subset(&psi.kernel) && !lat.covers(id).iter().any(|&o| lat.node(o).is_subset(&psi.kernel))
            })
            .map(|id| id.0)
            .collect();
        if homes.len() != 1 {
            misplaced.get_or_insert(json!({ "character": i, "blocks": homes }));
        }
        for h in homes {
            blocks[h].push(i);
        }
    }
    let nonempty: Vec<usize> = (0..lat.len()).filter(|&i| !blocks[i].is_empty()).collect();
    let expected: Vec<usize> = theory.character_nodes().iter().map(|id| id.0).collect();
    r.record(
        "sc3_x_partition",
        match misplaced {
            Some(w) => Err(("character not in exactly one block".into(), w)),
            None if nonempty != expected => Err((
                "nonempty character blocks differ from nonzero supercharacters".into(),
                json!({ "blocks": nonempty, "supercharacters": expected }),
            )),
            None => Ok(format!("{} blocks partition the dual", nonempty.len())),
        },
    );

    let e = group.exponent();
    let phi = cyclotomic_polynomial(e);
    let partition = theory.partition();
    let outcome = nonempty.par_iter().find_map_any(|&node| {
        let chi = theory.bullet(crate::lattice::NodeId(node));
        let sums: Vec<CyclotomicElement> = (0..n)
            .map(|g| {
                let mut s = CyclotomicElement::zero(e);
                for &i in &blocks[node] {
                    s.add_power(chars[i].k(g));
                }
                s
            })
            .collect();
        for g in 0..n {
            let rep = partition.block(partition.block_of(g)).representative();
            if !sums[g].equals(&sums[rep], &phi) {
                return Some(("sc3_constancy", json!({ "node": node, "element": g, "representative": rep })));
            }
            let want = chi.function.at(partition, g);
            let want: i64 = match want.is_integer().then(|| want.to_integer().try_into()) {
                Some(Ok(v)) => v,
                _ => return Some(("sc3_values", json!({ "node": node, "element": g }))),
            };
            if !sums[g].equals_integer(want, &phi) {
                return Some(("sc3_values", json!({ "node": node, "element": g, "expected": want })));
            }
            let (re, im) = sums[g].to_complex();
            let tol = 1e-9 * (want.abs() as f64).max(1.0);
            if (re - want as f64).abs() > tol || im.abs() > tol {
                return Some(("sc3_float", json!({ "node": node, "element": g, "re": re, "im": im })));
            }
        }
        None
    });
    match outcome {
        None => {
            r.pass("sc3_constancy", "character sums are constant on superclasses");
            r.pass("sc3_values", "character sums equal the supercharacter values modulo Φ_e");
            r.pass("sc3_float", "floating evaluation agrees to 1e-9");
        }
        Some((check, w)) => r.fail(check, "character sum mismatch", w),
    }
    r
}

/// Superclass sums multiply with constant multiplicities on each superclass,
/// and each superclass is closed under inverses.
pub fn schur_closure_check(theory: &SCTheory) -> VerificationReport {
    let mut r = VerificationReport::new();
    let p = theory.partition();
    let group = theory.group();
    let inv_bad = p
        .blocks()
        .iter()
        .enumerate()
        .find_map(|(i, b)| b.members.iter().find(|&&g| p.block_of(group.inv(g)) != i).map(|&g| (i, g)));
    r.record(
        "schur_inverse_closed",
        match inv_bad {
            None => Ok("every superclass is closed under inverses".into()),
            Some((i, g)) => Err(("inverse leaves the superclass".into(), json!({ "block": i, "element": g }))),
        },
    );
    let k = p.len();
    let bad = (0..k).into_par_iter().find_map_any(|i| {
        (0..k).find_map(|j| structure_constants(theory, i, j).err().map(|w| (i, j, w)))
    });
    r.record(
        "schur_closure",
        match bad {
            None => Ok(format!("{} products of superclass sums are constant on superclasses", k * k)),
            Some((i, j, (block, g, h))) => Err((
                "multiplicity varies inside a superclass".into(),
                json!({ "left": i, "right": j, "block": block, "elements": [g, h] }),
            )),
        },
    );
    r
}

/// Multiplicity of each superclass in `K_i K_j`, or a witness `(block, g, h)`
/// of two elements of one block with different multiplicities.
pub fn structure_constants(theory: &SCTheory, i: usize, j: usize) -> Result<Vec<u64>, (usize, usize, usize)> {
    let p = theory.partition();
    let group = theory.group();
    let mut counts = vec![0u64; group.order()];
    for &a in &p.block(i).members {
        for &b in &p.block(j).members {
            counts[group.mul(a, b)] += 1;
        }
    }
    p.blocks()
        .iter()
        .enumerate()
        .map(|(c, block)| {
            let rep = block.representative();
            match block.members.iter().find(|&&g| counts[g] != counts[rep]) {
                Some(&g) => Err((c, rep, g)),
                None => Ok(counts[rep]),
            }
        })
        .collect()
}

/// Every normal subgroup, found by closing cyclic subgroups under joins and
/// keeping the normal ones.
pub fn brute_force_normal_subgroups(group: &GroupTable) -> Result<Vec<Subgroup>, OracleError> {
    let n = group.order();
    if n > BRUTE_FORCE_CAP {
        return Err(OracleError::TooLarge {
            order: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    for g in 0..n {
        let s = group.subgroup_generated([g]);
        if seen.insert(s.bits().clone()) {
            cyclic.push(s);
        }
    }
    let mut all = cyclic.clone();
    let mut frontier = cyclic.clone();
    while let Some(s) = frontier.pop() {
        for c in &cyclic {
            if c.is_subset(&s) {
                continue;
            }
            let t = group.subgroup_generated(s.elements().chain(c.elements()));
            if seen.insert(t.bits().clone()) {
                frontier.push(t.clone());
                all.push(t);
            }
        }
    }
    let mut normal: Vec<Subgroup> = all.into_iter().filter(|s| group.is_normal(s)).collect();
    normal.sort_by_key(|s| (s.order(), s.to_vec()));
    Ok(normal)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::families;
    use crate::group::{make_group, GroupSpec};
    use crate::lattice::normal_lattice;

    fn theory(spec: GroupSpec) -> SCTheory {
        SCTheory::new(Arc::new(normal_lattice(Arc::new(make_group(&spec).unwrap()))))
    }

    #[test]
    fn c6_structure_constants() {
        let t = theory(GroupSpec::cyclic(6));
        // blocks {1}, {x^3}, {x^2,x^4}, {x,x^5}: (x + x^5)^2 = 2 + x^2 + x^4
        assert_eq!(structure_constants(&t, 3, 3).unwrap(), vec![2, 0, 1, 0]);
        assert_eq!(structure_constants(&t, 0, 2).unwrap(), vec![0, 0, 1, 0]);
        assert!(schur_closure_check(&t).passed());
    }

    #[test]
    fn sc3_on_abelian_examples() {
        for spec in [GroupSpec::cyclic(6), GroupSpec::cyclic(12), GroupSpec::vector_space(2, 2), GroupSpec::vector_space(3, 2)] {
            let t = theory(spec);
            let r = verify_sc3_abelian(&t);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn brute_force_counts() {
        let count = |spec: GroupSpec| brute_force_normal_subgroups(&make_group(&spec).unwrap()).unwrap().len();
        assert_eq!(count(GroupSpec::cyclic(12)), 6);
        assert_eq!(count(families::symmetric3()), 3);
        assert_eq!(count(GroupSpec::vector_space(2, 2)), 5);
        assert_eq!(count(families::dihedral8()), 6);
        assert_eq!(count(families::quaternion8()), 6);
    }

    #[test]
    fn brute_force_refuses_large_groups() {
        let g = make_group(&GroupSpec::cyclic(300)).unwrap();
        assert!(matches!(brute_force_normal_subgroups(&g), Err(OracleError::TooLarge { .. })));
    }
}
