//! The full check battery behind `latsuper verify`: lattice structure, the
//! supercharacter axioms and oracles, and spot checks of the character,
//! degree-sum and product formulas.

use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::lattice::{normal_lattice, NodeId, NormalLattice};
use crate::oracle::{brute_force_normal_subgroups, BRUTE_FORCE_CAP};
use crate::product::tensor_product;
use crate::report::VerificationReport;
use crate::sct::{chi_bullet_moebius, chi_bullet_multiplicative, degree_sum, verify_sct, SCTheory, SctError};
use crate::Rational;

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Seed for sampling when a check is too large to run exhaustively.
    pub seed: u64,
    /// Above this many cases a check samples `samples` of them.
    pub exhaustive_limit: usize,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            exhaustive_limit: 50_000,
            samples: 2_000,
        }
    }
}

pub struct SuiteOutcome {
    /// `None` when the axiom checks failed.
    pub theory: Option<SCTheory>,
    pub report: VerificationReport,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.theory.is_some() && self.report.passed()
    }
}

type Check = fn(&NormalLattice, &SuiteOptions) -> VerificationReport;
type TheoryCheck = fn(&SCTheory, &SuiteOptions) -> VerificationReport;

/// Runs every applicable check. Independent checks run on the rayon pool.
pub fn run_suite(lattice: Arc<NormalLattice>, opts: &SuiteOptions) -> SuiteOutcome {
    let lattice_checks: [Check; 4] = [modularity_and_moebius, enumeration_cross_check, cover_meet, non_emptiness];
    let (structural, theory) = rayon::join(
        || {
            lattice_checks
                .par_iter()
                .map(|check| check(&lattice, opts))
                .collect::<Vec<_>>()
        },
        || verify_sct(lattice.clone()),
    );
    let mut report = VerificationReport::new();
    structural.into_iter().for_each(|r| report.extend(r));
    let theory = match theory {
        Ok(t) => t,
        Err(failure) => {
            report.extend(failure.report);
            return SuiteOutcome { theory: None, report };
        }
    };
    report.extend(theory.report().clone());
    let theory_checks: [TheoryCheck; 3] = [dual_path, degree_sums, products];
    let extra: Vec<VerificationReport> = theory_checks.par_iter().map(|check| check(&theory, opts)).collect();
    extra.into_iter().for_each(|r| report.extend(r));
    SuiteOutcome {
        theory: Some(theory),
        report,
    }
}

fn cases<T: Clone>(all: Vec<T>, opts: &SuiteOptions) -> (Vec<T>, bool) {
    if all.len() <= opts.exhaustive_limit {
        return (all, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let picked = all.choose_multiple(&mut rng, opts.samples).cloned().collect();
    (picked, false)
}

fn scope(n: usize, exhaustive: bool) -> String {
    if exhaustive {
        format!("{n} cases, exhaustive")
    } else {
        format!("{n} sampled cases")
    }
}

fn modularity_and_moebius(lat: &NormalLattice, _: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.record(
        "modularity",
        match lat.modularity_violation() {
            None => Ok("(M ∨ L) ∧ N = M ∨ (L ∧ N) for all M ⊆ N".into()),
            Some(t) => Err(("modular law fails".into(), json!({ "m": t[0], "n": t[1], "l": t[2] }))),
        },
    );
    let bad = lat.ids().find_map(|a| {
        let mu = lat.moebius_row(a);
        lat.up_set(a)
            .filter(|&b| b != a)
            .find(|&b| lat.up_set(a).filter(|&p| lat.leq(p, b)).map(|p| mu[p.0]).sum::<i64>() != 0)
            .map(|b| (a, b))
    });
    r.record(
        "moebius_identity",
        match bad {
            None => Ok("Σ_{N ≤ P ≤ O} μ(N, P) = 0 for all N < O".into()),
            Some((a, b)) => Err(("interval sum is nonzero".into(), json!({ "lower": a, "upper": b }))),
        },
    );
    r
}

fn enumeration_cross_check(lat: &NormalLattice, _: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    let group = lat.group();
    let brute = match brute_force_normal_subgroups(group) {
        Ok(b) => b,
        Err(_) => {
            r.pass(
                "lattice_enumeration",
                format!("skipped: order {} above the oracle cap {BRUTE_FORCE_CAP}", group.order()),
            );
            return r;
        }
    };
    let full = normal_lattice(group.clone());
    let mut got: Vec<Vec<usize>> = full.nodes().iter().map(|s| s.to_vec()).collect();
    let mut want: Vec<Vec<usize>> = brute.iter().map(|s| s.to_vec()).collect();
    got.sort();
    want.sort();
    let stray = lat.nodes().iter().map(|s| s.to_vec()).find(|s| want.binary_search(s).is_err());
    r.record(
        "lattice_enumeration",
        if got != want {
            Err((
                "normal subgroup enumeration disagrees with the brute-force scan".into(),
                json!({ "enumerated": got.len(), "brute_force": want.len() }),
            ))
        } else if let Some(s) = stray {
            Err(("lattice node is not a normal subgroup".into(), json!({ "node": s })))
        } else {
            Ok(format!("{} normal subgroups match the brute-force scan", want.len()))
        },
    );
    r
}

fn cover_meet(lat: &NormalLattice, _: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    let bad = lat.ids().find_map(|m| {
        lat.ids()
            .find(|&n| {
                let lhs = lat.meet(lat.cover_join(m), lat.cover_join(n));
                lhs != lat.cover_join(lat.meet(m, n))
            })
            .map(|n| (m, n))
    });
    r.record(
        "cover_meet",
        match bad {
            None => Ok(format!("{} node pairs", lat.len() * lat.len())),
            Some((m, n)) => Err(("cover joins do not commute with meets".into(), json!({ "m": m, "n": n }))),
        },
    );
    r
}

fn non_emptiness(lat: &NormalLattice, _: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    if !lat.is_distributive() {
        r.pass("distributive_non_emptiness", "not applicable: lattice is not distributive");
        return r;
    }
    let bad = lat.ids().find(|&n| {
        let below: Vec<NodeId> = lat.lower_covers(n).to_vec();
        let fresh = lat
            .node(n)
            .elements()
            .any(|g| below.iter().all(|&l| !lat.node(l).contains(g)));
        let gp = lat
            .is_general_position(lat.covers(n), n)
            .map(|g| g.general_position)
            .unwrap_or(false);
        !fresh || !gp
    });
    r.record(
        "distributive_non_emptiness",
        match bad {
            None => Ok("every N∘ is nonempty and every C(N) is in general position".into()),
            Some(n) => Err(("empty superclass or covers out of general position".into(), json!({ "node": n }))),
        },
    );
    r
}

fn dual_path(t: &SCTheory, _: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    let p = t.partition();
    let mut compared = 0;
    for n in t.lattice().ids() {
        let mult = match chi_bullet_multiplicative::<Rational>(p, n) {
            Ok(c) => c,
            Err(SctError::FormulaInapplicable { .. }) => continue,
            Err(e) => {
                r.fail("dual_path", e.to_string(), json!({ "node": n }));
                return r;
            }
        };
        let mob = chi_bullet_moebius::<Rational>(p, n).expect("node of this lattice");
        if mult.function != mob.function {
            let block = (0..p.len())
                .find(|&b| mult.function.value(b) != mob.function.value(b))
                .unwrap_or(0);
            r.fail(
                "dual_path",
                "Möbius and product formulas disagree",
                json!({ "node": n, "block": block }),
            );
            return r;
        }
        compared += 1;
    }
    r.pass("dual_path", format!("{compared} nodes agree exactly"));
    r
}

fn degree_sums(t: &SCTheory, opts: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    let lat = t.lattice();
    let triples: Vec<[NodeId; 3]> = lat
        .ids()
        .flat_map(|k| lat.ids().flat_map(move |l| lat.ids().map(move |m| [k, l, m])))
        .collect();
    let (triples, exhaustive) = cases(triples, opts);
    let bad = triples.par_iter().find_any(|&&[k, l, m]| match degree_sum(lat, k, l, m) {
        Ok(s) => s.closed_form.is_some_and(|c| c != s.brute_force),
        Err(_) => true,
    });
    r.record(
        "degree_sum",
        match bad {
            None => Ok(scope(triples.len(), exhaustive)),
            Some(&[k, l, m]) => Err((
                "closed form disagrees with the direct sum".into(),
                json!({ "k": k, "l": l, "m": m }),
            )),
        },
    );
    r
}

fn products(t: &SCTheory, opts: &SuiteOptions) -> VerificationReport {
    let mut r = VerificationReport::new();
    let lat = t.lattice();
    let pairs: Vec<(NodeId, NodeId)> = lat
        .ids()
        .flat_map(|m| lat.ids().filter(move |&n| m <= n).map(move |n| (m, n)))
        .collect();
    let (pairs, exhaustive) = cases(pairs, opts);
    let results: Vec<Result<(bool, bool), String>> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let rep = tensor_product(t, m, n).map_err(|e| e.to_string())?;
            let identity_ok = !rep.hypotheses_hold() || rep.pointwise_identity;
            let support_ok = rep.coefficients.iter().all(|c| c.coefficient > Rational::zero());
            Ok((identity_ok, support_ok))
        })
        .collect();
    let mut identity_bad = None;
    let mut support_bad = None;
    for (&(m, n), res) in pairs.iter().zip(&results) {
        match res {
            Err(e) => {
                r.fail("tensor_product", e.clone(), json!({ "m": m, "n": n }));
                return r;
            }
            Ok((id_ok, sup_ok)) => {
                if !id_ok && identity_bad.is_none() {
                    identity_bad = Some((m, n));
                }
                if !sup_ok && support_bad.is_none() {
                    support_bad = Some((m, n));
                }
            }
        }
    }
    r.record(
        "tensor_product",
        match identity_bad {
            None => Ok(scope(pairs.len(), exhaustive)),
            Some((m, n)) => Err((
                "hypotheses hold but the point-wise identity fails".into(),
                json!({ "m": m, "n": n }),
            )),
        },
    );
    r.record(
        "product_support",
        match support_bad {
            None => Ok("every product expands with positive coefficients".into()),
            Some((m, n)) => Err(("product has a negative coefficient".into(), json!({ "m": m, "n": n }))),
        },
    );
    r
}
