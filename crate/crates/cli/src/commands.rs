use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use latsuper_core::group::{make_group_with, GroupError, GroupSpec};
use latsuper_core::lattice::{NodeId, NormalLattice};
use latsuper_core::product::tensor_product;
use latsuper_core::restriction::{
    restrict_decompose, CoverWitness, EmbeddingJson, GroupEmbedding, RestrictionContext, RestrictionError,
};
use latsuper_core::scalar::rational_string;
use latsuper_core::suite::{run_suite, SuiteOptions};
use latsuper_core::{Rational, SCTheory, Subgroup};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{self, build_group, build_lattice, node_ref, read_group, read_json};
use crate::{Common, Format, LatticeArgs, ProductArgs, RestrictArgs, TableArgs, VerifyArgs};

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::input("io", format!("cannot write {}: {e}", path.display()))),
        None => {
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match write!(std::io::stdout().lock(), "{text}{nl}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::input("io", e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

/// `--format`, else the `--out` extension, else `fallback`.
fn format_of(common: &Common, fallback: Format) -> Format {
    common.format.unwrap_or_else(|| {
        match common.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("dot" | "gv") => Format::Dot,
            Some("json") => Format::Json,
            _ => fallback,
        }
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Integers as numbers, everything else as `"p/q"`.
fn exact(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.to_integer()) {
            return json!(i);
        }
    }
    json!(rational_string(r))
}

struct Loaded {
    spec: GroupSpec,
    lattice: Arc<NormalLattice>,
}

fn load(common: &Common) -> Result<Loaded, CliError> {
    let g = read_group(&common.group)?;
    let group = build_group(&g.spec, common.seed)?;
    let lattice = build_lattice(group, common.sublattice.as_deref(), g.lattice)?;
    Ok(Loaded {
        spec: g.spec,
        lattice: Arc::new(lattice),
    })
}

fn table_json(spec: &GroupSpec, theory: &SCTheory) -> Value {
    let lat = theory.lattice();
    let p = theory.partition();
    let superclasses: Vec<Value> = p
        .blocks()
        .iter()
        .map(|b| json!({ "node": b.node, "label": lat.label(b.node), "size": b.size(), "members": b.members }))
        .collect();
    let characters: Vec<Value> = theory
        .characters()
        .map(|c| {
            json!({
                "node": c.node,
                "label": lat.label(c.node),
                "order": lat.order_of(c.node),
                "degree": exact(c.degree()),
                "values": c.values().iter().map(exact).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "group": spec,
        "lattice": lat.to_json(),
        "superclasses": superclasses,
        "characters": characters,
        "zero_nodes": theory.zero_nodes(),
    })
}

fn table_csv(theory: &SCTheory) -> String {
    let lat = theory.lattice();
    let p = theory.partition();
    let mut out = String::from("node,label,order,degree");
    for b in p.blocks() {
        let _ = write!(out, ",{}", csv_field(&lat.label(b.node)));
    }
    out.push_str("\nsize,,,");
    for b in p.blocks() {
        let _ = write!(out, ",{}", b.size());
    }
    out.push('\n');
    for c in theory.characters() {
        let _ = write!(
            out,
            "{},{},{},{}",
            c.node,
            csv_field(&lat.label(c.node)),
            lat.order_of(c.node),
            rational_string(c.degree())
        );
        for v in c.values() {
            let _ = write!(out, ",{}", rational_string(v));
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn sct(args: &TableArgs) -> Result<(), CliError> {
    let c = &args.common;
    let loaded = load(c)?;
    let theory = SCTheory::new(loaded.lattice);
    let text = match format_of(c, Format::Json) {
        Format::Json => pretty(&table_json(&loaded.spec, &theory)),
        Format::Csv => table_csv(&theory),
        Format::Dot => return Err(CliError::input("format", "the character table has no DOT form")),
    };
    emit(c, &text)
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let c = &args.common;
    let g = read_group(&c.group)?;
    // a table that is not a group fails verification rather than input parsing
    let group = match make_group_with(&g.spec, &input::limits(c.seed)) {
        Ok(group) => Arc::new(group),
        Err(GroupError::Invariant { invariant, witness }) => {
            return Err(CliError::verification(
                "group_table",
                format!("group table violates the {} invariant", invariant.as_str()),
                json!({ "invariant": invariant, "elements": witness }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let lattice = Arc::new(build_lattice(group.clone(), c.sublattice.as_deref(), g.lattice)?);
    let opts = SuiteOptions {
        seed: c.seed,
        exhaustive_limit: args.exhaustive_limit,
        samples: args.samples,
    };
    let outcome = run_suite(lattice.clone(), &opts);
    let mut report = outcome.report;
    if let (Some(stored), Some(theory)) = (&g.characters, &outcome.theory) {
        let fresh = table_json(&g.spec, theory);
        if *stored != fresh["characters"] {
            report.fail(
                "artifact_values",
                "stored character values differ from the recomputed table",
                json!({ "stored": stored, "recomputed": fresh["characters"] }),
            );
        }
    }
    let passed = outcome.theory.is_some() && report.passed();
    let failed: Vec<&str> = report.failures().map(|f| f.check.as_str()).collect();
    let v = json!({
        "group": group.name(),
        "order": group.order(),
        "nodes": lattice.len(),
        "passed": passed,
        "failed_checks": failed,
        "checks": report.checks,
    });
    emit(c, &pretty(&v))?;
    if passed {
        Ok(())
    } else {
        let mut e = CliError::verification(
            "verification",
            format!("{} check(s) failed", failed.len()),
            json!({ "failed_checks": failed }),
        );
        e.quiet = c.out.is_none();
        Err(e)
    }
}

pub fn product(args: &ProductArgs) -> Result<(), CliError> {
    let c = &args.common;
    let loaded = load(c)?;
    let lat = loaded.lattice.clone();
    let (m, n) = (node_ref(&lat, &args.left)?, node_ref(&lat, &args.right)?);
    let theory = SCTheory::new(loaded.lattice);
    let rep = tensor_product(&theory, m, n)?;
    let mut v = serde_json::to_value(&rep).expect("report serializes");
    v["labels"] = json!({ "m": lat.label(m), "n": lat.label(n), "meet": lat.label(rep.meet) });
    v["hypotheses_hold"] = json!(rep.hypotheses_hold());
    for term in v["coefficients"].as_array_mut().into_iter().flatten() {
        let id = NodeId(term["node"].as_u64().unwrap_or(0) as usize);
        term["label"] = json!(lat.label(id));
    }
    emit(c, &pretty(&v))?;
    if rep.hypotheses_hold() && !rep.pointwise_identity {
        return Err(CliError::verification(
            "tensor_product",
            "hypotheses hold but the point-wise identity fails",
            json!({ "m": m, "n": n }),
        ));
    }
    Ok(())
}

pub fn restrict(args: &RestrictArgs) -> Result<(), CliError> {
    let c = &args.common;
    let loaded = load(c)?;
    let lg = loaded.lattice.clone();
    let g = lg.group().clone();
    let sub = read_json(&args.subgroup)?;
    let embedding = if sub.is_array() {
        if args.embedding.is_some() {
            return Err(CliError::input(
                "embedding",
                "--embedding only applies when --subgroup is a group spec",
            ));
        }
        let members: Vec<usize> = serde_json::from_value(sub)
            .map_err(|e| CliError::input("subgroup", format!("expected element indices: {e}")))?;
        if members.iter().any(|&x| x >= g.order()) {
            return Err(CliError::input("subgroup", "element index out of range"));
        }
        let s = Subgroup::from_elements(g.order(), members);
        if let Err((a, b)) = s.check_closed(&g) {
            return Err(CliError::input("subgroup", "member list is not a subgroup").with_witness(json!([a, b])));
        }
        latsuper_core::families::subgroup_embedding(g.clone(), &s)?
    } else {
        let spec = GroupSpec::deserialize(sub).map_err(|e| CliError::input("group_spec", e.to_string()))?;
        let h = build_group(&spec, c.seed)?;
        let path = args
            .embedding
            .as_deref()
            .ok_or_else(|| CliError::input("embedding", "--embedding is required with a subgroup spec"))?;
        let ej = EmbeddingJson::deserialize(read_json(path)?)
            .map_err(|e| CliError::input("embedding", e.to_string()))?;
        GroupEmbedding::new(h, g.clone(), ej.map)?
    };
    let lh = Arc::new(build_lattice(
        embedding.source().clone(),
        args.subgroup_sublattice.as_deref(),
        None,
    )?);
    let anchor = node_ref(&lg, &args.anchor)?;
    let ctx = RestrictionContext::build(embedding, lg.clone(), lh.clone())?;
    if !ctx.favorable() {
        let r2: Vec<Value> = ctx
            .r2_witnesses
            .iter()
            .map(|w| json!({ "lower": lg.label(w.lower), "upper": lg.label(w.upper), "nodes": [w.lower, w.upper] }))
            .collect();
        let r1: Vec<Value> = ctx
            .r1_missing
            .iter()
            .map(|&n| json!({ "node": n, "label": lg.label(n), "members": lg.node(n).to_vec() }))
            .collect();
        return Err(
            CliError::input("not_favorable", "the lattices are not restriction favorable")
                .with_witness(json!({ "r1": r1, "r2": r2 })),
        );
    }
    let antichain = lg.distributive_analysis().antichain_of[anchor.0].clone();
    let tg = SCTheory::new(lg.clone());
    let th = SCTheory::new(lh.clone());
    let pair_labels = |ws: &[CoverWitness]| -> Vec<Value> {
        ws.iter().map(|w| json!([lg.label(w.lower), lg.label(w.upper)])).collect()
    };
    let rep = restrict_decompose(&ctx, &tg, &th, &antichain).map_err(|e| {
        let failed = matches!(e, RestrictionError::FactorizationFails { .. });
        let mut err = CliError::from(e);
        if failed {
            if let Some(w) = err.witness.as_mut() {
                w["joins_lost"] = json!(pair_labels(&ctx.join_witnesses));
                w["indices_lost"] = json!(pair_labels(&ctx.index_witnesses));
            }
        }
        err
    })?;
    let terms: Vec<Value> = rep
        .terms
        .iter()
        .map(|t| {
            json!({
                "node": t.node,
                "label": lh.label(t.node),
                "coefficient": rational_string(&t.coefficient),
                "res_coefficient": rational_string(&t.res_coefficient),
                "projection": rational_string(&t.projection),
                "degree_sum_side": rational_string(&t.degree_sum_side),
            })
        })
        .collect();
    let v = json!({
        "favorable": true,
        "anchor": { "node": rep.anchor, "label": lg.label(rep.anchor) },
        "antichain": rep.antichain.iter().map(|&n| lg.label(n)).collect::<Vec<_>>(),
        "a_h": rep.a_h.iter().map(|&n| lh.label(n)).collect::<Vec<_>>(),
        "a_h_empty": rep.a_h_empty,
        "a_h_meet": { "node": rep.a_h_meet, "label": lh.label(rep.a_h_meet) },
        "cover_join_cap": { "node": rep.cover_join_cap, "label": lh.label(rep.cover_join_cap) },
        "range_bottom": { "node": rep.range_bottom, "label": lh.label(rep.range_bottom) },
        "collapsed": rep.collapsed,
        "constant_on_superclasses": rep.constant_on_superclasses,
        "factorization_holds": rep.factorization_holds,
        "joins_preserved": ctx.preserves_joins(),
        "cover_indices_preserved": ctx.preserves_cover_indices(),
        "terms": terms,
        "normalized_restriction": rep.normalized_restriction.iter().map(rational_string).collect::<Vec<_>>(),
    });
    emit(c, &pretty(&v))
}

fn lattice_json(lat: &NormalLattice) -> Value {
    let analysis = lat.distributive_analysis();
    let nodes: Vec<Value> = lat
        .ids()
        .map(|id| {
            json!({
                "node": id,
                "label": lat.label(id),
                "order": lat.order_of(id),
                "members": lat.node(id).to_vec(),
                "covers": lat.covers(id),
                "meet_irreducible": analysis.is_meet_irreducible(id),
                "product_irreducible": analysis.is_product_irreducible(id),
            })
        })
        .collect();
    json!({
        "group": lat.group().name(),
        "order": lat.group().order(),
        "distributive": analysis.is_distributive,
        "nodes": nodes,
        "hasse": lat.hasse_edges().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
    })
}

fn node_csv(lat: &NormalLattice) -> String {
    let mut out = String::from("node,label,order,covers\n");
    for id in lat.ids() {
        let covers: Vec<String> = lat.covers(id).iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            id,
            csv_field(&lat.label(id)),
            lat.order_of(id),
            csv_field(&covers.join(" "))
        );
    }
    out
}

pub fn lattice(args: &LatticeArgs) -> Result<(), CliError> {
    let c = &args.common;
    let loaded = load(c)?;
    let lat = &loaded.lattice;
    let text = match format_of(c, Format::Json) {
        Format::Json => pretty(&lattice_json(lat)),
        Format::Dot => lat.to_dot(),
        Format::Csv => node_csv(lat),
    };
    emit(c, &text)
}

/// Re-readable artifacts: JSON feeds back in as `--sublattice`.
pub fn export(args: &LatticeArgs) -> Result<(), CliError> {
    let c = &args.common;
    let loaded = load(c)?;
    let lat = &loaded.lattice;
    let text = match format_of(c, Format::Json) {
        Format::Json => pretty(&serde_json::to_value(lat.to_json()).expect("lattice serializes")),
        Format::Dot => lat.to_dot(),
        Format::Csv => node_csv(lat),
    };
    emit(c, &text)
}
