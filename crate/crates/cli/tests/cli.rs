use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_latsuper")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (code, v)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn table_shape(v: &Value) -> (usize, usize) {
    let chars = v["characters"].as_array().unwrap();
    (chars.len(), chars[0]["values"].as_array().unwrap().len())
}

#[test]
fn sct_table_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let c12 = fixture("c12.json");
    let (code, v) = run_json(&["sct", "--group", &c12]);
    assert_eq!(code, 0);
    assert_eq!(table_shape(&v), (6, 6));

    let f2_2 = fixture("f2_2.json");
    let (code, v) = run_json(&["sct", "--group", &f2_2, "--sublattice", &fixture("basis.json")]);
    assert_eq!(code, 0);
    assert_eq!(table_shape(&v), (4, 4));

    let subspaces = write(dir.path(), "subspaces.json", r#"{"kind":"subspaces"}"#);
    // the top superclass is empty and the bottom character vanishes
    let (code, v) = run_json(&["sct", "--group", &f2_2, "--sublattice", &subspaces]);
    assert_eq!(code, 0);
    assert_eq!(table_shape(&v), (4, 4));
    assert_eq!(v["lattice"]["nodes"].as_array().unwrap().len(), 5);
    assert_eq!(v["zero_nodes"].as_array().unwrap().len(), 1);

    let (code, v) = run_json(&["sct", "--group", &c12, "--sublattice", &fixture("empty_sublattice.json")]);
    assert_eq!(code, 0);
    assert_eq!(table_shape(&v), (2, 2));
}

#[test]
fn sct_csv_for_c6() {
    let (code, text) = run(&["sct", "--group", &fixture("c6.json"), "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "node,label,order,degree,C_1,C_2,C_3,C_6");
    assert_eq!(lines[1], "size,,,,1,1,2,2");
    assert_eq!(lines[2], "0,C_1,1,2,2,-2,-1,1");
    assert_eq!(lines.len(), 6);
}

#[test]
fn sct_artifact_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("c12.table.json");
    let table_s = table.to_string_lossy().into_owned();
    let gens = fixture("c12_gens.json");
    let (code, _) = run(&["sct", "--group", &fixture("c12.json"), "--sublattice", &gens, "--out", &table_s]);
    assert_eq!(code, 0);
    let first: Value = serde_json::from_str(&fs::read_to_string(&table).unwrap()).unwrap();

    let (code, again) = run_json(&["sct", "--group", &table_s]);
    assert_eq!(code, 0);
    assert_eq!(first, again);

    let (code, v) = run_json(&["verify", "--group", &table_s]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["passed"], true);

    let mut tampered = first.clone();
    tampered["characters"][0]["values"][1] = Value::from(7);
    let bad = write(dir.path(), "tampered.json", &tampered.to_string());
    let (code, v) = run_json(&["verify", "--group", &bad]);
    assert_eq!(code, 2);
    assert!(v["failed_checks"].as_array().unwrap().iter().any(|c| c == "artifact_values"));
}

#[test]
fn verify_c60_and_basis_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let c60 = write(dir.path(), "c60.json", r#"{"kind":"cyclic","n":60}"#);
    let (code, v) = run_json(&["verify", "--group", &c60]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["nodes"], 12);

    let v32 = write(dir.path(), "v32.json", r#"{"kind":"vector_space","q":2,"dim":5}"#);
    let (code, v) = run_json(&["verify", "--group", &v32, "--sublattice", &fixture("basis.json"), "--jobs", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["nodes"], 32);
    assert!(v["failed_checks"].as_array().unwrap().is_empty());
}

#[test]
fn restrict_c12_to_c6() {
    let args = |anchor: &'static str| {
        run_json(&[
            "restrict",
            "--group",
            &fixture("c12.json"),
            "--subgroup",
            &fixture("c6.json"),
            "--embedding",
            &fixture("c6_in_c12.json"),
            "--anchor",
            anchor,
        ])
    };
    // generator 3 spans the subgroup of order 4
    let (code, v) = args("3");
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["a_h_meet"]["label"], "C_2");
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["label"], "C_2");
    assert_eq!(terms[0]["res_coefficient"], "1");
    assert_eq!(v["factorization_holds"], true);
}

#[test]
fn restrict_along_identity() {
    let c12 = fixture("c12.json");
    let all: Vec<String> = (0..12).map(|i| i.to_string()).collect();
    let dir = tempfile::tempdir().unwrap();
    let members = write(dir.path(), "all.json", &format!("[{}]", all.join(",")));
    for anchor in ["node:0", "2", "[0,6]", "1"] {
        let (code, v) = run_json(&["restrict", "--group", &c12, "--subgroup", &members, "--anchor", anchor]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["a_h_meet"]["node"], v["anchor"]["node"]);
        assert_eq!(v["terms"].as_array().unwrap().len(), 1);
        assert_eq!(v["terms"][0]["res_coefficient"], "1");
    }
}

#[test]
fn restrict_block_sum_collapses() {
    let basis = fixture("basis.json");
    let (code, v) = run_json(&[
        "restrict",
        "--group",
        &fixture("f2_3.json"),
        "--sublattice",
        &basis,
        "--subgroup",
        &fixture("f2_2.json"),
        "--subgroup-sublattice",
        &basis,
        "--embedding",
        &fixture("block_sum_embedding.json"),
        "--anchor",
        "node:0",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["collapsed"], true);
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["terms"][0]["coefficient"], v["terms"][0]["projection"]);
}

#[test]
fn restrict_reports_a_failed_factorization() {
    let (code, v) = run_json(&[
        "restrict",
        "--group",
        &fixture("c8.json"),
        "--sublattice",
        &fixture("c8_chain.json"),
        "--subgroup",
        &fixture("c4_in_c8.json"),
        "--anchor",
        "4",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "factorization");
    assert_eq!(v["witness"]["indices_preserved"], false);
    assert_eq!(v["witness"]["indices_lost"][0][1], "C_8");
}

#[test]
fn restrict_input_errors() {
    let c12 = fixture("c12.json");
    let dir = tempfile::tempdir().unwrap();
    let not_closed = write(dir.path(), "bad.json", "[0,1]");
    let (code, v) = run_json(&["restrict", "--group", &c12, "--subgroup", &not_closed, "--anchor", "node:0"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "subgroup");

    let (code, v) = run_json(&["restrict", "--group", &c12, "--subgroup", &fixture("c6.json"), "--anchor", "node:0"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "embedding");

    let (code, v) = run_json(&["product", "--group", &c12, "--left", "node:99", "--right", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "node");
}

#[test]
fn product_on_c12() {
    let (code, v) = run_json(&["product", "--group", &fixture("c12.json"), "--left", "3", "--right", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["labels"]["meet"], "C_2");
    assert_eq!(v["hypotheses_hold"], true);
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let c12 = fixture("c12.json");
    let dot = dir.path().join("c12.dot");
    let (code, _) = run(&["export", "--group", &c12, "--out", &dot.to_string_lossy()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph \"C_12\""));
    assert_eq!(text.matches(" -- ").count(), 7);

    let (code, text) = run(&["export", "--group", &c12, "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().next().unwrap(), "node,label,order,covers");
    assert_eq!(text.lines().count(), 7);

    let json = dir.path().join("c12.lattice.json");
    let json_s = json.to_string_lossy().into_owned();
    let (code, _) = run(&["export", "--group", &c12, "--format", "json", "--out", &json_s]);
    assert_eq!(code, 0);
    let (code, v) = run_json(&["sct", "--group", &c12, "--sublattice", &json_s]);
    assert_eq!(code, 0);
    assert_eq!(table_shape(&v), (6, 6));
}

#[test]
fn lattice_analysis() {
    let (code, v) = run_json(&["lattice", "--group", &fixture("c12.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["distributive"], true);
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 6);
    let irreducible = nodes.iter().filter(|n| n["meet_irreducible"] == true).count();
    assert_eq!(irreducible, 3);
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    let (code, v) = run_json(&["sct", "--group", &garbage]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "json");

    let (code, v) = run_json(&["sct", "--group", &fixture("non_latin.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "group");

    let (code, v) = run_json(&["verify", "--group", &fixture("non_latin.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "group_table");
}
