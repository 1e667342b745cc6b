//! End-to-end tests of the command-line surface: formats, verdicts, exit
//! codes and output determinism.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sclat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).expect("json output")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sclat-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const CH2: &str = r#"{"format":"sclat/1","d":1,"poset":{"elements":["x0","x1"],"covers":[["x0","x1"]]},"dimlabel":{"x0":0,"x1":1}}"#;
const PT1: &str = r#"{"d":1,"poset":{"elements":["x0"],"covers":[]},"dimlabel":{"x0":1}}"#;

#[test]
fn validate_and_canonical_emission_round_trip() {
    let dir = tempdir("validate");
    let file = dir.join("ch2.json");
    write(&file, CH2);
    let out = run(&["validate", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("valid lattice file"));

    let emitted = run(&["validate", file.to_str().unwrap(), "--emit"]);
    assert!(emitted.status.success());
    let doc: Value = json_of(&emitted);
    let again = dir.join("canonical.json");
    write(&again, &doc.to_string());
    let emitted2 = run(&["validate", again.to_str().unwrap(), "--emit"]);
    assert_eq!(stdout_of(&emitted), stdout_of(&emitted2));

    // Garbage input exits 1.
    let bad = dir.join("bad.json");
    write(&bad, "{\"d\": 1}");
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn axioms_reports_classification() {
    let dir = tempdir("axioms");
    let file = dir.join("ch2.json");
    write(&file, CH2);
    let out = run(&["axioms", file.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["scaled"], Value::Bool(true));
    assert!(doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["pass"] == Value::Bool(true)));

    let pt = dir.join("pt1.json");
    write(&pt, PT1);
    let out = run(&["axioms", pt.to_str().unwrap()]);
    assert!(stdout_of(&out).contains("subscaled only"));
}

#[test]
fn sat_verdicts_and_exit_codes() {
    // Bound-capped negative verdict exits 2.
    let out = run(&["sat", "--d", "1", "--formula", r"C0(x) /\ C1(x) != 0", "--max-irr", "4", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json_of(&out);
    assert_eq!(doc["verdict"], "UNSAT");
    assert_eq!(doc["exhaustive"], Value::Bool(false));

    // A witness decides, exit 0.
    let out = run(&["sat", "--d", "1", "--formula", r"x != 0 /\ C1(x) = x", "--max-irr", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["verdict"], "SAT");
    assert_eq!(doc["witness"]["assignment"]["x"].as_array().unwrap().len(), 1);

    // Full search below the bound, exit 0.
    let out = run(&["sat", "--d", "0", "--formula", r"x != 0 /\ C1(x) = x", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["verdict"], "UNSAT");
    assert_eq!(doc["exhaustive"], Value::Bool(true));
}

#[test]
fn decide_with_prime_file() {
    let dir = tempdir("decide");
    let prime = dir.join("prime.json");
    write(&prime, PT1);
    let out = run(&[
        "decide", "--theory", "Td", "--d", "1",
        "--formula", r"E x . x != 0 /\ x != 1 /\ C0(x) = x",
        "--prime", prime.to_str().unwrap(),
        "--max-irr", "3", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["verdict"], "TRUE");

    // Non-prime input is an error (exit 1).
    let ch2 = dir.join("ch2.json");
    write(&ch2, CH2);
    let out = run(&[
        "decide", "--d", "1", "--formula", "E x . x = x",
        "--prime", ch2.to_str().unwrap(), "--max-irr", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn represent_writes_files_and_embedding_validates() {
    let dir = tempdir("represent");
    let file = dir.join("ch2.json");
    write(&file, CH2);
    let rep = dir.join("rep");
    let out = run(&["represent", file.to_str().unwrap(), "-o", rep.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(rep.join("X.sls.json").exists());
    assert!(rep.join("phi.map.json").exists());
    let check = run(&["validate-embedding", rep.to_str().unwrap()]);
    assert!(check.status.success());
    assert!(stdout_of(&check).contains("embedding verified"));

    // The emitted carrier re-ingests as the same linear set.
    let x = run(&["validate", rep.join("X.sls.json").to_str().unwrap(), "--emit"]);
    let x_doc: Value = json_of(&x);
    assert_eq!(x_doc["ambient"], 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempdir("determinism");
    let file = dir.join("ch2.json");
    write(&file, CH2);
    let runs: Vec<String> = (0..2)
        .map(|_| {
            stdout_of(&run(&[
                "represent", file.to_str().unwrap(), "--json",
            ]))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let seeded: Vec<String> = (0..2)
        .map(|_| stdout_of(&run(&["axioms", file.to_str().unwrap(), "--sample", "64", "--seed", "9", "--json"])))
        .collect();
    assert_eq!(seeded[0], seeded[1]);
}

#[test]
fn signatures_extend_tower_flow() {
    let dir = tempdir("extension");
    let file = dir.join("ch2.json");
    write(&file, CH2);
    let sigs = json_of(&run(&["signatures", file.to_str().unwrap(), "--json"]));
    assert_eq!(sigs["signatures"].as_array().unwrap().len(), 4);

    let out = run(&[
        "extend", file.to_str().unwrap(),
        "--signature", r#"{"g":"x1","H":[["x0"],[]],"q":1}"#,
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["base"]["poset"]["elements"].as_array().unwrap().len(), 3);

    let tower = json_of(&run(&["tower", file.to_str().unwrap(), "--json"]));
    assert_eq!(tower["steps"].as_array().unwrap().len(), 1);
    assert_eq!(tower["steps"][0]["signature"]["q"], 0);
}

#[test]
fn split_eval_dim_enumerate_iso_theory_eq() {
    let dir = tempdir("misc");
    let file = dir.join("ch2.json");
    write(&file, CH2);

    let split = json_of(&run(&[
        "split", file.to_str().unwrap(), "--a", "1", "--b1", "x0", "--b2", "0", "--json",
    ]));
    assert_eq!(split["base"]["poset"]["elements"].as_array().unwrap().len(), 3);

    let out = run(&[
        "eval", file.to_str().unwrap(),
        "--formula", r"C0(x) /\ C1(x) = 0", "--let", "x=1", "--json",
    ]);
    assert_eq!(json_of(&out)["value"], Value::Bool(true));

    let out = run(&["dim", file.to_str().unwrap(), "--json"]);
    let doc = json_of(&out);
    assert_eq!(doc["dim"], 1);
    assert_eq!(doc["scdim"], 1);

    let count = json_of(&run(&["enumerate", "--d", "0", "--max-irr", "2", "--count", "--json"]));
    assert_eq!(count["count"], 3);

    // Isomorphism across a renaming.
    let renamed = dir.join("renamed.json");
    write(
        &renamed,
        r#"{"d":1,"poset":{"elements":["b","a"],"covers":[["a","b"]]},"dimlabel":{"a":0,"b":1}}"#,
    );
    let out = run(&["iso", file.to_str().unwrap(), renamed.to_str().unwrap(), "--json"]);
    assert_eq!(json_of(&out)["isomorphic"], Value::Bool(true));

    // Pure dimensions classify completions.
    let p1 = dir.join("p1.json");
    let p2 = dir.join("p2.json");
    write(&p1, r#"{"d":3,"poset":{"elements":["a"],"covers":[]},"dimlabel":{"a":1}}"#);
    write(&p2, r#"{"d":3,"poset":{"elements":["a"],"covers":[]},"dimlabel":{"a":2}}"#);
    let out = run(&["theory-eq", p1.to_str().unwrap(), p2.to_str().unwrap(), "--json"]);
    assert_eq!(json_of(&out)["equivalent"], Value::Bool(false));
    let out = run(&["theory-eq", p1.to_str().unwrap(), p1.to_str().unwrap(), "--json"]);
    assert_eq!(json_of(&out)["equivalent"], Value::Bool(true));
}

#[test]
fn asc_flow_through_files() {
    let dir = tempdir("asc");
    let weighted = dir.join("weighted.json");
    write(
        &weighted,
        r#"{"d":1,"poset":{"elements":["a1","a2"],"covers":[]},"dimlabel":{"a1":0,"a2":0},"asc":{"a1":1,"a2":2}}"#,
    );
    let out = run(&["axioms", weighted.to_str().unwrap(), "--json"]);
    let doc = json_of(&out);
    assert_eq!(doc["asc"]["standard"], Value::Bool(true));

    let out = run(&["represent-asc", weighted.to_str().unwrap(), "--n", "3", "--json"]);
    assert!(out.status.success());

    let prime = json_of(&run(&["prime", weighted.to_str().unwrap(), "--json"]));
    assert_eq!(prime["base"]["asc"].as_object().unwrap().len(), 1);

    // At-atoms require counted bases in sat.
    let out = run(&["sat", "--d", "0", "--formula", "At3(x)", "--asc", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "SAT");

    let out = run(&["sat", "--d", "0", "--formula", "At3(x)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mu_and_version() {
    let out = run(&["mu", "--n", "1", "--d", "1"]);
    assert_eq!(stdout_of(&out).trim(), "18");
    let out = run(&["--version"]);
    assert!(stdout_of(&out).contains("sclat/1"));
}
