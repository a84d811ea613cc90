use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn write_input(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("descent-kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_descent-kit")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = bin(&all);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn m3_family_is_regular_but_not_stable() {
    let path = write_input("m3.json", r#"{"lattice": "M3", "codomain": 4, "members": [1, 2]}"#);
    let r = json(&["fam", "classify", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(r["verdicts"]["is_regular_epi"], true);
    assert_eq!(r["verdicts"]["is_stable_regular_epi"], false);
    assert_eq!(r["verdicts"]["effective_descent"], false);
    let stable = r["witnesses"].as_array().unwrap().iter().find(|w| w["condition"] == "stable_regular_epi").unwrap();
    assert_eq!(stable["detail"]["z"], 3);
}

#[test]
fn corpus_flag_supplies_the_lattice() {
    let path = write_input("c3.json", r#"{"codomain": 2, "members": [1, 2]}"#);
    let r = json(&["fam", "classify", path.to_str().unwrap(), "--corpus", "C3"]);
    assert_eq!(r["verdicts"]["is_stable_regular_epi"], true);
}

#[test]
fn lattice_info_flags_n5() {
    let r = json(&["lattice", "info", "--corpus", "N5"]);
    assert_eq!(r["verdicts"]["lattice"], true);
    assert_eq!(r["verdicts"]["heyting"], false);
    assert_eq!(r["verdicts"]["distributive"], false);
    let r = json(&["lattice", "info", "--corpus", "B2"]);
    assert_eq!(r["verdicts"]["heyting"], true);
}

#[test]
fn vcat_identity_is_effective() {
    let path = write_input(
        "vcat.json",
        r#"{"lattice": "C3", "source_hom": [[2, 1], [0, 2]], "target_hom": [[2, 1], [0, 2]], "map": [0, 1]}"#,
    );
    let r = json(&["vcat", "check", path.to_str().unwrap()]);
    assert_eq!(r["verdict"], "effective_descent");
    assert_eq!(r["verdicts"]["star_quotient"], true);
}

#[test]
fn fincat_on_a_lattice_agrees_with_thin() {
    let path = write_input("fincat.json", r#"{"lattice": "M3", "codomain": 4, "members": [1, 2]}"#);
    let r = json(&["fincat", "regepi", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(r["verdicts"]["is_regular_epi"], true);
    assert_eq!(r["verdicts"]["is_stable_regular_epi"], false);
    assert_eq!(r["verdicts"]["agrees_with_thin_classifier"], true);
}

#[test]
fn finset_identity_shorthand() {
    // The arrow category 0 -> 1, as a finite set enriched category.
    let lat = descent_kit::lattice::FiniteLattice::chain(2).unwrap();
    let cat = descent_kit::finset::OrdinaryCategory::from_finite_category(&descent_kit::fincat::lattice_as_category(&lat));
    let doc = serde_json::json!({ "source": descent_kit::doc::OrdinaryCategoryDoc::from_category(&cat) });
    let path = write_input("arrow.json", &doc.to_string());
    let r = json(&["finset", "check", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(r["verdict"], "effective_descent");
    assert_eq!(r["verdicts"]["oracle_agrees"], true);
}

#[test]
fn exit_codes() {
    let garbage = write_input("garbage.json", "{ not json");
    assert_eq!(bin(&["fam", "classify", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["fam", "classify", "/nonexistent/input.json"]).status.code(), Some(2));

    let above = write_input("above.json", r#"{"lattice": "C3", "codomain": 1, "members": [2]}"#);
    let out = bin(&["fam", "classify", above.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not below"));

    let not_lattice = write_input("poset.json", r#"{"size": 2, "leq": [[true, false], [false, true]]}"#);
    assert_eq!(bin(&["lattice", "info", not_lattice.to_str().unwrap()]).status.code(), Some(1));

    let big = write_input("big.json", r#"{"lattice": "B3", "codomain": 7, "members": [7, 7, 7]}"#);
    assert_eq!(bin(&["fam", "classify", big.to_str().unwrap(), "--oracle", "--budget", "5"]).status.code(), Some(3));

    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn text_output_mentions_the_verdicts() {
    let path = write_input("text.json", r#"{"lattice": "M3", "codomain": 4, "members": [1, 2]}"#);
    let out = bin(&["fam", "classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("is_regular_epi"));
    assert!(text.contains("is_stable_regular_epi"));
}

#[test]
fn json_report_round_trips() {
    let path = write_input("rt.json", r#"{"lattice": "B2", "codomain": 3, "members": [1, 2]}"#);
    let out = bin(&["fam", "classify", path.to_str().unwrap(), "--oracle", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report: descent_kit::Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.to_json() + "\n", text);
}
