//! End-to-end command-line tests: exit codes, report schema, determinism.

use std::process::Command;

fn radform() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radform"))
}

#[test]
fn exit_code_contract() {
    // transformed -> 0
    let st = radform()
        .args([
            "transform",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y' - y*sqrt(x+1)",
            "--no-oracle",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{:?}", st);

    // proven impossible -> 10
    let st = radform()
        .args([
            "transform",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y' - y*sqrt(x^3 - 1)",
            "--no-oracle",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(10));

    // no answer -> 11
    let st = radform()
        .args([
            "transform",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y' - y*root(x^5 + x + 1, 5)",
            "--no-oracle",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(11));

    // usage error -> 2
    let st = radform()
        .args(["transform", "--vars", "x", "--unknowns", "y"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    // parse error -> 2
    let st = radform()
        .args([
            "transform",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y'' +",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn report_schema_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let st = radform()
            .args([
                "transform",
                "--vars",
                "x",
                "--unknowns",
                "y",
                "--params",
                "a",
                "--eq",
                "8*(y')^3*(x+1)^(3/2) - 2*a*(x+1)*y*y' + 2*a*y^2",
                "--seed",
                "17",
                "--json",
            ])
            .arg(p)
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(0));
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert_eq!(a, b, "identical config must give byte-identical reports");

    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    for key in [
        "version",
        "status",
        "tower",
        "parametrization",
        "inverse",
        "transformed",
        "back_substitution",
        "tracing",
        "oracle",
        "normalization_unit",
        "timings",
    ] {
        assert!(doc.get(key).is_some(), "missing report key {key}");
    }
    assert_eq!(doc["status"], "transformed");
    assert_eq!(doc["version"], 1);
    assert!(doc["timings"].is_null(), "timings only with --timings");
    assert_eq!(doc["transformed"][0]["text"], "2*a*Y^2 - a*z*Y*Y' + (Y')^3");
    assert_eq!(doc["inverse"][0]["expression"], "B");
    assert_eq!(doc["back_substitution"][0], "z = sqrt(x + 1)");
    assert_eq!(doc["oracle"]["pass"], true);
}

#[test]
fn transformed_text_reparses() {
    // the rendered transformed equation re-parses under the new symbols
    use radform_core::frontend::{parse_equation, SymbolTable};
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let st = radform()
        .args([
            "transform",
            "--vars",
            "x1,x2",
            "--unknowns",
            "u",
            "--eq",
            "diff(u,x1)^2 + diff(u,x2)^2 = 1/sqrt(x1^2 + x2^2)",
            "--no-oracle",
            "--json",
        ])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    let text = doc["transformed"][0]["text"].as_str().unwrap();
    let symbols = SymbolTable {
        vars: vec!["z1".into(), "z2".into()],
        unknowns: vec!["U".into()],
        params: vec![],
    };
    parse_equation(text, &symbols).unwrap_or_else(|e| panic!("`{text}` does not reparse: {e}"));
}

#[test]
fn verify_subcommand() {
    // correct substitution passes
    let st = radform()
        .args([
            "verify",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--params",
            "a",
            "--eq",
            "8*(y')^3*(x+1)^(3/2) - 2*a*(x+1)*y*y' + 2*a*y^2",
            "--subst",
            "x=z^2-1; d1=z",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{st:?}");

    // x = z^3 does not rationalize the radical
    let st = radform()
        .args([
            "verify",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--params",
            "a",
            "--eq",
            "8*(y')^3*(x+1)^(3/2) - 2*a*(x+1)*y*y' + 2*a*y^2",
            "--subst",
            "x=z^3",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));

    // identity substitution on a rational equation passes
    let st = radform()
        .args([
            "verify",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y'' + x*y",
            "--subst",
            "x=z",
        ])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
}

#[test]
fn batch_over_fixture_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let st = radform()
        .args(["batch", fixtures, "--no-oracle", "--json"])
        .arg(&summary)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{st:?}");
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&summary).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let by_status = |s: &str| {
        rows.iter()
            .filter(|r| r["status"] == s)
            .count()
    };
    assert_eq!(by_status("transformed"), 5);
    assert_eq!(by_status("proven_impossible"), 1);
    assert_eq!(by_status("no_answer"), 1);
    assert_eq!(doc["errors"], 0);

    // empty directory: empty summary, success
    let empty = tempfile::tempdir().unwrap();
    let st = radform()
        .args(["batch"])
        .arg(empty.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
}
