use std::process::{Command, Output};

use serde_json::Value;

fn udom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udom")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn inspect_first_example() {
    let out = udom(&["inspect", "paper-ex-1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["algebra"]["dim"], 11);
    assert_eq!(v["gamma"]["dim"], 11);
    assert_eq!(v["validation"]["balanced_right"], true);
    assert_eq!(v["validation"]["exact"], true);
    let out = udom(&["inspect", "paper-ex-2", "--format", "json"]);
    assert_eq!(json(&out)["algebra"]["dim"], 7);
}

#[test]
fn domdim_semisimple_hits_the_bound() {
    let out = udom(&["domdim", "semisimple", "--format", "json", "--d-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dominant_dimension"]["left"]["value"], ">= 3");
    assert_eq!(v["dominant_dimension"]["right"]["value"], ">= 3");
}

#[test]
fn domdim_examples() {
    let v = json(&udom(&["domdim", "paper-ex-2", "--format", "json"]));
    assert_eq!(v["resolution_dimension"]["left"]["value"], "2");
    assert_eq!(v["resolution_dimension"]["right"]["value"], "1");
    let v = json(&udom(&["domdim", "paper-ex-1", "--format", "json"]));
    assert_eq!(v["resolution_dimension"]["left"]["value"], "1");
    assert!(v["resolution_dimension"]["right"]["dim"]["at_least"].as_bool().unwrap());
}

#[test]
fn reproduce_paper_matches_and_is_stable() {
    let a = udom(&["reproduce-paper", "--format", "json"]);
    let b = udom(&["reproduce-paper", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["match"], true);
    let table = String::from_utf8(udom(&["reproduce-paper"]).stdout).unwrap();
    assert!(table.contains("paper-ex-1"), "{table}");
}

#[test]
fn check_single_claim() {
    let out = udom(&["check", "semisimple", "--claim", "thm1.3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["claims"].as_array().unwrap().len(), 1);
    assert_eq!(v["claims"][0]["verdict"], "PASS");
}

#[test]
fn report_json_round_trips() {
    let out = udom(&["check", "a3", "--claim", "all", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(v["claims"].as_array().unwrap().len(), 12);
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let out = udom(&["check", "paper-ex-1", "--claim", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    assert_eq!(udom(&["inspect", "no-such-instance"]).status.code(), Some(2));
    assert_eq!(udom(&["inspect", "paper-ex-1", "--p", "100"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("udom-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"field":{"p":7},"quiver":{"vertices":["1"],"arrows":[{"name":"x","from":"1","to":"9"}]},"bimodule":"regular"}"#,
    )
    .unwrap();
    let out = udom(&["inspect", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`x`"));

    let malformed = dir.join("malformed.json");
    std::fs::write(&malformed, "{\n  \"field\": {\"p\": 7},\n  oops\n}").unwrap();
    let out = udom(&["inspect", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unbalanced_bimodule_is_an_input_error() {
    // U = P1 ⊕ P1 over A3 is not basic over its endomorphism ring
    let a3 = udom::instance::fixture("a3").unwrap();
    let a = a3.load(None).unwrap().algebra;
    let p1 = udom::module::indec_projective(&a, 0).unwrap();
    let u = udom::module::direct_sum(&a, &[p1.clone(), p1]).unwrap();
    let inst = udom::instance::Instance {
        bimodule: udom::instance::BimoduleSpec::Explicit(u.to_spec()),
        ..a3
    };
    let path = std::env::temp_dir().join(format!("udom-cli-unbalanced-{}.json", std::process::id()));
    std::fs::write(&path, inst.to_json()).unwrap();
    let out = udom(&["domdim", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(2));
}
