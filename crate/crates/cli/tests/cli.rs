use std::path::PathBuf;

use cipscan_core::trace::parse_links;

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(rel)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cipscan").chain(args.iter().copied());
    let code = cipscan::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

#[test]
fn catalog_lists_thirty_patterns() {
    let (code, out, _) = run(&["catalog"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    let patterns = v["patterns"].as_array().unwrap();
    assert_eq!(patterns.len(), 30);
    for key in ["name", "description", "statement_type", "parts", "detector_arity"] {
        assert!(patterns.iter().all(|p| p.get(key).is_some()), "{key}");
    }
    let (_, csv, _) = run(&["catalog", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 31);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, out, err) = run(&["catalog", "--bogus"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("--bogus"));
    let (code, _, err) = run(&["detect", &fixture("jedit")]);
    assert_eq!(code, 1);
    assert!(err.contains("--constraints"));
    let (code, _, _) = run(&["match", &fixture("jedit"), "--pattern", "no such pattern"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["detect", &fixture("jedit"), "--constraints", "x.json", "--cap", "0"]);
    assert_eq!(code, 1);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("catalog"));
}

#[test]
fn missing_input_is_fatal() {
    let (code, _, err) = run(&["match", &fixture("does-not-exist")]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    let (code, _, _) = run(&["classify", "--constraints", &fixture("constraints/none.json")]);
    assert_eq!(code, 2);
}

#[test]
fn parse_failures_give_partial_success() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("A.java"), "class A { int x = ; }\n").unwrap();
    std::fs::write(dir.path().join("B.java"), "class B { boolean on; void m() { if (on) { } } }\n").unwrap();
    let (code, out, err) = run(&["match", &dir.path().display().to_string()]);
    assert_eq!(code, 3);
    assert!(err.starts_with("A.java:1:"), "{err}");
    let v = json(&out);
    assert_eq!(v["instances"][0]["pattern"], "boolean property");
}

#[test]
fn match_restricts_to_requested_patterns() {
    let (code, out, _) = run(&["match", &fixture("jedit"), "--pattern", "boolean property"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let inst = v["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 3);
    assert!(inst.iter().all(|i| i["pattern"] == "boolean property"));
    let (_, out, _) = run(&["match", &fixture("catalog"), "--pattern", "properties file", "--format", "csv"]);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn detect_reports_both_risk_checkers() {
    let (code, out, err) = run(&[
        "detect",
        &fixture("risk_factors"),
        "--constraints",
        &fixture("constraints/risk_factors.json"),
    ]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    let rep = &v["reports"][0];
    assert_eq!(rep["constraint_id"], "age-over-45");
    assert_eq!(rep["schema_version"], "1");
    let files: Vec<&str> = rep["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["instance"]["file"].as_str().unwrap())
        .collect();
    assert_eq!(files, ["itrust/risk/diabetes/AgeFactor.java", "itrust/risk/heart/AgeFactor.java"]);
}

#[test]
fn classify_emits_types() {
    let (code, out, _) = run(&["classify", "--constraints", &fixture("constraints/examples.json"), "--format", "csv"]);
    assert_eq!(code, 0);
    let expected = std::fs::read_to_string(fixture("constraints/expected-types.tsv")).unwrap();
    let want: Vec<String> = expected.lines().map(|l| l.replace('\t', ",")).collect();
    let got: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(got, want);
    let (code, _, err) = run(&["classify", "--constraints", &fixture("constraints/mixed.csv")]);
    assert_eq!(code, 3);
    assert_eq!(err.lines().count(), 3);
}

#[test]
fn slice_reports_reached_statements() {
    let (code, out, _) = run(&["slice", &fixture("jedit"), "--seed", "buffer/Buffer.java:4:field:dirty"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["reached"].as_array().unwrap().len(), 4);
    let (code, _, _) = run(&["slice", &fixture("jedit"), "--seed", "buffer/Buffer.java:99"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["slice", &fixture("jedit"), "--seed", "Buffer.java"]);
    assert_eq!(code, 1);
}

#[test]
fn trace_clones_and_report_chain() {
    let dir = tempfile::tempdir().unwrap();
    let links = dir.path().join("links.json").display().to_string();
    let (code, out, err) = run(&[
        "trace",
        &fixture("jedit"),
        "--constraints",
        &fixture("constraints/jedit.json"),
        "--out",
        &links,
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty());
    assert!(err.contains("no-seeds"));
    let parsed = parse_links("links.json", &std::fs::read_to_string(&links).unwrap()).unwrap();
    assert_eq!(parsed.len(), 3);
    assert!(parsed.iter().all(|l| l.system.as_deref() == Some("jEdit")));

    let (code, out, _) = run(&["clones", "--links", &links]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["groups"][0]["consistency"], "consistent");
    assert_eq!(v["anchor"]["type-1"], 2);
    assert_eq!(v["all_pairs"]["type-1"], 3);

    let (code, out, _) = run(&["report", "--links", &links, "--by", "pattern", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "pattern,jEdit,total\nboolean property,3,3\ntotal,3,3\n");
    let (code, out, _) = run(&["report", "--constraints", &fixture("constraints/examples.json"), "--by", "constraint-type"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["total"], 8);
    let (code, _, _) = run(&["report", "--by", "pattern"]);
    assert_eq!(code, 1);
}

#[test]
fn manual_trace_descends_to_the_guard() {
    let (code, out, err) = run(&[
        "trace",
        &fixture("swarm"),
        "--at",
        "spectrogram/SpectrogramPanel.java:13",
        "--pattern",
        "binary comparison",
        "--id",
        "max-below-nyquist",
        "--system",
        "Swarm",
    ]);
    assert_eq!(code, 0, "{err}");
    let links = parse_links("stdout", &out).unwrap();
    assert_eq!(links.len(), 1);
    assert_eq!(links[0].enforcing.line, 17);
    assert_eq!(links[0].system.as_deref(), Some("Swarm"));
    let kinds: Vec<&str> = links[0].definitions.iter().map(|d| d.kind.as_str()).collect();
    assert_eq!(kinds, ["field-declaration", "method-declaration"]);
    let (code, _, err) = run(&[
        "trace",
        &fixture("nocalls"),
        "--at",
        "Plain.java:1",
        "--pattern",
        "binary comparison",
        "--id",
        "x",
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cipscan.toml");
    std::fs::write(&cfg, "format = \"csv\"\n").unwrap();
    let cfg = cfg.display().to_string();
    let (code, out, _) = run(&["catalog", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(out.starts_with("name,"));
    let (_, out, _) = run(&["catalog", "--config", &cfg, "--format", "json"]);
    assert!(out.starts_with('{'));
    std::fs::write(dir.path().join("bad.toml"), "colour = 1\n").unwrap();
    let (code, _, _) = run(&["catalog", "--config", &dir.path().join("bad.toml").display().to_string()]);
    assert_eq!(code, 2);
}

#[test]
fn outputs_are_repeatable() {
    let (l, h) = (fixture("risk_factors"), fixture("httpc"));
    let a = run(&["match", &l, &h]);
    let b = run(&["match", &l, &h]);
    assert_eq!(a, b);
}
