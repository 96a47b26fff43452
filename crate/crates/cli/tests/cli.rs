use std::process::Command;

fn sarc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sarc"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = sarc().args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn petersen_orbitals() {
    let (code, out) = run(&["inspect", "orbitals", "--n", "5", "--group", "sym", "--family", "subsets", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("degree 10"));
    let rows: Vec<&str> = out.lines().filter(|l| l.contains("self-paired")).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().any(|l| l.split_whitespace().nth(1) == Some("3")));
    assert!(rows.iter().any(|l| l.split_whitespace().nth(1) == Some("6")));
}

#[test]
fn frobenius_smax_and_edges() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("d.txt");
    let js = dir.path().join("r.json");
    let (code, out) = run(&[
        "inspect", "smax", "--fixture", "frobenius21", "--orbital", "0",
        "--edges", edges.to_str().unwrap(), "--json", js.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("s_max: 1"), "{out}");
    let text = std::fs::read_to_string(&edges).unwrap();
    assert!(text.starts_with("vertices=7 valency=3"));
    assert_eq!(text.lines().count(), 1 + 21);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    assert!(v.get("s_max").is_some());
}

#[test]
fn bruteforce_matches_criterion_on_blowup() {
    let (_, a) = run(&["inspect", "smax", "--fixture", "blowup3x3", "--orbital", "0"]);
    let (_, b) = run(&["inspect", "smax", "--fixture", "blowup3x3", "--orbital", "0", "--bruteforce"]);
    let line = |s: &str| s.lines().find(|l| l.starts_with("s_max")).unwrap().to_string();
    assert_eq!(line(&a), line(&b));
}

#[test]
fn affine_s8_is_flagged_imprimitive() {
    let (code, out) = run(&["inspect", "action", "--n", "8", "--group", "sym", "--family", "affine", "--k", "3", "--p", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("degree: 30"));
    assert!(out.contains("primitive: no"));
    let (_, out) = run(&["inspect", "action", "--n", "8", "--group", "alt", "--family", "affine", "--k", "3", "--p", "2"]);
    assert!(out.contains("degree: 15"));
    assert!(out.contains("primitive: yes"));
}

#[test]
fn verify_small_range_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let (code, out) = run(&["verify", "--n-min", "5", "--n-max", "6", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["summary"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_catalog_override() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat.json");
    std::fs::write(&cat, r#"{"version":1,"entries":[]}"#).unwrap();
    let (code, _) = run(&["verify", "--n-min", "5", "--n-max", "5", "--catalog", cat.to_str().unwrap()]);
    assert_eq!(code, 0);
    std::fs::write(&cat, "not json").unwrap();
    let (code, _) = run(&["verify", "--n-min", "5", "--n-max", "5", "--catalog", cat.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn bad_arguments_fail() {
    assert_eq!(run(&["verify", "--n-min", "3"]).0, 2);
    assert_eq!(run(&["inspect", "smax", "--fixture", "nope"]).0, 2);
    assert_eq!(run(&["inspect", "orbitals", "--n", "6"]).0, 2);
    assert_eq!(run(&["inspect", "action", "--n", "6", "--family", "subsets", "--m", "3"]).0, 2);
}
