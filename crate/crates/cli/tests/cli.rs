use std::path::PathBuf;
use std::process::{Command, Output};

fn symharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symharm"))
        .args(args)
        .output()
        .unwrap()
}

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "configs", name]
        .iter()
        .collect();
    p.display().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn lagrangian_pipeline_takes_the_short_branch() {
    let dir = tempfile::tempdir().unwrap();
    let out = symharm(&[
        "pipeline",
        "--config",
        &config("t4_lagrangian.json"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["branch"]["kind"], "short_circuit");
    assert_eq!(r["passed"], true);
    assert!(r["empty_ball"]["radius_cells"].as_u64().unwrap() >= 1);
    let saved: serde_json::Value =
        serde_json::from_reader(std::fs::File::open(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(saved["artifacts"].as_array().unwrap().len(), 2);
    assert!(dir.path().join("final_form.sff").exists());
}

#[test]
fn kodaira_thurston_model() {
    let out = symharm(&["model", "--name", "kodaira-thurston"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["betti"][1], 3);
    assert_eq!(r["hl_iso"][1], false);
    let csv = symharm(&["model", "--name", "kodaira-thurston", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().any(|l| l == "1,3,false,3"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        symharm(&["pipeline", "--config", "/nonexistent/config.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(symharm(&["pipeline"]).status.code(), Some(2));
    assert_eq!(
        symharm(&["model", "--name", "klein-bottle"]).status.code(),
        Some(2)
    );
    assert_eq!(symharm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        symharm(&["thom", "--axes", "1,3", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failing_assertions_exit_one() {
    // A non-primitive class is refused.
    let dir = tempfile::tempdir().unwrap();
    let mut cfg: serde_json::Value =
        serde_json::from_reader(std::fs::File::open(config("t4_lagrangian.json")).unwrap())
            .unwrap();
    cfg["resolution"] = 8.into();
    cfg["Q"]["terms"] = serde_json::json!([
        {"c": 1.0, "v": [[0.0, 0.0, 0.25, 0.5], [1.0, 0.0, 0.25, 0.5], [1.0, 1.0, 0.25, 0.5]]},
        {"c": -1.0, "v": [[0.0, 0.0, 0.25, 0.5], [0.0, 1.0, 0.25, 0.5], [1.0, 1.0, 0.25, 0.5]]}
    ]);
    let path = dir.path().join("symplectic.json");
    std::fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = symharm(&["pipeline", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not primitive"));
    // So is a subtorus that is not closed in the model.
    let out = symharm(&["thom", "--model", "kodaira-thurston", "--axes", "1,2,4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thom_branches() {
    let branch = |axes: &str| {
        json(&symharm(&["thom", "--axes", axes]))["branch"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(branch("1,3"), "small_support");
    assert_eq!(branch("1,2"), "nowhere_vanishing");
    assert_eq!(branch("1,2,3"), "small_support");
}

#[test]
fn deform_writes_a_certified_result() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("segment.json");
    std::fs::write(
        &chain,
        r#"{"N": 2, "p": 1, "terms": [{"c": 1.0, "v": [[0.1, 0.2], [0.9, 0.7]]}]}"#,
    )
    .unwrap();
    let result = dir.path().join("result.json");
    let out = symharm(&[
        "deform",
        "--chain",
        chain.to_str().unwrap(),
        "--eps",
        "0.25",
        "--seed",
        "7",
        "--out",
        result.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r: serde_json::Value =
        serde_json::from_reader(std::fs::File::open(result).unwrap()).unwrap();
    assert!(r["certificate"]["identity_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["P"]["p"], 1);
}

#[test]
fn selftest_csv() {
    let out = symharm(&["algebra-selftest", "--samples", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("identity,n,samples,max_residual,passed,seconds"));
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.rsplit(',').nth(1) == Some("true")));
}
