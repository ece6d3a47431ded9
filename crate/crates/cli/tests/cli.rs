use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-rigidity"))
        .args(args)
        .env_remove(torus_rigidity_cli::SAMPLES_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_ergodicity() {
    let o = run(&["analyze", path(&data("cat_source.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let source = text.split("target:").next().unwrap();
    assert!(source.contains("ergodic: true"));
    assert!(source.contains("F: rank 0"));
    assert!(source.contains("k: 1"));

    let o = run(&["analyze", path(&data("identity.json"))]);
    let text = stdout(&o);
    assert!(text.contains("ergodic: false"));
    assert!(text.contains("F: full"));
}

#[test]
fn analyze_names_non_commuting_pair() {
    let o = run(&["analyze", path(&data("non_commuting.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("generators 0 and 1 do not commute"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for cmd in ["analyze", "decide", "witness", "verify"] {
        assert_eq!(run(&[cmd, path(&bad)]).status.code(), Some(2), "{cmd}");
    }
    assert_eq!(run(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn decide_identity_to_reflection() {
    let o = run(&["decide", path(&data("identity_to_reflection.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["exists_nonaffine"], false);
    assert_eq!(doc["certificate"]["kind"], "NoGammaRhoFixedVector");
}

#[test]
fn decide_embeds_fixed_vector() {
    let o = run(&["decide", path(&data("shear_to_identity.json"))]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["exists_nonaffine"], true);
    assert_eq!(doc["certificate"]["kind"], "Exists");
    assert_eq!(doc["certificate"]["fixed_vector"][0], "1");
}

#[test]
fn decide_modes() {
    let shear = data("shear_to_identity.json");
    let o = run(&["decide", "--mode", "factor", path(&shear)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"mode\": \"factor\""));
    let o = run(&["decide", "--mode", "factor", path(&data("order3_to_shear.json"))]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["decide", "--mode", "cyclic", path(&data("identity.json"))]);
    assert_eq!(o.status.code(), Some(3));
    assert_ne!(run(&["decide", "--mode", "fast", path(&shear)]).status.code(), Some(0));
}

#[test]
fn cyclic_mode_matches_exact_mode() {
    for name in ["identity_to_reflection.json", "shear_to_identity.json", "order3_to_shear.json", "cat_source.json"] {
        let exists = |mode: &str| {
            let o = run(&["decide", "--mode", mode, path(&data(name))]);
            let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
            doc["exists_nonaffine"].clone()
        };
        assert_eq!(exists("cyclic"), exists("exact"), "{name}");
    }
}

#[test]
fn decide_output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = run(&["decide", path(&data("order3_to_shear.json")), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let again = run(&["decide", path(&data("order3_to_shear.json"))]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout(&again));
}

fn witness(dir: &Path, name: &str) -> PathBuf {
    let out = dir.join(format!("{name}.witness.json"));
    let o = run(&["witness", path(&data(name)), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

#[test]
fn witness_degrees() {
    let dir = tempfile::tempdir().unwrap();
    for (name, d) in [("shear_to_identity.json", 1), ("order3_to_shear.json", 3)] {
        let w = witness(dir.path(), name);
        let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(w).unwrap()).unwrap();
        assert_eq!(doc["witness"]["reps"].as_array().unwrap().len(), d);
        assert_eq!(doc["witness"]["c"].as_array().unwrap().len(), d + 1);
    }
}

#[test]
fn witness_refused_for_ergodic_source() {
    let o = run(&["witness", path(&data("cat_source.json"))]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("SourceErgodic"));
}

#[test]
fn verify_passes_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let w = witness(dir.path(), "order3_to_shear.json");
    let o = run(&["verify", path(&w)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["samples"], 1000);

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    doc["witness"]["bump"]["direction"] = serde_json::json!(["0", "1"]);
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, doc.to_string()).unwrap();
    let o = run(&["verify", path(&corrupted)]);
    assert_eq!(o.status.code(), Some(5));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn verify_with_zero_samples_is_vacuous() {
    let dir = tempfile::tempdir().unwrap();
    let w = witness(dir.path(), "shear_to_identity.json");
    let o = run(&["verify", path(&w), "--samples", "0", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["max_equivariance_error"], "0");
    assert_eq!(doc["seed"], "9");
}

#[test]
fn sample_count_can_come_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let w = witness(dir.path(), "shear_to_identity.json");
    let o = Command::new(env!("CARGO_BIN_EXE_torus-rigidity"))
        .args(["verify", path(&w)])
        .env(torus_rigidity_cli::SAMPLES_ENV, "17")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["samples"], 17);
}

#[test]
fn sample_map_grids() {
    let dir = tempfile::tempdir().unwrap();
    let w = witness(dir.path(), "shear_to_identity.json");
    let csv = dir.path().join("grid.csv");
    let o = run(&["sample-map", path(&w), "--grid", "4", "-o", path(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,f1");
    assert_eq!(lines.len(), 1 + 16);
    let coords: Vec<(f64, f64)> = lines[1..]
        .iter()
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1])
        })
        .collect();
    let mut sorted = coords.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(coords, sorted);
}

#[test]
fn sample_map_one_dimensional_source() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    std::fs::write(
        &pair,
        r#"{"rank": 1, "source": {"dim": 1, "generators": [[[1]]]}, "target": {"dim": 1, "generators": [[[1]]]}}"#,
    )
    .unwrap();
    let w = dir.path().join("w.json");
    assert_eq!(run(&["witness", path(&pair), "-o", path(&w)]).status.code(), Some(0));
    let o = run(&["sample-map", path(&w), "--grid", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x1,f1"));
    assert_eq!(text.lines().count(), 1 + 8);
}

#[test]
fn sample_map_rejects_three_dimensional_source() {
    let dir = tempfile::tempdir().unwrap();
    let w = witness(dir.path(), "rank_two_on_t3.json");
    let o = run(&["sample-map", path(&w), "--grid", "2"]);
    assert_eq!(o.status.code(), Some(6));
}

#[test]
fn reads_standard_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_torus-rigidity"))
        .args(["decide", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(std::fs::read(data("identity_to_reflection.json")).unwrap().as_slice())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NoGammaRhoFixedVector"));
}
