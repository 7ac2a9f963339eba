use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pure-homotopy"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_default_passes_and_lists_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--set", "cases=10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("verify.json"));
    let names: Vec<&str> = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    for s in pure_homotopy::experiments::SUITES {
        assert!(names.contains(&s), "missing suite {s}");
    }
    assert_eq!(report["passed"], true);
}

#[test]
fn verify_with_impossible_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--set", "cases=10", "--set", "tol.geodesic=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&dir.path().join("verify.json"));
    let geo = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["suite"] == "geodesic")
        .unwrap();
    assert_eq!(geo["passed"], false);
}

#[test]
fn verify_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(
            run(d.path(), &["verify", "--seed", "99", "--set", "cases=8"]).status.code(),
            Some(0)
        );
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("verify.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn contract_writes_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["contract", "--set", "vertices=9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["trace.json", "observables.csv", "margins.csv", "contract.json"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let mut rdr = csv::Reader::from_path(dir.path().join("margins.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let margin = headers.iter().position(|h| h == "margin").unwrap();
    for row in rdr.records() {
        assert!(row.unwrap()[margin].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn sphere_family_reports_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["contract", "--set", "family=sphere-m2"]);
    assert_eq!(out.status.code(), Some(2));
    let ob = json(&dir.path().join("obstruction.json"));
    assert_eq!(ob["condition"], "n <= 2r - 2");
    assert_eq!(ob["corner_rank"], 1);
    assert!(!dir.path().join("trace.json").exists());
}

#[test]
fn config_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["contract", "--set", "vertices=0"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["verify", "--set", "no_such_key=1"]).status.code(), Some(3));
    assert_eq!(
        run(dir.path(), &["verify", "--set", "tol.geodesic=-1"]).status.code(),
        Some(3)
    );
    assert_eq!(run(dir.path(), &["contract", "--delta", "1e-3"]).status.code(), Some(3));
    let out = run(dir.path(), &["rotation", "--p", "2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not coprime"));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# rotation table\np = 1\nq = 3\nkmax = 6\n").unwrap();
    let out = run(dir.path(), &["rotation", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("rotation.csv")).unwrap();
    assert!(text.contains("5,Z,,exact_sequence"));
    assert!(text.contains("6,pi_6(S^5),,symbolic"));
}

fn rotation_rows(dir: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(dir.join("rotation.csv")).unwrap();
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn rotation_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(dir.path(), &["rotation", "--p", "1", "--q", "2", "--kmax", "4"])
            .status
            .code(),
        Some(0)
    );
    let values: Vec<String> = rotation_rows(dir.path()).iter().map(|r| r[1].clone()).collect();
    assert_eq!(values, ["0", "Z^2", "Z", "Z", "pi_4(S^3)"]);
    assert!(rotation_rows(dir.path())[4][2].is_empty());

    assert_eq!(
        run(
            dir.path(),
            &["rotation", "--p", "1", "--q", "2", "--kmax", "4", "--resolve-spheres"]
        )
        .status
        .code(),
        Some(0)
    );
    let last = rotation_rows(dir.path()).pop().unwrap();
    assert_eq!((last[2].as_str(), last[3].as_str()), ("Z/2", "sphere_table"));

    assert_eq!(
        run(dir.path(), &["rotation", "--irrational", "--kmax", "7"]).status.code(),
        Some(0)
    );
    let rows = rotation_rows(dir.path());
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r[1] == "0"));
}
