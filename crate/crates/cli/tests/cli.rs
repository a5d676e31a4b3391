use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn demon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_demon")).args(args).env_remove("DEMON_THREADS").output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn error_json(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"].clone()
}

/// Column values of a CSV document, skipping `#` header lines.
fn csv_column(doc: &str, name: &str) -> Vec<String> {
    let body: String = doc.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let i = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|rec| rec.unwrap()[i].to_string()).collect()
}

#[test]
fn szilard_run_reports_ln2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "experiment = \"szilard\"\nseed = 0\n[parameters]\nn_particles = 1\nwall_fraction = 0.5\n");
    let out = demon(&["run", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = String::from_utf8(out.stdout).unwrap();
    assert!(doc.lines().any(|l| l == "# experiment = \"szilard\""));
    assert!(doc.contains("# config_hash = "));
    let w: f64 = csv_column(&doc, "w_tot")[0].parse().unwrap();
    assert!((w / std::f64::consts::LN_2 - 1.0).abs() < 1e-6, "{w}");
}

#[test]
fn empty_config_and_missing_args_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.toml", "");
    let out = demon(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["kind"], "usage");
    let out = demon(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["kind"], "usage");
}

#[test]
fn config_errors_name_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "experiment = \"jarzynski\"\nseed = 1\n[parameters]\nk_initial = 1.0\nk_finale = 4.0\n");
    let out = demon(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_json(&out);
    assert_eq!(e["kind"], "config");
    assert_eq!(e["key"], "parameters.k_finale");
    assert_eq!(e["line"], 5);
}

#[test]
fn experiment_errors_carry_context() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", "experiment = \"erasure\"\nseed = 1\n[parameters]\nn_traj = 10\n");
    let out = demon(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let e = error_json(&out);
    assert_eq!(e["experiment"], "erasure");
    assert!(e["message"].as_str().unwrap().contains("1000"));
}

#[test]
fn reeb_wolf_json_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("rw.json");
    let cfg = write(dir.path(), "rw.toml", "experiment = \"reeb_wolf\"\nseed = 4\n[parameters]\ntrials = 200\n");
    let out = demon(&["run", "--config", &cfg, "--out", target.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: Value = serde_json::from_slice(&out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["manifest"]["config_hash"], manifest["config_hash"]);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 200);
    assert!(doc["manifest"]["summary"]["max_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(doc["config"]["parameters"]["trials"], 200);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2, "no temporary files remain");
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.toml", "experiment = \"gamble\"\nseed = 5\n[output]\nformat = \"json\"\n[parameters]\nn_traj = 5000\n");
    let rows = |threads: &str| {
        let out = demon(&["--threads", threads, "run", "--config", &cfg]);
        assert!(out.status.success());
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        (doc["rows"].clone(), doc["manifest"]["config_hash"].clone())
    };
    let a = rows("1");
    assert_eq!(a, rows("1"));
    assert_eq!(a, rows("3"));
    let other = demon(&["run", "--config", &cfg, "--seed", "6"]);
    let doc: Value = serde_json::from_slice(&other.stdout).unwrap();
    assert_ne!(doc["rows"], a.0);
}

#[test]
fn sweep_rows_and_single_point_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "grid.toml", "experiment = \"feedback\"\nseed = 0\n[grid]\nprior = [0.3, 0.5]\nepsilon = [0.0, 0.1, 0.25]\n");
    let out = demon(&["sweep", "--config", &grid]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv_column(&doc, "epsilon").len(), 6);
    let floats = |c: &str| csv_column(&doc, c).iter().map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>();
    assert_eq!(floats("epsilon"), [0.0, 0.0, 0.1, 0.1, 0.25, 0.25]);
    assert_eq!(floats("prior"), [0.3, 0.5, 0.3, 0.5, 0.3, 0.5]);

    let single = write(dir.path(), "one.toml", "experiment = \"szilard\"\nseed = 0\n[parameters]\nbeta_eps1 = 2.0\n");
    let s = String::from_utf8(demon(&["sweep", "--config", &single]).stdout).unwrap();
    let r = String::from_utf8(demon(&["run", "--config", &single]).stdout).unwrap();
    let body = |d: &str| d.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_eq!(body(&s), body(&r));
}

#[test]
fn oversized_grid_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let axis = format!("[{}]", vec!["0.5"; 1001].join(", "));
    let cfg = write(dir.path(), "big.toml", &format!("experiment = \"szilard\"\nseed = 0\n[grid]\nbeta_eps1 = {axis}\nwall_fraction = {axis}\n"));
    let out = demon(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_json(&out);
    assert_eq!(e["kind"], "grid");
    assert_eq!(e["size"], "1002001");
}

#[test]
fn verify_reports_named_criteria() {
    let ok = demon(&["verify", "--only", "feedback_ledger", "--only", "bound_calculators"]);
    assert!(ok.status.success());
    let text = String::from_utf8(ok.stdout.clone()).unwrap();
    assert!(text.contains("PASS feedback_ledger") && text.contains("PASS bound_calculators"), "{text}");

    let again = demon(&["verify", "--only", "feedback_ledger", "--only", "bound_calculators"]);
    let measured = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().map(|l| l.split_once("): ").map(|(_, m)| m.to_string()).unwrap_or_default()).collect::<Vec<_>>();
    assert_eq!(measured(&ok), measured(&again));

    let bad = demon(&["verify", "--only", "feedback_ledger", "--corrupt", "feedback_ledger"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL feedback_ledger"));
    assert_eq!(error_json(&bad)["failed"][0], "feedback_ledger");
}
