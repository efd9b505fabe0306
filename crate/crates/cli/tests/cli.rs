//! Drives the `kerr-stokes` binary end to end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kerr-stokes"))
}

fn reference() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("reference.toml")
}

fn exec(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().rev().find(|l| l.starts_with('{')).expect("json error on stderr");
    serde_json::from_str(line).unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("scenario.toml");
    fs::write(&path, body).unwrap();
    path
}

const BS_CONFIG: &str = r#"
kind = "bs_interf"
stokes_index = "S2"
optimize_at = 0.0
[pulse1]
n0 = 1.0
gamma = 0.5
[pulse2]
n0 = 1.0
gamma = 0.5
[pulse3]
n0 = 1.0
gamma = 0.0
[beam_splitter]
r = 0.6
t = 0.6
"#;

#[test]
fn run_reference_to_stdout() {
    let out = exec(&["run", "--config", reference().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,s_value,s_star"));
    assert_eq!(lines.count(), 512);
    assert!(!text.contains('\r'));
}

#[test]
fn run_csv_writes_meta_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spectrum.csv");
    let out = exec(&["run", "--config", reference().to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(csv.exists());
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["kind"], "coh_sq");
}

#[test]
fn run_json_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = exec(&[
        "run",
        "--config",
        reference().to_str().unwrap(),
        "--format",
        "json",
        "--grid",
        "0:2:5",
        "--optimize-at",
        "1.0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    let omega = v["spectrum"]["omega_grid"].as_array().unwrap();
    assert_eq!(omega.len(), 5);
    assert_eq!(omega[4].as_f64(), Some(2.0));
    assert_eq!(v["optimum"]["omega0"].as_f64(), Some(1.0));
}

#[test]
fn usage_and_parse_errors_exit_1() {
    assert_eq!(code(&exec(&["run"])), 1);
    assert_eq!(code(&exec(&["bogus"])), 1);
    assert_eq!(code(&exec(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "kind = \"coh_sq\"\nunknown_key = 3\n");
    let out = exec(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stderr_json(&out)["exit_code"], 1);
}

#[test]
fn validation_error_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BS_CONFIG);
    let out = exec(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr_json(&out);
    let issues = err["issues"].as_array().unwrap();
    assert!(issues.iter().any(|i| i["path"].as_str().unwrap().starts_with("beam_splitter")), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_figure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = exec(&["figure", "--figure-id", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn io_errors_exit_3() {
    let out = exec(&["run", "--config", "/nonexistent/scenario.toml"]);
    assert_eq!(code(&out), 3);
    assert!(stderr_json(&out)["path"].as_str().unwrap().contains("nonexistent"));

    let out = exec(&["run", "--config", reference().to_str().unwrap(), "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn figure_series_are_complete_and_reproducible() {
    for (id, curves) in [(1, 4), (6, 6), (12, 4)] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for dir in [&a, &b] {
            let out = exec(&["figure", "--figure-id", &id.to_string(), "--out", dir.path().to_str().unwrap(), "--grid", "0:5:64"]);
            assert_eq!(code(&out), 0);
        }
        let mut names: Vec<_> = fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".csv") && !n.ends_with(".meta.json"))
            .collect();
        names.sort();
        assert_eq!(names.len(), curves, "figure {id}: {names:?}");
        for n in &names {
            assert!(n.starts_with(&format!("fig{id}_")));
            let x = fs::read(a.path().join(n)).unwrap();
            assert_eq!(x, fs::read(b.path().join(n)).unwrap(), "{n} differs between runs");
            assert_eq!(String::from_utf8(x).unwrap().lines().count(), 65);
        }
    }
}

#[test]
fn verify_passes_and_detects_fault() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = exec(&["verify", "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = fs::read_to_string(&report).unwrap();
    let checks = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count();
    assert!(checks >= 20);
    assert!(!text.contains("FAIL"));

    let out = exec(&["verify", "--inject-tau-r-fault", "1.1"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
