use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn specavg(args: &[&str], env_root: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_specavg"));
    cmd.args(args).env_remove("SPECAVG_OUTPUT_ROOT");
    if let Some(root) = env_root {
        cmd.env("SPECAVG_OUTPUT_ROOT", root);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const TWO_FIBERS: &str = r#"
schema_version = 1
kind = "direct-integral"
f = [1.0]
intervals = [[-0.5, 0.5]]

[family]
source = "diagonal"
fibers = [[0.0], [1.0]]
weights = [0.7071067811865476, 0.7071067811865476]
"#;

#[test]
fn passing_run_exits_zero_and_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "fibers.toml", TWO_FIBERS);
    let out = tmp.path().join("out");
    let o = specavg(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["experiment"], "direct-integral");
    let checks = std::fs::read_to_string(out.join("checks.jsonl")).unwrap();
    let first: serde_json::Value = serde_json::from_str(checks.lines().next().unwrap()).unwrap();
    assert!(first["discrepancy"].as_f64().unwrap() <= 1e-12);
    assert!(out.join("direct_integral.csv").exists());
}

#[test]
fn missing_seed_and_malformed_configs_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let ids = write_config(
        tmp.path(),
        "ids.toml",
        "schema_version = 1\nkind = \"ids\"\n[model]\ncells = 2\nmesh = 4\nu = \"indicator\"\nlaw = { kind = \"uniform\", a = 0.0, b = 1.0 }\n",
    );
    let out = tmp.path().join("never");
    let o = specavg(&["run", ids.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(specavg(&["validate", ids.to_str().unwrap()], None).status.code(), Some(2));
    assert_eq!(specavg(&["validate", ids.to_str().unwrap(), "--seed", "3"], None).status.code(), Some(0));

    let bad = write_config(tmp.path(), "bad.toml", "schema_version = 1\nkind = \"plot\"\n");
    assert_eq!(specavg(&["validate", bad.to_str().unwrap()], None).status.code(), Some(2));
    let garbage = write_config(tmp.path(), "garbage.toml", "this is = = not toml");
    assert_eq!(specavg(&["run", garbage.to_str().unwrap()], None).status.code(), Some(2));
    let missing = tmp.path().join("nope.toml");
    assert_eq!(specavg(&["run", missing.to_str().unwrap()], None).status.code(), Some(2));
    let grid = write_config(tmp.path(), "grid.toml", "schema_version = 1\nkind = \"commutator\"\nn = 48\nl = 5.0\n");
    let o = specavg(&["run", grid.to_str().unwrap(), "--out", tmp.path().join("g").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let files = write_config(
        tmp.path(),
        "files.toml",
        "schema_version = 1\nkind = \"cyclicity\"\n[pair]\nsource = \"files\"\na = \"a.txt\"\nb = \"b.txt\"\n",
    );
    let o = specavg(&["run", files.to_str().unwrap(), "--out", tmp.path().join("f").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_check_exits_four() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cyc.toml",
        "schema_version = 1\nkind = \"cyclicity\"\nexpect = 2\n[pair]\nsource = \"diagonal\"\na = [1.0, 1.0]\nb = [1.0, 0.0]\n",
    );
    let o = specavg(&["run", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL cyclicity-rank"));
}

#[test]
fn matrix_files_resolve_relative_to_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("a.txt"), "3\n1,0 0,0 0,0\n0,0 2,0 0,0\n0,0 0,0 3,0\n").unwrap();
    let third = 1.0 / 3.0;
    let row = format!("{third},0 {third},0 {third},0\n");
    std::fs::write(tmp.path().join("b.txt"), format!("3\n{row}{row}{row}")).unwrap();
    let cfg = write_config(
        tmp.path(),
        "cyc.toml",
        "schema_version = 1\nkind = \"cyclicity\"\nexpect = 3\n[pair]\nsource = \"files\"\na = \"a.txt\"\nb = \"b.txt\"\n",
    );
    let o = specavg(&["run", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_root_from_environment_only_without_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "fibers.toml", TWO_FIBERS);
    let root = tmp.path().join("root");
    let o = specavg(&["run", cfg.to_str().unwrap()], Some(&root));
    assert_eq!(o.status.code(), Some(0));
    assert!(root.join("specavg-out/fibers/report.json").exists());

    let flag = tmp.path().join("flag");
    let o = specavg(&["run", cfg.to_str().unwrap(), "--out", flag.to_str().unwrap()], Some(&root));
    assert_eq!(o.status.code(), Some(0));
    assert!(flag.join("report.json").exists());
}

#[test]
fn seeded_runs_are_byte_identical_and_seed_flag_matters() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "ids.toml",
        "schema_version = 1\nkind = \"ids\"\nseed = 4\nsamples = 20\nbins = 50\n[model]\ncells = 4\nmesh = 4\nu = \"indicator\"\nlaw = { kind = \"uniform\", a = 0.0, b = 1.0 }\n",
    );
    let run = |name: &str, extra: &[&str]| {
        let dir = tmp.path().join(name);
        let mut args = vec!["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(specavg(&args, None).status.code(), Some(0));
        std::fs::read(dir.join("ids.csv")).unwrap()
    };
    let a = run("a", &[]);
    assert_eq!(a, run("b", &[]));
    assert_eq!(a, run("c", &["--seed", "4"]));
    assert_ne!(a, run("d", &["--seed", "5"]));
}

#[test]
fn list_prints_the_catalog() {
    let o = specavg(&["list"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let entries: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(entries.len(), 9);
    assert!(text.contains("average → Theorem 1"));
    assert!(text.contains("commutator → Howland Lemma 2.9"));
}
