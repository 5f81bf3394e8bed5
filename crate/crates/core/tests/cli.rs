use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_idle-space"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("IDLE_SPACE_OUT").output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn version_prints_package_version() {
    let o = run(&["version"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn unknown_experiment_exits_2() {
    let o = run(&["experiment", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.starts_with("error: "));
    assert!(e.contains("power_sweep") && e.contains("csi_sweep"));
}

#[test]
fn bad_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "experiment = power_sweep\nbogus_key = 1\n").unwrap();
    let o = run(&["validate-config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error: config: "));
    let o = run(&["run", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_override_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for set in ["k=-3", "nosuchkey=1", "trials"] {
        let o = run(&["experiment", "power_sweep", "--trials", "1", "--out", out, "--set", set]);
        assert_eq!(o.status.code(), Some(4), "{set}");
        assert!(stderr(&o).starts_with("error: override: "));
    }
    let o = run(&["experiment", "power_sweep", "--seed", "1", "--set", "master_seed=2", "--out", out]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn validate_config_prints_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ok.cfg");
    fs::write(&path, "# comment\nexperiment = qos_sweep\ntrials = 5\n").unwrap();
    let o = run(&["validate-config", path.to_str().unwrap(), "--set", "k=16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("experiment = qos_sweep"));
    assert!(text.contains("trials = 5"));
    assert!(text.contains("k = 16"));
}

#[test]
fn run_writes_trial_and_summary_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "experiment = csi_sweep\nswept_values = 0, 0.1\ntrials = 2\nk = 8\n").unwrap();
    let o = run(&["run", cfg.to_str().unwrap(), "--workers", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let trials = fs::read_to_string(dir.path().join("csi_sweep.csv")).unwrap();
    assert_eq!(trials.lines().filter(|l| !l.starts_with('#')).count(), 1 + 3 * 2 * 2);
    assert!(dir.path().join("csi_sweep_summary.csv").exists());
}

#[test]
fn convergence_experiment_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["experiment", "convergence", "--trials", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["convergence.csv", "convergence_summary.csv", "convergence_trace.csv", "convergence_trace_summary.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn output_directory_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["experiment", "qos_sweep", "--trials", "1", "--set", "k=8"])
        .env("IDLE_SPACE_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("qos_sweep.csv").exists());
}

#[test]
fn sweep_options_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["experiment", "power_sweep", "--trials", "1", "--seed", "7", "--qos-mode", "literal", "--sinr-formula", "literal", "--set", "k=8", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("power_sweep.csv")).unwrap();
    for line in ["# master_seed = 7", "# qos_mode = literal", "# sinr_formula = literal", "# trials = 1", "# k = 8"] {
        assert!(text.lines().any(|l| l == line), "{line}");
    }
}

#[test]
fn malformed_command_line_exits_2() {
    let o = run(&["experiment"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["experiment", "power_sweep", "--trials", "many"]);
    assert_eq!(o.status.code(), Some(2));
}
