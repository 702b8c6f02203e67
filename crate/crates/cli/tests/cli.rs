use std::fs;
use std::process::{Command, Output};

fn surrogate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surrogate"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

const TINY: &str = "
scenario = relax
n_modes = 3
n_exc = 2
gamma_inv = 163 fs
grid_points = 32
t_final = 5 fs
";

#[test]
fn presets_list_and_dump() {
    let out = surrogate(&["presets", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "weak",
        "medium",
        "strong",
        "weak-kappa",
        "catstate-1630",
        "catstate-500",
        "entangle-1630",
        "entangle-500",
        "entangle-163",
    ] {
        assert!(
            text.lines().any(|l| l.split_whitespace().next() == Some(name)),
            "{name}"
        );
    }
    let out = surrogate(&["presets", "dump", "strong"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n_modes = 20") && text.contains("n_exc = 5"));
    assert_eq!(surrogate(&["presets", "dump", "bogus"]).status.code(), Some(1));
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.cfg");
    fs::write(&cfg, format!("name = tiny\n{TINY}")).unwrap();
    let out_dir = dir.path().join("out");
    let out = surrogate(&[
        "simulate",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--deterministic",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = fs::read_to_string(out_dir.join("tiny.manifest")).unwrap();
    assert!(manifest.contains("deterministic = true"));
    let csv = fs::read_to_string(out_dir.join("tiny.trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "scenario = relax\ngamma_inv = 1630\n").unwrap();
    assert_eq!(surrogate(&["simulate", bad.to_str().unwrap()]).status.code(), Some(1));

    let typo = dir.path().join("typo.cfg");
    fs::write(&typo, format!("{TINY}n_mode = 3\n")).unwrap();
    assert_eq!(surrogate(&["simulate", typo.to_str().unwrap()]).status.code(), Some(1));

    let edge = dir.path().join("edge.cfg");
    fs::write(
        &edge,
        "scenario = relax\nn_modes = 2\nn_exc = 1\ngamma_inv = 1630 fs\ngrid_r_min = -0.2 au\ngrid_r_max = 0.6 au\ngrid_points = 32\nt_final = 100 fs\n",
    )
    .unwrap();
    let out_dir = dir.path().join("edge-out");
    let out = surrogate(&["simulate", edge.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out_dir.join("relax.trajectory.csv").exists());

    assert_eq!(surrogate(&["simulate", "/nonexistent/x.cfg"]).status.code(), Some(1));
}

#[test]
fn verify_small() {
    let out = surrogate(&["verify", "--max-n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("max oracle deviation"));
    assert_eq!(
        text.lines().filter(|l| l.trim_start().starts_with(['1', '2'])).count(),
        12
    );
}

#[test]
fn sweep_runs_every_match() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        fs::write(dir.path().join(format!("{name}.cfg")), format!("name = {name}\n{TINY}")).unwrap();
    }
    let pattern = format!("{}/*.cfg", dir.path().display());
    let out_dir = dir.path().join("out");
    let out = surrogate(&["sweep", &pattern, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("a.trajectory.csv").exists());
    assert!(out_dir.join("b.trajectory.csv").exists());
    let none = surrogate(&["sweep", &format!("{}/*.nothing", dir.path().display())]);
    assert_eq!(none.status.code(), Some(1));
}
