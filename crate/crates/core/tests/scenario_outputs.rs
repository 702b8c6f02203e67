use std::fs;

use surrogate::checkpoint;
use surrogate::config::RunConfig;
use surrogate::output::read_table;
use surrogate::scenario::{predefined_configs, run_scenario};

const SMALL: &str = "
name = small
scenario = entangle
n_modes = 4
n_exc = 2
gamma_inv = 163 fs
grid_points = 32
t_final = 20 fs
cadence = 2 fs
pair_output = true
checkpoint = true
deterministic = true
";

#[test]
fn manifest_rerun_is_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(SMALL).unwrap();
    run_scenario(&cfg, Some(a.path())).unwrap();
    let reloaded = RunConfig::load(&a.path().join("small.manifest")).unwrap();
    assert_eq!(reloaded, cfg);
    run_scenario(&reloaded, Some(b.path())).unwrap();
    for file in [
        "small.trajectory.csv",
        "small.entanglement.csv",
        "small.pairs.csv",
        "small.manifest",
        "small.state.bin",
    ] {
        let x = fs::read(a.path().join(file)).unwrap();
        let y = fs::read(b.path().join(file)).unwrap();
        assert!(x == y, "{file} differs between runs");
    }
}

#[test]
fn outputs_follow_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(SMALL).unwrap();
    let summary = run_scenario(&cfg, Some(dir.path())).unwrap();

    let (header, rows) = read_table(&dir.path().join("small.trajectory.csv")).unwrap();
    assert_eq!(
        header,
        [
            "time_fs",
            "mean_R_au",
            "E_bare_au",
            "E_eff_au",
            "norm",
            "pop_0",
            "pop_1",
            "pop_2",
            "pop_3"
        ]
    );
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10][0], 20.0);

    let (header, rows) = read_table(&dir.path().join("small.entanglement.csv")).unwrap();
    assert_eq!(
        header,
        [
            "time_fs",
            "mean_lambda0",
            "entangled_fraction",
            "mean_eof",
            "mean_lambda0_all_pairs"
        ]
    );
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][2], 0.0);

    let (header, rows) = read_table(&dir.path().join("small.pairs.csv")).unwrap();
    assert_eq!(header, ["time_fs", "i", "j", "lambda0", "W1", "W2", "C", "E"]);
    assert_eq!(rows.len(), 11 * 6);

    let (state, t) = checkpoint::load(&dir.path().join("small.state.bin")).unwrap();
    let last = summary.final_state.unwrap();
    assert_eq!(state.amplitudes(), last.amplitudes());
    assert_eq!(t, cfg.t_final);
}

#[test]
fn cat_state_columns() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = predefined_configs()
        .into_iter()
        .find(|c| c.name == "catstate-1630")
        .unwrap();
    cfg.n_modes = 4;
    cfg.t_final = cfg.dt * 4.0;
    cfg.cadence = cfg.dt * 2.0;
    run_scenario(&cfg, Some(dir.path())).unwrap();
    let (header, rows) = read_table(&dir.path().join("catstate-1630.trajectory.csv")).unwrap();
    assert_eq!(&header[header.len() - 3..], ["n_coh", "C2", "tr_rho_coh2"]);
    assert!((rows[0][header.len() - 3] - 0.5).abs() < 1e-8);
    assert_eq!(rows.len(), 3);
}

#[test]
fn edge_failure_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    // the inner turning point (about −0.15) lies next to the left edge
    let cfg = RunConfig::parse(
        "name = edge\nscenario = relax\nn_modes = 2\nn_exc = 1\ngamma_inv = 1630 fs\n\
         grid_r_min = -0.2 au\ngrid_r_max = 0.6 au\ngrid_points = 32\nt_final = 100 fs\n",
    )
    .unwrap();
    let err = run_scenario(&cfg, Some(dir.path())).unwrap_err();
    assert_eq!(err.exit_code(), 2, "{err}");
    let (_, rows) = read_table(&dir.path().join("edge.trajectory.csv")).unwrap();
    assert!(!rows.is_empty() && rows.len() < 101);
}

#[test]
fn correlated_start_is_displaced_ground_state() {
    let cfg = RunConfig::parse(
        "scenario = correlated\nn_modes = 4\nn_exc = 2\ngamma_inv = 163 fs\ngrid_points = 32\nt_final = 5 fs",
    )
    .unwrap();
    let s = run_scenario(&cfg, None).unwrap();
    let e0 = s.ground_energy.unwrap();
    // the bare Morse ground level is −D + Ω/2 − Ω²/(16D)·… ≈ −0.01741
    assert!(e0 < -0.0174 && e0 > -0.0180, "{e0}");
    let first = &s.trajectory[0];
    // the anharmonic ground state sits a little outside the minimum
    let offset = first.mean_r - cfg.displacement;
    assert!(offset > 0.0 && offset < 0.03, "{offset}");
    assert!(first.populations.iter().all(|&p| p > 0.0));
}
