//! Scenario orchestration: builds the Hamiltonian and initial state from a
//! [`RunConfig`], propagates, samples observables and writes the output files.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use log::{info, warn};

use crate::bath::{CouplingNormalization, OhmicBath};
use crate::checkpoint;
use crate::config::{InitialState, PotentialKind, RunConfig, Scenario};
use crate::entanglement::{self, EntanglementSummary, PairEntanglementRecord};
use crate::error::{Error, Result};
use crate::grid::{displaced_gaussian, MorseParams, SpatialGrid, SystemModel, SystemPotential};
use crate::hamiltonian::{HamiltonianSpec, SpinorState};
use crate::observables::{
    coherence_norm, pointer_decomposition, reduce_system_density, CatStateBasis, ReducedDensityMatrix, TrajectoryRecord,
};
use crate::oracle::{self, VerifyRow};
use crate::output::{EntanglementWriter, PairWriter, TrajectoryWriter};
use crate::propagator::{
    displace, estimate_spectral_bounds, relax_with, ChebychevPlan, ChebychevWorkspace, RelaxOptions, Relaxed,
    EDGE_WARNING,
};
use crate::units::{au_to_fs, fs_to_au};

/// Largest amplitude deviation accepted by the `verify` scenario.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

/// Edge-abort threshold for the presets whose quench leaks a small
/// dissociative fraction.
pub const DISSOCIATIVE_EDGE_ABORT: f64 = 1e-4;

/// What a finished run produced.
#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    pub name: String,
    pub trajectory: Vec<TrajectoryRecord>,
    pub entanglement: Vec<(f64, EntanglementSummary)>,
    pub verification: Vec<VerifyRow>,
    /// Correlated ground-state energy, when one was computed.
    pub ground_energy: Option<f64>,
    pub final_state: Option<SpinorState<f64>>,
    pub files: Vec<PathBuf>,
}

/// The Hamiltonian described by `cfg`.
pub fn build_hamiltonian(cfg: &RunConfig) -> Result<HamiltonianSpec<f64>> {
    let grid = Arc::new(SpatialGrid::new(cfg.grid_r_min, cfg.grid_r_max, cfg.grid_points)?);
    let system = match cfg.potential {
        PotentialKind::Morse => SystemModel::morse(MorseParams::new(cfg.morse_depth, cfg.morse_alpha, cfg.mass)?),
        PotentialKind::Harmonic => {
            let mut s = SystemModel::harmonic(cfg.mass, cfg.harmonic_omega)?;
            s.potential = SystemPotential::Harmonic {
                omega: cfg.harmonic_omega,
                center: cfg.cat_center,
            };
            s
        }
    };
    let bath = OhmicBath::new(cfg.n_modes, cfg.omega_cutoff, cfg.gamma, cfg.mass, cfg.kappa)
        .with_sampling(cfg.frequency_sampling)
        .with_normalization(cfg.coupling_normalization)
        .sample()?;
    HamiltonianSpec::new(system, bath, cfg.n_exc, grid)
}

fn potential_minimum(cfg: &RunConfig) -> f64 {
    match cfg.potential {
        PotentialKind::Morse => 0.0,
        PotentialKind::Harmonic => cfg.cat_center,
    }
}

/// Harmonic-oscillator amplitude width at the bottom of the well.
fn ground_width(cfg: &RunConfig) -> f64 {
    let omega = match cfg.potential {
        PotentialKind::Morse => cfg.morse_alpha * (2.0 * cfg.morse_depth / cfg.mass).sqrt(),
        PotentialKind::Harmonic => cfg.harmonic_omega,
    };
    1.0 / (cfg.mass * omega).sqrt()
}

/// Imaginary-time ground state of the full system-bath Hamiltonian,
/// started from the local harmonic ground state ⊗ bath vacuum.
pub fn correlated_ground_state(cfg: &RunConfig, h: &HamiltonianSpec<f64>) -> Result<Relaxed<f64>> {
    let grid = h.grid().clone();
    let phi = displaced_gaussian(&grid, potential_minimum(cfg), ground_width(cfg))?;
    let guess = SpinorState::product(grid, h.space().clone(), &phi, 0)?;
    let started = Instant::now();
    let relaxed = relax_with(h, &guess, RelaxOptions::new(cfg.relax_tau, cfg.relax_tol))?;
    info!(
        "correlated ground state: E0 = {:.10e} a.u. after {} imaginary-time steps ({:.1?})",
        relaxed.energy,
        relaxed.iterations,
        started.elapsed()
    );
    Ok(relaxed)
}

fn cat_basis(cfg: &RunConfig) -> Result<CatStateBasis<f64>> {
    CatStateBasis::new(cfg.mass, cfg.harmonic_omega, cfg.cat_center, cfg.cat_delta, cfg.cat_p0)
}

/// Initial spinor for the run, plus the correlated ground state if one was computed.
pub fn initial_state(cfg: &RunConfig, h: &HamiltonianSpec<f64>) -> Result<(SpinorState<f64>, Option<Relaxed<f64>>)> {
    let grid = h.grid().clone();
    let space = h.space().clone();
    match cfg.initial_state {
        InitialState::DisplacedGaussian => {
            let phi = displaced_gaussian(&grid, cfg.displacement, cfg.packet_width)?;
            Ok((SpinorState::product(grid, space, &phi, 0)?, None))
        }
        InitialState::CorrelatedGround => {
            let ground = correlated_ground_state(cfg, h)?;
            let start = displace(&ground.state, cfg.displacement - potential_minimum(cfg));
            Ok((start, Some(ground)))
        }
        InitialState::CatState => {
            let phi = cat_basis(cfg)?.cat_state(&grid)?;
            Ok((SpinorState::product(grid, space, &phi, 0)?, None))
        }
    }
}

struct Sinks {
    trajectory: Option<TrajectoryWriter>,
    entanglement: Option<EntanglementWriter>,
    pairs: Option<PairWriter>,
}

impl Sinks {
    fn none() -> Self {
        Sinks {
            trajectory: None,
            entanglement: None,
            pairs: None,
        }
    }
}

fn output_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}.{suffix}"))
}

/// Runs the scenario. With `out = Some(dir)` the manifest and CSV files are
/// written there (falling back to `cfg.output_dir`); with neither, the
/// results are only returned.
pub fn run_scenario(cfg: &RunConfig, out: Option<&Path>) -> Result<RunSummary> {
    cfg.validate()?;
    let out_dir = out.map(Path::to_path_buf).or_else(|| cfg.output_dir.clone());
    let mut summary = RunSummary {
        name: cfg.name.clone(),
        ..Default::default()
    };
    if let Some(dir) = &out_dir {
        std::fs::create_dir_all(dir)?;
        let manifest = output_path(dir, &cfg.name, "manifest");
        std::fs::write(&manifest, cfg.to_manifest())?;
        summary.files.push(manifest);
    }
    if cfg.scenario == Scenario::Verify {
        run_verify(cfg, out_dir.as_deref(), &mut summary)?;
        return Ok(summary);
    }
    let started = Instant::now();
    let result = run_dynamics(cfg, out_dir.as_deref(), &mut summary);
    info!("{}: finished in {:.1?}", cfg.name, started.elapsed());
    result.map(|_| summary)
}

fn run_verify(cfg: &RunConfig, out_dir: Option<&Path>, summary: &mut RunSummary) -> Result<()> {
    let rows = oracle::verify_all(cfg.n_modes)?;
    if let Some(dir) = out_dir {
        let path = output_path(dir, &cfg.name, "verify.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record([
            "n_modes",
            "n_points",
            "gamma_inv_fs",
            "max_amplitude_error",
            "max_matrix_error",
        ])?;
        for r in &rows {
            w.write_record([
                r.n_modes.to_string(),
                r.n_points.to_string(),
                r.gamma_inv_fs.to_string(),
                format!("{:e}", r.max_amplitude_error),
                format!("{:e}", r.max_matrix_error),
            ])?;
        }
        w.flush()?;
        summary.files.push(path);
    }
    let worst = rows.iter().map(|r| r.max_amplitude_error).fold(0.0, f64::max);
    summary.verification = rows;
    if !(worst < VERIFY_TOLERANCE) {
        return Err(Error::Verification(format!(
            "max amplitude deviation {worst:e} exceeds {VERIFY_TOLERANCE:e}"
        )));
    }
    Ok(())
}

fn run_dynamics(cfg: &RunConfig, out_dir: Option<&Path>, summary: &mut RunSummary) -> Result<()> {
    let h = build_hamiltonian(cfg)?;
    info!(
        "{}: {} modes, N_exc = {}, {} configurations x {} points = {} amplitudes",
        cfg.name,
        cfg.n_modes,
        cfg.n_exc,
        h.space().dim(),
        cfg.grid_points,
        h.len()
    );
    let (mut psi, ground) = initial_state(cfg, &h)?;
    summary.ground_energy = ground.as_ref().map(|g| g.energy);

    let cat = if cfg.initial_state == InitialState::CatState {
        Some(cat_basis(cfg)?)
    } else {
        None
    };
    // equilibrium reference for the pointer-state decomposition
    let rho_eq: Option<ReducedDensityMatrix<f64>> = if cfg.pointer_basis {
        let g = match ground {
            Some(g) => g,
            None => correlated_ground_state(cfg, &h)?,
        };
        Some(reduce_system_density(&g.state))
    } else {
        None
    };

    let mut sinks = Sinks::none();
    if let Some(dir) = out_dir {
        let path = output_path(dir, &cfg.name, "trajectory.csv");
        sinks.trajectory = Some(TrajectoryWriter::create(&path, cfg.n_modes, cat.is_some())?);
        summary.files.push(path);
        if cfg.entanglement {
            let path = output_path(dir, &cfg.name, "entanglement.csv");
            sinks.entanglement = Some(EntanglementWriter::create(&path)?);
            summary.files.push(path);
            if cfg.pair_output {
                let path = output_path(dir, &cfg.name, "pairs.csv");
                sinks.pairs = Some(PairWriter::create(&path)?);
                summary.files.push(path);
            }
        }
    }

    let plan = ChebychevPlan::real_time(estimate_spectral_bounds(&h), cfg.dt, cfg.chebychev_tol)?;
    info!(
        "{}: dt = {:.3} fs, {} Chebychev terms per step, {} steps",
        cfg.name,
        au_to_fs(cfg.dt),
        plan.order(),
        cfg.n_steps()
    );
    let mut work = ChebychevWorkspace::new(h.len());
    let every = cfg.steps_per_sample();
    let n_steps = cfg.n_steps();

    let mut warned = false;
    let mut sample = |step: usize, psi: &SpinorState<f64>, summary: &mut RunSummary| -> Result<()> {
        let t = step as f64 * cfg.dt;
        let edge = psi.edge_population();
        if edge > cfg.edge_abort {
            return Err(Error::numerical(format!(
                "wavefunction reached the grid edge at t = {:.2} fs (edge probability {edge:e})",
                au_to_fs(t)
            )));
        }
        if edge > EDGE_WARNING && !warned {
            warned = true;
            warn!(
                "{}: edge probability {edge:e} at t = {:.2} fs (abort threshold {:e})",
                cfg.name,
                au_to_fs(t),
                cfg.edge_abort
            );
        }
        let mut rec = TrajectoryRecord::measure(&h, psi, t)?;
        if cat.is_some() || rho_eq.is_some() {
            let rho = reduce_system_density(psi);
            if let Some(basis) = &cat {
                rec.n_coh = Some(coherence_norm(&rho, h.grid(), basis, t)?);
            }
            if let Some(eq) = &rho_eq {
                let (c2, coh2) = pointer_decomposition(&rho, eq)?;
                rec.c2 = Some(c2);
                rec.tr_rho_coh2 = Some(coh2);
            }
        }
        if let Some(w) = sinks.trajectory.as_mut() {
            w.write(&rec)?;
        }
        if cfg.entanglement {
            let pairs: Vec<PairEntanglementRecord> = entanglement::pair_records(psi);
            let s = entanglement::summarize(&pairs);
            if let Some(w) = sinks.entanglement.as_mut() {
                w.write(rec.time_fs, &s)?;
            }
            if let Some(w) = sinks.pairs.as_mut() {
                w.write(rec.time_fs, &pairs)?;
            }
            summary.entanglement.push((rec.time_fs, s));
        }
        summary.trajectory.push(rec);
        Ok(())
    };

    sample(0, &psi, summary)?;
    for step in 1..=n_steps {
        plan.step(&h, &mut psi, &mut work).map_err(|e| {
            warn!("{}: aborting at step {step}: {e}", cfg.name);
            e
        })?;
        if step % every == 0 || step == n_steps {
            sample(step, &psi, summary)?;
        }
    }
    if cfg.checkpoint {
        if let Some(dir) = out_dir {
            let path = output_path(dir, &cfg.name, "state.bin");
            checkpoint::save(&path, &psi, n_steps as f64 * cfg.dt)?;
            summary.files.push(path);
        }
    }
    summary.final_state = Some(psi);
    Ok(())
}

fn preset(
    name: &str,
    scenario: Scenario,
    gamma_inv_fs: f64,
    n_modes: usize,
    n_exc: usize,
    t_final_fs: f64,
) -> RunConfig {
    let mut text = format!(
        "name = {name}\nscenario = {}\ngamma_inv = {gamma_inv_fs} fs\nn_modes = {n_modes}\nn_exc = {n_exc}\nt_final = {t_final_fs} fs\n",
        scenario.tag()
    );
    if scenario == Scenario::CatState {
        text.push_str("potential = harmonic\nharmonic_omega = 1e-3 au\n");
    }
    RunConfig::parse(&text).expect("preset text is valid")
}

/// The named presets, grouped by scenario.
pub fn predefined_configs() -> Vec<RunConfig> {
    let mut out = vec![
        preset("weak", Scenario::Relax, 1630.0, 60, 2, 2000.0),
        preset("medium", Scenario::Relax, 163.0, 40, 2, 900.0),
        preset("strong", Scenario::Relax, 54.0, 20, 5, 500.0),
    ];
    // the coupling quench puts ~1e-4 of the packet above the dissociation
    // threshold at gamma^-1 <= 163 fs; it wraps around the periodic grid
    // without affecting norm or energy, so only a larger spill aborts
    for c in out.iter_mut().skip(1) {
        c.edge_abort = DISSOCIATIVE_EDGE_ABORT;
    }
    let mut kappa = preset("weak-kappa", Scenario::Relax, 1630.0, 60, 2, 3500.0);
    kappa.kappa = 1.5e-4;
    out.push(kappa);
    for g in [1630.0, 500.0] {
        let mut c = preset(&format!("catstate-{g}"), Scenario::CatState, g, 60, 2, 300.0);
        c.displacement = 0.0;
        // γ is read as the friction coefficient of the decoherence estimate
        c.coupling_normalization = CouplingNormalization::CaldeiraLeggett;
        out.push(c);
    }
    for g in [1630.0, 500.0, 163.0] {
        let mut c = preset(&format!("entangle-{g}"), Scenario::Entangle, g, 40, 2, 900.0);
        c.cadence = fs_to_au(5.0);
        if g <= 163.0 {
            c.edge_abort = DISSOCIATIVE_EDGE_ABORT;
        }
        out.push(c);
    }
    out
}

/// Looks up a preset by name.
pub fn preset_named(name: &str) -> Result<RunConfig> {
    predefined_configs()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::config(format!("no preset named `{name}`")))
}
