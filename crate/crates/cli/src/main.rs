use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};
use rayon::prelude::*;

use surrogate::config::{RunConfig, Scenario};
use surrogate::scenario::{self, predefined_configs, preset_named, run_scenario};
use surrogate::Error;

#[derive(Parser)]
#[command(
    name = "surrogate",
    version,
    about = "Morse oscillator in a spin bath: surrogate-Hamiltonian dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration file.
    Simulate {
        config: PathBuf,
        /// Output directory (overrides `output_dir` in the file).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Force deterministic mode.
        #[arg(long)]
        deterministic: bool,
    },
    /// Cross-check the engine against dense diagonalization for N = 1..=max-n.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Run every configuration matching a glob pattern, in parallel.
    Sweep {
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or print the built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset as a config file.
    Dump {
        name: String,
    },
}

fn fail(e: &Error) -> ExitCode {
    error!("{e}");
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn simulate(path: &Path, out: Option<&Path>, deterministic: bool) -> Result<(), Error> {
    let mut cfg = RunConfig::load(path)?;
    cfg.deterministic |= deterministic;
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| ".".into());
    let summary = run_scenario(&cfg, Some(&out))?;
    for f in &summary.files {
        println!("{}", f.display());
    }
    if cfg.scenario == Scenario::Verify {
        print_verification(&summary.verification);
    }
    Ok(())
}

fn print_verification(rows: &[surrogate::oracle::VerifyRow]) {
    println!("n_modes n_points gamma_inv_fs max_amplitude_error max_matrix_error");
    for r in rows {
        println!(
            "{:7} {:8} {:12} {:19.3e} {:16.3e}",
            r.n_modes, r.n_points, r.gamma_inv_fs, r.max_amplitude_error, r.max_matrix_error
        );
    }
    let worst = rows.iter().map(|r| r.max_amplitude_error).fold(0.0, f64::max);
    println!("max oracle deviation {worst:.3e}");
}

fn verify(max_n: usize) -> Result<(), Error> {
    let rows = surrogate::oracle::verify_all(max_n)?;
    print_verification(&rows);
    let worst = rows.iter().map(|r| r.max_amplitude_error).fold(0.0, f64::max);
    if !(worst < scenario::VERIFY_TOLERANCE) {
        return Err(Error::Verification(format!(
            "max amplitude deviation {worst:e} exceeds {:e}",
            scenario::VERIFY_TOLERANCE
        )));
    }
    Ok(())
}

fn sweep(pattern: &str, out: Option<&Path>) -> Result<(), Error> {
    let paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| Error::Config(format!("bad glob `{pattern}`: {e}")))?
        .filter_map(|p| p.ok())
        .collect();
    if paths.is_empty() {
        return Err(Error::Config(format!("no configuration files match `{pattern}`")));
    }
    // load everything first so a typo fails before any work starts
    let configs = paths
        .iter()
        .map(|p| RunConfig::load(p))
        .collect::<Result<Vec<_>, _>>()?;
    let results: Vec<(String, Result<(), Error>)> = configs
        .par_iter()
        .map(|cfg| {
            let dir = out
                .map(Path::to_path_buf)
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| ".".into());
            (cfg.name.clone(), run_scenario(cfg, Some(&dir)).map(|_| ()))
        })
        .collect();
    let mut first_err = None;
    for (name, r) in results {
        match r {
            Ok(()) => println!("{name}: ok"),
            Err(e) => {
                println!("{name}: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn presets(action: PresetAction) -> Result<(), Error> {
    match action {
        PresetAction::List => {
            for c in predefined_configs() {
                println!(
                    "{:15} {:10} N={:2} N_exc={} gamma_inv={:.0} fs",
                    c.name,
                    c.scenario.tag(),
                    c.n_modes,
                    c.n_exc,
                    surrogate::units::au_to_fs(1.0 / c.gamma)
                );
            }
        }
        PresetAction::Dump { name } => print!("{}", preset_named(&name)?.to_manifest()),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            out,
            deterministic,
        } => simulate(&config, out.as_deref(), deterministic),
        Command::Verify { max_n } => verify(max_n),
        Command::Sweep { pattern, out } => sweep(&pattern, out.as_deref()),
        Command::Presets { action } => presets(action),
    };
    match result {
        Ok(()) => {
            info!("done");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
