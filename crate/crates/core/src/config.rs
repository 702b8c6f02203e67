//! Run configuration: a flat `key = value [unit]` text format.
//!
//! Physical quantities must carry a unit (`1630 fs`, `0.018 au`, `1.5 ps`);
//! the loader converts everything to atomic units. Unknown keys, missing
//! units and duplicate keys are configuration errors. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bath::{CouplingNormalization, FrequencySampling};
use crate::error::{Error, Result};
use crate::units::{fs_to_au, AMU_ME, BOHR_ANGSTROM, HARTREE_CM, HARTREE_EV};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// Energy relaxation from a displaced wavepacket.
    Relax,
    /// Same, starting from the displaced correlated ground state.
    Correlated,
    /// Cat-state decoherence in a harmonic well.
    CatState,
    /// Relaxation with bath-pair entanglement tracking.
    Entangle,
    /// Oracle cross-check for N = 1..=n_modes.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    Morse,
    Harmonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    DisplacedGaussian,
    CorrelatedGround,
    CatState,
}

/// Everything a run needs, resolved to atomic units.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub scenario: Scenario,
    pub potential: PotentialKind,
    pub morse_depth: f64,
    pub morse_alpha: f64,
    pub mass: f64,
    pub harmonic_omega: f64,
    pub n_modes: usize,
    pub n_exc: usize,
    pub omega_cutoff: f64,
    /// Damping rate γ in a.u.
    pub gamma: f64,
    pub kappa: f64,
    pub frequency_sampling: FrequencySampling,
    pub coupling_normalization: CouplingNormalization,
    pub grid_r_min: f64,
    pub grid_r_max: f64,
    pub grid_points: usize,
    pub initial_state: InitialState,
    /// Shift applied to the initial packet or correlated ground state.
    pub displacement: f64,
    /// Amplitude width w of exp(−x²/(2w²)) for the displaced Gaussian.
    pub packet_width: f64,
    pub cat_center: f64,
    pub cat_delta: f64,
    pub cat_p0: f64,
    pub t_final: f64,
    pub dt: f64,
    pub cadence: f64,
    pub chebychev_tol: f64,
    /// Edge probability above which the run aborts.
    pub edge_abort: f64,
    pub relax_tau: f64,
    pub relax_tol: f64,
    pub entanglement: bool,
    pub pair_output: bool,
    pub pointer_basis: bool,
    pub deterministic: bool,
    pub seed: u64,
    pub checkpoint: bool,
    /// Not echoed into manifests; the command line decides where output goes.
    pub output_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Time,
    Energy,
    Length,
    InverseLength,
    Mass,
    Momentum,
    Rate,
    Count,
    Float,
    Bool,
    Text,
}

const KEYS: &[(&str, Kind)] = &[
    ("name", Kind::Text),
    ("scenario", Kind::Text),
    ("potential", Kind::Text),
    ("morse_depth", Kind::Energy),
    ("morse_alpha", Kind::InverseLength),
    ("mass", Kind::Mass),
    ("harmonic_omega", Kind::Energy),
    ("n_modes", Kind::Count),
    ("n_exc", Kind::Count),
    ("omega_cutoff", Kind::Energy),
    ("gamma_inv", Kind::Time),
    ("gamma", Kind::Rate),
    ("kappa", Kind::Energy),
    ("frequency_sampling", Kind::Text),
    ("coupling_normalization", Kind::Text),
    ("grid_r_min", Kind::Length),
    ("grid_r_max", Kind::Length),
    ("grid_points", Kind::Count),
    ("initial_state", Kind::Text),
    ("displacement", Kind::Length),
    ("packet_width", Kind::Length),
    ("cat_center", Kind::Length),
    ("cat_delta", Kind::Length),
    ("cat_p0", Kind::Momentum),
    ("t_final", Kind::Time),
    ("dt", Kind::Time),
    ("cadence", Kind::Time),
    ("chebychev_tol", Kind::Float),
    ("edge_abort", Kind::Float),
    ("relax_tau", Kind::Time),
    ("relax_tol", Kind::Energy),
    ("entanglement", Kind::Bool),
    ("pair_output", Kind::Bool),
    ("pointer_basis", Kind::Bool),
    ("deterministic", Kind::Bool),
    ("seed", Kind::Count),
    ("checkpoint", Kind::Bool),
    ("output_dir", Kind::Text),
];

/// Conversion factor to atomic units, or None if the unit does not fit.
fn unit_factor(kind: Kind, unit: &str) -> Option<f64> {
    let u = unit.to_ascii_lowercase();
    let au = matches!(u.as_str(), "au" | "a.u." | "a.u");
    match kind {
        Kind::Time => match u.as_str() {
            "fs" => Some(fs_to_au(1.0)),
            "ps" => Some(fs_to_au(1000.0)),
            _ if au => Some(1.0),
            _ => None,
        },
        Kind::Energy => match u.as_str() {
            "ev" => Some(1.0 / HARTREE_EV),
            "cm-1" | "cm^-1" => Some(1.0 / HARTREE_CM),
            "hartree" => Some(1.0),
            _ if au => Some(1.0),
            _ => None,
        },
        Kind::Length => match u.as_str() {
            "bohr" => Some(1.0),
            "angstrom" | "a" => Some(1.0 / BOHR_ANGSTROM),
            _ if au => Some(1.0),
            _ => None,
        },
        Kind::InverseLength => match u.as_str() {
            "1/bohr" => Some(1.0),
            "1/angstrom" => Some(BOHR_ANGSTROM),
            _ if au => Some(1.0),
            _ => None,
        },
        Kind::Mass => match u.as_str() {
            "amu" | "u" => Some(AMU_ME),
            "me" => Some(1.0),
            _ if au => Some(1.0),
            _ => None,
        },
        Kind::Momentum | Kind::Rate => au.then_some(1.0),
        _ => None,
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::config(format!("{key}: expected true/false, got `{v}`"))),
    }
}

/// Raw entries: key → (value text, unit text, line number).
type Entries = BTreeMap<String, (String, Option<String>, usize)>;

fn tokenize(text: &str) -> Result<Entries> {
    let mut out = Entries::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {line_no}: expected `key = value`")))?;
        let key = key.trim().to_string();
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(Error::config(format!("line {line_no}: unknown key `{key}`")));
        }
        let mut parts = value.split_whitespace();
        let v = parts
            .next()
            .ok_or_else(|| Error::config(format!("line {line_no}: `{key}` has no value")))?
            .to_string();
        let unit = parts.next().map(str::to_string);
        if let Some(extra) = parts.next() {
            return Err(Error::config(format!(
                "line {line_no}: unexpected `{extra}` after `{key}`"
            )));
        }
        if out.insert(key.clone(), (v, unit, line_no)).is_some() {
            return Err(Error::config(format!("line {line_no}: duplicate key `{key}`")));
        }
    }
    Ok(out)
}

struct Reader {
    entries: Entries,
}

impl Reader {
    fn kind(key: &str) -> Kind {
        KEYS.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, k)| *k)
            .expect("known key")
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn quantity(&self, key: &str) -> Result<Option<f64>> {
        let Some((v, unit, line)) = self.entries.get(key) else {
            return Ok(None);
        };
        let kind = Self::kind(key);
        let x: f64 = v
            .parse()
            .map_err(|_| Error::config(format!("line {line}: `{key}` needs a number, got `{v}`")))?;
        if !x.is_finite() {
            return Err(Error::config(format!("line {line}: `{key}` is not finite")));
        }
        let factor = match (kind, unit) {
            (Kind::Float, None) => 1.0,
            (Kind::Float, Some(u)) => {
                return Err(Error::config(format!(
                    "line {line}: `{key}` is dimensionless, got unit `{u}`"
                )))
            }
            (_, None) => {
                return Err(Error::config(format!("line {line}: `{key}` needs a unit")));
            }
            (_, Some(u)) => unit_factor(kind, u)
                .ok_or_else(|| Error::config(format!("line {line}: unit `{u}` does not fit `{key}`")))?,
        };
        Ok(Some(x * factor))
    }

    fn count(&self, key: &str) -> Result<Option<u64>> {
        let Some((v, unit, line)) = self.entries.get(key) else {
            return Ok(None);
        };
        if let Some(u) = unit {
            return Err(Error::config(format!("line {line}: `{key}` takes no unit, got `{u}`")));
        }
        v.parse()
            .map(Some)
            .map_err(|_| Error::config(format!("line {line}: `{key}` needs a non-negative integer, got `{v}`")))
    }

    fn text(&self, key: &str) -> Result<Option<String>> {
        let Some((v, unit, line)) = self.entries.get(key) else {
            return Ok(None);
        };
        if unit.is_some() {
            return Err(Error::config(format!("line {line}: `{key}` is a single word")));
        }
        Ok(Some(v.clone()))
    }

    fn flag(&self, key: &str) -> Result<Option<bool>> {
        match self.text(key)? {
            Some(v) => parse_bool(key, &v).map(Some),
            None => Ok(None),
        }
    }
}

impl Scenario {
    pub fn tag(&self) -> &'static str {
        match self {
            Scenario::Relax => "relax",
            Scenario::Correlated => "correlated",
            Scenario::CatState => "catstate",
            Scenario::Entangle => "entangle",
            Scenario::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "relax" => Scenario::Relax,
            "correlated" => Scenario::Correlated,
            "catstate" => Scenario::CatState,
            "entangle" => Scenario::Entangle,
            "verify" => Scenario::Verify,
            _ => return Err(Error::config(format!("unknown scenario `{s}`"))),
        })
    }
}

impl InitialState {
    pub fn tag(&self) -> &'static str {
        match self {
            InitialState::DisplacedGaussian => "displaced-gaussian",
            InitialState::CorrelatedGround => "correlated-ground",
            InitialState::CatState => "cat-state",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "displaced-gaussian" => InitialState::DisplacedGaussian,
            "correlated-ground" => InitialState::CorrelatedGround,
            "cat-state" => InitialState::CatState,
            _ => return Err(Error::config(format!("unknown initial_state `{s}`"))),
        })
    }
}

fn sampling_tag(s: FrequencySampling) -> &'static str {
    match s {
        FrequencySampling::UpperEdge => "upper-edge",
        FrequencySampling::Midpoint => "midpoint",
    }
}

fn normalization_tag(n: CouplingNormalization) -> &'static str {
    match n {
        CouplingNormalization::DensityOfStates => "density-of-states",
        CouplingNormalization::CaldeiraLeggett => "caldeira-leggett",
    }
}

impl RunConfig {
    /// Parses configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let r = Reader {
            entries: tokenize(text)?,
        };
        let scenario = Scenario::parse(
            &r.text("scenario")?
                .ok_or_else(|| Error::config("missing required key `scenario`"))?,
        )?;
        let potential = match r.text("potential")?.as_deref() {
            None | Some("morse") => PotentialKind::Morse,
            Some("harmonic") => PotentialKind::Harmonic,
            Some(p) => return Err(Error::config(format!("unknown potential `{p}`"))),
        };
        let gamma = match (r.quantity("gamma_inv")?, r.quantity("gamma")?) {
            (Some(inv), None) => {
                if !(inv > 0.0) {
                    return Err(Error::config("gamma_inv must be positive"));
                }
                1.0 / inv
            }
            (None, Some(g)) => g,
            _ => {
                return Err(Error::config(
                    "exactly one of `gamma_inv` (time) or `gamma` (a.u.) must be given",
                ))
            }
        };
        let morse_depth = r.quantity("morse_depth")?.unwrap_or(0.018);
        let morse_alpha = r.quantity("morse_alpha")?.unwrap_or(2.0);
        let mass = r.quantity("mass")?.unwrap_or(1e5);
        let harmonic_omega = r.quantity("harmonic_omega")?.unwrap_or(1e-3);
        let length_scale = match potential {
            PotentialKind::Morse => 1.0 / (mass * morse_alpha * (2.0 * morse_depth / mass).sqrt()).sqrt(),
            PotentialKind::Harmonic => 1.0 / (mass * harmonic_omega).sqrt(),
        };
        let (default_min, default_max) = match potential {
            PotentialKind::Morse => (-0.4, 1.2),
            PotentialKind::Harmonic => (-1.2, 1.2),
        };
        let default_initial = match scenario {
            Scenario::Correlated => InitialState::CorrelatedGround,
            Scenario::CatState => InitialState::CatState,
            _ => InitialState::DisplacedGaussian,
        };
        let initial_state = match r.text("initial_state")? {
            Some(s) => InitialState::parse(&s)?,
            None => default_initial,
        };
        let frequency_sampling = match r.text("frequency_sampling")?.as_deref() {
            None | Some("upper-edge") => FrequencySampling::UpperEdge,
            Some("midpoint") => FrequencySampling::Midpoint,
            Some(s) => return Err(Error::config(format!("unknown frequency_sampling `{s}`"))),
        };
        let coupling_normalization = match r.text("coupling_normalization")?.as_deref() {
            None | Some("density-of-states") => CouplingNormalization::DensityOfStates,
            Some("caldeira-leggett") => CouplingNormalization::CaldeiraLeggett,
            Some(s) => return Err(Error::config(format!("unknown coupling_normalization `{s}`"))),
        };
        let count = |key: &str, default: u64| -> Result<u64> { Ok(r.count(key)?.unwrap_or(default)) };
        let cfg = RunConfig {
            name: r.text("name")?.unwrap_or_else(|| scenario.tag().to_string()),
            scenario,
            potential,
            morse_depth,
            morse_alpha,
            mass,
            harmonic_omega,
            n_modes: count("n_modes", 60)? as usize,
            n_exc: count("n_exc", 2)? as usize,
            omega_cutoff: r.quantity("omega_cutoff")?.unwrap_or(2.9e-3),
            gamma,
            kappa: r.quantity("kappa")?.unwrap_or(0.0),
            frequency_sampling,
            coupling_normalization,
            grid_r_min: r.quantity("grid_r_min")?.unwrap_or(default_min),
            grid_r_max: r.quantity("grid_r_max")?.unwrap_or(default_max),
            grid_points: count("grid_points", 64)? as usize,
            initial_state,
            displacement: r.quantity("displacement")?.unwrap_or(match potential {
                PotentialKind::Morse => 2.0 * length_scale,
                PotentialKind::Harmonic => length_scale,
            }),
            packet_width: r.quantity("packet_width")?.unwrap_or(length_scale),
            cat_center: r.quantity("cat_center")?.unwrap_or(0.0),
            cat_delta: r.quantity("cat_delta")?.unwrap_or(0.5),
            cat_p0: r.quantity("cat_p0")?.unwrap_or(0.0),
            t_final: r.quantity("t_final")?.unwrap_or(fs_to_au(900.0)),
            dt: r.quantity("dt")?.unwrap_or(fs_to_au(0.5)),
            cadence: r.quantity("cadence")?.unwrap_or(fs_to_au(1.0)),
            chebychev_tol: r.quantity("chebychev_tol")?.unwrap_or(1e-12),
            edge_abort: r.quantity("edge_abort")?.unwrap_or(1e-8),
            relax_tau: r.quantity("relax_tau")?.unwrap_or(100.0),
            relax_tol: r.quantity("relax_tol")?.unwrap_or(1e-10),
            entanglement: r.flag("entanglement")?.unwrap_or(scenario == Scenario::Entangle),
            pair_output: r.flag("pair_output")?.unwrap_or(false),
            pointer_basis: r.flag("pointer_basis")?.unwrap_or(scenario == Scenario::CatState),
            deterministic: r.flag("deterministic")?.unwrap_or(false),
            seed: count("seed", 0)?,
            checkpoint: r.flag("checkpoint")?.unwrap_or(false),
            output_dir: r.text("output_dir")?.map(PathBuf::from),
        };
        debug_assert!(r.has("scenario"));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Cross-field checks.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("morse_depth", self.morse_depth),
            ("morse_alpha", self.morse_alpha),
            ("mass", self.mass),
            ("harmonic_omega", self.harmonic_omega),
            ("omega_cutoff", self.omega_cutoff),
            ("gamma", self.gamma),
            ("packet_width", self.packet_width),
            ("cat_delta", self.cat_delta),
            ("dt", self.dt),
            ("cadence", self.cadence),
            ("relax_tau", self.relax_tau),
            ("relax_tol", self.relax_tol),
            ("chebychev_tol", self.chebychev_tol),
            ("edge_abort", self.edge_abort),
        ];
        for (k, v) in positive {
            if !(v > 0.0) {
                return Err(Error::config(format!("`{k}` must be positive, got {v}")));
            }
        }
        if self.kappa < 0.0 {
            return Err(Error::config("`kappa` must be non-negative"));
        }
        if self.t_final < 0.0 {
            return Err(Error::config("`t_final` must be non-negative"));
        }
        if self.n_modes == 0 || self.n_modes > crate::bath::ConfigurationSpace::MAX_MODES {
            return Err(Error::config(format!(
                "`n_modes` must lie in 1..=63, got {}",
                self.n_modes
            )));
        }
        if self.n_exc > self.n_modes {
            return Err(Error::config("`n_exc` cannot exceed `n_modes`"));
        }
        let ratio = self.cadence / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err(Error::config("`cadence` must be a positive multiple of `dt`"));
        }
        let steps = self.t_final / self.dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::config("`t_final` must be a multiple of `dt`"));
        }
        if self.initial_state == InitialState::CatState && self.potential != PotentialKind::Harmonic {
            return Err(Error::config("cat-state initial state needs `potential = harmonic`"));
        }
        if self.scenario == Scenario::CatState && self.initial_state != InitialState::CatState {
            return Err(Error::config("catstate scenario needs `initial_state = cat-state`"));
        }
        if self.entanglement && self.n_modes < 2 {
            return Err(Error::config("entanglement tracking needs at least two modes"));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::config("`name` must be a plain file-name stem"));
        }
        Ok(())
    }

    /// Number of propagation steps.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Steps between observable samples.
    pub fn steps_per_sample(&self) -> usize {
        (self.cadence / self.dt).round() as usize
    }

    /// The resolved configuration as config text in atomic units.
    ///
    /// Parsing the manifest gives back an equal configuration, except for
    /// `output_dir`, which is left to the command line.
    pub fn to_manifest(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# resolved run manifest, all quantities in atomic units");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let au = |x: f64| format!("{x:?} au");
        kv("name", self.name.clone());
        kv("scenario", self.scenario.tag().into());
        kv(
            "potential",
            match self.potential {
                PotentialKind::Morse => "morse".into(),
                PotentialKind::Harmonic => "harmonic".into(),
            },
        );
        kv("morse_depth", au(self.morse_depth));
        kv("morse_alpha", au(self.morse_alpha));
        kv("mass", au(self.mass));
        kv("harmonic_omega", au(self.harmonic_omega));
        kv("n_modes", self.n_modes.to_string());
        kv("n_exc", self.n_exc.to_string());
        kv("omega_cutoff", au(self.omega_cutoff));
        kv("gamma", au(self.gamma));
        kv("kappa", au(self.kappa));
        kv("frequency_sampling", sampling_tag(self.frequency_sampling).into());
        kv(
            "coupling_normalization",
            normalization_tag(self.coupling_normalization).into(),
        );
        kv("grid_r_min", au(self.grid_r_min));
        kv("grid_r_max", au(self.grid_r_max));
        kv("grid_points", self.grid_points.to_string());
        kv("initial_state", self.initial_state.tag().into());
        kv("displacement", au(self.displacement));
        kv("packet_width", au(self.packet_width));
        kv("cat_center", au(self.cat_center));
        kv("cat_delta", au(self.cat_delta));
        kv("cat_p0", au(self.cat_p0));
        kv("t_final", au(self.t_final));
        kv("dt", au(self.dt));
        kv("cadence", au(self.cadence));
        kv("chebychev_tol", format!("{:?}", self.chebychev_tol));
        kv("edge_abort", format!("{:?}", self.edge_abort));
        kv("relax_tau", au(self.relax_tau));
        kv("relax_tol", au(self.relax_tol));
        kv("entanglement", self.entanglement.to_string());
        kv("pair_output", self.pair_output.to_string());
        kv("pointer_basis", self.pointer_basis.to_string());
        kv("deterministic", self.deterministic.to_string());
        kv("seed", self.seed.to_string());
        kv("checkpoint", self.checkpoint.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WEAK: &str = "
        # weak coupling
        scenario = relax
        n_modes = 60
        n_exc = 2
        gamma_inv = 1630 fs   # T1
        t_final = 2 ps
    ";

    #[test]
    fn parses_units_and_defaults() {
        let c = RunConfig::parse(WEAK).unwrap();
        assert_eq!(c.scenario, Scenario::Relax);
        assert!((c.gamma - 1.4840e-5).abs() / 1.484e-5 < 1e-4);
        assert!((c.t_final - fs_to_au(2000.0)).abs() < 1e-9);
        assert!((c.displacement - 0.18258).abs() < 1e-5);
        assert_eq!(c.grid_points, 64);
        assert_eq!(c.n_steps(), 4000);
        assert_eq!(c.steps_per_sample(), 2);
        assert_eq!(c.initial_state, InitialState::DisplacedGaussian);
    }

    #[test]
    fn manifest_round_trips() {
        let mut c = RunConfig::parse(WEAK).unwrap();
        c.kappa = 1.5e-4;
        c.coupling_normalization = CouplingNormalization::CaldeiraLeggett;
        let back = RunConfig::parse(&c.to_manifest()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            "scenario = relax\ngamma_inv = 1630 fs\nn_mode = 3",
            "scenario = relax\ngamma_inv = 1630",
            "scenario = relax\ngamma_inv = 1630 fs\ngamma = 1e-5 au",
            "scenario = relax",
            "scenario = relax\ngamma_inv = 1630 fs\ndt = 0.5 bohr",
            "scenario = relax\ngamma_inv = 1630 fs\nn_exc = 61",
            "scenario = relax\ngamma_inv = 1630 fs\ncadence = 0.7 fs",
            "scenario = dance\ngamma_inv = 1630 fs",
            "scenario = relax\ngamma_inv = 1630 fs\ngamma_inv = 163 fs",
            "scenario = catstate\ngamma_inv = 1630 fs",
            "gamma_inv = 1630 fs",
        ];
        for text in cases {
            let err = RunConfig::parse(text).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{text}: {err}");
        }
    }

    #[test]
    fn energy_units_convert() {
        let c = RunConfig::parse("scenario = relax\ngamma = 1e-5 au\nkappa = 1 eV").unwrap();
        assert!((c.kappa - 1.0 / HARTREE_EV).abs() < 1e-15);
    }
}
