//! Dissipative dynamics of an anharmonic oscillator coupled to a finite
//! bath of two-level systems ("surrogate Hamiltonian").
//!
//! The combined system-bath wavefunction is stored as a spinor: one grid
//! function per admissible bath configuration, where a configuration is a
//! bitmask of excited bath modes with at most `n_exc` bits set. The
//! Hamiltonian is applied matrix-free (FFT kinetic energy, diagonal
//! potentials, bit-flip couplings) and propagated with a Chebychev
//! expansion of the evolution operator. A dense exact-diagonalization
//! oracle is provided for small instances.
//!
//! The numerical core is generic over the floating-point type through
//! [`Real`]; the aliases at the crate root fix it to `f64`, which is what
//! the scenarios, the oracle and the file formats use.

pub mod bath;
pub mod checkpoint;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod output;
pub mod propagator;
pub mod scalar;
pub mod scenario;
pub mod special;
pub mod units;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use scalar::Real;
pub use scenario::{predefined_configs, run_scenario, RunSummary};

pub use bath::{BathSpec, ConfigurationSpace, CouplingNormalization, FrequencySampling, OhmicBath};
pub use grid::{CouplingProfile, GridFunction, MorseParams, SpatialGrid, SystemModel, SystemPotential};
pub use hamiltonian::{EnergyParts, HamiltonianSpec, SpinorState};
pub use propagator::{ChebychevPlan, SpectralBounds};

/// Double-precision spatial grid.
pub type Grid = grid::SpatialGrid<f64>;
/// Double-precision Morse parameters.
pub type Morse = grid::MorseParams<f64>;
/// Double-precision bath.
pub type Bath = bath::BathSpec<f64>;
/// Double-precision Hamiltonian.
pub type Hamiltonian = hamiltonian::HamiltonianSpec<f64>;
/// Double-precision spinor wavefunction.
pub type Spinor = hamiltonian::SpinorState<f64>;
/// Double-precision Chebychev plan.
pub type Plan = propagator::ChebychevPlan<f64>;

/// Double-precision reduced system density matrix.
pub type SystemDensity = observables::ReducedDensityMatrix<f64>;
/// Double-precision two-mode bath density matrix.
pub type PairDensity = entanglement::TwoModeDensity<f64>;

/// Single-precision spinor, mostly useful for memory-bound exploratory runs.
pub type Spinor32 = hamiltonian::SpinorState<f32>;
/// Single-precision Hamiltonian.
pub type Hamiltonian32 = hamiltonian::HamiltonianSpec<f32>;
