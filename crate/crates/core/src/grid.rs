//! Spatial grid, system potentials, the coupling profile f(R) and the
//! FFT kinetic-energy operator.

use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

/// Uniform periodic grid on `[r_min, r_max)`.
///
/// Points sit at `r_min + i·dr` with `dr = (r_max − r_min)/n_points`;
/// momenta follow the standard FFT ordering and span `[−π/dr, π/dr)`.
#[derive(Clone, PartialEq)]
pub struct SpatialGrid<T> {
    r_min: T,
    r_max: T,
    n_points: usize,
    dr: T,
    positions: Vec<T>,
    k_values: Vec<T>,
}

impl<T: Real> SpatialGrid<T> {
    pub fn new(r_min: T, r_max: T, n_points: usize) -> Result<Self> {
        if !(r_max > r_min) || !r_min.is_finite() || !r_max.is_finite() {
            return Err(Error::config(format!("degenerate grid interval [{r_min}, {r_max}]")));
        }
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::config(format!(
                "grid point count must be a power of two >= 8, got {n_points}"
            )));
        }
        let n = T::from_count(n_points);
        let dr = (r_max - r_min) / n;
        let positions = (0..n_points).map(|i| r_min + T::from_count(i) * dr).collect();
        let dk = T::TAU() / (n * dr);
        let half = n_points / 2;
        let k_values = (0..n_points)
            .map(|m| {
                if m < half {
                    T::from_count(m) * dk
                } else {
                    -(T::from_count(n_points - m) * dk)
                }
            })
            .collect();
        Ok(Self {
            r_min,
            r_max,
            n_points,
            dr,
            positions,
            k_values,
        })
    }

    pub fn r_min(&self) -> T {
        self.r_min
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dr(&self) -> T {
        self.dr
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn k_values(&self) -> &[T] {
        &self.k_values
    }

    /// Largest momentum magnitude, π/dr.
    pub fn k_max(&self) -> T {
        T::PI() / self.dr
    }

    /// Largest kinetic energy representable on the grid, π²/(2M·dr²).
    pub fn kinetic_max(&self, mass: T) -> T {
        let k = self.k_max();
        k * k / (T::lit(2.0) * mass)
    }

    /// True if `[lo, hi]` lies inside the grid support.
    pub fn contains_interval(&self, lo: T, hi: T) -> bool {
        lo >= self.r_min && hi <= self.r_max - self.dr
    }
}

impl<T: Real> fmt::Debug for SpatialGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpatialGrid")
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .field("n_points", &self.n_points)
            .field("dr", &self.dr)
            .finish()
    }
}

/// Convenience wrapper mirroring [`SpatialGrid::new`].
pub fn build_grid<T: Real>(r_min: T, r_max: T, n_points: usize) -> Result<SpatialGrid<T>> {
    SpatialGrid::new(r_min, r_max, n_points)
}

/// Morse oscillator parameters, all in atomic units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MorseParams<T> {
    pub well_depth: T,
    pub alpha: T,
    pub mass: T,
    omega_harm: T,
}

impl<T: Real> MorseParams<T> {
    pub fn new(well_depth: T, alpha: T, mass: T) -> Result<Self> {
        if !(well_depth > T::zero() && alpha > T::zero() && mass > T::zero()) {
            return Err(Error::config(format!(
                "Morse parameters must be positive (D = {well_depth}, alpha = {alpha}, M = {mass})"
            )));
        }
        Ok(Self {
            well_depth,
            alpha,
            mass,
            omega_harm: Self::harmonic_frequency(well_depth, alpha, mass),
        })
    }

    /// Well depth 0.018, α = 2, M = 1e5 (all a.u.).
    pub fn standard() -> Self {
        Self::new(T::lit(0.018), T::lit(2.0), T::lit(1e5)).expect("valid constants")
    }

    fn harmonic_frequency(d: T, alpha: T, mass: T) -> T {
        alpha * (T::lit(2.0) * d / mass).sqrt()
    }

    /// Harmonic frequency Ω = α·sqrt(2D/M).
    pub fn omega_harm(&self) -> T {
        self.omega_harm
    }

    /// Characteristic length R̃ = 1/sqrt(MΩ), the harmonic ground-state width.
    pub fn r_tilde(&self) -> T {
        T::one() / (self.mass * self.omega_harm).sqrt()
    }

    /// Harmonic period τ_osc = 2π/Ω in a.u.
    pub fn period(&self) -> T {
        T::TAU() / self.omega_harm
    }

    /// Anharmonic level energy E_n = −D + Ω(n+½) − Ω²(n+½)²/(4D).
    pub fn level_energy(&self, n: usize) -> T {
        let x = T::from_count(n) + T::lit(0.5);
        let w = self.omega_harm;
        -self.well_depth + w * x - w * w * x * x / (T::lit(4.0) * self.well_depth)
    }

    /// Checks that the stored harmonic frequency matches the parameters.
    pub fn is_consistent(&self) -> bool {
        let w = Self::harmonic_frequency(self.well_depth, self.alpha, self.mass);
        ((w - self.omega_harm) / w).abs().as_f64() <= 1e-12
    }

    pub fn value(&self, r: T) -> T {
        let e = (-self.alpha * r).exp();
        self.well_depth * (e * e - T::lit(2.0) * e)
    }
}

/// System potential V_S(R).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SystemPotential<T> {
    Morse(MorseParams<T>),
    /// ½·M·ω²·(R − center)², used for the cat-state runs.
    Harmonic {
        omega: T,
        center: T,
    },
}

/// Coupling function f(R) multiplying the bath operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CouplingProfile<T> {
    /// (1 − e^{−αR})/α.
    Morse { alpha: T },
    /// f(R) = R, the α → 0 limit of the Morse profile.
    Linear,
}

impl<T: Real> CouplingProfile<T> {
    pub fn value(&self, r: T) -> T {
        match *self {
            CouplingProfile::Morse { alpha } => (T::one() - (-alpha * r).exp()) / alpha,
            CouplingProfile::Linear => r,
        }
    }
}

/// The primary system: particle mass, potential and coupling function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemModel<T> {
    pub mass: T,
    pub potential: SystemPotential<T>,
    pub coupling: CouplingProfile<T>,
}

impl<T: Real> SystemModel<T> {
    /// Morse oscillator with the matching nonlinear coupling profile.
    pub fn morse(params: MorseParams<T>) -> Self {
        Self {
            mass: params.mass,
            potential: SystemPotential::Morse(params),
            coupling: CouplingProfile::Morse { alpha: params.alpha },
        }
    }

    /// Harmonic oscillator centred at the origin with linear coupling.
    pub fn harmonic(mass: T, omega: T) -> Result<Self> {
        if !(mass > T::zero() && omega > T::zero()) {
            return Err(Error::config("harmonic oscillator needs M > 0 and omega > 0"));
        }
        Ok(Self {
            mass,
            potential: SystemPotential::Harmonic {
                omega,
                center: T::zero(),
            },
            coupling: CouplingProfile::Linear,
        })
    }

    /// Samples V_S on the grid, rejecting grids where it overflows.
    pub fn potential_on(&self, grid: &SpatialGrid<T>) -> Result<Vec<T>> {
        match self.potential {
            SystemPotential::Morse(p) => morse_potential(grid, &p),
            SystemPotential::Harmonic { omega, center } => Ok(grid
                .positions()
                .iter()
                .map(|&r| {
                    let x = r - center;
                    T::lit(0.5) * self.mass * omega * omega * x * x
                })
                .collect()),
        }
    }

    pub fn coupling_on(&self, grid: &SpatialGrid<T>) -> Vec<T> {
        grid.positions().iter().map(|&r| self.coupling.value(r)).collect()
    }

    /// Frequency of small oscillations about the potential minimum.
    pub fn small_oscillation_frequency(&self) -> T {
        match self.potential {
            SystemPotential::Morse(p) => p.omega_harm(),
            SystemPotential::Harmonic { omega, .. } => omega,
        }
    }
}

/// Morse potential D(e^{−2αR} − 2e^{−αR}) sampled on the grid.
pub fn morse_potential<T: Real>(grid: &SpatialGrid<T>, p: &MorseParams<T>) -> Result<Vec<T>> {
    if !(-T::lit(2.0) * p.alpha * grid.r_min()).exp().is_finite() {
        return Err(Error::config(format!(
            "Morse potential overflows at r_min = {}",
            grid.r_min()
        )));
    }
    Ok(grid.positions().iter().map(|&r| p.value(r)).collect())
}

/// Coupling profile (1 − e^{−αR})/α sampled on the grid.
pub fn coupling_profile<T: Real>(grid: &SpatialGrid<T>, alpha: T) -> Result<Vec<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::config(format!("coupling alpha must be positive, got {alpha}")));
    }
    let f = CouplingProfile::Morse { alpha };
    Ok(grid.positions().iter().map(|&r| f.value(r)).collect())
}

/// Complex amplitudes of one spinor component on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    pub values: Vec<C<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![czero(); n],
        }
    }

    pub fn from_fn(grid: &SpatialGrid<T>, mut f: impl FnMut(T) -> C<T>) -> Self {
        Self {
            values: grid.positions().iter().map(|&r| f(r)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ⟨self|other⟩ with the grid weight dr.
    pub fn inner(&self, other: &Self, dr: T) -> C<T> {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<C<T>>()
            * dr
    }

    pub fn norm_sqr(&self, dr: T) -> T {
        self.values.iter().map(|a| a.norm_sqr()).sum::<T>() * dr
    }

    /// ⟨R⟩ for a normalized function.
    pub fn mean_position(&self, grid: &SpatialGrid<T>) -> T {
        self.values
            .iter()
            .zip(grid.positions())
            .map(|(a, &r)| a.norm_sqr() * r)
            .sum::<T>()
            * grid.dr()
    }

    pub fn normalize(&mut self, dr: T) {
        let n = self.norm_sqr(dr).sqrt();
        if n > T::zero() {
            let s = T::one() / n;
            self.values.iter_mut().for_each(|a| *a = *a * s);
        }
    }
}

/// FFT-based diagonal-in-momentum operators on one grid.
///
/// Holds forward and inverse plans plus the kinetic multiplier
/// k²/2M (pre-divided by the transform length so a forward/inverse pair
/// needs no extra scaling).
pub struct KineticOperator<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    multiplier: Vec<T>,
    k_values: Vec<T>,
    scratch_len: usize,
}

impl<T: Real> KineticOperator<T> {
    pub fn new(grid: &SpatialGrid<T>, mass: T) -> Self {
        let n = grid.n_points();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scale = T::one() / T::from_count(n);
        let two_m = T::lit(2.0) * mass;
        let multiplier = grid.k_values().iter().map(|&k| k * k / two_m * scale).collect();
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            multiplier,
            k_values: grid.k_values().to_vec(),
            scratch_len,
        }
    }

    pub fn len(&self) -> usize {
        self.multiplier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplier.is_empty()
    }

    pub fn scratch_len(&self) -> usize {
        self.scratch_len
    }

    /// Scratch buffer sized for [`Self::apply_into`].
    pub fn make_scratch(&self) -> Vec<C<T>> {
        vec![czero(); self.scratch_len]
    }

    /// Writes T·input into `out`.
    pub fn apply_into(&self, input: &[C<T>], out: &mut [C<T>], scratch: &mut [C<T>]) {
        out.copy_from_slice(input);
        self.forward.process_with_scratch(out, scratch);
        for (a, &m) in out.iter_mut().zip(&self.multiplier) {
            *a = *a * m;
        }
        self.inverse.process_with_scratch(out, scratch);
    }

    /// Applies e^{−i·k·shift} in place, translating the function by `shift`.
    pub fn translate_in_place(&self, data: &mut [C<T>], shift: T, scratch: &mut [C<T>]) {
        let scale = T::one() / T::from_count(self.len());
        self.forward.process_with_scratch(data, scratch);
        for (a, &k) in data.iter_mut().zip(&self.k_values) {
            *a = *a * C::from_polar(scale, -k * shift);
        }
        self.inverse.process_with_scratch(data, scratch);
    }
}

/// Kinetic energy P²/2M applied through FFT.
pub fn apply_kinetic<T: Real>(psi: &GridFunction<T>, grid: &SpatialGrid<T>, mass: T) -> Result<GridFunction<T>> {
    if psi.len() != grid.n_points() {
        return Err(Error::contract(format!(
            "grid function has {} points, grid has {}",
            psi.len(),
            grid.n_points()
        )));
    }
    let op = KineticOperator::new(grid, mass);
    let mut out = GridFunction::zeros(psi.len());
    let mut scratch = op.make_scratch();
    op.apply_into(&psi.values, &mut out.values, &mut scratch);
    Ok(out)
}

/// Normalized Gaussian exp(−(R−center)²/(2·width²)) on the grid.
pub fn displaced_gaussian<T: Real>(grid: &SpatialGrid<T>, center: T, width: T) -> Result<GridFunction<T>> {
    gaussian_wavepacket(grid, center, width, T::zero())
}

/// Normalized Gaussian with mean momentum `momentum`.
pub fn gaussian_wavepacket<T: Real>(
    grid: &SpatialGrid<T>,
    center: T,
    width: T,
    momentum: T,
) -> Result<GridFunction<T>> {
    if !(width > T::zero()) {
        return Err(Error::config(format!("Gaussian width must be positive, got {width}")));
    }
    let reach = T::lit(4.0) * width;
    if !grid.contains_interval(center - reach, center + reach) {
        return Err(Error::config(format!(
            "Gaussian at {center} with width {width} does not fit inside [{}, {})",
            grid.r_min(),
            grid.r_max()
        )));
    }
    let two_w2 = T::lit(2.0) * width * width;
    let mut g = GridFunction::from_fn(grid, |r| {
        let x = r - center;
        C::from_polar((-x * x / two_w2).exp(), momentum * r)
    });
    g.normalize(grid.dr());
    Ok(g)
}
