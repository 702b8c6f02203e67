//! Chebychev expansion of e^{−iHt} and e^{−Hτ}, analytic spectral bounds,
//! and the momentum-space displacement operator.

use log::{debug, warn};

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, SpinorState};
use crate::scalar::{czero, Real, C};
use crate::special::{bessel_i_scaled_sequence, bessel_j_sequence};

/// Relative padding added on both sides of the analytic spectral interval.
pub const SPECTRAL_PADDING: f64 = 0.05;

/// Default coefficient truncation tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Recurrence vectors larger than this (relative to the input norm) signal
/// a spectrum outside the assumed bounds.
const DIVERGENCE_LIMIT: f64 = 10.0;

/// Interval `[e_min, e_max]` guaranteed to contain the spectrum of H.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBounds<T> {
    pub e_min: T,
    pub e_max: T,
}

impl<T: Real> SpectralBounds<T> {
    pub fn new(e_min: T, e_max: T) -> Result<Self> {
        if !(e_max > e_min) || !e_min.is_finite() || !e_max.is_finite() {
            return Err(Error::contract(format!("invalid spectral interval [{e_min}, {e_max}]")));
        }
        Ok(Self { e_min, e_max })
    }

    pub fn midpoint(&self) -> T {
        T::lit(0.5) * (self.e_max + self.e_min)
    }

    pub fn half_width(&self) -> T {
        T::lit(0.5) * (self.e_max - self.e_min)
    }

    pub fn contains(&self, e: T) -> bool {
        e >= self.e_min && e <= self.e_max
    }

    /// Widens the interval by `fraction` of its width on each side.
    pub fn padded(&self, fraction: T) -> Self {
        let pad = (self.e_max - self.e_min) * fraction;
        Self {
            e_min: self.e_min - pad,
            e_max: self.e_max + pad,
        }
    }
}

/// Gershgorin-style analytic bounds, padded by 5% on each side.
///
/// Lower end: V_min minus the largest possible coupling and exchange
/// contributions. Upper end: V_max + T_max + the N_exc largest bath
/// frequencies + coupling + exchange.
pub fn estimate_spectral_bounds<T: Real>(h: &HamiltonianSpec<T>) -> SpectralBounds<T> {
    let v = h.potential();
    let v_min = v.iter().cloned().fold(T::infinity(), T::min);
    let v_max = v.iter().cloned().fold(T::neg_infinity(), T::max);
    let t_max = h.grid().kinetic_max(h.system().mass);
    let bath = h.bath();
    let n_exc = h.space().n_exc();
    let n_modes = bath.n_modes();
    let mut omega = bath.omega().to_vec();
    omega.sort_by(|a, b| b.partial_cmp(a).expect("finite frequencies"));
    let bath_max: T = omega.iter().take(n_exc).cloned().sum();
    let f_max = h.coupling_profile().iter().map(|f| f.abs()).fold(T::zero(), T::max);
    let coupling_max = if n_exc == 0 {
        T::zero()
    } else {
        f_max * bath.lambda().iter().cloned().sum::<T>()
    };
    // each configuration has at most min(2·N_exc, N−1) exchange partners
    let hop_max = bath.kappa() * T::from_count((2 * n_exc).min(n_modes.saturating_sub(1)));
    SpectralBounds {
        e_min: v_min - coupling_max - hop_max,
        e_max: v_max + t_max + bath_max + coupling_max + hop_max,
    }
    .padded(T::lit(SPECTRAL_PADDING))
}

/// Real- or imaginary-time expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeKind {
    Real,
    Imaginary,
}

/// Precomputed Chebychev expansion of one propagation step.
///
/// For real time the coefficients are a_k = (2 − δ_k0)(−i)^k J_k(R)·e^{−i E_mid dt}
/// with R = ΔE_half·dt; for imaginary time they are
/// (2 − δ_k0)(−1)^k e^{−R} I_k(R), leaving out a global factor that the
/// renormalization absorbs.
#[derive(Clone, Debug)]
pub struct ChebychevPlan<T> {
    kind: TimeKind,
    dt: T,
    bounds: SpectralBounds<T>,
    tolerance: f64,
    coefficients: Vec<C<T>>,
}

impl<T: Real> ChebychevPlan<T> {
    /// Real-time plan for e^{−iH·dt}, `dt` in a.u.
    pub fn real_time(bounds: SpectralBounds<T>, dt: T, tolerance: f64) -> Result<Self> {
        Self::build(TimeKind::Real, bounds, dt, tolerance)
    }

    /// Imaginary-time plan for e^{−H·tau}, `tau` in a.u.
    pub fn imaginary_time(bounds: SpectralBounds<T>, tau: T, tolerance: f64) -> Result<Self> {
        Self::build(TimeKind::Imaginary, bounds, tau, tolerance)
    }

    /// Real-time plan with bounds estimated from `h` and the default tolerance.
    pub fn for_hamiltonian(h: &HamiltonianSpec<T>, dt: T) -> Result<Self> {
        Self::real_time(estimate_spectral_bounds(h), dt, DEFAULT_TOLERANCE)
    }

    fn build(kind: TimeKind, bounds: SpectralBounds<T>, dt: T, tolerance: f64) -> Result<Self> {
        let bounds = SpectralBounds::new(bounds.e_min, bounds.e_max)?;
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::config(format!("time step must be positive, got {dt}")));
        }
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::config(format!(
                "coefficient tolerance must lie in (0, 1), got {tolerance}"
            )));
        }
        let r = (bounds.half_width() * dt).as_f64();
        let k_max = (1.5 * r + 10.0 * r.cbrt() + 60.0).ceil() as usize;
        let raw = match kind {
            TimeKind::Real => bessel_j_sequence(r, k_max),
            TimeKind::Imaginary => bessel_i_scaled_sequence(r, k_max),
        };
        // keep everything up to and including the first negligible term
        // after the last significant one
        let last = raw.iter().rposition(|v| v.abs() * 2.0 >= tolerance).unwrap_or(0);
        if last + 1 >= raw.len() {
            return Err(Error::numerical(format!(
                "Chebychev series did not converge within {k_max} terms (R = {r})"
            )));
        }
        let order = last + 1;
        let phase = match kind {
            TimeKind::Real => {
                let theta = -(bounds.midpoint() * dt).as_f64();
                num_complex::Complex::new(theta.cos(), theta.sin())
            }
            TimeKind::Imaginary => num_complex::Complex::new(1.0, 0.0),
        };
        let coefficients = raw[..=order]
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let weight = if k == 0 { b } else { 2.0 * b };
                let rot = match kind {
                    // (−i)^k
                    TimeKind::Real => match k % 4 {
                        0 => num_complex::Complex::new(1.0, 0.0),
                        1 => num_complex::Complex::new(0.0, -1.0),
                        2 => num_complex::Complex::new(-1.0, 0.0),
                        _ => num_complex::Complex::new(0.0, 1.0),
                    },
                    TimeKind::Imaginary => num_complex::Complex::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0),
                };
                let z = rot * phase * weight;
                C::new(T::lit(z.re), T::lit(z.im))
            })
            .collect();
        Ok(Self {
            kind,
            dt,
            bounds,
            tolerance,
            coefficients,
        })
    }

    pub fn kind(&self) -> TimeKind {
        self.kind
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn bounds(&self) -> SpectralBounds<T> {
        self.bounds
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Highest retained polynomial degree K.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[C<T>] {
        &self.coefficients
    }

    /// Advances `psi` by one step in place.
    pub fn step(
        &self,
        h: &HamiltonianSpec<T>,
        psi: &mut SpinorState<T>,
        work: &mut ChebychevWorkspace<T>,
    ) -> Result<()> {
        h.check_state(psi)?;
        work.resize(h.len());
        let mid = self.bounds.midpoint();
        let inv_half = T::one() / self.bounds.half_width();
        let scale0 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if scale0 == T::zero() {
            return Ok(());
        }
        let limit = scale0 * T::lit(DIVERGENCE_LIMIT);
        let ChebychevWorkspace { prev, cur, next, acc } = work;
        // φ_0 = ψ, φ_1 = H̃ψ with H̃ = (H − E_mid)/ΔE_half
        prev.copy_from_slice(psi.amplitudes());
        let a0 = self.coefficients[0];
        for (o, p) in acc.iter_mut().zip(prev.iter()) {
            *o = *p * a0;
        }
        if self.coefficients.len() > 1 {
            h.apply_into(prev, cur);
            for (c, p) in cur.iter_mut().zip(prev.iter()) {
                *c = (*c - *p * mid) * inv_half;
            }
            let a1 = self.coefficients[1];
            for (o, c) in acc.iter_mut().zip(cur.iter()) {
                *o += *c * a1;
            }
        }
        for (k, &ak) in self.coefficients.iter().enumerate().skip(2) {
            h.apply_into(cur, next);
            let two = T::lit(2.0);
            let mut norm_sqr = T::zero();
            for ((n, c), p) in next.iter_mut().zip(cur.iter()).zip(prev.iter()) {
                *n = (*n - *c * mid) * (two * inv_half) - *p;
                norm_sqr += n.norm_sqr();
            }
            let norm = norm_sqr.sqrt();
            if !(norm <= limit) {
                return Err(Error::numerical(format!(
                    "Chebychev recurrence diverged at order {k}: |phi_k| = {norm:e}, |psi| = {scale0:e}; \
                     spectrum escapes [{}, {}]",
                    self.bounds.e_min, self.bounds.e_max
                )));
            }
            for (o, n) in acc.iter_mut().zip(next.iter()) {
                *o += *n * ak;
            }
            std::mem::swap(prev, cur);
            std::mem::swap(cur, next);
        }
        psi.amplitudes_mut().copy_from_slice(acc);
        Ok(())
    }
}

/// Reusable buffers for [`ChebychevPlan::step`].
#[derive(Clone, Debug, Default)]
pub struct ChebychevWorkspace<T> {
    prev: Vec<C<T>>,
    cur: Vec<C<T>>,
    next: Vec<C<T>>,
    acc: Vec<C<T>>,
}

impl<T: Real> ChebychevWorkspace<T> {
    pub fn new(len: usize) -> Self {
        let mut w = Self {
            prev: Vec::new(),
            cur: Vec::new(),
            next: Vec::new(),
            acc: Vec::new(),
        };
        w.resize(len);
        w
    }

    fn resize(&mut self, len: usize) {
        for b in [&mut self.prev, &mut self.cur, &mut self.next, &mut self.acc] {
            if b.len() != len {
                b.clear();
                b.resize(len, czero());
            }
        }
    }
}

/// Ψ(n_steps·dt) = (e^{−iH·dt})^{n_steps} Ψ(0).
pub fn propagate<T: Real>(
    plan: &ChebychevPlan<T>,
    h: &HamiltonianSpec<T>,
    psi: &SpinorState<T>,
    n_steps: usize,
) -> Result<SpinorState<T>> {
    if plan.kind() != TimeKind::Real {
        return Err(Error::contract("propagate needs a real-time plan"));
    }
    let mut out = psi.clone();
    let mut work = ChebychevWorkspace::new(h.len());
    for _ in 0..n_steps {
        plan.step(h, &mut out, &mut work)?;
    }
    Ok(out)
}

/// Settings for [`relax_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxOptions<T> {
    /// Imaginary-time step (a.u.).
    pub tau_step: T,
    /// Energy tolerance (a.u.); the variance must also drop below 100·tol.
    pub tol: T,
    pub max_iterations: usize,
}

impl<T: Real> RelaxOptions<T> {
    pub fn new(tau_step: T, tol: T) -> Self {
        Self {
            tau_step,
            tol,
            max_iterations: 200_000,
        }
    }
}

impl<T: Real> Default for RelaxOptions<T> {
    fn default() -> Self {
        Self::new(T::one(), T::lit(1e-10))
    }
}

/// Outcome of an imaginary-time relaxation.
#[derive(Clone, Debug)]
pub struct Relaxed<T: Real> {
    pub state: SpinorState<T>,
    pub energy: T,
    pub variance: T,
    pub iterations: usize,
}

/// Imaginary-time relaxation to the ground state of `h`.
pub fn relax_imaginary_time<T: Real>(
    h: &HamiltonianSpec<T>,
    guess: &SpinorState<T>,
    tau_step: T,
    tol: T,
) -> Result<SpinorState<T>> {
    relax_with(h, guess, RelaxOptions::new(tau_step, tol)).map(|r| r.state)
}

/// Imaginary-time relaxation with explicit options and diagnostics.
pub fn relax_with<T: Real>(
    h: &HamiltonianSpec<T>,
    guess: &SpinorState<T>,
    opts: RelaxOptions<T>,
) -> Result<Relaxed<T>> {
    h.check_state(guess)?;
    if !(opts.tol > T::zero()) {
        return Err(Error::config("relaxation tolerance must be positive"));
    }
    let plan = ChebychevPlan::imaginary_time(estimate_spectral_bounds(h), opts.tau_step, DEFAULT_TOLERANCE)?;
    let mut psi = guess.clone();
    if psi.normalize() == T::zero() {
        return Err(Error::contract("relaxation guess is the zero state"));
    }
    let mut work = ChebychevWorkspace::new(h.len());
    let (mut energy, mut variance) = h.energy_and_variance(&psi)?;
    let variance_tol = opts.tol * T::lit(100.0);
    for it in 1..=opts.max_iterations {
        plan.step(h, &mut psi, &mut work)?;
        let n = psi.normalize();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::numerical(format!("imaginary-time step {it} produced norm {n}")));
        }
        let (e, var) = h.energy_and_variance(&psi)?;
        if e > energy + opts.tol {
            warn!("imaginary-time energy rose from {energy:e} to {e:e} at step {it}");
        }
        let change = (e - energy).abs();
        energy = e;
        variance = var;
        if change < opts.tol && variance < variance_tol {
            debug!("imaginary time converged after {it} steps: E = {energy:e}, var = {variance:e}");
            return Ok(Relaxed {
                state: psi,
                energy,
                variance,
                iterations: it,
            });
        }
    }
    Err(Error::numerical(format!(
        "imaginary-time relaxation did not converge in {} steps (E = {energy:e}, variance = {variance:e})",
        opts.max_iterations
    )))
}

/// Edge probability above which a displaced state is considered to spill.
pub const EDGE_WARNING: f64 = 1e-8;

/// ψ_c(R) → ψ_c(R − r0) for every component via e^{−i·r0·k}.
pub fn displace<T: Real>(psi: &SpinorState<T>, r0: T) -> SpinorState<T> {
    let mut out = psi.clone();
    if r0 == T::zero() {
        return out;
    }
    let grid = psi.grid().clone();
    // only the FFT plans are used; the mass is irrelevant
    let op = crate::grid::KineticOperator::new(&grid, T::one());
    let mut scratch = op.make_scratch();
    let n = grid.n_points();
    for comp in out.amplitudes_mut().chunks_mut(n) {
        op.translate_in_place(comp, r0, &mut scratch);
    }
    let edge = out.edge_population();
    if edge.as_f64() > EDGE_WARNING {
        warn!("displaced state reaches the grid edge: edge probability {edge:e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{sample_ohmic_bath, ConfigurationSpace};
    use crate::grid::{displaced_gaussian, MorseParams, SpatialGrid, SystemModel};
    use std::sync::Arc;

    fn harmonic_setup(n_points: usize) -> HamiltonianSpec<f64> {
        let grid = Arc::new(SpatialGrid::new(-1.0, 1.0, n_points).unwrap());
        let system = SystemModel::harmonic(1e5, 1e-3).unwrap();
        let bath = sample_ohmic_bath(1, 2.9e-3, 1e-5, 1e5, 0.0).unwrap();
        HamiltonianSpec::new(system, bath.decoupled(), 0, grid).unwrap()
    }

    #[test]
    fn coefficients_truncate_below_tolerance() {
        let b = SpectralBounds::<f64>::new(-1.0, 3.0).unwrap();
        for dt in [0.1, 5.0, 80.0] {
            let plan = ChebychevPlan::real_time(b, dt, 1e-12).unwrap();
            let last = plan.coefficients().last().unwrap().norm();
            assert!(last < 1e-12, "dt = {dt}: {last}");
            // K grows roughly linearly with R = 2·dt
            assert!(plan.order() as f64 >= 2.0 * dt);
        }
        let small = ChebychevPlan::real_time(b, 10.0, 1e-12).unwrap().order();
        let large = ChebychevPlan::real_time(b, 40.0, 1e-12).unwrap().order();
        assert!(large > 3 * small / 2);
    }

    #[test]
    fn series_reproduces_scalar_exponential() {
        // On a 1×1 "Hamiltonian" the series must equal e^{−iEt}.
        let b = SpectralBounds::<f64>::new(-0.5, 1.5).unwrap();
        let dt = 7.3;
        let plan = ChebychevPlan::real_time(b, dt, 1e-14).unwrap();
        for &e in &[-0.5, -0.1, 0.4, 1.5] {
            let x = (e - b.midpoint()) / b.half_width();
            let (mut t0, mut t1) = (1.0, x);
            let mut sum = plan.coefficients()[0] * t0 + plan.coefficients()[1] * t1;
            for a in &plan.coefficients()[2..] {
                let t2 = 2.0 * x * t1 - t0;
                sum += a * t2;
                t0 = t1;
                t1 = t2;
            }
            let exact = C::new(0.0, -e * dt).exp();
            assert!((sum - exact).norm() < 1e-13, "E = {e}");
        }
        let plan = ChebychevPlan::imaginary_time(b, dt, 1e-14).unwrap();
        let r = b.half_width() * dt;
        for &e in &[-0.5, 0.2, 1.5] {
            let x = (e - b.midpoint()) / b.half_width();
            let (mut t0, mut t1) = (1.0, x);
            let mut sum = plan.coefficients()[0] * t0 + plan.coefficients()[1] * t1;
            for a in &plan.coefficients()[2..] {
                let t2 = 2.0 * x * t1 - t0;
                sum += a * t2;
                t0 = t1;
                t1 = t2;
            }
            // e^{−R(1 + x)} = e^{−(E − e_min)τ}
            let exact = (-r * (1.0 + x)).exp();
            assert!((sum.re - exact).abs() < 1e-13 && sum.im.abs() < 1e-15);
        }
    }

    #[test]
    fn bounds_contain_potential_minimum_and_grow_with_truncation() {
        let grid = Arc::new(SpatialGrid::new(-0.4, 1.2, 64).unwrap());
        let system = SystemModel::morse(MorseParams::standard());
        let bath = sample_ohmic_bath(60, 2.9e-3, 1.484e-5, 1e5, 0.0).unwrap();
        let mut widths = Vec::new();
        for n_exc in 0..=3 {
            let h = HamiltonianSpec::new(system, bath.clone(), n_exc, grid.clone()).unwrap();
            let b = estimate_spectral_bounds(&h);
            assert!(b.e_min <= -0.018);
            widths.push(b.e_max - b.e_min);
        }
        assert!(widths.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn norm_and_energy_conserved_for_free_wavepacket() {
        let h = harmonic_setup(128);
        let space = Arc::new(ConfigurationSpace::new(1, 0).unwrap());
        let phi = displaced_gaussian(h.grid(), 0.2, 0.05).unwrap();
        let psi = SpinorState::product(h.grid().clone(), space, &phi, 0).unwrap();
        let (e0, _) = h.energy_and_variance(&psi).unwrap();
        let plan = ChebychevPlan::for_hamiltonian(&h, 100.0).unwrap();
        let out = propagate(&plan, &h, &psi, 20).unwrap();
        let (e1, _) = h.energy_and_variance(&out).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-11);
        assert!(((e1 - e0) / e0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_packet_returns_after_one_period() {
        // A displaced harmonic-oscillator ground state is a coherent state;
        // after 2π/ω it must be back where it started.
        let h = harmonic_setup(128);
        let space = Arc::new(ConfigurationSpace::new(1, 0).unwrap());
        let width = 1.0 / (1e5f64 * 1e-3).sqrt();
        let phi = displaced_gaussian(h.grid(), 0.25, width).unwrap();
        let psi = SpinorState::product(h.grid().clone(), space, &phi, 0).unwrap();
        let period = std::f64::consts::TAU / 1e-3;
        let steps = 200;
        let plan = ChebychevPlan::for_hamiltonian(&h, period / steps as f64).unwrap();
        let out = propagate(&plan, &h, &psi, steps).unwrap();
        // global phase e^{−iω/2·T} = −1
        let overlap = psi.inner(&out);
        assert!((overlap.norm() - 1.0).abs() < 1e-9, "{overlap}");
        assert!((overlap + 1.0).norm() < 1e-8, "{overlap}");
    }

    #[test]
    fn divergence_is_reported() {
        let h = harmonic_setup(64);
        let space = Arc::new(ConfigurationSpace::new(1, 0).unwrap());
        let phi = displaced_gaussian(h.grid(), 0.0, 0.05).unwrap();
        let psi = SpinorState::product(h.grid().clone(), space, &phi, 0).unwrap();
        let true_bounds = estimate_spectral_bounds(&h);
        let bad = SpectralBounds::new(true_bounds.e_min, true_bounds.e_min + 1e-4).unwrap();
        let plan = ChebychevPlan::real_time(bad, 2000.0, 1e-12).unwrap();
        let err = propagate(&plan, &h, &psi, 1).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn imaginary_time_finds_harmonic_ground_state() {
        let h = harmonic_setup(64);
        let space = Arc::new(ConfigurationSpace::new(1, 0).unwrap());
        let phi = displaced_gaussian(h.grid(), 0.1, 0.08).unwrap();
        let guess = SpinorState::product(h.grid().clone(), space, &phi, 0).unwrap();
        let r = relax_with(&h, &guess, RelaxOptions::new(200.0, 1e-12)).unwrap();
        assert!((r.energy - 0.5e-3).abs() < 1e-9, "{}", r.energy);
        assert!(r.variance < 1e-10);
    }

    #[test]
    fn displacement_group_property() {
        let grid = Arc::new(SpatialGrid::new(-0.4, 1.2, 128).unwrap());
        let space = Arc::new(ConfigurationSpace::new(2, 1).unwrap());
        let r_tilde = MorseParams::<f64>::standard().r_tilde();
        let phi = displaced_gaussian(&grid, 0.0, r_tilde).unwrap();
        let psi = SpinorState::product(grid.clone(), space, &phi, 0b10).unwrap();
        assert_eq!(displace(&psi, 0.0).amplitudes(), psi.amplitudes());
        let moved = displace(&psi, 2.0 * r_tilde);
        assert!((moved.mean_position() - 2.0 * r_tilde).abs() < 1e-10);
        assert!((moved.norm_sqr() - 1.0).abs() < 1e-13);
        let back = displace(&moved, -2.0 * r_tilde);
        let err = back
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }
}
