//! Matrix-free application of the system-bath Hamiltonian
//! H = H_S ⊗ 1 + 1 ⊗ (H_B + H_int) + H_SB to spinor wavefunctions.

use std::sync::Arc;

use rayon::prelude::*;

use crate::bath::{BathSpec, ConfigurationSpace, TransitionTable};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, KineticOperator, SpatialGrid, SystemModel};
use crate::scalar::{czero, Real, C};

/// Combined system-bath wavefunction.
///
/// Amplitudes are stored configuration-major: component `c` occupies
/// `amplitudes[c·n_points .. (c+1)·n_points]`.
#[derive(Clone, Debug)]
pub struct SpinorState<T: Real> {
    grid: Arc<SpatialGrid<T>>,
    space: Arc<ConfigurationSpace>,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> SpinorState<T> {
    pub fn zeros(grid: Arc<SpatialGrid<T>>, space: Arc<ConfigurationSpace>) -> Self {
        let len = grid.n_points() * space.dim();
        Self {
            grid,
            space,
            amplitudes: vec![czero(); len],
        }
    }

    /// φ(R) ⊗ |mask⟩.
    pub fn product(
        grid: Arc<SpatialGrid<T>>,
        space: Arc<ConfigurationSpace>,
        phi: &GridFunction<T>,
        mask: u64,
    ) -> Result<Self> {
        if phi.len() != grid.n_points() {
            return Err(Error::contract("grid function does not match grid"));
        }
        let c = space
            .rank(mask)
            .ok_or_else(|| Error::contract(format!("mask {mask:#b} not in configuration space")))?;
        let mut s = Self::zeros(grid, space);
        s.component_mut(c).copy_from_slice(&phi.values);
        Ok(s)
    }

    pub fn from_amplitudes(
        grid: Arc<SpatialGrid<T>>,
        space: Arc<ConfigurationSpace>,
        amplitudes: Vec<C<T>>,
    ) -> Result<Self> {
        if amplitudes.len() != grid.n_points() * space.dim() {
            return Err(Error::contract(format!(
                "expected {} amplitudes, got {}",
                grid.n_points() * space.dim(),
                amplitudes.len()
            )));
        }
        Ok(Self {
            grid,
            space,
            amplitudes,
        })
    }

    pub fn grid(&self) -> &Arc<SpatialGrid<T>> {
        &self.grid
    }

    pub fn space(&self) -> &Arc<ConfigurationSpace> {
        &self.space
    }

    pub fn n_points(&self) -> usize {
        self.grid.n_points()
    }

    pub fn dim_config(&self) -> usize {
        self.space.dim()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn component(&self, c: usize) -> &[C<T>] {
        let n = self.n_points();
        &self.amplitudes[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [C<T>] {
        let n = self.n_points();
        &mut self.amplitudes[c * n..(c + 1) * n]
    }

    /// Σ|ψ|²·dr of component `c`.
    pub fn component_weight(&self, c: usize) -> T {
        self.component(c).iter().map(|a| a.norm_sqr()).sum::<T>() * self.grid.dr()
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>() * self.grid.dr()
    }

    pub fn normalize(&mut self) -> T {
        let n = self.norm_sqr().sqrt();
        if n > T::zero() {
            let s = T::one() / n;
            self.amplitudes.iter_mut().for_each(|a| *a = *a * s);
        }
        n
    }

    /// ⟨self|other⟩ including the grid weight.
    pub fn inner(&self, other: &Self) -> C<T> {
        inner(&self.amplitudes, &other.amplitudes) * self.grid.dr()
    }

    /// ⟨R⟩ summed over all configurations.
    pub fn mean_position(&self) -> T {
        let n = self.n_points();
        let r = self.grid.positions();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm_sqr() * r[k % n])
            .sum::<T>()
            * self.grid.dr()
    }

    /// Probability in the first and last grid point, summed over configurations.
    pub fn edge_population(&self) -> T {
        let n = self.n_points();
        (0..self.dim_config())
            .map(|c| {
                let comp = self.component(c);
                comp[0].norm_sqr() + comp[n - 1].norm_sqr()
            })
            .sum::<T>()
            * self.grid.dr()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.grid.n_points() == other.grid.n_points() && self.space.dim() == other.space.dim()
    }
}

/// Plain Σ conj(a)·b.
pub(crate) fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Which parts of the Hamiltonian to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Terms {
    pub system: bool,
    pub bath: bool,
    pub coupling: bool,
    pub interaction: bool,
}

impl Terms {
    pub const ALL: Terms = Terms {
        system: true,
        bath: true,
        coupling: true,
        interaction: true,
    };
    pub const SYSTEM: Terms = Terms {
        system: true,
        bath: false,
        coupling: false,
        interaction: false,
    };
    pub const BATH: Terms = Terms {
        system: false,
        bath: true,
        coupling: false,
        interaction: false,
    };
    pub const COUPLING: Terms = Terms {
        system: false,
        bath: false,
        coupling: true,
        interaction: false,
    };
    pub const INTERACTION: Terms = Terms {
        system: false,
        bath: false,
        coupling: false,
        interaction: true,
    };
}

/// Expectation values of the four Hamiltonian parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyParts<T> {
    pub system: T,
    pub bath: T,
    pub coupling: T,
    pub interaction: T,
}

impl<T: Real> EnergyParts<T> {
    pub fn total(&self) -> T {
        self.system + self.bath + self.coupling + self.interaction
    }

    /// ⟨H_S⟩ + ½⟨H_SB⟩.
    pub fn effective_system(&self) -> T {
        self.system + T::lit(0.5) * self.coupling
    }
}

/// Below this many amplitudes the Hamiltonian is applied serially.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Everything needed to apply H to a spinor on a fixed grid and bath.
pub struct HamiltonianSpec<T: Real> {
    system: SystemModel<T>,
    bath: BathSpec<T>,
    grid: Arc<SpatialGrid<T>>,
    space: Arc<ConfigurationSpace>,
    potential: Vec<T>,
    coupling: Vec<T>,
    bath_energy: Vec<T>,
    neg_lambda: Vec<T>,
    kinetic: KineticOperator<T>,
    flips: TransitionTable,
    hops: TransitionTable,
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn new(system: SystemModel<T>, bath: BathSpec<T>, n_exc: usize, grid: Arc<SpatialGrid<T>>) -> Result<Self> {
        let space = Arc::new(ConfigurationSpace::new(bath.n_modes(), n_exc)?);
        Self::with_space(system, bath, space, grid)
    }

    pub fn with_space(
        system: SystemModel<T>,
        bath: BathSpec<T>,
        space: Arc<ConfigurationSpace>,
        grid: Arc<SpatialGrid<T>>,
    ) -> Result<Self> {
        if space.n_modes() != bath.n_modes() {
            return Err(Error::contract(format!(
                "configuration space has {} modes, bath has {}",
                space.n_modes(),
                bath.n_modes()
            )));
        }
        let potential = system.potential_on(&grid)?;
        let coupling = system.coupling_on(&grid);
        let bath_energy = space
            .masks()
            .iter()
            .map(|&m| {
                bath.omega()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| m >> j & 1 == 1)
                    .map(|(_, &w)| w)
                    .sum()
            })
            .collect();
        let neg_lambda = bath.lambda().iter().map(|&l| -l).collect();
        let kinetic = KineticOperator::new(&grid, system.mass);
        let flips = space.flip_table();
        let hops = if bath.kappa() > T::zero() {
            space.hop_table()
        } else {
            TransitionTable::default()
        };
        Ok(Self {
            system,
            bath,
            grid,
            space,
            potential,
            coupling,
            bath_energy,
            neg_lambda,
            kinetic,
            flips,
            hops,
        })
    }

    pub fn system(&self) -> &SystemModel<T> {
        &self.system
    }

    pub fn bath(&self) -> &BathSpec<T> {
        &self.bath
    }

    pub fn grid(&self) -> &Arc<SpatialGrid<T>> {
        &self.grid
    }

    pub fn space(&self) -> &Arc<ConfigurationSpace> {
        &self.space
    }

    pub fn potential(&self) -> &[T] {
        &self.potential
    }

    /// f(R) on the grid.
    pub fn coupling_profile(&self) -> &[T] {
        &self.coupling
    }

    /// Σ_{j ∈ c} ω_j per configuration.
    pub fn bath_energies(&self) -> &[T] {
        &self.bath_energy
    }

    pub fn kinetic(&self) -> &KineticOperator<T> {
        &self.kinetic
    }

    pub fn flip_table(&self) -> &TransitionTable {
        &self.flips
    }

    pub fn hop_table(&self) -> &TransitionTable {
        &self.hops
    }

    /// Total number of complex amplitudes in a compatible spinor.
    pub fn len(&self) -> usize {
        self.grid.n_points() * self.space.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zero_state(&self) -> SpinorState<T> {
        SpinorState::zeros(self.grid.clone(), self.space.clone())
    }

    pub fn check_state(&self, psi: &SpinorState<T>) -> Result<()> {
        if psi.n_points() != self.grid.n_points() || psi.dim_config() != self.space.dim() {
            return Err(Error::contract(format!(
                "state shape {}x{} does not match Hamiltonian {}x{}",
                psi.dim_config(),
                psi.n_points(),
                self.space.dim(),
                self.grid.n_points()
            )));
        }
        Ok(())
    }

    /// Writes (selected terms of H)·input into `out`; both are raw amplitude slices.
    pub fn apply_terms_into(&self, terms: Terms, input: &[C<T>], out: &mut [C<T>]) {
        assert_eq!(input.len(), self.len(), "input length");
        assert_eq!(out.len(), self.len(), "output length");
        let n = self.grid.n_points();
        let kappa = self.bath.kappa();
        let row = |c: usize, out_c: &mut [C<T>], scratch: &mut Vec<C<T>>| {
            let src = &input[c * n..(c + 1) * n];
            if terms.system {
                let (fft_scratch, _) = scratch.split_at_mut(self.kinetic_scratch_len());
                self.kinetic.apply_into(src, out_c, fft_scratch);
                for ((o, s), &v) in out_c.iter_mut().zip(src).zip(&self.potential) {
                    *o += s * v;
                }
            } else {
                out_c.iter_mut().for_each(|o| *o = czero());
            }
            if terms.bath {
                let e = self.bath_energy[c];
                for (o, s) in out_c.iter_mut().zip(src) {
                    *o += s * e;
                }
            }
            if terms.coupling {
                let flips = self.flips.from(c);
                if !flips.is_empty() {
                    let acc = &mut scratch[self.kinetic_scratch_len()..];
                    acc.iter_mut().for_each(|a| *a = czero());
                    for t in flips {
                        let w = self.neg_lambda[t.mode as usize];
                        let tgt = t.target as usize;
                        let other = &input[tgt * n..(tgt + 1) * n];
                        for (a, s) in acc.iter_mut().zip(other) {
                            *a += s * w;
                        }
                    }
                    for ((o, a), &f) in out_c.iter_mut().zip(acc.iter()).zip(&self.coupling) {
                        *o += a * f;
                    }
                }
            }
            if terms.interaction && kappa > T::zero() {
                for h in self.hops.from(c) {
                    let tgt = h.target as usize;
                    let other = &input[tgt * n..(tgt + 1) * n];
                    for (o, s) in out_c.iter_mut().zip(other) {
                        *o += s * kappa;
                    }
                }
            }
        };
        let make_scratch = || vec![czero(); self.kinetic_scratch_len() + n];
        if self.len() < PARALLEL_THRESHOLD {
            let mut scratch = make_scratch();
            for (c, out_c) in out.chunks_mut(n).enumerate() {
                row(c, out_c, &mut scratch);
            }
        } else {
            // Each output row is gathered from its own inputs, so the result
            // does not depend on the thread count.
            out.par_chunks_mut(n)
                .enumerate()
                .for_each_init(make_scratch, |scratch, (c, out_c)| row(c, out_c, scratch));
        }
    }

    fn kinetic_scratch_len(&self) -> usize {
        self.kinetic.scratch_len()
    }

    pub fn apply_into(&self, input: &[C<T>], out: &mut [C<T>]) {
        self.apply_terms_into(Terms::ALL, input, out)
    }

    /// H·ψ.
    pub fn apply(&self, psi: &SpinorState<T>) -> Result<SpinorState<T>> {
        self.apply_terms(Terms::ALL, psi)
    }

    pub fn apply_terms(&self, terms: Terms, psi: &SpinorState<T>) -> Result<SpinorState<T>> {
        self.check_state(psi)?;
        let mut out = self.zero_state();
        self.apply_terms_into(terms, psi.amplitudes(), out.amplitudes_mut());
        Ok(out)
    }

    /// Only the mode–mode exchange term κ Σ (σ_j†σ_{j+1} + h.c.).
    pub fn apply_bath_interaction(&self, psi: &SpinorState<T>) -> Result<SpinorState<T>> {
        self.apply_terms(Terms::INTERACTION, psi)
    }

    /// ⟨ψ|selected terms|ψ⟩ (real part; the terms are Hermitian).
    pub fn expectation(&self, terms: Terms, psi: &SpinorState<T>) -> Result<T> {
        let h = self.apply_terms(terms, psi)?;
        Ok(psi.inner(&h).re)
    }

    /// ⟨H_S⟩, ⟨H_B⟩, ⟨H_SB⟩, ⟨H_int⟩ of a normalized state.
    pub fn expectation_parts(&self, psi: &SpinorState<T>) -> Result<EnergyParts<T>> {
        self.check_state(psi)?;
        let norm = psi.norm_sqr();
        if (norm - T::one()).abs().as_f64() > 1e-6 {
            return Err(Error::contract(format!(
                "expectation values need a normalized state, norm² = {norm}"
            )));
        }
        Ok(EnergyParts {
            system: self.expectation(Terms::SYSTEM, psi)?,
            bath: self.expectation(Terms::BATH, psi)?,
            coupling: self.expectation(Terms::COUPLING, psi)?,
            interaction: if self.bath.kappa() > T::zero() {
                self.expectation(Terms::INTERACTION, psi)?
            } else {
                T::zero()
            },
        })
    }

    /// ⟨H⟩ and ⟨H²⟩ − ⟨H⟩² of a normalized state.
    pub fn energy_and_variance(&self, psi: &SpinorState<T>) -> Result<(T, T)> {
        let h = self.apply(psi)?;
        let e = psi.inner(&h).re;
        let h2 = h.norm_sqr();
        Ok((e, h2 - e * e))
    }
}

/// Eigenfrequencies of the single-excitation bath block diag(ω) + κ·(nearest neighbours).
#[derive(Clone, Debug, PartialEq)]
pub struct BathSpectrumShift<T> {
    /// Sorted ascending.
    pub eigenfrequencies: Vec<T>,
    /// max_j |ω̃_j − ω_j|/ω_j over all modes.
    pub max_relative_shift: T,
    /// Same, excluding `edge_width` modes at either end of the band.
    pub interior_max_relative_shift: T,
    /// ⌈2κ/Δω⌉: modes within this distance of a band edge are edge-distorted.
    pub edge_width: usize,
}

/// Spectrum of the bath Hamiltonian including the exchange term, restricted
/// to one excitation.
///
/// With equally spaced ω_j and uniform κ the matrix is a finite
/// Wannier–Stark ladder: interior eigenvalues stay pinned at ω_j while the
/// modes within about 2κ/Δω of either band edge are pushed outward. Both
/// the overall and the interior maximum relative shift are reported.
pub fn bath_spectrum_shift<T: Real>(bath: &BathSpec<T>) -> BathSpectrumShift<T> {
    let n = bath.n_modes();
    let kappa = bath.kappa();
    let w = bath.omega();
    let mut eig = if kappa == T::zero() {
        w.to_vec()
    } else {
        crate::linalg::symmetric_tridiagonal_eigenvalues(w, &vec![kappa; n.saturating_sub(1)])
    };
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let rel: Vec<T> = eig.iter().zip(w).map(|(&e, &x)| ((e - x) / x).abs()).collect();
    let edge = (T::lit(2.0) * kappa / bath.delta_omega())
        .ceil()
        .to_usize()
        .unwrap_or(n);
    let fold = |it: &[T]| it.iter().cloned().fold(T::zero(), T::max);
    let interior = if 2 * edge < n {
        fold(&rel[edge..n - edge])
    } else {
        fold(&rel)
    };
    BathSpectrumShift {
        eigenfrequencies: eig,
        max_relative_shift: fold(&rel),
        interior_max_relative_shift: interior,
        edge_width: edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::sample_ohmic_bath;
    use crate::grid::{displaced_gaussian, MorseParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small(n_modes: usize, n_exc: usize, points: usize, kappa: f64) -> HamiltonianSpec<f64> {
        let grid = Arc::new(SpatialGrid::new(-0.4, 1.2, points).unwrap());
        let bath = sample_ohmic_bath(n_modes, 2.9e-3, 1e-4, 1e5, kappa).unwrap();
        HamiltonianSpec::new(SystemModel::morse(MorseParams::standard()), bath, n_exc, grid).unwrap()
    }

    fn random_state(h: &HamiltonianSpec<f64>, seed: u64) -> SpinorState<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = h.zero_state();
        for a in s.amplitudes_mut() {
            *a = C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        s.normalize();
        s
    }

    #[test]
    fn decoupled_limit_acts_as_system_hamiltonian() {
        let mut h = small(3, 2, 32, 0.0);
        h = HamiltonianSpec::new(*h.system(), h.bath().decoupled(), 2, h.grid().clone()).unwrap();
        let phi = displaced_gaussian(h.grid(), 0.18, 0.09).unwrap();
        let psi = SpinorState::product(h.grid().clone(), h.space().clone(), &phi, 0).unwrap();
        let hpsi = h.apply(&psi).unwrap();
        let hs = h.apply_terms(Terms::SYSTEM, &psi).unwrap();
        for (a, b) in hpsi.amplitudes().iter().zip(hs.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        for c in 1..h.space().dim() {
            assert!(hpsi.component(c).iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn vacuum_has_zero_bath_energy_and_single_excitation_adds_omega() {
        let h = small(4, 2, 16, 0.0);
        assert_eq!(h.bath_energies()[0], 0.0);
        let phi = displaced_gaussian(h.grid(), 0.2, 0.09).unwrap();
        let psi = SpinorState::product(h.grid().clone(), h.space().clone(), &phi, 1 << 2).unwrap();
        let hb = h.apply_terms(Terms::BATH, &psi).unwrap();
        let c = h.space().rank(1 << 2).unwrap();
        let w = h.bath().omega()[2];
        for (a, b) in hb.component(c).iter().zip(psi.component(c)) {
            assert!((a - b * w).norm() < 1e-18);
        }
    }

    #[test]
    fn hermitian_on_random_pairs() {
        for &kappa in &[0.0, 2e-4] {
            let h = small(4, 2, 32, kappa);
            for seed in 0..4 {
                let a = random_state(&h, seed);
                let b = random_state(&h, seed + 100);
                let lhs = a.inner(&h.apply(&b).unwrap());
                let rhs = h.apply(&a).unwrap().inner(&b);
                assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1e-12));
                let lhs = a.inner(&h.apply_bath_interaction(&b).unwrap());
                let rhs = h.apply_bath_interaction(&a).unwrap().inner(&b);
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coupling_changes_popcount_by_one() {
        let h = small(4, 3, 16, 0.0);
        let phi = displaced_gaussian(h.grid(), 0.2, 0.09).unwrap();
        let psi = SpinorState::product(h.grid().clone(), h.space().clone(), &phi, 0b0101).unwrap();
        let out = h.apply_terms(Terms::COUPLING, &psi).unwrap();
        for c in 0..h.space().dim() {
            let pc = h.space().unrank(c).unwrap().count_ones();
            let w = out.component_weight(c);
            if pc != 1 && pc != 3 {
                assert_eq!(w, 0.0);
            }
        }
        // modes 1 and 3 up, 0 and 2 down
        for m in [0b0100u64, 0b0001, 0b0111, 0b1101] {
            assert!(out.component_weight(h.space().rank(m).unwrap()) > 0.0);
        }
    }

    #[test]
    fn interaction_spreads_single_excitation_to_neighbours() {
        let kappa = 3e-4;
        let h = small(3, 1, 16, kappa);
        let phi = displaced_gaussian(h.grid(), 0.2, 0.09).unwrap();
        let psi = SpinorState::product(h.grid().clone(), h.space().clone(), &phi, 0b010).unwrap();
        let out = h.apply_bath_interaction(&psi).unwrap();
        let c0 = h.space().rank(0b001).unwrap();
        let c2 = h.space().rank(0b100).unwrap();
        for (i, a) in phi.values.iter().enumerate() {
            assert!((out.component(c0)[i] - a * kappa).norm() < 1e-20);
            assert!((out.component(c2)[i] - a * kappa).norm() < 1e-20);
        }
        assert_eq!(out.component_weight(h.space().rank(0b010).unwrap()), 0.0);
        let h0 = small(3, 1, 16, 0.0);
        let z = h0.apply_bath_interaction(&psi).unwrap();
        assert!(z.amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn energy_parts_sum_to_total() {
        let h = small(4, 2, 32, 1e-4);
        let psi = random_state(&h, 9);
        let parts = h.expectation_parts(&psi).unwrap();
        let total = h.expectation(Terms::ALL, &psi).unwrap();
        assert!((parts.total() - total).abs() < 1e-10);
        let full = h.apply(&psi).unwrap();
        assert!(psi.inner(&full).im.abs() < 1e-12);
        let mut big = psi.clone();
        big.amplitudes_mut().iter_mut().for_each(|a| *a = *a * 2.0);
        assert!(matches!(h.expectation_parts(&big), Err(Error::Contract(_))));
    }

    #[test]
    fn shape_mismatch_is_a_contract_violation() {
        let h = small(3, 2, 16, 0.0);
        let other = small(3, 1, 16, 0.0);
        let psi = random_state(&other, 1);
        assert!(matches!(h.apply(&psi), Err(Error::Contract(_))));
    }

    #[test]
    fn spectrum_shift_two_modes_matches_closed_form() {
        let bath = sample_ohmic_bath::<f64>(2, 2.0e-3, 1e-5, 1e5, 3e-4).unwrap();
        let s = bath_spectrum_shift(&bath);
        let (a, b) = (bath.omega()[0], bath.omega()[1]);
        let mid = 0.5 * (a + b);
        let r = (((b - a) / 2.0).powi(2) + 3e-4f64.powi(2)).sqrt();
        assert!((s.eigenfrequencies[0] - (mid - r)).abs() < 1e-16);
        assert!((s.eigenfrequencies[1] - (mid + r)).abs() < 1e-16);
        let none = bath_spectrum_shift(&bath.with_kappa(0.0));
        assert_eq!(none.eigenfrequencies, bath.omega());
        assert_eq!(none.max_relative_shift, 0.0);
    }
}
