//! Discretized Ohmic spin bath and the truncated configuration space.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Where in each frequency bin the mode frequency is placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FrequencySampling {
    /// ω_j = j·Δω for j = 1..N (the top edge of each bin).
    #[default]
    UpperEdge,
    /// ω_j = (j − ½)·Δω.
    Midpoint,
}

/// How couplings are derived from the spectral density.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CouplingNormalization {
    /// λ_j² = J(ω_j)·Δω.
    #[default]
    DensityOfStates,
    /// λ_j² = J(ω_j)·Δω/π. With this choice γ in J(ω) = Mγω is the
    /// friction coefficient of the equivalent harmonic (Caldeira-Leggett)
    /// bath, i.e. the golden-rule energy relaxation rate.
    CaldeiraLeggett,
}

/// Inputs for sampling an Ohmic spectral density J(ω) = Mγω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OhmicBath<T> {
    pub n_modes: usize,
    pub omega_cutoff: T,
    pub gamma: T,
    pub mass: T,
    pub kappa: T,
    pub sampling: FrequencySampling,
    pub normalization: CouplingNormalization,
}

impl<T: Real> OhmicBath<T> {
    pub fn new(n_modes: usize, omega_cutoff: T, gamma: T, mass: T, kappa: T) -> Self {
        Self {
            n_modes,
            omega_cutoff,
            gamma,
            mass,
            kappa,
            sampling: FrequencySampling::default(),
            normalization: CouplingNormalization::default(),
        }
    }

    pub fn with_sampling(mut self, sampling: FrequencySampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn with_normalization(mut self, normalization: CouplingNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn sample(&self) -> Result<BathSpec<T>> {
        if self.n_modes == 0 {
            return Err(Error::config("bath needs at least one mode"));
        }
        if self.n_modes > ConfigurationSpace::MAX_MODES {
            return Err(Error::config(format!(
                "at most {} bath modes are supported, got {}",
                ConfigurationSpace::MAX_MODES,
                self.n_modes
            )));
        }
        if !(self.omega_cutoff > T::zero() && self.gamma > T::zero() && self.mass > T::zero()) {
            return Err(Error::config("omega_cutoff, gamma and mass must all be positive"));
        }
        if !(self.kappa >= T::zero()) {
            return Err(Error::config(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        let delta_omega = self.omega_cutoff / T::from_count(self.n_modes);
        let offset = match self.sampling {
            FrequencySampling::UpperEdge => T::zero(),
            FrequencySampling::Midpoint => T::lit(0.5),
        };
        let omega: Vec<T> = (1..=self.n_modes)
            .map(|j| (T::from_count(j) - offset) * delta_omega)
            .collect();
        let norm = match self.normalization {
            CouplingNormalization::DensityOfStates => T::one(),
            CouplingNormalization::CaldeiraLeggett => T::one() / T::PI(),
        };
        let lambda = omega
            .iter()
            .map(|&w| (self.mass * self.gamma * w * delta_omega * norm).sqrt())
            .collect();
        Ok(BathSpec {
            params: *self,
            delta_omega,
            omega,
            lambda,
        })
    }
}

/// Sampled bath: frequencies, couplings and the mode–mode hopping κ.
#[derive(Clone, Debug, PartialEq)]
pub struct BathSpec<T> {
    params: OhmicBath<T>,
    delta_omega: T,
    omega: Vec<T>,
    lambda: Vec<T>,
}

impl<T: Real> BathSpec<T> {
    pub fn n_modes(&self) -> usize {
        self.omega.len()
    }

    pub fn params(&self) -> &OhmicBath<T> {
        &self.params
    }

    pub fn omega_cutoff(&self) -> T {
        self.params.omega_cutoff
    }

    pub fn gamma(&self) -> T {
        self.params.gamma
    }

    pub fn mass(&self) -> T {
        self.params.mass
    }

    pub fn kappa(&self) -> T {
        self.params.kappa
    }

    pub fn delta_omega(&self) -> T {
        self.delta_omega
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn lambda(&self) -> &[T] {
        &self.lambda
    }

    /// Ohmic spectral density J(ω) = Mγω.
    pub fn spectral_density(&self, w: T) -> T {
        self.params.mass * self.params.gamma * w
    }

    /// Poincaré recurrence time 2π/Δω = 2πN/ω_c, in a.u.
    pub fn recurrence_time(&self) -> T {
        T::TAU() / self.delta_omega
    }

    /// Σ_j λ_j²/ω_j.
    pub fn reorganization_measure(&self) -> T {
        self.lambda.iter().zip(&self.omega).map(|(&l, &w)| l * l / w).sum()
    }

    /// Same bath with every coupling set to zero.
    pub fn decoupled(&self) -> Self {
        let mut b = self.clone();
        b.lambda.iter_mut().for_each(|l| *l = T::zero());
        b
    }

    /// Same bath with a different mode–mode hopping strength.
    pub fn with_kappa(&self, kappa: T) -> Self {
        let mut b = self.clone();
        b.params.kappa = kappa;
        b
    }
}

/// Samples J(ω) = Mγω into `n_modes` modes with the default conventions.
pub fn sample_ohmic_bath<T: Real>(n_modes: usize, omega_cutoff: T, gamma: T, mass: T, kappa: T) -> Result<BathSpec<T>> {
    OhmicBath::new(n_modes, omega_cutoff, gamma, mass, kappa).sample()
}

/// Bath configurations with at most `n_exc` excited modes.
///
/// Bit `j` of a configuration mask is set when mode `j` is excited.
/// Configurations are indexed by ascending popcount, then ascending mask
/// value; this ordering is part of the checkpoint format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationSpace {
    n_modes: usize,
    n_exc: usize,
    /// binom[n][k] for n <= n_modes, k <= n_exc + 1
    binom: Vec<Vec<u64>>,
    /// First index of each popcount block; length n_exc + 2.
    block_start: Vec<usize>,
    masks: Vec<u64>,
}

impl ConfigurationSpace {
    /// One machine word per mask.
    pub const MAX_MODES: usize = 63;

    pub fn new(n_modes: usize, n_exc: usize) -> Result<Self> {
        if n_modes > Self::MAX_MODES {
            return Err(Error::config(format!(
                "at most {} modes fit in a configuration mask, got {n_modes}",
                Self::MAX_MODES
            )));
        }
        if n_exc > n_modes {
            return Err(Error::config(format!(
                "n_exc = {n_exc} exceeds the number of modes {n_modes}"
            )));
        }
        let binom = binomial_table(n_modes, n_exc + 1);
        let mut block_start = Vec::with_capacity(n_exc + 2);
        let mut total = 0usize;
        for k in 0..=n_exc {
            block_start.push(total);
            let size =
                usize::try_from(binom[n_modes][k]).map_err(|_| Error::config("configuration space too large"))?;
            total = total
                .checked_add(size)
                .ok_or_else(|| Error::config("configuration space too large"))?;
        }
        block_start.push(total);
        let mut space = Self {
            n_modes,
            n_exc,
            binom,
            block_start,
            masks: Vec::new(),
        };
        let masks = (0..total).map(|i| space.unrank_uncached(i)).collect();
        space.masks = masks;
        Ok(space)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_exc(&self) -> usize {
        self.n_exc
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Index range holding configurations with exactly `k` excitations.
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        self.block_start[k]..self.block_start[k + 1]
    }

    pub fn is_admissible(&self, mask: u64) -> bool {
        (self.n_modes == 64 || mask >> self.n_modes == 0) && mask.count_ones() as usize <= self.n_exc
    }

    /// Index of an admissible mask.
    pub fn rank(&self, mask: u64) -> Option<usize> {
        if !self.is_admissible(mask) {
            return None;
        }
        let k = mask.count_ones() as usize;
        // Within a popcount block, ascending mask value is colex order of
        // the set-bit positions, ranked by the combinatorial number system.
        let mut r = 0u64;
        let mut rest = mask;
        let mut i = 0;
        while rest != 0 {
            let pos = rest.trailing_zeros() as usize;
            r += self.binom[pos][i + 1];
            rest &= rest - 1;
            i += 1;
        }
        Some(self.block_start[k] + r as usize)
    }

    /// Mask stored at `index`.
    pub fn unrank(&self, index: usize) -> Option<u64> {
        self.masks.get(index).copied()
    }

    fn unrank_uncached(&self, index: usize) -> u64 {
        let k = (0..=self.n_exc)
            .find(|&k| index < self.block_start[k + 1])
            .expect("index in range");
        let mut r = (index - self.block_start[k]) as u64;
        let mut mask = 0u64;
        let mut upper = self.n_modes;
        for i in (1..=k).rev() {
            // largest pos < upper with C(pos, i) <= r
            let mut pos = upper - 1;
            while self.binom[pos][i] > r {
                pos -= 1;
            }
            r -= self.binom[pos][i];
            mask |= 1 << pos;
            upper = pos;
        }
        mask
    }

    /// Index reached by toggling `mode`, or `None` past the truncation.
    pub fn neighbors_under_flip(&self, index: usize, mode: usize) -> Option<usize> {
        if mode >= self.n_modes {
            return None;
        }
        let mask = self.unrank(index)?;
        self.rank(mask ^ (1 << mode))
    }

    /// All admissible single-bit flips, as a compressed table.
    pub fn flip_table(&self) -> TransitionTable {
        let mut offsets = Vec::with_capacity(self.dim() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for &mask in &self.masks {
            for mode in 0..self.n_modes {
                if let Some(target) = self.rank(mask ^ (1 << mode)) {
                    entries.push(Transition {
                        mode: mode as u32,
                        target: target as u32,
                    });
                }
            }
            offsets.push(entries.len());
        }
        TransitionTable { offsets, entries }
    }

    /// Nearest-neighbour exchanges j ↔ j+1 that move one excitation.
    /// `mode` records the lower mode of the pair.
    pub fn hop_table(&self) -> TransitionTable {
        let mut offsets = Vec::with_capacity(self.dim() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for &mask in &self.masks {
            for j in 0..self.n_modes.saturating_sub(1) {
                let pair = 0b11u64 << j;
                let bits = mask & pair;
                if bits != 0 && bits != pair {
                    let target = self.rank(mask ^ pair).expect("popcount preserved");
                    entries.push(Transition {
                        mode: j as u32,
                        target: target as u32,
                    });
                }
            }
            offsets.push(entries.len());
        }
        TransitionTable { offsets, entries }
    }
}

/// One configuration-changing transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub mode: u32,
    pub target: u32,
}

/// Transitions grouped by source configuration (CSR layout).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitionTable {
    offsets: Vec<usize>,
    entries: Vec<Transition>,
}

impl TransitionTable {
    pub fn from(&self, index: usize) -> &[Transition] {
        &self.entries[self.offsets[index]..self.offsets[index + 1]]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest number of transitions leaving a single configuration.
    pub fn max_row(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }
}

/// C(n, k) for n in 0..=n_max, k in 0..=k_max, saturating on overflow.
fn binomial_table(n_max: usize, k_max: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; k_max + 1]; n_max + 1];
    for n in 0..=n_max {
        t[n][0] = 1;
        for k in 1..=k_max.min(n) {
            t[n][k] = t[n - 1][k - 1].saturating_add(if k < n { t[n - 1][k] } else { 0 });
        }
    }
    t
}
