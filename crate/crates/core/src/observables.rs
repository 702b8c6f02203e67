//! Reduced system density, bath populations, trajectory records, the
//! cat-state coherence norm and the pointer-basis decomposition.

use crate::error::{Error, Result};
use crate::grid::{gaussian_wavepacket, GridFunction, SpatialGrid};
use crate::hamiltonian::{EnergyParts, HamiltonianSpec, SpinorState};
use crate::linalg::hermitian_eigenvalues;
use crate::scalar::{czero, Real, C};
use crate::units::au_to_fs;

/// ρ_S(R, R′) = Σ_c ψ_c(R)·ψ_c*(R′)·dr on the grid.
///
/// The grid weight is folded in so the trace is a plain matrix trace.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensityMatrix<T> {
    n: usize,
    rho: Vec<C<T>>,
}

impl<T: Real> ReducedDensityMatrix<T> {
    /// Wraps a row-major n × n matrix.
    pub fn from_matrix(n: usize, rho: Vec<C<T>>) -> Result<Self> {
        if rho.len() != n * n {
            return Err(Error::contract(format!(
                "density matrix needs {} entries, got {}",
                n * n,
                rho.len()
            )));
        }
        Ok(Self { n, rho })
    }

    /// |φ⟩⟨φ| for a grid function normalized with weight dr.
    pub fn pure(phi: &GridFunction<T>, dr: T) -> Self {
        let n = phi.len();
        let mut rho = vec![czero(); n * n];
        for i in 0..n {
            for j in 0..n {
                rho[i * n + j] = phi.values[i] * phi.values[j].conj() * dr;
            }
        }
        Self { n, rho }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.rho[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.rho
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.rho[i * self.n + i].re).sum()
    }

    /// tr{A·B} for two matrices of equal size.
    pub fn trace_product(&self, other: &Self) -> C<T> {
        let n = self.n;
        let mut s = czero();
        for i in 0..n {
            for j in 0..n {
                s += self.rho[i * n + j] * other.rho[j * n + i];
            }
        }
        s
    }

    /// tr ρ².
    pub fn purity(&self) -> T {
        self.trace_product(self).re
    }

    /// max |ρ − ρ†|.
    pub fn hermiticity_error(&self) -> T {
        let n = self.n;
        let mut err = T::zero();
        for i in 0..n {
            for j in i..n {
                err = err.max((self.rho[i * n + j] - self.rho[j * n + i].conj()).norm());
            }
        }
        err
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.rho, self.n)
    }

    /// ⟨R⟩ = Σ_i R_i ρ_ii.
    pub fn mean_position(&self, grid: &SpatialGrid<T>) -> T {
        grid.positions()
            .iter()
            .enumerate()
            .map(|(i, &r)| r * self.rho[i * self.n + i].re)
            .sum()
    }

    /// ⟨a|ρ|b⟩ for grid functions with weight dr.
    pub fn matrix_element(&self, a: &GridFunction<T>, b: &GridFunction<T>, dr: T) -> C<T> {
        let n = self.n;
        let mut s = czero();
        for i in 0..n {
            let ai = a.values[i].conj();
            if ai == czero() {
                continue;
            }
            let mut row = czero();
            for j in 0..n {
                row += self.rho[i * n + j] * b.values[j];
            }
            s += ai * row;
        }
        // ρ carries one factor dr; the two projections contribute dr each,
        // and the grid functions are normalized with Σ|φ|²dr = 1.
        s * dr
    }
}

/// Partial trace over the bath.
pub fn reduce_system_density<T: Real>(psi: &SpinorState<T>) -> ReducedDensityMatrix<T> {
    let n = psi.n_points();
    let dr = psi.grid().dr();
    let mut rho = vec![czero(); n * n];
    for c in 0..psi.dim_config() {
        let comp = psi.component(c);
        if comp.iter().all(|a| *a == czero()) {
            continue;
        }
        for i in 0..n {
            let ai = comp[i] * dr;
            for j in 0..n {
                rho[i * n + j] += ai * comp[j].conj();
            }
        }
    }
    ReducedDensityMatrix { n, rho }
}

/// p_j = Σ_{c ∋ j} ‖ψ_c‖², one entry per bath mode.
pub fn bath_populations<T: Real>(psi: &SpinorState<T>) -> Vec<T> {
    let space = psi.space();
    let mut pops = vec![T::zero(); space.n_modes()];
    for (c, &mask) in space.masks().iter().enumerate() {
        if mask == 0 {
            continue;
        }
        let w = psi.component_weight(c);
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            pops[j] += w;
            m &= m - 1;
        }
    }
    pops
}

/// Weight of each excitation sector (popcount 0, 1, …, N_exc).
pub fn sector_weights<T: Real>(psi: &SpinorState<T>) -> Vec<T> {
    let space = psi.space();
    (0..=space.n_exc())
        .map(|k| space.block(k).map(|c| psi.component_weight(c)).sum())
        .collect()
}

/// Two Gaussian components of a cat state in a harmonic well.
///
/// The components start at `center ± delta/2` with momentum `p0` and are
/// followed in time as coherent states riding on classical trajectories.
/// By default those are free oscillations at `omega0`; [`with_tracking`]
/// switches to a damped oscillation at a shifted frequency, which is what
/// a bath without counter-term actually produces.
///
/// [`with_tracking`]: CatStateBasis::with_tracking
#[derive(Clone, Debug, PartialEq)]
pub struct CatStateBasis<T> {
    pub mass: T,
    pub omega0: T,
    pub center: T,
    pub delta: T,
    pub p0: T,
    /// Frequency of the trajectories the basis follows.
    pub track_omega: T,
    /// Energy damping rate of those trajectories.
    pub track_damping: T,
}

impl<T: Real> CatStateBasis<T> {
    pub fn new(mass: T, omega0: T, center: T, delta: T, p0: T) -> Result<Self> {
        if !(mass > T::zero() && omega0 > T::zero() && delta > T::zero()) {
            return Err(Error::config("cat state needs positive mass, frequency and separation"));
        }
        Ok(Self {
            mass,
            omega0,
            center,
            delta,
            p0,
            track_omega: omega0,
            track_damping: T::zero(),
        })
    }

    /// Follows ẍ = −ω²x − γẋ instead of the free oscillation.
    pub fn with_tracking(mut self, omega: T, damping: T) -> Result<Self> {
        if !(omega > T::lit(0.5) * damping && damping >= T::zero()) {
            return Err(Error::config("basis tracking needs an underdamped oscillator"));
        }
        self.track_omega = omega;
        self.track_damping = damping;
        Ok(self)
    }

    /// Half the separation, R_0 = δ/2.
    pub fn r0(&self) -> T {
        T::lit(0.5) * self.delta
    }

    /// Standard deviation of |φ|² for either component, sqrt(1/(2Mω_0)).
    pub fn position_width(&self) -> T {
        (T::one() / (T::lit(2.0) * self.mass * self.omega0)).sqrt()
    }

    /// Amplitude width parameter w in exp(−x²/(2w²)), 1/sqrt(Mω_0).
    pub fn amplitude_width(&self) -> T {
        (T::one() / (self.mass * self.omega0)).sqrt()
    }

    /// γ_coh = γ·M·ω_0·δ²/2 in a.u.
    pub fn predicted_rate(&self, gamma: T) -> T {
        gamma * self.mass * self.omega0 * self.delta * self.delta / T::lit(2.0)
    }

    /// Phase-space centres (R, P) of both components after time `t` (a.u.).
    pub fn centers_at(&self, t: T) -> [(T, T); 2] {
        let half = T::lit(0.5) * self.track_damping;
        let w = (self.track_omega * self.track_omega - half * half).sqrt();
        let (s, c) = (w * t).sin_cos();
        let decay = (-half * t).exp();
        let m = self.mass;
        let evolve = |x0: T, p: T| {
            let x = x0 - self.center;
            let v = p / m;
            // underdamped solution with x(0) = x, ẋ(0) = v
            let b = (v + half * x) / w;
            let xt = decay * (x * c + b * s);
            let vt = decay * ((b * w - half * x) * c - (x * w + half * b) * s);
            (self.center + xt, m * vt)
        };
        [
            evolve(self.center - self.r0(), self.p0),
            evolve(self.center + self.r0(), self.p0),
        ]
    }

    /// The two normalized components at time `t` (a.u.).
    pub fn components_at(&self, grid: &SpatialGrid<T>, t: T) -> Result<(GridFunction<T>, GridFunction<T>)> {
        let [(xa, pa), (xb, pb)] = self.centers_at(t);
        let w = self.amplitude_width();
        Ok((
            gaussian_wavepacket(grid, xa, w, pa)?,
            gaussian_wavepacket(grid, xb, w, pb)?,
        ))
    }

    /// (φ_a + φ_b)/‖φ_a + φ_b‖ at t = 0.
    pub fn cat_state(&self, grid: &SpatialGrid<T>) -> Result<GridFunction<T>> {
        let (a, b) = self.components_at(grid, T::zero())?;
        let mut sum = GridFunction {
            values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
        };
        sum.normalize(grid.dr());
        Ok(sum)
    }

    /// The balanced incoherent mixture ½(|a⟩⟨a| + |b⟩⟨b|) at t = 0.
    pub fn mixture(&self, grid: &SpatialGrid<T>) -> Result<ReducedDensityMatrix<T>> {
        let (a, b) = self.components_at(grid, T::zero())?;
        let pa = ReducedDensityMatrix::pure(&a, grid.dr());
        let pb = ReducedDensityMatrix::pure(&b, grid.dr());
        let half = T::lit(0.5);
        Ok(ReducedDensityMatrix {
            n: pa.n,
            rho: pa.rho.iter().zip(&pb.rho).map(|(x, y)| (x + y) * half).collect(),
        })
    }
}

/// Largest component overlap for which the orthogonalized basis is trusted.
pub const MAX_CAT_OVERLAP: f64 = 0.5;

/// n_coh = tr{ρ_coh ρ_coh†}, the off-diagonal block of ρ in the
/// symmetrically orthogonalized two-component basis at time `t` (a.u.).
pub fn coherence_norm<T: Real>(
    rho: &ReducedDensityMatrix<T>,
    grid: &SpatialGrid<T>,
    basis: &CatStateBasis<T>,
    t: T,
) -> Result<T> {
    let (a, b) = basis.components_at(grid, t)?;
    let dr = grid.dr();
    let s = a.inner(&b, dr);
    let mag = s.norm();
    if mag.as_f64() > MAX_CAT_OVERLAP {
        return Err(Error::numerical(format!(
            "cat components overlap by {mag:.3}; orthogonalized basis is ill-conditioned"
        )));
    }
    // S^{-1/2} for S = [[1, s], [s*, 1]]
    let alpha = (T::one() + mag).sqrt().recip();
    let beta = (T::one() - mag).sqrt().recip();
    let phase = if mag > T::zero() {
        s / mag
    } else {
        C::new(T::one(), T::zero())
    };
    let diag = C::new(T::lit(0.5) * (alpha + beta), T::zero());
    let off = phase * (T::lit(0.5) * (alpha - beta));
    let x = [[diag, off], [off.conj(), diag]];
    let g = [
        [rho.matrix_element(&a, &a, dr), rho.matrix_element(&a, &b, dr)],
        [rho.matrix_element(&b, &a, dr), rho.matrix_element(&b, &b, dr)],
    ];
    // M = X·G·X, X Hermitian
    let mut m01 = czero();
    for k in 0..2 {
        for l in 0..2 {
            m01 += x[0][k] * g[k][l] * x[l][1];
        }
    }
    Ok(T::lit(2.0) * m01.norm_sqr())
}

/// C² and tr{ρ_coh²} for ρ = ρ_coh + C²·ρ_eq.
pub fn pointer_decomposition<T: Real>(
    rho: &ReducedDensityMatrix<T>,
    rho_eq: &ReducedDensityMatrix<T>,
) -> Result<(T, T)> {
    if rho.dim() != rho_eq.dim() {
        return Err(Error::contract("density matrices differ in size"));
    }
    let eq2 = rho_eq.purity();
    if !(eq2.as_f64() > 1e-12) {
        return Err(Error::numerical(format!(
            "equilibrium reference is degenerate: tr(rho_eq^2) = {eq2:e}"
        )));
    }
    let c2 = rho.trace_product(rho_eq).re / eq2;
    let coh: Vec<C<T>> = rho.rho.iter().zip(&rho_eq.rho).map(|(r, e)| r - e * c2).collect();
    let coh = ReducedDensityMatrix { n: rho.n, rho: coh };
    Ok((c2, coh.purity()))
}

/// One row of the trajectory output.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub time_fs: f64,
    pub mean_r: f64,
    pub parts: EnergyParts<f64>,
    pub norm: f64,
    pub populations: Vec<f64>,
    pub n_coh: Option<f64>,
    pub c2: Option<f64>,
    pub tr_rho_coh2: Option<f64>,
}

impl TrajectoryRecord {
    /// Bare system energy ⟨H_S⟩.
    pub fn e_bare(&self) -> f64 {
        self.parts.system
    }

    /// E_S = ⟨H_S⟩ + ½⟨H_SB⟩.
    pub fn e_eff(&self) -> f64 {
        self.parts.effective_system()
    }

    pub fn e_total(&self) -> f64 {
        self.parts.total()
    }

    /// Measures the standard observables of `psi` at time `t_au`.
    ///
    /// Energies are evaluated on the renormalized state so slight norm
    /// drift does not leak into them; the raw norm is recorded separately.
    pub fn measure<T: Real>(h: &HamiltonianSpec<T>, psi: &SpinorState<T>, t_au: f64) -> Result<Self> {
        let norm = psi.norm_sqr();
        let mut unit = psi.clone();
        unit.normalize();
        let p = h.expectation_parts(&unit)?;
        Ok(Self {
            time_fs: au_to_fs(t_au),
            mean_r: unit.mean_position().as_f64(),
            parts: EnergyParts {
                system: p.system.as_f64(),
                bath: p.bath.as_f64(),
                coupling: p.coupling.as_f64(),
                interaction: p.interaction.as_f64(),
            },
            norm: norm.as_f64(),
            populations: bath_populations(&unit).iter().map(|v| v.as_f64()).collect(),
            n_coh: None,
            c2: None,
            tr_rho_coh2: None,
        })
    }
}

/// Least-squares fit of y = A·e^{−k·t} on the positive samples; returns (k, A).
pub fn fit_exponential_decay(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::numerical("exponential fit needs two positive samples"));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::numerical("exponential fit needs distinct times"));
    }
    let slope = sxy / sxx;
    Ok((-slope, (my - slope * mt).exp()))
}

/// Fits the decay only while `values` stays above `e^{−efolds}` of its
/// first sample; the tail of a finite bath is dominated by revivals.
pub fn fit_initial_decay(times: &[f64], values: &[f64], efolds: f64) -> Result<(f64, f64)> {
    let floor = values.first().copied().unwrap_or(0.0) * (-efolds).exp();
    let end = values.iter().position(|&v| v < floor).unwrap_or(values.len());
    fit_exponential_decay(&times[..end], &values[..end])
}

/// Moving average over `window` consecutive samples, paired with the
/// averaged times.
pub fn moving_average(times: &[f64], values: &[f64], window: usize) -> (Vec<f64>, Vec<f64>) {
    let w = window.max(1);
    if values.len() < w {
        return (Vec::new(), Vec::new());
    }
    let avg = |xs: &[f64]| xs.windows(w).map(|c| c.iter().sum::<f64>() / w as f64).collect();
    (avg(times), avg(values))
}

/// Where a relaxing energy curve levels off.
#[derive(Clone, Debug, PartialEq)]
pub struct Plateau {
    /// Mean |dE/dt| over the initial span, after smoothing.
    pub initial_rate: f64,
    /// First time the smoothed |dE/dt| falls below `fraction·initial_rate`.
    pub onset: Option<f64>,
}

/// Smooths `values` over `window` samples (about one oscillation period so
/// the vibrational exchange between ⟨H_S⟩ and ⟨H_SB⟩ averages out), takes
/// central differences and compares with the mean slope over the first
/// `initial_span` time units.
pub fn plateau_onset(
    times: &[f64],
    values: &[f64],
    window: usize,
    initial_span: f64,
    fraction: f64,
) -> Result<Plateau> {
    let (ts, es) = moving_average(times, values, window);
    if ts.len() < 3 {
        return Err(Error::config("trajectory too short to detect a plateau"));
    }
    let slope: Vec<f64> = (1..ts.len() - 1)
        .map(|i| (es[i + 1] - es[i - 1]) / (ts[i + 1] - ts[i - 1]))
        .collect();
    let t_mid = &ts[1..ts.len() - 1];
    let t0 = t_mid[0];
    let head: Vec<f64> = t_mid
        .iter()
        .zip(&slope)
        .filter(|(t, _)| **t - t0 <= initial_span)
        .map(|(_, s)| *s)
        .collect();
    let initial_rate = (head.iter().sum::<f64>() / head.len() as f64).abs();
    if !(initial_rate > 0.0) {
        return Err(Error::numerical("energy curve has no initial decay"));
    }
    let onset = t_mid
        .iter()
        .zip(&slope)
        .find(|(_, s)| s.abs() < fraction * initial_rate)
        .map(|(t, _)| *t);
    Ok(Plateau { initial_rate, onset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::ConfigurationSpace;
    use crate::grid::displaced_gaussian;
    use std::sync::Arc;

    fn grid() -> Arc<SpatialGrid<f64>> {
        Arc::new(SpatialGrid::new(-1.2, 1.2, 128).unwrap())
    }

    #[test]
    fn product_state_is_pure() {
        let g = grid();
        let space = Arc::new(ConfigurationSpace::new(3, 2).unwrap());
        let phi = displaced_gaussian(&g, 0.1, 0.1).unwrap();
        let psi = SpinorState::product(g.clone(), space, &phi, 0).unwrap();
        let rho = reduce_system_density(&psi);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(rho.hermiticity_error() < 1e-14);
        assert!((rho.mean_position(&g) - 0.1).abs() < 1e-10);
        assert!(bath_populations(&psi).iter().all(|&p| p == 0.0));
    }

    #[test]
    fn entangled_superposition_has_half_purity() {
        let g = grid();
        let space = Arc::new(ConfigurationSpace::new(4, 1).unwrap());
        let a = displaced_gaussian(&g, -0.4, 0.05).unwrap();
        let b = displaced_gaussian(&g, 0.4, 0.05).unwrap();
        let mut psi = SpinorState::zeros(g.clone(), space.clone());
        let s = 0.5f64.sqrt();
        let c0 = space.rank(0).unwrap();
        let c3 = space.rank(1 << 3).unwrap();
        for (x, y) in psi.component_mut(c0).iter_mut().zip(&a.values) {
            *x = y * s;
        }
        for (x, y) in psi.component_mut(c3).iter_mut().zip(&b.values) {
            *x = y * s;
        }
        let rho = reduce_system_density(&psi);
        assert!((rho.purity() - 0.5).abs() < 1e-12);
        let ev = rho.eigenvalues();
        assert!(ev.iter().all(|&e| e > -1e-12));
        let pops = bath_populations(&psi);
        assert!((pops[3] - 0.5).abs() < 1e-12);
        assert!(pops[..3].iter().all(|&p| p == 0.0));
        let sectors = sector_weights(&psi);
        assert!((sectors[0] - 0.5).abs() < 1e-12 && (sectors[1] - 0.5).abs() < 1e-12);
    }

    fn cat() -> CatStateBasis<f64> {
        CatStateBasis::new(1e5, 1e-3, 0.0, 0.5, 0.0).unwrap()
    }

    #[test]
    fn cat_basis_widths_and_rate() {
        let b = cat();
        assert!((b.position_width() - (1.0f64 / 200.0).sqrt()).abs() < 1e-15);
        // 1630 fs → 130 fs
        let gamma = crate::units::rate_from_inverse_fs(1630.0);
        let tau = crate::units::au_to_fs(1.0 / b.predicted_rate(gamma));
        assert!((tau - 130.4).abs() < 0.5, "{tau}");
        let gamma = crate::units::rate_from_inverse_fs(500.0);
        let tau = crate::units::au_to_fs(1.0 / b.predicted_rate(gamma));
        assert!((tau - 40.0).abs() < 0.1, "{tau}");
    }

    #[test]
    fn coherence_norm_of_pure_cat_and_mixture() {
        let g = grid();
        let b = cat();
        let phi = b.cat_state(&g).unwrap();
        let rho = ReducedDensityMatrix::pure(&phi, g.dr());
        let n = coherence_norm(&rho, &g, &b, 0.0).unwrap();
        assert!((n - 0.5).abs() < 1e-10, "{n}");
        let mix = b.mixture(&g).unwrap();
        let m = coherence_norm(&mix, &g, &b, 0.0).unwrap();
        // components overlap by e^{-6.25}, so the mixture is not exactly diagonal
        assert!(m < 1e-5, "{m}");
    }

    #[test]
    fn coherence_norm_follows_free_rotation() {
        let b = CatStateBasis::new(1e5, 1e-3, 0.0, 0.5, 20.0).unwrap();
        let [(xa, pa), (xb, pb)] = b.centers_at(std::f64::consts::FRAC_PI_2 / 1e-3);
        assert!((xa - 20.0 / 100.0).abs() < 1e-12 && (pa - 25.0).abs() < 1e-9);
        assert!((xb - 0.2).abs() < 1e-12 && (pb + 25.0).abs() < 1e-9);
    }

    #[test]
    fn damped_tracking_matches_integrated_trajectory() {
        let (w, g, m) = (0.96e-3, 3e-5, 1e5);
        let b = CatStateBasis::new(m, 1e-3, 0.1, 0.5, 7.0)
            .unwrap()
            .with_tracking(w, g)
            .unwrap();
        // RK4 on ẍ = −ω²(x − c) − γẋ
        let f = |y: [f64; 2]| [y[1], -w * w * (y[0] - 0.1) - g * y[1]];
        let mut y = [0.1 + 0.25, 7.0 / m];
        let h = 1.0;
        for _ in 0..5000 {
            let k1 = f(y);
            let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        let [_, (x, p)] = b.centers_at(5000.0);
        assert!((x - y[0]).abs() < 1e-10, "{x} {}", y[0]);
        assert!((p - m * y[1]).abs() < 1e-6, "{p} {}", m * y[1]);
        assert!(CatStateBasis::new(m, 1e-3, 0.0, 0.5, 0.0)
            .unwrap()
            .with_tracking(1e-3, 3e-3)
            .is_err());
    }

    #[test]
    fn plateau_of_saturating_curve() {
        // E(t) = e^{−t/100} for t < 300, constant afterwards, plus a wobble
        let times: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|&t| (-t.min(300.0) / 100.0).exp() + 1e-4 * (t * 0.5).sin())
            .collect();
        let p = plateau_onset(&times, &values, 25, 20.0, 0.05).unwrap();
        assert!((p.initial_rate - 0.0089).abs() < 1e-3, "{}", p.initial_rate);
        let onset = p.onset.unwrap();
        assert!((onset - 300.0).abs() < 20.0, "{onset}");
        let lin: Vec<f64> = times.iter().map(|t| -t).collect();
        assert_eq!(plateau_onset(&times, &lin, 25, 20.0, 0.05).unwrap().onset, None);
    }

    #[test]
    fn initial_decay_ignores_tail() {
        let times: Vec<f64> = (0..400).map(|k| k as f64).collect();
        let values: Vec<f64> = times.iter().map(|&t| 0.5 * (-t / 50.0).exp() + 0.01).collect();
        let (k, _) = fit_initial_decay(&times, &values, 2.0).unwrap();
        assert!((1.0 / k - 50.0).abs() < 8.0, "{}", 1.0 / k);
        let (k_all, _) = fit_exponential_decay(&times, &values).unwrap();
        assert!(1.0 / k_all > 100.0);
    }

    #[test]
    fn overlapping_components_rejected() {
        let g = grid();
        let b = CatStateBasis::new(1e5, 1e-3, 0.0, 0.05, 0.0).unwrap();
        let phi = b.cat_state(&g).unwrap();
        let rho = ReducedDensityMatrix::pure(&phi, g.dr());
        assert!(coherence_norm(&rho, &g, &b, 0.0).is_err());
    }

    #[test]
    fn pointer_decomposition_limits() {
        let g = grid();
        let a = displaced_gaussian(&g, -0.5, 0.05).unwrap();
        let b = displaced_gaussian(&g, 0.5, 0.05).unwrap();
        let ra = ReducedDensityMatrix::pure(&a, g.dr());
        let rb = ReducedDensityMatrix::pure(&b, g.dr());
        let (c2, coh) = pointer_decomposition(&ra, &ra).unwrap();
        assert!((c2 - 1.0).abs() < 1e-12 && coh.abs() < 1e-12);
        let (c2, coh) = pointer_decomposition(&rb, &ra).unwrap();
        assert!(c2.abs() < 1e-12 && (coh - rb.purity()).abs() < 1e-12);
        let zero = ReducedDensityMatrix::from_matrix(128, vec![C::new(0.0, 0.0); 128 * 128]).unwrap();
        assert!(pointer_decomposition(&ra, &zero).is_err());
    }

    #[test]
    fn exponential_fit_recovers_rate() {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 3.0).collect();
        let y: Vec<f64> = t.iter().map(|&x| 0.5 * (-x / 130.0f64).exp()).collect();
        let (k, a) = fit_exponential_decay(&t, &y).unwrap();
        assert!((1.0 / k - 130.0).abs() < 1e-9 && (a - 0.5).abs() < 1e-12);
    }
}
