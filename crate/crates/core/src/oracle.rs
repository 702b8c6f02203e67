//! Dense reference implementation for small instances.
//!
//! The full 2^N·n_points Hamiltonian is assembled directly from its
//! definition (an explicit DFT kinetic matrix, tensor products, spin flips)
//! without going through the matrix-free engine, then diagonalized.
//! Everything here is `f64`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::bath::{sample_ohmic_bath, ConfigurationSpace};
use crate::error::{Error, Result};
use crate::grid::{displaced_gaussian, MorseParams, SpatialGrid, SystemModel};
use crate::hamiltonian::{HamiltonianSpec, SpinorState};
use crate::propagator::{propagate, ChebychevPlan};
use crate::units::rate_from_inverse_fs;

/// Largest dense dimension the oracle accepts, 2^12·64.
pub const SIZE_GUARD: usize = 262_144;

/// Dense Hamiltonian of an untruncated instance plus its eigen-decomposition.
pub struct DenseInstance {
    n_points: usize,
    masks: Vec<u64>,
    matrix: DMatrix<Complex64>,
    eigen: Option<SymmetricEigen<Complex64, nalgebra::Dyn>>,
}

/// Full configuration list in popcount-then-value order.
fn full_masks(n_modes: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n_modes).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
}

/// T_{ab} = (1/n) Σ_k e^{i k (R_a − R_b)} k²/2M on the grid.
fn kinetic_matrix(grid: &SpatialGrid<f64>, mass: f64) -> Vec<f64> {
    let n = grid.n_points();
    let r = grid.positions();
    let k = grid.k_values();
    let mut t = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            let s: f64 = k.iter().map(|&kk| (kk * (r[a] - r[b])).cos() * kk * kk).sum();
            t[a * n + b] = s / (2.0 * mass * n as f64);
        }
    }
    t
}

/// Assembles the dense Hamiltonian; `h` must be untruncated (N_exc = N).
pub fn build_dense(h: &HamiltonianSpec<f64>) -> Result<DenseInstance> {
    let n_modes = h.bath().n_modes();
    if h.space().n_exc() != n_modes {
        return Err(Error::contract(format!(
            "oracle needs an untruncated space (N_exc = N = {n_modes}, got {})",
            h.space().n_exc()
        )));
    }
    let n = h.grid().n_points();
    let dim = (1usize << n_modes) * n;
    if n_modes >= 32 || dim > SIZE_GUARD {
        return Err(Error::SizeGuard { dim, limit: SIZE_GUARD });
    }
    let masks = full_masks(n_modes);
    let index = |m: u64| {
        masks
            .binary_search_by_key(&(m.count_ones(), m), |&x| (x.count_ones(), x))
            .ok()
    };
    let grid = h.grid();
    let system = h.system();
    let potential = system.potential_on(grid)?;
    let f: Vec<f64> = grid.positions().iter().map(|&r| system.coupling.value(r)).collect();
    let tkin = kinetic_matrix(grid, system.mass);
    let bath = h.bath();
    let (omega, lambda, kappa) = (bath.omega(), bath.lambda(), bath.kappa());

    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (c, &mask) in masks.iter().enumerate() {
        let e_bath: f64 = (0..n_modes).filter(|&j| mask >> j & 1 == 1).map(|j| omega[j]).sum();
        for a in 0..n {
            let row = c * n + a;
            for b in 0..n {
                m[(row, c * n + b)] += Complex64::new(tkin[a * n + b], 0.0);
            }
            m[(row, row)] += Complex64::new(potential[a] + e_bath, 0.0);
        }
        for j in 0..n_modes {
            let c2 = index(mask ^ 1 << j).expect("full space");
            for a in 0..n {
                m[(c * n + a, c2 * n + a)] += Complex64::new(-lambda[j] * f[a], 0.0);
            }
        }
        if kappa > 0.0 {
            for j in 0..n_modes.saturating_sub(1) {
                if (mask >> j & 1) != (mask >> (j + 1) & 1) {
                    let c2 = index(mask ^ (0b11 << j)).expect("full space");
                    for a in 0..n {
                        m[(c * n + a, c2 * n + a)] += Complex64::new(kappa, 0.0);
                    }
                }
            }
        }
    }
    Ok(DenseInstance {
        n_points: n,
        masks,
        matrix: m,
        eigen: None,
    })
}

impl DenseInstance {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// max |H − H†|.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn eigen(&mut self) -> &SymmetricEigen<Complex64, nalgebra::Dyn> {
        if self.eigen.is_none() {
            self.eigen = Some(self.matrix.clone().symmetric_eigen());
        }
        self.eigen.as_ref().expect("just computed")
    }

    /// Sorted eigenvalues.
    pub fn eigenvalues(&mut self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigen().eigenvalues.iter().cloned().collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        v
    }

    /// U·e^{−iΛt}·U†·ψ0.
    pub fn exact_propagate(&mut self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if psi0.len() != self.dim() {
            return Err(Error::contract("state length does not match dense instance"));
        }
        let e = self.eigen();
        let v = DVector::from_column_slice(psi0);
        let mut coeff = e.eigenvectors.adjoint() * v;
        for (c, &lam) in coeff.iter_mut().zip(e.eigenvalues.iter()) {
            *c *= Complex64::new(0.0, -lam * t).exp();
        }
        Ok((&e.eigenvectors * coeff).iter().cloned().collect())
    }

    /// Lowest eigenpair; the vector is normalized with the grid weight `dr`.
    pub fn exact_ground_state(&mut self, dr: f64) -> (f64, Vec<Complex64>) {
        let e = self.eigen();
        let (k, &e0) = e
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
            .expect("non-empty");
        let scale = 1.0 / dr.sqrt();
        (e0, e.eigenvectors.column(k).iter().map(|z| z * scale).collect())
    }

    /// Reduced system density by brute-force partial trace.
    pub fn system_density(&self, psi: &[Complex64], dr: f64) -> Vec<Complex64> {
        let n = self.n_points;
        let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
        for c in 0..self.masks.len() {
            for a in 0..n {
                for b in 0..n {
                    rho[a * n + b] += psi[c * n + a] * psi[c * n + b].conj() * dr;
                }
            }
        }
        rho
    }

    /// 4 × 4 density of modes (i, j) by brute-force partial trace.
    pub fn pair_density(&self, psi: &[Complex64], i: usize, j: usize, dr: f64) -> [[Complex64; 4]; 4] {
        let n = self.n_points;
        let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (c, &m) in self.masks.iter().enumerate() {
            for (c2, &m2) in self.masks.iter().enumerate() {
                let rest = !((1u64 << i) | (1u64 << j));
                if m & rest != m2 & rest {
                    continue;
                }
                let s1 = 2 * (m >> i & 1) as usize + (m >> j & 1) as usize;
                let s2 = 2 * (m2 >> i & 1) as usize + (m2 >> j & 1) as usize;
                for a in 0..n {
                    rho[s1][s2] += psi[c * n + a] * psi[c2 * n + a].conj() * dr;
                }
            }
        }
        rho
    }
}

/// Copies a spinor into the full space of the oracle (zeros outside the truncation).
pub fn embed(psi: &SpinorState<f64>, inst: &DenseInstance) -> Vec<Complex64> {
    let n = psi.n_points();
    let mut out = vec![Complex64::new(0.0, 0.0); inst.dim()];
    for (c, &mask) in inst.masks.iter().enumerate() {
        if let Some(src) = psi.space().rank(mask) {
            out[c * n..(c + 1) * n].copy_from_slice(psi.component(src));
        }
    }
    out
}

/// Coupling strengths (γ⁻¹ in fs) exercised by the verification matrix.
pub const VERIFY_GAMMA_INV_FS: [f64; 3] = [1630.0, 163.0, 54.0];
/// Grid sizes exercised by the verification matrix.
pub const VERIFY_POINTS: [usize; 2] = [16, 32];
/// Comparison time (a.u.).
pub const VERIFY_TIME_AU: f64 = 500.0;

/// One verified instance.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub n_modes: usize,
    pub n_points: usize,
    pub gamma_inv_fs: f64,
    /// max |ψ_engine − ψ_oracle| at t = 500 a.u.
    pub max_amplitude_error: f64,
    /// max |H_dense − H_matrix-free| over all columns.
    pub max_matrix_error: f64,
}

/// Untruncated Morse instance on the default grid interval with the
/// standard bath parameters.
pub fn small_instance(n_modes: usize, n_points: usize, gamma_inv_fs: f64) -> Result<HamiltonianSpec<f64>> {
    let grid = Arc::new(SpatialGrid::new(-0.4, 1.2, n_points)?);
    let system = SystemModel::morse(MorseParams::standard());
    let bath = sample_ohmic_bath(n_modes, 2.9e-3, rate_from_inverse_fs(gamma_inv_fs), 1e5, 0.0)?;
    HamiltonianSpec::new(system, bath, n_modes, grid)
}

/// Largest deviation between columns of the dense matrix and the
/// matrix-free application to unit vectors.
pub fn matrix_deviation(h: &HamiltonianSpec<f64>, inst: &DenseInstance) -> f64 {
    let dim = h.len();
    let mut unit = vec![Complex64::new(0.0, 0.0); dim];
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    let mut worst = 0.0f64;
    for k in 0..dim {
        unit[k] = Complex64::new(1.0, 0.0);
        h.apply_into(&unit, &mut col);
        unit[k] = Complex64::new(0.0, 0.0);
        for (r, v) in col.iter().enumerate() {
            worst = worst.max((v - inst.matrix[(r, k)]).norm());
        }
    }
    worst
}

/// Propagates a displaced Gaussian ⊗ vacuum and a seeded random state
/// with both engines; returns the verification row.
pub fn verify_instance(n_modes: usize, n_points: usize, gamma_inv_fs: f64) -> Result<VerifyRow> {
    let h = small_instance(n_modes, n_points, gamma_inv_fs)?;
    let mut inst = build_dense(&h)?;
    let max_matrix_error = matrix_deviation(&h, &inst);
    let grid = h.grid().clone();
    let r_tilde = MorseParams::<f64>::standard().r_tilde();
    let phi = displaced_gaussian(&grid, 2.0 * r_tilde, r_tilde)?;
    let gaussian = SpinorState::product(grid.clone(), h.space().clone(), &phi, 0)?;
    let random = seeded_state(&h, (n_modes * 1000 + n_points) as u64);
    let steps = 10;
    let plan = ChebychevPlan::for_hamiltonian(&h, VERIFY_TIME_AU / steps as f64)?;
    let mut worst = 0.0f64;
    for psi in [gaussian, random] {
        let engine = propagate(&plan, &h, &psi, steps)?;
        let exact = inst.exact_propagate(&embed(&psi, &inst), VERIFY_TIME_AU)?;
        let got = embed(&engine, &inst);
        for (a, b) in got.iter().zip(&exact) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(VerifyRow {
        n_modes,
        n_points,
        gamma_inv_fs,
        max_amplitude_error: worst,
        max_matrix_error,
    })
}

/// Normalized pseudo-random spinor from a fixed xorshift stream.
pub fn seeded_state(h: &HamiltonianSpec<f64>, seed: u64) -> SpinorState<f64> {
    let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let amps = (0..h.len()).map(|_| Complex64::new(next(), next())).collect();
    let mut psi = SpinorState::from_amplitudes(h.grid().clone(), h.space().clone(), amps).expect("length matches");
    psi.normalize();
    psi
}

/// Runs the full verification matrix for N = 1..=max_n.
pub fn verify_all(max_n: usize) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    for n_modes in 1..=max_n {
        for &n_points in &VERIFY_POINTS {
            for &g in &VERIFY_GAMMA_INV_FS {
                rows.push(verify_instance(n_modes, n_points, g)?);
            }
        }
    }
    Ok(rows)
}

/// Returns the untruncated configuration space matching an oracle instance.
pub fn full_space(n_modes: usize) -> Result<Arc<ConfigurationSpace>> {
    Ok(Arc::new(ConfigurationSpace::new(n_modes, n_modes)?))
}
