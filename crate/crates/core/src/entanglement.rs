//! Pairwise entanglement between bath modes: two-mode reduced density
//! matrices, the partial-transpose test, concurrence and entanglement of
//! formation.

use crate::error::{Error, Result};
use crate::hamiltonian::{inner, SpinorState};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues};
use crate::scalar::{czero, Real, C};

/// Eigenvalues and determinants within this band of zero count as zero.
pub const ZERO_BAND: f64 = 1e-10;

/// 4 × 4 density matrix of a mode pair (i, j) in the basis
/// |00⟩, |01⟩, |10⟩, |11⟩, first slot mode i, second slot mode j.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeDensity<T> {
    pub rho: [[C<T>; 4]; 4],
}

impl<T: Real> TwoModeDensity<T> {
    pub fn from_rows(rho: [[C<T>; 4]; 4]) -> Self {
        Self { rho }
    }

    /// |v⟩⟨v| for a normalized 4-vector.
    pub fn pure(v: [C<T>; 4]) -> Self {
        let mut rho = [[czero(); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                rho[a][b] = v[a] * v[b].conj();
            }
        }
        Self { rho }
    }

    fn flat(&self) -> Vec<C<T>> {
        self.rho.iter().flatten().cloned().collect()
    }

    pub fn trace(&self) -> T {
        (0..4).map(|a| self.rho[a][a].re).sum()
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.flat(), 4)
    }

    /// ρ^{T_j}_{mμ,nν} = ρ_{mν,nμ}: transpose on the second slot.
    pub fn partial_transpose(&self) -> Self {
        let mut out = [[czero(); 4]; 4];
        for m in 0..2 {
            for mu in 0..2 {
                for n in 0..2 {
                    for nu in 0..2 {
                        out[2 * m + mu][2 * n + nu] = self.rho[2 * m + nu][2 * n + mu];
                    }
                }
            }
        }
        Self { rho: out }
    }

    /// Same state with the two slots exchanged.
    pub fn swap_slots(&self) -> Self {
        let s = [0, 2, 1, 3];
        let mut out = [[czero(); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[s[a]][s[b]] = self.rho[a][b];
            }
        }
        Self { rho: out }
    }
}

/// ρ_ij by direct summation over all configurations; `i ≠ j`.
pub fn two_mode_rdm<T: Real>(psi: &SpinorState<T>, i: usize, j: usize) -> Result<TwoModeDensity<T>> {
    let space = psi.space();
    let n_modes = space.n_modes();
    if i == j || i >= n_modes || j >= n_modes {
        return Err(Error::contract(format!(
            "two_mode_rdm needs two distinct modes below {n_modes}, got ({i}, {j})"
        )));
    }
    let dr = psi.grid().dr();
    let (bi, bj) = (1u64 << i, 1u64 << j);
    let mut rho = [[czero(); 4]; 4];
    for (c, &mask) in space.masks().iter().enumerate() {
        let slot = 2 * usize::from(mask & bi != 0) + usize::from(mask & bj != 0);
        let base = mask & !(bi | bj);
        for other in 0..4 {
            let m2 = base | if other & 2 != 0 { bi } else { 0 } | if other & 1 != 0 { bj } else { 0 };
            if let Some(c2) = space.rank(m2) {
                // Σ_R ψ_c ψ*_{c2}
                rho[slot][other] += inner(psi.component(c2), psi.component(c)) * dr;
            }
        }
    }
    Ok(TwoModeDensity { rho })
}

/// Two-mode density matrices for every pair i < j, indexed `[i][j]`.
///
/// Uses the sparsity of the configuration space: diagonal entries come from
/// single and pair occupations, coherences from overlaps of configurations
/// that differ in one mode (these feed every pair containing that mode) or
/// in exactly the two modes of the pair.
pub fn all_pair_rdms<T: Real>(psi: &SpinorState<T>) -> Vec<Vec<Option<TwoModeDensity<T>>>> {
    let space = psi.space();
    let n = space.n_modes();
    let dr = psi.grid().dr();
    let masks = space.masks();
    let weights: Vec<T> = (0..masks.len()).map(|c| psi.component_weight(c)).collect();
    let total: T = weights.iter().cloned().sum();

    let mut single = vec![T::zero(); n];
    let mut both = vec![vec![T::zero(); n]; n];
    for (c, &mask) in masks.iter().enumerate() {
        let w = weights[c];
        let bits: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
        for (x, &a) in bits.iter().enumerate() {
            single[a] += w;
            for &b in &bits[x + 1..] {
                both[a][b] += w;
            }
        }
    }

    let mut out: Vec<Vec<Option<TwoModeDensity<T>>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let p11 = both[i][j];
            let mut rho = [[czero(); 4]; 4];
            rho[0][0] = C::new(total - single[i] - single[j] + p11, T::zero());
            rho[1][1] = C::new(single[j] - p11, T::zero());
            rho[2][2] = C::new(single[i] - p11, T::zero());
            rho[3][3] = C::new(p11, T::zero());
            out[i][j] = Some(TwoModeDensity { rho });
        }
    }

    // one-mode coherences: c lacks mode k, c' = c | k
    for (c, &mask) in masks.iter().enumerate() {
        for k in 0..n {
            if mask >> k & 1 == 1 {
                continue;
            }
            let Some(c1) = space.rank(mask | 1 << k) else {
                continue;
            };
            // Σ ψ_c ψ*_{c1}: element ⟨.. 0_k ..|ρ|.. 1_k ..⟩
            let g = inner(psi.component(c1), psi.component(c)) * dr;
            if g == czero() {
                continue;
            }
            for other in 0..n {
                if other == k {
                    continue;
                }
                let o = usize::from(mask >> other & 1 == 1);
                let (i, j) = (other.min(k), other.max(k));
                let (row, col) = if other < k {
                    // k is the second slot
                    (2 * o, 2 * o + 1)
                } else {
                    (o, 2 + o)
                };
                let r = out[i][j].as_mut().expect("pair allocated");
                r.rho[row][col] += g;
                r.rho[col][row] += g.conj();
            }
        }
    }

    // two-mode coherences: configurations differing exactly in bits i and j
    for (c, &mask) in masks.iter().enumerate() {
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (mask >> i & 1, mask >> j & 1);
                // visit each unordered configuration pair once, from the
                // |00⟩ side or the |01⟩ side
                let (row, col) = match (a, b) {
                    (0, 0) => (0, 3),
                    (0, 1) => (1, 2),
                    _ => continue,
                };
                let Some(c2) = space.rank(mask ^ (1 << i | 1 << j)) else {
                    continue;
                };
                let g = inner(psi.component(c2), psi.component(c)) * dr;
                let r = out[i][j].as_mut().expect("pair allocated");
                r.rho[row][col] += g;
                r.rho[col][row] += g.conj();
            }
        }
    }
    out
}

/// (λ_0, W_1, W_2): smallest eigenvalue of ρ^{T_j} and the two 2 × 2
/// determinants of ρ^{T_j} on the {|00⟩, |11⟩} and {|01⟩, |10⟩} blocks.
pub fn partial_transpose_diagnostics<T: Real>(rho: &TwoModeDensity<T>) -> (T, T, T) {
    let pt = rho.partial_transpose();
    let lambda0 = pt.eigenvalues()[0];
    let r = &pt.rho;
    let w1 = (r[0][0] * r[3][3] - r[0][3] * r[3][0]).re;
    let w2 = (r[1][1] * r[2][2] - r[1][2] * r[2][1]).re;
    (lambda0, w1, w2)
}

/// Binary entropy in bits, with h(0) = h(1) = 0.
pub fn binary_entropy<T: Real>(x: T) -> T {
    let term = |p: T| {
        if p <= T::zero() {
            T::zero()
        } else {
            -p * p.log2()
        }
    };
    term(x) + term(T::one() - x)
}

/// Entanglement of formation from the concurrence.
pub fn eof_from_concurrence<T: Real>(c: T) -> T {
    let c = c.max(T::zero()).min(T::one());
    let x = (T::one() + (T::one() - c * c).max(T::zero()).sqrt()) * T::lit(0.5);
    binary_entropy(x)
}

/// Concurrence C and entanglement of formation E.
///
/// The λ_k are the square roots of the eigenvalues of ρρ̃, obtained from
/// the Hermitian matrix sqrt(ρ)·ρ̃·sqrt(ρ), which has the same spectrum.
pub fn concurrence_and_eof<T: Real>(rho: &TwoModeDensity<T>) -> (T, T) {
    // ρ̃ = (σy⊗σy) ρ* (σy⊗σy); σy⊗σy = antidiag(−1, 1, 1, −1)
    let sign = [-T::one(), T::one(), T::one(), -T::one()];
    let mut tilde = vec![czero(); 16];
    for a in 0..4 {
        for b in 0..4 {
            tilde[a * 4 + b] = rho.rho[3 - a][3 - b].conj() * (sign[a] * sign[b]);
        }
    }
    let (vals, vecs) = hermitian_eigen(&rho.flat(), 4);
    let mut sqrt_rho = vec![czero(); 16];
    for k in 0..4 {
        let s = vals[k].max(T::zero()).sqrt();
        if s == T::zero() {
            continue;
        }
        for a in 0..4 {
            for b in 0..4 {
                sqrt_rho[a * 4 + b] += vecs[a * 4 + k] * vecs[b * 4 + k].conj() * s;
            }
        }
    }
    let m = crate::linalg::matmul(&crate::linalg::matmul(&sqrt_rho, &tilde, 4), &sqrt_rho, 4);
    // symmetrize against round-off before the Hermitian solver
    let mut herm = vec![czero(); 16];
    for a in 0..4 {
        for b in 0..4 {
            herm[a * 4 + b] = (m[a * 4 + b] + m[b * 4 + a].conj()) * T::lit(0.5);
        }
    }
    let mut lam: Vec<T> = hermitian_eigenvalues(&herm, 4)
        .into_iter()
        .map(|e| e.max(T::zero()).sqrt())
        .collect();
    lam.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let c = (lam[0] - lam[1] - lam[2] - lam[3]).max(T::zero()).min(T::one());
    (c, eof_from_concurrence(c))
}

/// All diagnostics for one mode pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairEntanglementRecord {
    pub i: usize,
    pub j: usize,
    pub lambda0: f64,
    pub w1: f64,
    pub w2: f64,
    pub concurrence: f64,
    pub eof: f64,
}

impl PairEntanglementRecord {
    pub fn evaluate<T: Real>(i: usize, j: usize, rho: &TwoModeDensity<T>) -> Self {
        let (l0, w1, w2) = partial_transpose_diagnostics(rho);
        let (c, e) = concurrence_and_eof(rho);
        Self {
            i,
            j,
            lambda0: l0.as_f64(),
            w1: w1.as_f64(),
            w2: w2.as_f64(),
            concurrence: c.as_f64(),
            eof: e.as_f64(),
        }
    }

    /// λ_0 below −1e−10.
    pub fn is_entangled(&self) -> bool {
        self.lambda0 < -ZERO_BAND
    }
}

/// Bath-wide averages over all C(N, 2) pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EntanglementSummary {
    /// Mean λ_0 over entangled pairs only (0 when none).
    pub mean_lambda0: f64,
    /// Mean λ_0 over all pairs, with non-negative values counted as 0.
    pub mean_lambda0_all: f64,
    pub entangled_fraction: f64,
    /// Mean entanglement of formation over all pairs.
    pub mean_eof: f64,
    pub n_pairs: usize,
}

/// Per-pair records for every i < j.
pub fn pair_records<T: Real>(psi: &SpinorState<T>) -> Vec<PairEntanglementRecord> {
    let rdms = all_pair_rdms(psi);
    let mut out = Vec::new();
    for (i, row) in rdms.iter().enumerate() {
        for (j, rho) in row.iter().enumerate() {
            if let Some(rho) = rho {
                out.push(PairEntanglementRecord::evaluate(i, j, rho));
            }
        }
    }
    out
}

/// Averages of per-pair records.
pub fn summarize(records: &[PairEntanglementRecord]) -> EntanglementSummary {
    let n_pairs = records.len();
    if n_pairs == 0 {
        return EntanglementSummary::default();
    }
    let entangled: Vec<&PairEntanglementRecord> = records.iter().filter(|r| r.is_entangled()).collect();
    let mean_lambda0 = if entangled.is_empty() {
        0.0
    } else {
        entangled.iter().map(|r| r.lambda0).sum::<f64>() / entangled.len() as f64
    };
    EntanglementSummary {
        mean_lambda0,
        mean_lambda0_all: entangled.iter().map(|r| r.lambda0).sum::<f64>() / n_pairs as f64,
        entangled_fraction: entangled.len() as f64 / n_pairs as f64,
        mean_eof: records.iter().map(|r| r.eof).sum::<f64>() / n_pairs as f64,
        n_pairs,
    }
}

/// (mean λ_0 over entangled pairs, entangled fraction, mean E over all pairs).
pub fn bath_entanglement_summary<T: Real>(psi: &SpinorState<T>) -> Result<EntanglementSummary> {
    if psi.space().n_modes() < 2 {
        return Err(Error::contract("entanglement summary needs at least two bath modes"));
    }
    Ok(summarize(&pair_records(psi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::ConfigurationSpace;
    use crate::grid::{displaced_gaussian, SpatialGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn c(re: f64) -> C<f64> {
        C::new(re, 0.0)
    }

    fn bell() -> TwoModeDensity<f64> {
        let s = 0.5f64.sqrt();
        TwoModeDensity::pure([c(0.0), c(s), c(s), c(0.0)])
    }

    fn werner(p: f64) -> TwoModeDensity<f64> {
        let b = bell();
        let mut rho = b.rho;
        for a in 0..4 {
            for x in 0..4 {
                rho[a][x] = rho[a][x] * p + if a == x { c((1.0 - p) / 4.0) } else { c(0.0) };
            }
        }
        TwoModeDensity { rho }
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let (l0, w1, w2) = partial_transpose_diagnostics(&bell());
        assert!((l0 + 0.5).abs() < 1e-12);
        assert!((w1 + 0.25).abs() < 1e-15 && (w2 - 0.25).abs() < 1e-15);
        let (cc, e) = concurrence_and_eof(&bell());
        assert!((cc - 1.0).abs() < 1e-10 && (e - 1.0).abs() < 1e-10);
    }

    #[test]
    fn werner_concurrence() {
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let (cc, _) = concurrence_and_eof(&werner(p));
            let expect = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((cc - expect).abs() < 1e-10, "p = {p}: {cc} vs {expect}");
            let (l0, _, _) = partial_transpose_diagnostics(&werner(p));
            assert!((l0 - (1.0 - 3.0 * p) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eof_monotone_in_concurrence() {
        let mut last = 0.0;
        for k in 0..=1000 {
            let e = eof_from_concurrence(k as f64 / 1000.0);
            assert!(e >= last - 1e-15);
            last = e;
        }
        assert_eq!(eof_from_concurrence(0.0), 0.0);
    }

    fn state_with(n_modes: usize, n_exc: usize, amps: &[(u64, C<f64>)]) -> SpinorState<f64> {
        let g = Arc::new(SpatialGrid::new(-1.0, 1.0, 16).unwrap());
        let space = Arc::new(ConfigurationSpace::new(n_modes, n_exc).unwrap());
        let phi = displaced_gaussian(&g, 0.0, 0.2).unwrap();
        let mut psi = SpinorState::zeros(g, space.clone());
        for &(mask, a) in amps {
            let idx = space.rank(mask).unwrap();
            for (x, y) in psi.component_mut(idx).iter_mut().zip(&phi.values) {
                *x = y * a;
            }
        }
        psi
    }

    #[test]
    fn one_bell_pair_among_four_modes() {
        let s = 0.5f64.sqrt();
        let psi = state_with(4, 2, &[(0b0010, c(s)), (0b1000, c(s))]);
        let summary = bath_entanglement_summary(&psi).unwrap();
        assert!((summary.entangled_fraction - 1.0 / 6.0).abs() < 1e-12);
        assert!((summary.mean_lambda0 + 0.5).abs() < 1e-10);
        let rho = two_mode_rdm(&psi, 1, 3).unwrap();
        let (cc, _) = concurrence_and_eof(&rho);
        assert!((cc - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vacuum_has_no_entanglement() {
        let psi = state_with(5, 2, &[(0, c(1.0))]);
        let rho = two_mode_rdm(&psi, 0, 4).unwrap();
        assert!((rho.rho[0][0].re - 1.0).abs() < 1e-12);
        let s = bath_entanglement_summary(&psi).unwrap();
        assert_eq!((s.mean_lambda0, s.entangled_fraction, s.mean_eof), (0.0, 0.0, 0.0));
        assert!(two_mode_rdm(&psi, 2, 2).is_err());
    }

    fn random_spinor(n_modes: usize, n_exc: usize, seed: u64) -> SpinorState<f64> {
        let g = Arc::new(SpatialGrid::new(-1.0, 1.0, 8).unwrap());
        let space = Arc::new(ConfigurationSpace::new(n_modes, n_exc).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..g.n_points() * space.dim())
            .map(|_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut psi = SpinorState::from_amplitudes(g, space, amps).unwrap();
        psi.normalize();
        psi
    }

    #[test]
    fn all_pairs_agree_with_direct_summation() {
        for (n, k, seed) in [(3, 3, 1), (5, 2, 2), (6, 3, 3), (4, 1, 4)] {
            let psi = random_spinor(n, k, seed);
            let all = all_pair_rdms(&psi);
            for i in 0..n {
                for j in i + 1..n {
                    let fast = all[i][j].unwrap();
                    let direct = two_mode_rdm(&psi, i, j).unwrap();
                    for a in 0..4 {
                        for b in 0..4 {
                            assert!(
                                (fast.rho[a][b] - direct.rho[a][b]).norm() < 1e-13,
                                "N={n} ({i},{j}) [{a}][{b}]"
                            );
                        }
                    }
                    assert!((direct.trace() - 1.0).abs() < 1e-12);
                    assert!(direct.eigenvalues()[0] > -1e-12);
                    // swapping the modes swaps the slots
                    let swapped = two_mode_rdm(&psi, j, i).unwrap();
                    let expect = direct.swap_slots();
                    for a in 0..4 {
                        for b in 0..4 {
                            assert!((swapped.rho[a][b] - expect.rho[a][b]).norm() < 1e-14);
                        }
                    }
                }
            }
        }
    }
}
