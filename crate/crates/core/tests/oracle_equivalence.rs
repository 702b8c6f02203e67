use num_complex::Complex64;
use proptest::prelude::*;

use surrogate::entanglement::two_mode_rdm;
use surrogate::observables::reduce_system_density;
use surrogate::oracle::{build_dense, embed, seeded_state, small_instance};
use surrogate::propagator::{propagate, ChebychevPlan};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn engine_matches_dense_propagation(
        n_modes in 1usize..=3,
        gamma_inv in 54.0f64..1630.0,
        seed in any::<u64>(),
        steps in 1usize..=8,
    ) {
        let h = small_instance(n_modes, 16, gamma_inv).unwrap();
        let mut inst = build_dense(&h).unwrap();
        let psi = seeded_state(&h, seed);
        let dt = 40.0;
        let plan = ChebychevPlan::for_hamiltonian(&h, dt).unwrap();
        let engine = propagate(&plan, &h, &psi, steps).unwrap();
        let exact = inst.exact_propagate(&embed(&psi, &inst), dt * steps as f64).unwrap();
        prop_assert!(max_diff(&embed(&engine, &inst), &exact) < 1e-9);
    }
}

#[test]
fn reduced_densities_match_brute_force() {
    let h = small_instance(3, 16, 163.0).unwrap();
    let inst = build_dense(&h).unwrap();
    let dr = h.grid().dr();
    let psi = seeded_state(&h, 42);
    let flat = embed(&psi, &inst);

    let rho = reduce_system_density(&psi);
    let brute = inst.system_density(&flat, dr);
    assert!(max_diff(rho.as_slice(), &brute) < 1e-13);

    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = two_mode_rdm(&psi, i, j).unwrap();
        let brute = inst.pair_density(&flat, i, j, dr);
        for a in 0..4 {
            assert!(max_diff(&pair.rho[a], &brute[a]) < 1e-13, "pair ({i}, {j})");
        }
    }
}

#[test]
fn dense_matrix_is_hermitian() {
    let h = small_instance(4, 16, 54.0).unwrap();
    let inst = build_dense(&h).unwrap();
    assert_eq!(inst.dim(), 16 * 16);
    assert!(inst.hermiticity_error() < 1e-15);
}
