use entshare::blochlab::{concurrence_bounds, negativity_closed_form, realignment_closed_form};
use entshare::measures::{
    concurrence_pure_cut, concurrence_wootters, negativity, negativity_from_spectrum, realignment_measure,
    schmidt_2xd, Measure, PartitionSpec,
};
use entshare::monogamy::{monogamy_qubitwise, pair_bounds};
use entshare::qmat::{partial_trace, partial_transpose, permute_subsystems, realign, ComplexMatrix, DimSpec};
use entshare::states::{
    bloch_assemble, bloch_decompose, haar_random_pure_dims, haar_unitary, random_local_unitaries, random_mixed,
    sample_rng, DensityMatrix,
};
use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), n in 2usize..4, env in 1usize..3) {
        let rho = random_mixed(n, env, &mut sample_rng(seed, 0)).unwrap();
        let dims = rho.dims().clone();
        let part = [seed as usize % n];
        let twice = partial_transpose(&partial_transpose(rho.matrix(), &dims, &part).unwrap(), &dims, &part).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn realignment_is_an_involution_for_equal_factors(seed in any::<u64>()) {
        let rho = random_mixed(2, 1, &mut sample_rng(seed, 0)).unwrap();
        let d = DimSpec::new(vec![2, 2]).unwrap();
        let twice = realign(&realign(rho.matrix(), &d).unwrap(), &d).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), n in 2usize..5, mask in 1u32..15) {
        let rho = random_mixed(n, 1, &mut sample_rng(seed, 0)).unwrap();
        let keep: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let r = partial_trace(rho.matrix(), rho.dims(), &keep).unwrap();
        prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(r.trace().im.abs() < 1e-12);
        prop_assert!(r.hermitian_eigenvalues().unwrap().iter().all(|&v| v > -1e-12));
    }

    #[test]
    fn trace_norm_bounds_trace(seed in any::<u64>(), n in 2usize..4) {
        let rho = random_mixed(n, 1, &mut sample_rng(seed, 0)).unwrap();
        let pt = partial_transpose(rho.matrix(), rho.dims(), &[0]).unwrap();
        prop_assert!(pt.trace_norm().unwrap() >= pt.trace().norm() - 1e-12);
        let dims = DimSpec::new(vec![2, 1 << (n - 1)]).unwrap();
        let r = realign(rho.matrix(), &dims).unwrap();
        prop_assert!(r.trace_norm().unwrap() >= r.trace().norm() - 1e-12);
    }

    #[test]
    fn spectrum_and_trace_norm_are_unitarily_invariant(seed in any::<u64>()) {
        let mut rng = sample_rng(seed, 0);
        let rho = random_mixed(2, 2, &mut rng).unwrap();
        let u = haar_unitary(4, &mut rng);
        let moved = rho.conjugate_by(&u).unwrap();
        let a = rho.eigenvalues().unwrap();
        let b = moved.eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let h = &rho.matrix().scale_real(2.0) - &ComplexMatrix::identity(4).scale_real(0.4);
        let hu = u.matmul(&h).unwrap().matmul(&u.adjoint()).unwrap();
        prop_assert!((h.trace_norm().unwrap() - hu.trace_norm().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn permutation_round_trip(seed in any::<u64>()) {
        let rho = random_mixed(3, 1, &mut sample_rng(seed, 0)).unwrap();
        let (p, dims) = permute_subsystems(rho.matrix(), rho.dims(), &[2, 0, 1]).unwrap();
        let (back, _) = permute_subsystems(&p, &dims, &[1, 2, 0]).unwrap();
        prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn bloch_round_trip(seed in any::<u64>(), env in 1usize..4) {
        let rho = random_mixed(2, env, &mut sample_rng(seed, 0)).unwrap();
        let d = bloch_decompose(&rho).unwrap();
        prop_assert!(bloch_assemble(&d).max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn pure_state_equality_chain(seed in any::<u64>(), n in 2usize..6) {
        let psi = haar_random_pure_dims(DimSpec::qubits(n), &mut sample_rng(seed, 0));
        let rho = psi.to_density();
        let cut = PartitionSpec::single(seed as usize % n, n).unwrap();
        let c = concurrence_pure_cut(&psi, &cut).unwrap();
        let s = schmidt_2xd(&psi, &cut).unwrap();
        prop_assert!((c - 2.0 * s.lambda_product().sqrt()).abs() < 1e-9);
        prop_assert!((c - 2.0 * negativity(&rho, &cut).unwrap()).abs() < 1e-9);
        prop_assert!((c - 2.0 * realignment_measure(&rho, &cut).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn mixed_two_qubit_ordering(seed in any::<u64>(), env in 1usize..4) {
        let rho = random_mixed(2, env, &mut sample_rng(seed, 0)).unwrap();
        let cut = PartitionSpec::single(0, 2).unwrap();
        let c = concurrence_wootters(&rho).unwrap();
        prop_assert!(2.0 * negativity(&rho, &cut).unwrap() <= c + 1e-9);
        prop_assert!(2.0 * realignment_measure(&rho, &cut).unwrap() <= c + 1e-9);
        let b = concurrence_bounds(&rho).unwrap();
        prop_assert!(c * c <= b.upper + 1e-9);
    }

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = sample_rng(seed, 0);
        let rho = random_mixed(3, 1, &mut rng).unwrap();
        let moved = rho.conjugate_by(&random_local_unitaries(rho.dims(), &mut rng)).unwrap();
        for k in 0..3 {
            let cut = PartitionSpec::single(k, 3).unwrap();
            prop_assert!((negativity(&rho, &cut).unwrap() - negativity(&moved, &cut).unwrap()).abs() < 1e-10);
            prop_assert!((realignment_measure(&rho, &cut).unwrap() - realignment_measure(&moved, &cut).unwrap()).abs() < 1e-10);
        }
        let ab = rho.reduced(&[0, 1]).unwrap();
        let ab2 = moved.reduced(&[0, 1]).unwrap();
        prop_assert!((concurrence_wootters(&ab).unwrap() - concurrence_wootters(&ab2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn negativity_spectrum_equivalence(seed in any::<u64>(), n in 2usize..4) {
        let rho = random_mixed(n, 1, &mut sample_rng(seed, 0)).unwrap();
        let cut = PartitionSpec::single(0, n).unwrap();
        prop_assert!((negativity(&rho, &cut).unwrap() - negativity_from_spectrum(&rho, &cut).unwrap()).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn qubitwise_monogamy_holds(seed in any::<u64>(), n in 3usize..5) {
        let psi = haar_random_pure_dims(DimSpec::qubits(n), &mut sample_rng(seed, 0));
        for m in [Measure::Concurrence, Measure::Negativity, Measure::Realignment] {
            prop_assert!(monogamy_qubitwise(&psi, seed as usize % n, m).unwrap().holds);
        }
    }

    #[test]
    fn pair_bounds_hold_on_mixed_states(seed in any::<u64>()) {
        let rho = random_mixed(3, 2, &mut sample_rng(seed, 0)).unwrap();
        let r = pair_bounds(&rho).unwrap();
        prop_assert!(r.negativity.holds && r.realignment.holds);
    }
}

/// Random two-qubit state with maximally mixed marginals: a Bell-diagonal
/// mixture conjugated by a random product of single-qubit unitaries.
fn mixed_marginal_state(seed: u64, i: u64) -> DensityMatrix {
    use rand::Rng;
    let mut rng = sample_rng(seed, i);
    let w: Vec<f64> = (0..4).map(|_| -rng.random::<f64>().ln()).collect();
    let s: f64 = w.iter().sum();
    let (a, b, c, d) = (w[0] / s, w[1] / s, w[2] / s, w[3] / s);
    // Bell-diagonal: correlations diag(a−b+c−d, −a+b+c−d, a+b−c−d) in (x, y, z)
    let corr = [[a - b + c - d, 0.0, 0.0], [0.0, -a + b + c - d, 0.0], [0.0, 0.0, a + b - c - d]];
    let m = bloch_assemble(&entshare::states::CorrelationDecomposition::from_correlations(corr));
    let rho = DensityMatrix::new(DimSpec::qubits(2), m).unwrap();
    rho.conjugate_by(&random_local_unitaries(rho.dims(), &mut rng)).unwrap()
}

#[test]
fn realignment_closed_form_matches_direct_evaluation() {
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let rho = mixed_marginal_state(41, i);
        let d = bloch_decompose(&rho).unwrap();
        let r = realignment_closed_form(&d).unwrap();
        worst = worst.max((r.closed_form_norm - r.direct_norm).abs());
        assert!((r.closed_form_measure - r.direct_measure).abs() < 1e-9);
    }
    assert!(worst < 1e-9, "worst {worst:e}");
}

#[test]
fn negativity_closed_form_matches_canonical() {
    for i in 0..500 {
        let rho = mixed_marginal_state(43, i);
        let n = negativity_closed_form(&bloch_decompose(&rho).unwrap()).unwrap();
        assert!((n.closed_form - n.canonical).abs() < 1e-9, "{n:?}");
        assert!((n.literal - 0.5).abs() < 1e-9);
    }
}
