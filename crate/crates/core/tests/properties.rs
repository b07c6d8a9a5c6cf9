use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use vqb_core::circuit::run_broadcast_circuit;
use vqb_core::maps::{b_canonical, b_minus, b_plus, sym_projectors, Channel};
use vqb_core::matcore::random::{random_density_with, random_hermitian, rng_from_seed};
use vqb_core::matcore::{eigh, fidelity, random_density, trace_norm, ComplexMatrix};
use vqb_core::pdm::{marginal_deviation, pdm_closed_form, pdm_from_definition};
use vqb_core::vqb::assemble_virtual;

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_preserves_trace(dims in dims_strategy(), seed in any::<u64>(), keep_mask in 1u8..7) {
        let n: usize = dims.iter().product();
        let m = random_hermitian(n, &mut rng_from_seed(seed));
        let keep: Vec<usize> = (0..dims.len()).filter(|s| keep_mask & (1 << s) != 0).collect();
        prop_assume!(!keep.is_empty());
        let reduced = m.partial_trace(&dims, &keep).unwrap();
        prop_assert!((reduced.trace() - m.trace()).norm() < 1e-10);
    }

    #[test]
    fn sequential_partial_traces_give_full_trace(dims in dims_strategy(), seed in any::<u64>()) {
        let n: usize = dims.iter().product();
        let m = random_hermitian(n, &mut rng_from_seed(seed));
        let mut current = m.clone();
        let mut current_dims = dims.clone();
        while current_dims.len() > 1 {
            let keep: Vec<usize> = (1..current_dims.len()).collect();
            current = current.partial_trace(&current_dims, &keep).unwrap();
            current_dims.remove(0);
        }
        prop_assert!((current.trace() - m.trace()).norm() < 1e-10);
    }

    #[test]
    fn trace_norm_dominates_trace(n in 2usize..=16, seed in any::<u64>()) {
        let m = random_hermitian(n, &mut rng_from_seed(seed));
        prop_assert!(trace_norm(&m) >= m.trace().re.abs() - 1e-12);
    }

    #[test]
    fn eigh_reconstructs(n in 1usize..=16, seed in any::<u64>()) {
        let m = random_hermitian(n, &mut rng_from_seed(seed));
        let e = eigh(&m).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.reconstruct().max_abs_diff(&m) <= 1e-9);
    }

    #[test]
    fn fidelity_is_symmetric(d in 2usize..=4, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = random_density_with(d, &mut rng);
        let b = random_density_with(d, &mut rng);
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&fab));
    }

    #[test]
    fn broadcast_marginals_and_unit_trace(d in 2usize..=4, seed in any::<u64>()) {
        let rho = random_density(d, seed);
        let b = b_canonical(&rho).unwrap();
        prop_assert!((b.trace() - 1.0).abs() < 1e-12);
        prop_assert!(b.marginal(&[0]).unwrap().mat().max_abs_diff(rho.mat()) < 1e-10);
        prop_assert!(b.marginal(&[1]).unwrap().mat().max_abs_diff(rho.mat()) < 1e-10);
    }

    #[test]
    fn cloner_and_antisymmetrizer_are_valid_states(d in 2usize..=4, seed in any::<u64>()) {
        let rho = random_density(d, seed);
        for out in [b_plus(&rho).unwrap(), b_minus(&rho).unwrap()] {
            prop_assert!((out.mat().trace().re - 1.0).abs() < 1e-12);
            prop_assert!(out.eigenvalues()[0] > -1e-10);
        }
    }

    #[test]
    fn circuit_branches_match_projector_sandwich(d in 2usize..=3, seed in any::<u64>()) {
        let rho = random_density(d, seed);
        let run = run_broadcast_circuit(&rho, FRAC_PI_2).unwrap();
        let (pp, pm) = sym_projectors(d).unwrap();
        let lifted = ComplexMatrix::identity(d).kron(rho.mat());
        let df = d as f64;
        prop_assert!(run.state0.mat().scale_re(run.p0).max_abs_diff(&(&(&pp * &lifted) * &pp).scale_re(1.0 / df)) < 1e-10);
        prop_assert!(run.state1.mat().scale_re(run.p1).max_abs_diff(&(&(&pm * &lifted) * &pm).scale_re(1.0 / df)) < 1e-10);
        prop_assert!((run.p0 + run.p1 - 1.0).abs() < 1e-12);
        let v = assemble_virtual(run.p0, &run.state0, run.p1, &run.state1, d).unwrap();
        prop_assert!(v.mat().max_abs_diff(b_canonical(&rho).unwrap().mat()) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pdm_routes_agree_on_random_channels(n in 1usize..=2, rank in 1usize..=3, seed in any::<u64>()) {
        let d = 1 << n;
        let mut rng = rng_from_seed(seed);
        let ch = Channel::random_cptp(d, rank, &mut rng).unwrap();
        let rho = random_density_with(d, &mut rng);
        let closed = pdm_closed_form(&rho, &ch).unwrap();
        let defined = pdm_from_definition(&rho, &ch, n).unwrap();
        prop_assert!(closed.op.mat().max_abs_diff(defined.op.mat()) < 1e-10);
        prop_assert!((closed.op.trace() - 1.0).abs() < 1e-12);
        prop_assert!(marginal_deviation(&closed, &ch).unwrap() < 1e-10);
    }
}
