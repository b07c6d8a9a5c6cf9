//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test -p vqb-core --test acceptance -- --nocapture` to see them.

use std::f64::consts::FRAC_PI_2;

use vqb_core::circuit::{broadcast_final_register, run_broadcast_circuit, run_choi_circuit, CircuitConfig};
use vqb_core::maps::{b_canonical, b_minus, b_plus, sym_projectors, Channel};
use vqb_core::matcore::random::{random_density_with, random_pure_with, rng_from_seed};
use vqb_core::matcore::{eigvalsh, fidelity, ComplexMatrix, DensityMatrix};
use vqb_core::pdm::{pdm_closed_form, pdm_from_definition};
use vqb_core::sampler::{self, SamplerConfig};
use vqb_core::vqb::{assemble_virtual, mitigation_row, scan_argmin, theta_scan, uniform_grid, MitigationFamily};
use vqb_core::Pauli;

fn report(id: u32, title: &str, pass: bool, detail: String) {
    println!("[{}] AC{id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "AC{id} {title} failed: {detail}");
}

#[test]
fn ac1_broadcasting_condition() {
    let mut worst = 0.0_f64;
    for d in 2..=4 {
        let mut rng = rng_from_seed(1000 + d as u64);
        for _ in 0..200 {
            let rho = random_density_with(d, &mut rng);
            let b = b_canonical(&rho).unwrap();
            worst = worst
                .max(b.marginal(&[0]).unwrap().mat().max_abs_diff(rho.mat()))
                .max(b.marginal(&[1]).unwrap().mat().max_abs_diff(rho.mat()));
        }
    }
    report(1, "broadcasting condition", worst <= 1e-10, format!("max marginal error {worst:.2e} (tol 1e-10), d=2,3,4 x 200"));
}

#[test]
fn ac2_decomposition_identity() {
    let mut worst = 0.0_f64;
    for d in 2..=4 {
        let df = d as f64;
        let mut rng = rng_from_seed(2000 + d as u64);
        for _ in 0..200 {
            let rho = random_density_with(d, &mut rng);
            let combo = b_plus(&rho).unwrap().mat().scale_re((df + 1.0) / 2.0)
                - b_minus(&rho).unwrap().mat().scale_re((df - 1.0) / 2.0);
            worst = worst.max(b_canonical(&rho).unwrap().mat().max_abs_diff(&combo));
        }
    }
    report(2, "decomposition identity", worst <= 1e-10, format!("max error {worst:.2e} (tol 1e-10)"));
}

#[test]
fn ac3_circuit_equivalence() {
    let mut state_err = 0.0_f64;
    let mut prob_err = 0.0_f64;
    let mut p_qubit = (0.0, 0.0);
    for d in 2..=4 {
        let df = d as f64;
        let (pp, pm) = sym_projectors(d).unwrap();
        let mut rng = rng_from_seed(3000 + d as u64);
        for _ in 0..50 {
            let rho = random_density_with(d, &mut rng);
            let run = run_broadcast_circuit(&rho, FRAC_PI_2).unwrap();
            let lifted = ComplexMatrix::identity(d).kron(rho.mat());
            let want0 = (&(&pp * &lifted) * &pp).scale_re(1.0 / df);
            let want1 = (&(&pm * &lifted) * &pm).scale_re(1.0 / df);
            state_err = state_err
                .max(run.state0.mat().scale_re(run.p0).max_abs_diff(&want0))
                .max(run.state1.mat().scale_re(run.p1).max_abs_diff(&want1));
            prob_err = prob_err
                .max((run.p0 - (df + 1.0) / (2.0 * df)).abs())
                .max((run.p1 - (df - 1.0) / (2.0 * df)).abs());
            if d == 2 {
                p_qubit = (run.p0, run.p1);
            }
        }
    }
    let qubit_ok = (p_qubit.0 - 0.75).abs() <= 1e-12 && (p_qubit.1 - 0.25).abs() <= 1e-12;
    report(
        3,
        "circuit equivalence",
        state_err <= 1e-10 && prob_err <= 1e-12 && qubit_ok,
        format!(
            "state error {state_err:.2e} (tol 1e-10), probability error {prob_err:.2e} (tol 1e-12), d=2 p0={:.15} p1={:.15}",
            p_qubit.0, p_qubit.1
        ),
    );
}

#[test]
fn ac4_optimality_scan() {
    let grid = uniform_grid(97);
    let mut pass = true;
    let mut details = vec![];
    for d in 2..=4 {
        let pts = theta_scan(d, &grid).unwrap();
        let best = &pts[scan_argmin(&pts).unwrap()];
        let min_ok = (best.distance - (d as f64 - 1.0)).abs() <= 1e-8;
        let at_quarter = (best.theta - FRAC_PI_2).abs() <= 1e-12;
        pass &= min_ok && at_quarter;
        if d == 2 {
            let p0_ok = (best.p0 - 0.75).abs() <= 1e-12;
            pass &= p0_ok;
            details.push(format!("d=2 p0(pi/2)={:.15}", best.p0));
        }
        details.push(format!("d={d} min {:.12} at theta={:.12}", best.distance, best.theta));
    }
    report(4, "optimality scan", pass, details.join(", "));
}

#[test]
fn ac5_cp_classification() {
    let mut pass = true;
    let mut details = vec![];
    for d in 2..=3 {
        let run = run_choi_circuit(FRAC_PI_2, d).unwrap();
        let min_plus = eigvalsh(run.choi0.mat()).unwrap()[0];
        let min_minus = eigvalsh(run.choi1.mat()).unwrap()[0];
        let assembled = assemble_virtual(run.p0, &run.choi0, run.p1, &run.choi1, d).unwrap();
        let min_b = assembled.eigenvalues()[0];
        let analytic = [Channel::cloner(d), Channel::antisymmetrizer(d), Channel::broadcast(d)]
            .map(|c| c.unwrap().classify());
        pass &= min_plus >= -1e-10 && min_minus >= -1e-10;
        pass &= analytic[0].is_cp && analytic[1].is_cp && !analytic[2].is_cp;
        if d == 2 {
            pass &= min_b <= -0.01;
        }
        details.push(format!("d={d}: min eig C+={min_plus:.2e} C-={min_minus:.2e} C_B={min_b:.6}"));
    }
    report(5, "CP classification", pass, details.join("; "));
}

#[test]
fn ac6_cloner_fidelity() {
    let mut rng = rng_from_seed(6000);
    let (mut cloner_err, mut mitigated_err) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let rho = random_pure_with(2, &mut rng);
        let cloned = b_plus(&rho).unwrap().marginal(&[0]).unwrap();
        cloner_err = cloner_err.max((fidelity(&cloned, &rho).unwrap() - 5.0 / 6.0).abs());
        let run = run_broadcast_circuit(&rho, FRAC_PI_2).unwrap();
        let v = assemble_virtual(run.p0, &run.state0, run.p1, &run.state1, 2).unwrap();
        let marginal = DensityMatrix::new(v.mat().partial_trace(v.dims(), &[0]).unwrap(), vec![2]).unwrap();
        mitigated_err = mitigated_err.max((fidelity(&marginal, &rho).unwrap() - 1.0).abs());
    }
    report(
        6,
        "cloner fidelity",
        cloner_err <= 1e-10 && mitigated_err <= 1e-10,
        format!("|F_cloner - 5/6| <= {cloner_err:.2e}, |F_mitigated - 1| <= {mitigated_err:.2e} (tol 1e-10)"),
    );
}

#[test]
fn ac7_pdm_equivalence() {
    let mut rng = rng_from_seed(7000);
    let (mut route_err, mut identity_err) = (0.0_f64, 0.0_f64);
    let identity = Channel::identity(2).unwrap();
    for k in 0..100 {
        let ch = Channel::random_cptp(2, 1 + k % 4, &mut rng).unwrap();
        let rho = random_density_with(2, &mut rng);
        let closed = pdm_closed_form(&rho, &ch).unwrap();
        let defined = pdm_from_definition(&rho, &ch, 1).unwrap();
        route_err = route_err.max(closed.op.mat().max_abs_diff(defined.op.mat()));
        let r = pdm_closed_form(&rho, &identity).unwrap();
        identity_err = identity_err.max(r.op.mat().max_abs_diff(b_canonical(&rho).unwrap().mat()));
    }
    report(
        7,
        "PDM equivalence",
        route_err <= 1e-10 && identity_err <= 1e-12,
        format!("definition vs closed form {route_err:.2e} (tol 1e-10), identity channel vs broadcast {identity_err:.2e} (tol 1e-12)"),
    );
}

#[test]
fn ac8_sampler_statistics() {
    let mut rng = rng_from_seed(8000);
    let states: Vec<DensityMatrix> = (0..20).map(|_| random_density_with(2, &mut rng)).collect();
    let (mut cases, mut reruns, mut failures) = (0, 0, 0);
    let mut worst_z = 0.0_f64;
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            for (k, rho) in states.iter().enumerate() {
                cases += 1;
                let mut cfg = SamplerConfig::new(rho.clone(), a, b, 100_000, 8000 + k as u64);
                let within = |r: &sampler::EstimateResult| (r.estimate - r.exact_value).abs() <= 5.0 * r.std_error;
                let mut r = sampler::run(&cfg).unwrap();
                if !within(&r) {
                    reruns += 1;
                    cfg.stream += 1;
                    r = sampler::run(&cfg).unwrap();
                    if !within(&r) {
                        failures += 1;
                    }
                }
                worst_z = worst_z.max((r.estimate - r.exact_value).abs() / r.std_error);
            }
        }
    }
    let cfg = SamplerConfig::new(states[0].clone(), Pauli::Z, Pauli::X, 100_000, 42);
    let first = sampler::run(&cfg).unwrap();
    let second = sampler::run(&cfg).unwrap();
    let reproducible = first.estimate.to_bits() == second.estimate.to_bits()
        && first.std_error.to_bits() == second.std_error.to_bits();
    report(
        8,
        "sampler statistics",
        failures == 0 && reproducible,
        format!("{cases} cases at 1e5 shots, {reruns} reruns, {failures} failures, max |z| {worst_z:.2}, bit-reproducible={reproducible}"),
    );
}

#[test]
fn ac9_noise_sanity() {
    let mut rng = rng_from_seed(9000);
    let mut worst_state = 1.0_f64;
    let mut monotone = true;
    let lambdas = [0.0, 0.01, 0.02, 0.05];
    for k in 0..10 {
        let rho = if k % 2 == 0 { random_pure_with(2, &mut rng) } else { random_density_with(2, &mut rng) };
        let clean = broadcast_final_register(&rho, CircuitConfig::default()).unwrap();
        let noisy = broadcast_final_register(&rho, CircuitConfig { theta: FRAC_PI_2, noise: 0.02 }).unwrap();
        worst_state = worst_state.min(fidelity(noisy.state(), clean.state()).unwrap());
        let fids: Vec<f64> = lambdas
            .iter()
            .map(|&noise| {
                let theta = 2.0 * (k as f64 + 1.0) / 11.0 * std::f64::consts::PI;
                mitigation_row(MitigationFamily::Polar, theta, CircuitConfig { theta: FRAC_PI_2, noise })
                    .unwrap()
                    .fidelity_mitigated
            })
            .collect();
        monotone &= fids.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    }
    report(
        9,
        "noise sanity",
        worst_state >= 0.98 && monotone,
        format!("min 3-qubit state fidelity at lambda=0.02: {worst_state:.6} (>= 0.98), mitigated fidelity non-increasing in lambda: {monotone}"),
    );
}
