//! Classical post-processing of circuit outputs into the virtual broadcast,
//! the partial-swap optimality scan, and error-mitigation sweeps on qubits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{run_broadcast_circuit_with, run_choi_circuit, CircuitConfig};
use crate::error::{Error, Result};
use crate::maps::b_plus;
use crate::matcore::{fidelity, fidelity_psd, trace_norm, ComplexMatrix, DensityMatrix, HermitianOperator};
use crate::pauli::Pauli;

/// `d (p0 state0 - p1 state1)`.
pub fn assemble_virtual(
    p0: f64,
    state0: &DensityMatrix,
    p1: f64,
    state1: &DensityMatrix,
    d: usize,
) -> Result<HermitianOperator> {
    if state0.dims() != state1.dims() {
        return Err(Error::DimensionMismatch("branch states live on different spaces".into()));
    }
    let df = d as f64;
    let mat = state0.mat().scale_re(df * p0) - state1.mat().scale_re(df * p1);
    HermitianOperator::new_any_trace(mat, state0.dims().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaScanPoint {
    pub theta: f64,
    pub p0: f64,
    /// `||C_B - C_N(theta)||_1`, no factor 1/2.
    pub distance: f64,
}

/// `points` equally spaced angles covering `[0, 2 pi]` inclusive.
///
/// With `points - 1` divisible by 4 the grid contains `pi/2` exactly.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..points).map(|k| k as f64 * TAU / (points - 1) as f64).collect(),
    }
}

/// Choi matrix of the virtual broadcast assembled from a noiseless `theta = pi/2` Choi-circuit run.
pub fn assembled_broadcast_choi(d: usize) -> Result<HermitianOperator> {
    let run = run_choi_circuit(FRAC_PI_2, d)?;
    assemble_virtual(run.p0, &run.choi0, run.p1, &run.choi1, d)
}

/// Trace distance from the broadcast Choi matrix to the partial-swap Choi state at each angle.
pub fn theta_scan(d: usize, thetas: &[f64]) -> Result<Vec<ThetaScanPoint>> {
    if thetas.is_empty() {
        return Err(Error::InvalidArgument("theta grid is empty".into()));
    }
    if let Some(bad) = thetas.iter().find(|t| !(0.0..=TAU).contains(*t)) {
        return Err(Error::InvalidArgument(format!("theta = {bad} outside [0, 2pi]")));
    }
    let target = assembled_broadcast_choi(d)?;
    thetas
        .par_iter()
        .map(|&theta| {
            let run = run_choi_circuit(theta, d)?;
            let diff = target.mat() - run.choi0.mat();
            Ok(ThetaScanPoint { theta, p0: run.p0, distance: trace_norm(&diff) })
        })
        .collect()
}

/// Index of the smallest distance; ties go to the earliest point.
pub fn scan_argmin(points: &[ThetaScanPoint]) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.distance.total_cmp(&b.1.distance))
        .map(|(i, _)| i)
}

/// `(<X>, <Y>, <Z>)` of the reduced operator on `subsystem`, which must be a qubit.
pub fn pauli_expectations_on(op: &HermitianOperator, subsystem: usize) -> Result<[f64; 3]> {
    let dim = *op
        .dims()
        .get(subsystem)
        .ok_or_else(|| Error::InvalidArgument(format!("no subsystem {subsystem}")))?;
    if dim != 2 {
        return Err(Error::UnsupportedDimension { dim, reason: "Pauli expectations need a qubit" });
    }
    let marginal = op.mat().partial_trace(op.dims(), &[subsystem])?;
    Ok(bloch_vector(&marginal))
}

/// `(Tr X m, Tr Y m, Tr Z m)` for a 2x2 operator.
pub fn bloch_vector(m: &ComplexMatrix) -> [f64; 3] {
    Pauli::XYZ.map(|p| (&p.matrix() * m).trace().re)
}

/// Scalar `s` with `Tr_B B+(rho) = s rho + (1 - s) I/d`, measured on `|0><0|`.
pub fn cloner_shrink_factor(d: usize) -> Result<f64> {
    let out = b_plus(&DensityMatrix::basis(0, d))?;
    let marginal = out.marginal(&[0])?;
    Ok(marginal.mat().get(0, 0).re - marginal.mat().get(1, 1).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MitigationFamily {
    /// `cos(t/2)|0> + sin(t/2)|1>`, `t` in `[0, 2 pi]`.
    Polar,
    /// `cos(pi/4)|0> + e^{i phi} sin(pi/4)|1>`, `phi` in `[0, 2 pi]`.
    Azimuthal,
    /// `p |+><+| + (1 - p) I/2`, `p` in `[0, 1]`.
    Polarization,
}

impl MitigationFamily {
    pub const ALL: [MitigationFamily; 3] =
        [MitigationFamily::Polar, MitigationFamily::Azimuthal, MitigationFamily::Polarization];

    pub fn name(self) -> &'static str {
        match self {
            MitigationFamily::Polar => "polar",
            MitigationFamily::Azimuthal => "azimuthal",
            MitigationFamily::Polarization => "polarization",
        }
    }

    pub fn parameter_grid(self, steps: usize) -> Vec<f64> {
        match self {
            MitigationFamily::Polar | MitigationFamily::Azimuthal => uniform_grid(steps),
            MitigationFamily::Polarization => {
                (0..steps).map(|k| k as f64 / (steps - 1).max(1) as f64).collect()
            }
        }
    }

    pub fn state(self, parameter: f64) -> Result<DensityMatrix> {
        match self {
            MitigationFamily::Polar => DensityMatrix::pure(&[
                Complex64::new((parameter / 2.0).cos(), 0.0),
                Complex64::new((parameter / 2.0).sin(), 0.0),
            ]),
            MitigationFamily::Azimuthal => DensityMatrix::pure(&[
                Complex64::new(FRAC_PI_4.cos(), 0.0),
                Complex64::from_polar(FRAC_PI_4.sin(), parameter),
            ]),
            MitigationFamily::Polarization => {
                if !(0.0..=1.0).contains(&parameter) {
                    return Err(Error::InvalidArgument(format!("polarization {parameter} outside [0, 1]")));
                }
                let plus = ComplexMatrix::from_fn(2, |_, _| Complex64::new(0.5, 0.0));
                let mat = plus.scale_re(parameter) + ComplexMatrix::identity(2).scale_re((1.0 - parameter) / 2.0);
                DensityMatrix::from_matrix(mat)
            }
        }
    }
}

impl fmt::Display for MitigationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MitigationFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown state family {s:?} (polar, azimuthal, polarization)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MitigationRow {
    pub input_label: String,
    pub parameter: f64,
    pub pauli_exp_input: [f64; 3],
    /// Qubit A after the cloner branch alone.
    pub pauli_exp_cloner: [f64; 3],
    /// Qubit A of the post-processed virtual broadcast.
    pub pauli_exp_mitigated: [f64; 3],
    pub fidelity_cloner: f64,
    pub fidelity_mitigated: f64,
}

/// One circuit run per parameter value; cloner values come from the outcome-0
/// branch, mitigated values from `d (p0 state0 - p1 state1)`.
pub fn mitigation_sweep(family: MitigationFamily, steps: usize, noise: f64) -> Result<Vec<MitigationRow>> {
    if steps < 2 {
        return Err(Error::InvalidArgument("mitigation sweep needs at least 2 steps".into()));
    }
    let config = CircuitConfig { theta: FRAC_PI_2, noise };
    family
        .parameter_grid(steps)
        .into_iter()
        .map(|parameter| mitigation_row(family, parameter, config))
        .collect()
}

pub fn mitigation_row(family: MitigationFamily, parameter: f64, config: CircuitConfig) -> Result<MitigationRow> {
    let rho = family.state(parameter)?;
    let run = run_broadcast_circuit_with(&rho, config)?;
    let cloner_a = run.state0.marginal(&[0])?;
    let virtual_out = assemble_virtual(run.p0, &run.state0, run.p1, &run.state1, 2)?;
    let mitigated_a = virtual_out.mat().partial_trace(virtual_out.dims(), &[0])?;
    Ok(MitigationRow {
        input_label: family.name().to_string(),
        parameter,
        pauli_exp_input: bloch_vector(rho.mat()),
        pauli_exp_cloner: bloch_vector(cloner_a.mat()),
        pauli_exp_mitigated: bloch_vector(&mitigated_a),
        fidelity_cloner: fidelity(&cloner_a, &rho)?,
        fidelity_mitigated: fidelity_psd(&mitigated_a, rho.mat())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::run_broadcast_circuit;
    use crate::maps::{b_canonical, Channel};
    use crate::matcore::random;
    use approx::assert_abs_diff_eq;

    #[test]
    fn assembled_broadcast_matches_analytic_map() {
        for d in 2..=4 {
            let rho = random::random_density(d, 300 + d as u64);
            let run = run_broadcast_circuit(&rho, FRAC_PI_2).unwrap();
            let v = assemble_virtual(run.p0, &run.state0, run.p1, &run.state1, d).unwrap();
            assert!(v.mat().max_abs_diff(b_canonical(&rho).unwrap().mat()) < 1e-10);
            assert_abs_diff_eq!(v.trace(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn assembled_for_maximally_mixed_is_half_swap() {
        let run = run_broadcast_circuit(&DensityMatrix::maximally_mixed(2), FRAC_PI_2).unwrap();
        let v = assemble_virtual(run.p0, &run.state0, run.p1, &run.state1, 2).unwrap();
        let s = crate::maps::swap_operator(2).unwrap();
        assert!(v.mat().max_abs_diff(&s.scale_re(0.5)) < 1e-12);
    }

    #[test]
    fn assembled_choi_matches_analytic_choi() {
        for d in 2..=3 {
            let assembled = assembled_broadcast_choi(d).unwrap();
            assert!(assembled.mat().max_abs_diff(&Channel::broadcast(d).unwrap().choi) < 1e-10);
        }
    }

    #[test]
    fn grid_contains_quarter_turn() {
        let g = uniform_grid(97);
        assert_eq!(g.len(), 97);
        assert_eq!(g[0], 0.0);
        assert_abs_diff_eq!(g[96], TAU, epsilon = 1e-15);
        assert_abs_diff_eq!(g[24], FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn scan_minimum_and_symmetry() {
        for d in 2..=3 {
            let g = uniform_grid(97);
            let pts = theta_scan(d, &g).unwrap();
            let best = scan_argmin(&pts).unwrap();
            assert_eq!(best, 24);
            assert_abs_diff_eq!(pts[best].distance, d as f64 - 1.0, epsilon = 1e-9);
            for k in 1..24 {
                assert_abs_diff_eq!(pts[24 + k].distance, pts[24 - k].distance, epsilon = 1e-9);
            }
        }
        assert!(theta_scan(2, &[]).is_err());
        assert!(theta_scan(2, &[7.0]).is_err());
    }

    #[test]
    fn pauli_expectations_examples() {
        let cloned = b_plus(&DensityMatrix::basis(0, 2)).unwrap();
        let e = pauli_expectations_on(&cloned.into(), 0).unwrap();
        for (got, want) in e.iter().zip([0.0, 0.0, 2.0 / 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        let b = b_canonical(&DensityMatrix::basis(0, 2)).unwrap();
        let e = pauli_expectations_on(&b, 0).unwrap();
        for (got, want) in e.iter().zip([0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        let mixed: HermitianOperator = b_plus(&DensityMatrix::maximally_mixed(2)).unwrap().into();
        assert!(pauli_expectations_on(&mixed, 1).unwrap().iter().all(|x| x.abs() < 1e-14));
        let qutrit: HermitianOperator = b_plus(&DensityMatrix::maximally_mixed(3)).unwrap().into();
        assert!(matches!(pauli_expectations_on(&qutrit, 0), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn shrink_factor_closed_form() {
        // s = (d + 2) / (2 (d + 1)), pure-state fidelity s + (1 - s)/d = (d + 3) / (2 (d + 1))
        for d in 2..=4 {
            let df = d as f64;
            let s = cloner_shrink_factor(d).unwrap();
            assert_abs_diff_eq!(s, (df + 2.0) / (2.0 * (df + 1.0)), epsilon = 1e-14);
            for seed in 0..50 {
                let rho = random::random_pure(d, seed);
                let marginal = b_plus(&rho).unwrap().marginal(&[0]).unwrap();
                let predicted = rho.mat().scale_re(s) + ComplexMatrix::identity(d).scale_re((1.0 - s) / df);
                assert!(marginal.mat().max_abs_diff(&predicted) < 1e-12);
                assert_abs_diff_eq!(marginal.fidelity(&rho).unwrap(), (df + 3.0) / (2.0 * (df + 1.0)), epsilon = 1e-10);
            }
        }
        assert_abs_diff_eq!(cloner_shrink_factor(2).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn polar_sweep_values() {
        let rows = mitigation_sweep(MitigationFamily::Polar, 9, 0.0).unwrap();
        for r in &rows {
            assert_abs_diff_eq!(r.fidelity_cloner, 5.0 / 6.0, epsilon = 1e-10);
            assert_abs_diff_eq!(r.fidelity_mitigated, 1.0, epsilon = 1e-10);
            for k in 0..3 {
                assert_abs_diff_eq!(r.pauli_exp_mitigated[k], r.pauli_exp_input[k], epsilon = 1e-10);
                assert_abs_diff_eq!(r.pauli_exp_cloner[k], 2.0 / 3.0 * r.pauli_exp_input[k], epsilon = 1e-10);
            }
        }
        // theta = pi is |1>
        let at_pi = rows.iter().find(|r| (r.parameter - std::f64::consts::PI).abs() < 1e-12).unwrap();
        assert_abs_diff_eq!(at_pi.pauli_exp_mitigated[2], -1.0, epsilon = 1e-10);
    }

    #[test]
    fn azimuthal_and_polarization_sweeps() {
        for r in mitigation_sweep(MitigationFamily::Azimuthal, 13, 0.0).unwrap() {
            assert_abs_diff_eq!(r.pauli_exp_cloner[0], 2.0 / 3.0 * r.parameter.cos(), epsilon = 1e-10);
            assert_abs_diff_eq!(r.pauli_exp_cloner[1], 2.0 / 3.0 * r.parameter.sin(), epsilon = 1e-10);
        }
        let rows = mitigation_sweep(MitigationFamily::Polarization, 5, 0.0).unwrap();
        let first = &rows[0];
        assert_eq!(first.parameter, 0.0);
        assert!(first.pauli_exp_cloner.iter().chain(&first.pauli_exp_mitigated).all(|x| x.abs() < 1e-12));
        assert_abs_diff_eq!(first.fidelity_cloner, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rows[4].parameter, 1.0);
        assert!(mitigation_sweep(MitigationFamily::Polar, 1, 0.0).is_err());
        assert!("spiral".parse::<MitigationFamily>().is_err());
    }
}
