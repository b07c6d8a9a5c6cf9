//! Two-time pseudo-density matrices.
//!
//! For a state `rho` sent through a channel `N`, the two-time PDM collects the
//! Pauli correlators measured before and after the channel. With projective
//! measurements it has the closed form `R = {rho (x) I, M_N} / 2`, where
//! `M_N = sum_ij |i><j| (x) N(|j><i|)`. For the identity channel `M = S`, so
//! `R` is exactly the virtual broadcast of `rho`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maps::Channel;
use crate::matcore::{ComplexMatrix, DensityMatrix, HermitianOperator};
use crate::pauli::{pauli_string, pauli_strings, Pauli};

#[derive(Debug, Clone)]
pub struct TwoTimePDM {
    /// Operator on `[t_A, t_B]`.
    pub op: HermitianOperator,
    pub channel_label: String,
    pub input_state: DensityMatrix,
}

impl TwoTimePDM {
    /// Sum of the moduli of the negative eigenvalues, `(||R||_1 - 1) / 2`.
    pub fn negativity(&self) -> f64 {
        pdm_negativity(self)
    }
}

fn check_input(rho: &DensityMatrix, channel: &Channel) -> Result<()> {
    if rho.dim() != channel.d_in {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} fed to channel {} with input dimension {}",
            rho.dim(),
            channel.label,
            channel.d_in
        )));
    }
    Ok(())
}

/// `M_N = sum_ij |i><j| (x) N(|j><i|)`: the Choi construction with the
/// reference index transposed.
pub fn cj_variant(channel: &Channel) -> Result<ComplexMatrix> {
    let (din, dout) = (channel.d_in, channel.d_out);
    let mut m = ComplexMatrix::zeros(din * dout);
    for i in 0..din {
        for j in 0..din {
            let block = channel.apply(&ComplexMatrix::ket_bra(j, i, din))?;
            for a in 0..dout {
                for b in 0..dout {
                    m.set(i * dout + a, j * dout + b, block.get(a, b));
                }
            }
        }
    }
    Ok(m)
}

/// `R = {rho (x) I, M_N} / 2`.
pub fn pdm_closed_form(rho: &DensityMatrix, channel: &Channel) -> Result<TwoTimePDM> {
    check_input(rho, channel)?;
    let m = cj_variant(channel)?;
    let lifted = rho.mat().kron(&ComplexMatrix::identity(channel.d_out));
    let op = HermitianOperator::new(lifted.anticommutator(&m).scale_re(0.5), vec![channel.d_in, channel.d_out])?;
    Ok(TwoTimePDM { op, channel_label: channel.label.clone(), input_state: rho.clone() })
}

fn qubit_count(d: usize) -> Result<usize> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::UnsupportedDimension { dim: d, reason: "Pauli PDMs need a power-of-two dimension" });
    }
    Ok(d.trailing_zeros() as usize)
}

/// Expected product of the outcomes of `sigma_a` measured at `t_A` (projectively,
/// on its +/-1 eigenspaces) and `sigma_b` at `t_B`:
/// `E[a, b] = Tr[sigma_b N({sigma_a, rho})] / 2`.
pub fn correlator(rho: &DensityMatrix, channel: &Channel, a: &[Pauli], b: &[Pauli]) -> Result<f64> {
    check_input(rho, channel)?;
    let sa = pauli_string(a);
    let sb = pauli_string(b);
    if sa.dim() != channel.d_in || sb.dim() != channel.d_out {
        return Err(Error::DimensionMismatch("Pauli string does not match channel dimensions".into()));
    }
    let evolved = channel.apply(&sa.anticommutator(rho.mat()))?;
    Ok(0.5 * (&sb * &evolved).trace().re)
}

/// `R = 4^{-n} sum_{a,b} E[a, b] sigma_a (x) sigma_b` over all `n`-qubit Pauli strings.
pub fn pdm_from_definition(rho: &DensityMatrix, channel: &Channel, n_qubits: usize) -> Result<TwoTimePDM> {
    check_input(rho, channel)?;
    let n_in = qubit_count(channel.d_in)?;
    let n_out = qubit_count(channel.d_out)?;
    if n_in != n_qubits || n_out != n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "channel acts on {n_in} -> {n_out} qubits, expected {n_qubits}"
        )));
    }
    let strings = pauli_strings(n_qubits);
    let mats: Vec<ComplexMatrix> = strings.iter().map(|s| pauli_string(s)).collect();
    let size = channel.d_in * channel.d_out;
    let norm = 1.0 / 4f64.powi(n_qubits as i32);
    let mut acc = ComplexMatrix::zeros(size);
    for (sa, ma) in strings.iter().zip(&mats) {
        for (sb, mb) in strings.iter().zip(&mats) {
            let e = correlator(rho, channel, sa, sb)?;
            if e != 0.0 {
                acc = &acc + &ma.kron(mb).scale(Complex64::new(e * norm, 0.0));
            }
        }
    }
    let op = HermitianOperator::new(acc, vec![channel.d_in, channel.d_out])?;
    Ok(TwoTimePDM { op, channel_label: channel.label.clone(), input_state: rho.clone() })
}

pub fn pdm_negativity(p: &TwoTimePDM) -> f64 {
    p.op.negativity()
}

/// Largest entrywise deviation of the two PDM marginals from `rho` and `N(rho)`.
pub fn marginal_deviation(p: &TwoTimePDM, channel: &Channel) -> Result<f64> {
    let first = p.op.marginal(&[0])?;
    let second = p.op.marginal(&[1])?;
    let evolved = channel.apply(p.input_state.mat())?;
    Ok(first
        .mat()
        .max_abs_diff(p.input_state.mat())
        .max(second.mat().max_abs_diff(&evolved)))
}
