//! Exact simulation of virtual quantum broadcasting.
//!
//! The canonical broadcasting map `B(rho) = {rho (x) I, S} / 2` is Hermitian
//! preserving and trace preserving but not completely positive. It splits as
//! `B = (d+1)/2 B+ - (d-1)/2 B-` into the universal cloner `B+` and the
//! universal antisymmetrizer `B-`, both physical. A single LCU circuit (Hadamard,
//! controlled swap, Hadamard on an ancilla) realizes `B+` and `B-` as the two
//! post-selected branches, and `B(rho) = d (p0 B+(rho) - p1 B-(rho))` is then
//! recovered by classical post-processing.
//!
//! Modules:
//! - [`matcore`]: dense complex matrices, partial traces, spectra, fidelity.
//! - [`maps`]: swap, projectors, partial swap, the broadcasting maps and Choi matrices.
//! - [`circuit`]: gate-level simulation of the broadcasting and Choi circuits.
//! - [`vqb`]: post-processing, the partial-swap optimality scan and error-mitigation sweeps.
//! - [`pdm`]: two-time pseudo-density matrices.
//! - [`sampler`]: shot-level quasi-probability estimation.

pub mod circuit;
pub mod error;
pub mod maps;
pub mod matcore;
pub mod pauli;
pub mod pdm;
pub mod sampler;
pub mod tolerance;
pub mod vqb;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use matcore::{ComplexMatrix, DensityMatrix, HermitianOperator};
pub use pauli::Pauli;
