//! Dense complex linear algebra for small quantum registers.

mod matrix;
pub mod random;
mod spectral;
mod state;

pub use matrix::{kron, kron_all, partial_trace, ComplexMatrix, I, ONE, ZERO};
pub use random::{random_density, random_pure};
pub use spectral::{eigh, eigvalsh, fidelity_psd, singular_values, sqrt_psd, trace_norm, Eigh};
pub use state::{fidelity, DensityMatrix, HermitianOperator};
