//! Numerical tolerances shared by every module.
//!
//! All values are absolute and apply to dense matrices of size at most a few
//! hundred, where double-precision eigendecompositions are accurate to ~1e-13.

/// Max entrywise `|M - M^dagger|` accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const PSD: f64 = 1e-10;

/// Allowed deviation of a state's trace from one.
pub const TRACE: f64 = 1e-10;

/// Smallest Choi eigenvalue accepted when classifying a map as CP.
pub const CP: f64 = 1e-9;

/// Allowed deviation of the Choi output-marginal from the identity when classifying TP.
pub const TP: f64 = 1e-9;

/// Max entrywise `|U U^dagger - I|` accepted as unitary.
pub const UNITARY: f64 = 1e-9;

/// Outcome probabilities below this are treated as unattainable.
pub const MIN_PROBABILITY: f64 = 1e-12;

/// Eigenvalues below this (relative to the largest) count as zero when
/// detecting rank-one states in fidelity.
pub const RANK: f64 = 1e-12;

/// The tolerance set as a value, for callers that want to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd: f64,
    pub trace: f64,
    pub cp: f64,
    pub tp: f64,
    pub unitary: f64,
    pub min_probability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            psd: PSD,
            trace: TRACE,
            cp: CP,
            tp: TP,
            unitary: UNITARY,
            min_probability: MIN_PROBABILITY,
        }
    }
}
