//! Fixtures shared by the benchmarks.

use vqb_core::matcore::random::random_density;
use vqb_core::DensityMatrix;

/// Deterministic inputs so runs are comparable.
pub fn fixture_state(d: usize) -> DensityMatrix {
    random_density(d, 0x5eed + d as u64)
}
