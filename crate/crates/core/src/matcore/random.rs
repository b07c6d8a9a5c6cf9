//! Seeded random states and operators.
//!
//! Streams come from ChaCha8, so a seed reproduces the same matrices on
//! every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::state::DensityMatrix;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `n x n` matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..n * n).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_slice(n, &entries).expect("gaussian samples are finite")
}

/// Mixed state `G G^dagger / Tr(G G^dagger)` from a Ginibre matrix.
pub fn random_density_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = ginibre(d, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new_unchecked(w.scale_re(1.0 / tr).hermitian_part(), vec![d])
}

/// Pure state from a normalized complex Gaussian vector.
pub fn random_pure_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let psi: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&psi).expect("gaussian vector is nonzero")
}

pub fn random_density(d: usize, seed: u64) -> DensityMatrix {
    random_density_with(d, &mut rng_from_seed(seed))
}

pub fn random_pure(d: usize, seed: u64) -> DensityMatrix {
    random_pure_with(d, &mut rng_from_seed(seed))
}

/// Random Hermitian matrix `(G + G^dagger) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(n, rng).hermitian_part()
}
