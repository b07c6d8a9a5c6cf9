//! The canonical virtual broadcasting map, its cloner/antisymmetrizer
//! decomposition, and the partial-swap family interpolating to the cloner.
//!
//! Outputs live on the ordered pair `[A, B]`. The operator-level functions
//! are linear and accept any `d x d` matrix, which is what Choi construction needs.

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, DensityMatrix, HermitianOperator};

use super::operators::{partial_swap, require_dim, swap_operator, sym_projectors, PartialSwapParams};

fn input_dim(x: &ComplexMatrix, d: usize) -> Result<()> {
    require_dim(d)?;
    if x.dim() != d {
        return Err(Error::DimensionMismatch(format!("expected a {d}-dimensional input, got {}", x.dim())));
    }
    Ok(())
}

fn single_system(rho: &DensityMatrix) -> usize {
    rho.dim()
}

/// `2/(d+1) Pi+ (X (x) I) Pi+`.
pub fn b_plus_op(x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    input_dim(x, d)?;
    let (pp, _) = sym_projectors(d)?;
    let lifted = x.kron(&ComplexMatrix::identity(d));
    Ok((&(&pp * &lifted) * &pp).scale_re(2.0 / (d as f64 + 1.0)))
}

/// `2/(d-1) Pi- (X (x) I) Pi-`.
pub fn b_minus_op(x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    input_dim(x, d)?;
    let (_, pm) = sym_projectors(d)?;
    let lifted = x.kron(&ComplexMatrix::identity(d));
    Ok((&(&pm * &lifted) * &pm).scale_re(2.0 / (d as f64 - 1.0)))
}

/// `{X (x) I, S} / 2`.
pub fn b_canonical_op(x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    input_dim(x, d)?;
    let s = swap_operator(d)?;
    Ok(x.kron(&ComplexMatrix::identity(d)).anticommutator(&s).scale_re(0.5))
}

/// `(I + U(theta)) (X (x) I) (I + U(theta))^dagger / (2(d+1))`, not renormalized.
pub fn n_theta_op(x: &ComplexMatrix, p: PartialSwapParams) -> Result<ComplexMatrix> {
    input_dim(x, p.d)?;
    let k = &ComplexMatrix::identity(p.d * p.d) + &partial_swap(p)?;
    let lifted = x.kron(&ComplexMatrix::identity(p.d));
    Ok(lifted.conjugate_by(&k).scale_re(1.0 / (2.0 * (p.d as f64 + 1.0))))
}

/// Universal cloner.
pub fn b_plus(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = single_system(rho);
    Ok(DensityMatrix::new_unchecked(b_plus_op(rho.mat(), d)?, vec![d, d]))
}

/// Universal antisymmetrizer. For `d = 2` the output is the singlet for every input.
pub fn b_minus(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = single_system(rho);
    Ok(DensityMatrix::new_unchecked(b_minus_op(rho.mat(), d)?, vec![d, d]))
}

/// Canonical virtual broadcast `B(rho) = {rho (x) I, S} / 2`. Both marginals equal `rho`.
pub fn b_canonical(rho: &DensityMatrix) -> Result<HermitianOperator> {
    let d = single_system(rho);
    HermitianOperator::new(b_canonical_op(rho.mat(), d)?, vec![d, d])
}

/// Output of the partial-swap map on a state.
#[derive(Debug, Clone)]
pub struct NThetaOutput {
    /// The defining formula evaluated as written; trace `(d + sin theta)/(d + 1)`.
    pub unnormalized: ComplexMatrix,
    /// Trace of `unnormalized`.
    pub weight: f64,
    pub normalized: DensityMatrix,
}

pub fn n_theta(rho: &DensityMatrix, p: PartialSwapParams) -> Result<NThetaOutput> {
    if rho.dim() != p.d {
        return Err(Error::DimensionMismatch(format!("state has dimension {}, map expects {}", rho.dim(), p.d)));
    }
    let unnormalized = n_theta_op(rho.mat(), p)?;
    let weight = unnormalized.trace().re;
    let normalized = DensityMatrix::new_unchecked(unnormalized.scale_re(1.0 / weight), vec![p.d, p.d]);
    Ok(NThetaOutput { unnormalized, weight, normalized })
}
