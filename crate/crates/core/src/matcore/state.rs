use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::spectral::{self, eigh};
use crate::error::{Error, Result};
use crate::tolerance;

/// A valid quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

/// Hermitian operator with no positivity requirement, e.g. the output of a
/// virtual broadcast or a pseudo-density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

fn check_dims(mat: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().product::<usize>() != mat.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not match matrix size {}",
            mat.dim()
        )));
    }
    Ok(())
}

fn check_hermitian(mat: &ComplexMatrix) -> Result<()> {
    mat.check_finite()?;
    let deviation = mat.hermiticity_deviation();
    if deviation > tolerance::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn check_unit_trace(mat: &ComplexMatrix) -> Result<()> {
    let tr = mat.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > tolerance::TRACE {
        return Err(Error::BadTrace { found: tr.re, expected: 1.0 });
    }
    Ok(())
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&mat, &dims)?;
        check_hermitian(&mat)?;
        check_unit_trace(&mat)?;
        let min_eigenvalue = eigh(&mat)?.min();
        if min_eigenvalue < -tolerance::PSD {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { mat, dims })
    }

    /// Single-system state.
    pub fn from_matrix(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.dim();
        Self::new(mat, vec![d])
    }

    /// Skips validation; for results of operations that provably preserve validity.
    pub(crate) fn new_unchecked(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.dim());
        Self { mat, dims }
    }

    /// `|psi><psi|` for a normalized copy of `amplitudes`.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument("pure state amplitudes have zero or non-finite norm".into()));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        Ok(Self::new_unchecked(ComplexMatrix::outer(&psi), vec![psi.len()]))
    }

    /// `|k><k|` in dimension `d`.
    pub fn basis(k: usize, d: usize) -> Self {
        Self::new_unchecked(ComplexMatrix::ket_bra(k, k, d), vec![d])
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::new_unchecked(ComplexMatrix::identity(d).scale_re(1.0 / d as f64), vec![d])
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Self::new_unchecked(self.mat.kron(&other.mat), dims)
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let mat = self.mat.partial_trace(&self.dims, keep)?;
        let dims = (0..self.dims.len()).filter(|s| keep.contains(s)).map(|s| self.dims[s]).collect();
        Ok(Self::new_unchecked(mat, dims))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        // validated at construction
        spectral::eigvalsh(&self.mat).expect("density matrix is Hermitian")
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Squared Uhlmann fidelity; equals `<psi|self|psi>` when `other = |psi><psi|`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        fidelity(self, other)
    }
}

/// Squared Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`, clamped to `[0, 1]`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(spectral::fidelity_psd(&a.mat, &b.mat)?.clamp(0.0, 1.0))
}

impl HermitianOperator {
    /// Hermitian and unit trace.
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&mat, &dims)?;
        check_hermitian(&mat)?;
        check_unit_trace(&mat)?;
        Ok(Self { mat, dims })
    }

    /// Hermitian with arbitrary trace (noisy post-processed estimates).
    pub fn new_any_trace(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&mat, &dims)?;
        check_hermitian(&mat)?;
        Ok(Self { mat, dims })
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let mat = self.mat.partial_trace(&self.dims, keep)?;
        let dims = (0..self.dims.len()).filter(|s| keep.contains(s)).map(|s| self.dims[s]).collect();
        Ok(Self { mat, dims })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        spectral::eigvalsh(&self.mat).expect("operator is Hermitian")
    }

    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues().iter().map(|x| x.abs()).sum()
    }

    /// Sum of the moduli of the negative eigenvalues.
    pub fn negativity(&self) -> f64 {
        self.eigenvalues().iter().filter(|&&x| x < 0.0).map(|x| -x).sum()
    }

    /// Interprets the operator as a state; fails if it has negative eigenvalues.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.mat.clone(), self.dims.clone())
    }
}

impl From<DensityMatrix> for HermitianOperator {
    fn from(rho: DensityMatrix) -> Self {
        Self { mat: rho.mat, dims: rho.dims }
    }
}
