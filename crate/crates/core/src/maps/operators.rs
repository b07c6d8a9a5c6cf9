use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, ONE};
use crate::tolerance;

pub(crate) fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { dim: d, reason: "subsystem dimension must be at least 2" });
    }
    Ok(())
}

/// `S |i, j> = |j, i>` on `C^d (x) C^d`.
pub fn swap_operator(d: usize) -> Result<ComplexMatrix> {
    require_dim(d)?;
    let mut s = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            s.set(j * d + i, i * d + j, ONE);
        }
    }
    Ok(s)
}

/// Projectors onto the symmetric and antisymmetric subspaces, `(I (x) I +/- S) / 2`.
pub fn sym_projectors(d: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let s = swap_operator(d)?;
    let id = ComplexMatrix::identity(d * d);
    Ok(((&id + &s).scale_re(0.5), (&id - &s).scale_re(0.5)))
}

/// Parameters of the partial swap `U(theta) = i exp(-i theta S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSwapParams {
    pub theta: f64,
    pub d: usize,
}

impl PartialSwapParams {
    pub fn new(theta: f64, d: usize) -> Result<Self> {
        require_dim(d)?;
        if !(0.0..=TAU).contains(&theta) {
            return Err(Error::InvalidArgument(format!("theta = {theta} outside [0, 2pi]")));
        }
        Ok(Self { theta, d })
    }
}

/// `U(theta) = i cos(theta) I + sin(theta) S`, the closed form of `i exp(-i theta S)` since `S^2 = I`.
pub fn partial_swap(p: PartialSwapParams) -> Result<ComplexMatrix> {
    let s = swap_operator(p.d)?;
    let id = ComplexMatrix::identity(p.d * p.d);
    Ok(id.scale(Complex64::new(0.0, p.theta.cos())) + s.scale_re(p.theta.sin()))
}

/// `max |U U^dagger - I|`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    (u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(u.dim()))
}

pub fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if deviation > tolerance::UNITARY {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}
