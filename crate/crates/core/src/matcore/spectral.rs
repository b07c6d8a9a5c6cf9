use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `values`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self.vectors.as_dmatrix();
        let n = self.values.len();
        let mut scaled = v.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        ComplexMatrix::from_dmatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

/// Hermitian eigendecomposition. The input is symmetrized before decomposing.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigh> {
    let deviation = m.hermiticity_deviation();
    if deviation > tolerance::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    m.check_finite()?;
    let sym = m.hermitian_part().into_dmatrix();
    let decomposition = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| decomposition.eigenvalues[a].total_cmp(&decomposition.eigenvalues[b]));
    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.dim(), m.dim(), |i, k| decomposition.eigenvectors[(i, order[k])]);
    Ok(Eigh { values, vectors: ComplexMatrix::from_dmatrix(vectors) })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eigh(m).map(|e| e.values)
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.as_dmatrix().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Sum of singular values. Hermitian inputs use `sum |lambda|`.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    match eigh(m) {
        Ok(e) => e.values.iter().map(|x| x.abs()).sum(),
        Err(_) => singular_values(m).iter().sum(),
    }
}

/// Principal square root of a PSD matrix. Eigenvalues in `[-PSD, 0)` are clipped to zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = eigh(m)?;
    check_psd(&e)?;
    Ok(e.map_spectrum(|x| x.max(0.0).sqrt()))
}

fn check_psd(e: &Eigh) -> Result<()> {
    if e.min() < -tolerance::PSD {
        Err(Error::NotPositive { min_eigenvalue: e.min() })
    } else {
        Ok(())
    }
}

/// Squared Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2` of two PSD operators.
///
/// Neither argument needs unit trace. If either operator is rank one, say
/// `b = t |psi><psi|`, the result is computed as `t <psi|a|psi>`; otherwise it is
/// `||sqrt(a) sqrt(b)||_1^2` from a singular value decomposition.
pub fn fidelity_psd(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between {}- and {}-dimensional operators",
            a.dim(),
            b.dim()
        )));
    }
    let ea = eigh(a)?;
    let eb = eigh(b)?;
    check_psd(&ea)?;
    check_psd(&eb)?;
    if let Some(f) = rank_one_overlap(&eb, a).or_else(|| rank_one_overlap(&ea, b)) {
        return Ok(f.max(0.0));
    }
    let sqrt_a = ea.map_spectrum(|x| x.max(0.0).sqrt());
    let sqrt_b = eb.map_spectrum(|x| x.max(0.0).sqrt());
    let nuclear: f64 = singular_values(&(&sqrt_a * &sqrt_b)).iter().sum();
    Ok(nuclear * nuclear)
}

/// `t <psi|other|psi>` when the decomposed operator is `t |psi><psi|`.
fn rank_one_overlap(e: &Eigh, other: &ComplexMatrix) -> Option<f64> {
    let top = e.max();
    if top <= 0.0 {
        return None;
    }
    let rest = e.values[..e.values.len() - 1].iter().map(|x| x.abs()).fold(0.0, f64::max);
    if rest > tolerance::RANK * top {
        return None;
    }
    let n = other.dim();
    let psi: Vec<Complex64> = (0..n).map(|i| e.vectors.get(i, n - 1)).collect();
    let mut overlap = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            overlap += psi[i].conj() * other.get(i, j) * psi[j];
        }
    }
    Some(top * overlap.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| if i != j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    #[test]
    fn eigh_of_pauli_x() {
        let e = eigh(&sigma_x()).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
        assert!(e.reconstruct().max_abs_diff(&sigma_x()) < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::ket_bra(0, 1, 2);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn trace_norms() {
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])), 2.0, epsilon = 1e-14);
        // non-Hermitian route: |0><1| has a single unit singular value
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::ket_bra(0, 1, 2)), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_conventions() {
        let zero = ComplexMatrix::ket_bra(0, 0, 2);
        let mixed = ComplexMatrix::identity(2).scale_re(0.5);
        assert_abs_diff_eq!(fidelity_psd(&mixed, &zero).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(fidelity_psd(&zero, &zero).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fidelity_psd(&mixed, &mixed).unwrap(), 1.0, epsilon = 1e-14);
        let shrunk = zero.scale_re(2.0 / 3.0) + mixed.scale_re(1.0 / 3.0);
        assert_abs_diff_eq!(fidelity_psd(&shrunk, &zero).unwrap(), 5.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_rejects_negative_operators() {
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        let zero = ComplexMatrix::ket_bra(0, 0, 2);
        assert!(matches!(fidelity_psd(&neg, &zero), Err(Error::NotPositive { .. })));
    }
}
