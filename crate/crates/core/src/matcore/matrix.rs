use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix.
///
/// Every state, operator and Choi matrix in the crate is carried by this type.
/// Subsystems are laid out big-endian: for dims `[d0, d1, ..]` the first
/// subsystem is the most significant digit of the basis index.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_slice(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot fill a {n}x{n} matrix",
                entries.len()
            )));
        }
        let m = Self(DMatrix::from_row_slice(n, n, entries));
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows are ragged or non-square".into()));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(n, &flat)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(n, n, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO })
    }

    /// `|i><j|` in dimension `n`.
    pub fn ket_bra(i: usize, j: usize, n: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[(i, j)] = ONE;
        m
    }

    /// Outer product `|psi><psi|` (no normalization).
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, |i, j| psi[i] * psi[j].conj())
    }

    /// Wraps an existing nalgebra matrix. Panics if it is not square.
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        assert!(m.is_square(), "ComplexMatrix must be square");
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.0[(i, j)] = value;
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// `U M U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on matrices of different size");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M^dagger|` entrywise.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Partial trace keeping the subsystems listed in `keep`.
    ///
    /// The result is laid out in the original subsystem order, regardless of
    /// the order of `keep`.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        check_dims(self.dim(), dims)?;
        if keep.is_empty() {
            return Err(Error::InvalidArgument("partial trace must keep at least one subsystem".into()));
        }
        let mut kept = vec![false; dims.len()];
        for &k in keep {
            if k >= dims.len() {
                return Err(Error::InvalidArgument(format!(
                    "subsystem index {k} out of range for {} subsystems",
                    dims.len()
                )));
            }
            kept[k] = true;
        }
        let out_dims: Vec<usize> = (0..dims.len()).filter(|&s| kept[s]).map(|s| dims[s]).collect();
        let traced_dims: Vec<usize> = (0..dims.len()).filter(|&s| !kept[s]).map(|s| dims[s]).collect();
        let out_n: usize = out_dims.iter().product();
        let traced_n: usize = traced_dims.iter().product();

        // Full index from (kept index, traced index).
        let compose = |k_idx: usize, t_idx: usize| -> usize {
            let kd = split_index(k_idx, &out_dims);
            let td = split_index(t_idx, &traced_dims);
            let (mut ki, mut ti) = (kd.into_iter(), td.into_iter());
            let digits: Vec<usize> = (0..dims.len())
                .map(|s| if kept[s] { ki.next().unwrap() } else { ti.next().unwrap() })
                .collect();
            join_index(&digits, dims)
        };
        let full: Vec<Vec<usize>> = (0..out_n)
            .map(|k| (0..traced_n).map(|t| compose(k, t)).collect())
            .collect();

        Ok(Self::from_fn(out_n, |i, j| {
            (0..traced_n).map(|t| self.0[(full[i][t], full[j][t])]).sum()
        }))
    }

    /// Reorders subsystems: subsystem `perm[k]` of the input becomes subsystem `k` of the output.
    pub fn permute_subsystems(&self, dims: &[usize], perm: &[usize]) -> Result<Self> {
        check_dims(self.dim(), dims)?;
        check_permutation(perm, dims.len())?;
        let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        let n = self.dim();
        // source index for each output index
        let src: Vec<usize> = (0..n)
            .map(|idx| {
                let out_digits = split_index(idx, &out_dims);
                let mut in_digits = vec![0; dims.len()];
                for (k, &p) in perm.iter().enumerate() {
                    in_digits[p] = out_digits[k];
                }
                join_index(&in_digits, dims)
            })
            .collect();
        Ok(Self::from_fn(n, |i, j| self.0[(src[i], src[j])]))
    }

    /// Lifts `op`, acting on the subsystems `targets` (in that order), to the full
    /// space described by `dims`, acting as the identity elsewhere.
    pub fn embed(op: &Self, dims: &[usize], targets: &[usize]) -> Result<Self> {
        let mut seen = vec![false; dims.len()];
        for &t in targets {
            if t >= dims.len() || seen[t] {
                return Err(Error::InvalidArgument(format!("bad target list {targets:?}")));
            }
            seen[t] = true;
        }
        let target_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
        if target_dims.iter().product::<usize>() != op.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator of size {} does not act on subsystems {targets:?} of {dims:?}",
                op.dim()
            )));
        }
        let n: usize = dims.iter().product();
        let digits: Vec<Vec<usize>> = (0..n).map(|i| split_index(i, dims)).collect();
        let target_index = |d: &[usize]| {
            targets.iter().fold(0, |acc, &t| acc * dims[t] + d[t])
        };
        let rest_equal = |a: &[usize], b: &[usize]| {
            (0..dims.len()).all(|s| seen[s] || a[s] == b[s])
        };
        Ok(Self::from_fn(n, |i, j| {
            if rest_equal(&digits[i], &digits[j]) {
                op.0[(target_index(&digits[i]), target_index(&digits[j]))]
            } else {
                ZERO
            }
        }))
    }
}

fn check_dims(n: usize, dims: &[usize]) -> Result<()> {
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != n {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not multiply to matrix size {n}"
        )));
    }
    Ok(())
}

fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{len}")));
    }
    for &p in perm {
        if p >= len || seen[p] {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{len}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Big-endian digits of `idx` in the mixed radix `dims`.
pub(crate) fn split_index(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
    digits
}

pub(crate) fn join_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| acc.kron(f))
}

pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    m.partial_trace(dims, keep)
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({0}x{0}) [", self.dim())?;
        for i in 0..self.dim() {
            write!(f, "  ")?;
            for j in 0..self.dim() {
                let z = self.0[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}
