use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;
use crate::matcore::{kron_all, ComplexMatrix, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const XYZ: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let entries: [Complex64; 4] = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_row_slice(2, &entries).expect("2x2")
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            other => Err(Error::InvalidArgument(format!("unknown Pauli label {other:?}"))),
        }
    }
}

/// Tensor product of single-qubit Paulis, first factor most significant.
pub fn pauli_string(factors: &[Pauli]) -> ComplexMatrix {
    let mats: Vec<ComplexMatrix> = factors.iter().map(|p| p.matrix()).collect();
    kron_all(&mats)
}

/// All `4^n` Pauli strings on `n` qubits in lexicographic (I, X, Y, Z) order.
pub fn pauli_strings(n: usize) -> Vec<Vec<Pauli>> {
    (0..4usize.pow(n as u32))
        .map(|mut k| {
            let mut s = vec![Pauli::I; n];
            for slot in s.iter_mut().rev() {
                *slot = Pauli::ALL[k % 4];
                k /= 4;
            }
            s
        })
        .collect()
}
