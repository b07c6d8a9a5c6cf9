use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::{eigh, random::ginibre, ComplexMatrix, ZERO};
use crate::tolerance;

use super::broadcast::{b_canonical_op, b_minus_op, b_plus_op, n_theta_op};
use super::operators::{partial_swap, PartialSwapParams};

/// A linear map stored as its normalized Choi matrix
/// `C = (1/d_in) sum_ij |i><j| (x) N(|i><j|)`, reference system first.
#[derive(Debug, Clone)]
pub struct Channel {
    pub choi: ComplexMatrix,
    pub d_in: usize,
    pub d_out: usize,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub is_cp: bool,
    pub is_tp: bool,
    pub is_hp: bool,
    /// Smallest Choi eigenvalue; `None` when the Choi matrix is not Hermitian.
    pub min_eigenvalue: Option<f64>,
    /// `max |Tr_out(d_in C) - I|`.
    pub tp_deviation: f64,
}

/// Choi matrix of an operator-level linear map on `d_in`-dimensional inputs.
pub fn choi_of(
    map: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    d_in: usize,
    label: impl Into<String>,
) -> Result<Channel> {
    if d_in == 0 {
        return Err(Error::InvalidArgument("input dimension must be positive".into()));
    }
    let mut blocks = Vec::with_capacity(d_in * d_in);
    for i in 0..d_in {
        for j in 0..d_in {
            blocks.push(map(&ComplexMatrix::ket_bra(i, j, d_in))?);
        }
    }
    let d_out = blocks[0].dim();
    if blocks.iter().any(|b| b.dim() != d_out) {
        return Err(Error::DimensionMismatch("map output size depends on the input".into()));
    }
    let n = d_in * d_out;
    let scale = 1.0 / d_in as f64;
    let choi = ComplexMatrix::from_fn(n, |r, c| {
        let (i, a) = (r / d_out, r % d_out);
        let (j, b) = (c / d_out, c % d_out);
        blocks[i * d_in + j].get(a, b) * scale
    });
    choi.check_finite()?;
    Ok(Channel { choi, d_in, d_out, label: label.into() })
}

impl Channel {
    /// `N(X) = d_in Tr_in[(X^T (x) I) C]`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.dim() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel {} takes {}-dimensional inputs, got {}",
                self.label,
                self.d_in,
                x.dim()
            )));
        }
        let (din, dout) = (self.d_in, self.d_out);
        let scale = din as f64;
        Ok(ComplexMatrix::from_fn(dout, |a, b| {
            let mut acc = ZERO;
            for i in 0..din {
                for j in 0..din {
                    acc += x.get(i, j) * self.choi.get(i * dout + a, j * dout + b);
                }
            }
            acc * scale
        }))
    }

    /// Subsystem dims of the Choi matrix, `[d_in, d_out]`.
    pub fn choi_dims(&self) -> [usize; 2] {
        [self.d_in, self.d_out]
    }

    pub fn classify(&self) -> Classification {
        classify(self)
    }

    pub fn identity(d: usize) -> Result<Self> {
        choi_of(|x| Ok(x.clone()), d, "identity")
    }

    pub fn cloner(d: usize) -> Result<Self> {
        choi_of(|x| b_plus_op(x, d), d, "cloner")
    }

    pub fn antisymmetrizer(d: usize) -> Result<Self> {
        choi_of(|x| b_minus_op(x, d), d, "antisymmetrizer")
    }

    pub fn broadcast(d: usize) -> Result<Self> {
        choi_of(|x| b_canonical_op(x, d), d, "broadcast")
    }

    /// The partial-swap map divided by its (input-independent) trace `(d + sin theta)/(d + 1)`.
    pub fn n_theta_normalized(p: PartialSwapParams) -> Result<Self> {
        let weight = (p.d as f64 + p.theta.sin()) / (p.d as f64 + 1.0);
        choi_of(|x| Ok(n_theta_op(x, p)?.scale_re(1.0 / weight)), p.d, format!("n_theta({})", p.theta))
    }

    /// `X -> Tr(X) I / d`.
    pub fn completely_depolarizing(d: usize) -> Result<Self> {
        choi_of(
            |x| Ok(ComplexMatrix::identity(d).scale(x.trace() / d as f64)),
            d,
            "completely_depolarizing",
        )
    }

    /// Keeps the diagonal, removes all coherences.
    pub fn completely_dephasing(d: usize) -> Result<Self> {
        choi_of(
            |x| Ok(ComplexMatrix::from_fn(d, |i, j| if i == j { x.get(i, i) } else { ZERO })),
            d,
            "completely_dephasing",
        )
    }

    /// `X -> U X U^dagger`.
    pub fn unitary(u: &ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        super::operators::check_unitary(u)?;
        choi_of(|x| Ok(x.conjugate_by(u)), u.dim(), label)
    }

    /// `X -> sum_k K_k X K_k^dagger`.
    pub fn from_kraus(kraus: &[ComplexMatrix], label: impl Into<String>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
        let d = first.dim();
        if kraus.iter().any(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch("Kraus operators of different sizes".into()));
        }
        choi_of(
            |x| {
                Ok(kraus
                    .iter()
                    .fold(ComplexMatrix::zeros(d), |acc, k| &acc + &x.conjugate_by(k)))
            },
            d,
            label,
        )
    }

    /// Random CPTP map from `rank` Ginibre Kraus operators, normalized by
    /// `(sum_k G_k^dagger G_k)^(-1/2)` so that the set is trace preserving.
    pub fn random_cptp<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("Kraus rank must be positive".into()));
        }
        let raw: Vec<ComplexMatrix> = (0..rank).map(|_| ginibre(d, rng)).collect();
        let gram = raw.iter().fold(ComplexMatrix::zeros(d), |acc, g| &acc + &(&g.adjoint() * g));
        let inv_sqrt = eigh(&gram)?.map_spectrum(|x| 1.0 / x.sqrt());
        let kraus: Vec<ComplexMatrix> = raw.iter().map(|g| g * &inv_sqrt).collect();
        Self::from_kraus(&kraus, "random_cptp")
    }
}

/// CP / TP / HP flags of a map from its Choi matrix.
pub fn classify(c: &Channel) -> Classification {
    let is_hp = c.choi.is_hermitian(tolerance::HERMITIAN);
    let min_eigenvalue = if is_hp { eigh(&c.choi).ok().map(|e| e.min()) } else { None };
    let is_cp = min_eigenvalue.is_some_and(|m| m >= -tolerance::CP);
    let marginal = c
        .choi
        .partial_trace(&c.choi_dims(), &[0])
        .expect("Choi dims are consistent")
        .scale(Complex64::new(c.d_in as f64, 0.0));
    let tp_deviation = marginal.max_abs_diff(&ComplexMatrix::identity(c.d_in));
    Classification { is_cp, is_tp: tp_deviation <= tolerance::TP, is_hp, min_eigenvalue, tp_deviation }
}

/// The partial swap as a unitary on the pair, for callers that need the gate itself.
pub fn partial_swap_gate(theta: f64, d: usize) -> Result<ComplexMatrix> {
    partial_swap(PartialSwapParams::new(theta, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random, ONE};
    use crate::pauli::Pauli;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn identity_choi_is_bell_state() {
        let h = 0.5_f64.sqrt();
        let phi = ComplexMatrix::outer(&[ONE * h, ZERO, ZERO, ONE * h]);
        let c = Channel::identity(2).unwrap();
        assert!(c.choi.max_abs_diff(&phi) < 1e-15);
    }

    #[test]
    fn broadcast_family_classification() {
        for d in 2..=3 {
            let plus = Channel::cloner(d).unwrap().classify();
            assert!(plus.is_cp && plus.is_tp && plus.is_hp, "{plus:?}");
            let minus = Channel::antisymmetrizer(d).unwrap().classify();
            assert!(minus.is_cp && minus.is_tp && minus.is_hp, "{minus:?}");
            let b = Channel::broadcast(d).unwrap().classify();
            assert!(!b.is_cp && b.is_tp && b.is_hp, "{b:?}");
            assert!(b.min_eigenvalue.unwrap() < -0.01);
        }
    }

    #[test]
    fn non_hermitian_map_is_flagged() {
        let c = choi_of(|x| Ok(ComplexMatrix::ket_bra(0, 1, 2).scale(x.trace())), 2, "skew").unwrap();
        let flags = c.classify();
        assert!(!flags.is_hp);
        assert!(!flags.is_cp);
        assert_eq!(flags.min_eigenvalue, None);
    }

    #[test]
    fn apply_inverts_choi() {
        let mut rng = random::rng_from_seed(3);
        let ch = Channel::random_cptp(3, 2, &mut rng).unwrap();
        let flags = ch.classify();
        assert!(flags.is_cp && flags.is_tp);
        let x = random::random_hermitian(3, &mut rng);
        let back = choi_of(|y| ch.apply(y), 3, "copy").unwrap();
        assert!(back.choi.max_abs_diff(&ch.choi) < 1e-13);
        let cloner = Channel::cloner(3).unwrap();
        assert!(cloner.apply(&x).unwrap().max_abs_diff(&b_plus_op(&x, 3).unwrap()) < 1e-13);
    }

    #[test]
    fn n_theta_normalized_is_tp_and_cp() {
        for &theta in &[0.0, 0.7, FRAC_PI_2, 4.0] {
            let c = Channel::n_theta_normalized(PartialSwapParams::new(theta, 2).unwrap()).unwrap();
            let flags = c.classify();
            assert!(flags.is_cp && flags.is_tp, "theta={theta}: {flags:?}");
        }
        let x = Channel::unitary(&Pauli::X.matrix(), "x").unwrap();
        assert!(x.classify().is_tp);
        assert!(Channel::unitary(&ComplexMatrix::identity(2).scale_re(2.0), "bad").is_err());
    }
}
