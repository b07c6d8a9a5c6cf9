//! Gate-level density-matrix simulation of the LCU broadcasting circuit and
//! of the circuit that prepares Choi states.
//!
//! Registers are ordered `[control, A, B]` for broadcasting and
//! `[control, A, ref, B]` for Choi preparation. The input state sits on `B`,
//! `A` starts maximally mixed, and the controlled gate acts on `(A, B)`.
//! Because the input enters on the second slot, the outcome-0 branch of the
//! partial-swap circuit is the partial-swap map with its output pair
//! exchanged; the two coincide at `theta = pi/2` and `3 pi/2`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maps::{check_unitary, partial_swap_gate};
use crate::matcore::{ComplexMatrix, DensityMatrix, ZERO};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Control,
    A,
    Ref,
    B,
}

#[derive(Debug, Clone)]
pub struct Register {
    state: DensityMatrix,
    slots: Vec<Slot>,
}

#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub outcome: u8,
    pub probability: f64,
    /// `Tr_C[(P_i (x) I) rho (P_i (x) I)]`, i.e. `probability * state`.
    pub unnormalized: ComplexMatrix,
    /// Conditional state on the remaining slots; `None` if the outcome is unattainable.
    pub state: Option<DensityMatrix>,
    pub slots: Vec<Slot>,
}

impl MeasurementOutcome {
    pub fn require_state(&self) -> Result<&DensityMatrix> {
        self.state
            .as_ref()
            .ok_or(Error::Unattainable { outcome: self.outcome, probability: self.probability })
    }
}

fn hadamard() -> ComplexMatrix {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_row_slice(2, &[h, h, h, -h]).expect("2x2")
}

/// `|Phi+><Phi+|` with `|Phi+> = sum_i |ii> / sqrt(d)`.
pub fn bell_state(d: usize) -> DensityMatrix {
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let psi: Vec<Complex64> = (0..d * d).map(|k| if k / d == k % d { amp } else { ZERO }).collect();
    DensityMatrix::new_unchecked(ComplexMatrix::outer(&psi), vec![d, d])
}

impl Register {
    pub fn new(state: DensityMatrix, slots: Vec<Slot>) -> Result<Self> {
        if state.dims().len() != slots.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} slot labels for {} subsystems",
                slots.len(),
                state.dims().len()
            )));
        }
        if slots.first() != Some(&Slot::Control) || state.dims()[0] != 2 {
            return Err(Error::InvalidArgument("register must start with a qubit control".into()));
        }
        Ok(Self { state, slots })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn index_of(&self, slot: Slot) -> Result<usize> {
        self.slots
            .iter()
            .position(|&s| s == slot)
            .ok_or_else(|| Error::InvalidArgument(format!("register has no {slot:?} slot")))
    }

    /// Reduced state of the listed slots, in register order.
    pub fn marginal(&self, slots: &[Slot]) -> Result<DensityMatrix> {
        let keep: Vec<usize> = slots.iter().map(|&s| self.index_of(s)).collect::<Result<_>>()?;
        self.state.marginal(&keep)
    }

    fn with_state(&self, mat: ComplexMatrix) -> Self {
        Self { state: DensityMatrix::new_unchecked(mat, self.state.dims().to_vec()), slots: self.slots.clone() }
    }

    fn conjugate(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        let full = ComplexMatrix::embed(op, self.state.dims(), targets)?;
        Ok(self.with_state(self.state.mat().conjugate_by(&full)))
    }

    pub fn apply_hadamard_control(&self) -> Result<Self> {
        self.conjugate(&hadamard(), &[0])
    }

    /// Conjugation by `|0><0| (x) I + |1><1| (x) U`, with `U` acting on `(A, B)`.
    /// Any global phase of `U` is kept, since it is a relative phase here.
    pub fn apply_controlled_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        check_unitary(u)?;
        let a = self.index_of(Slot::A)?;
        let b = self.index_of(Slot::B)?;
        let pair = self.state.dims()[a] * self.state.dims()[b];
        if u.dim() != pair {
            return Err(Error::DimensionMismatch(format!("controlled unitary of size {} on a {pair}-dimensional pair", u.dim())));
        }
        let p0 = ComplexMatrix::ket_bra(0, 0, 2);
        let p1 = ComplexMatrix::ket_bra(1, 1, 2);
        let cu = p0.kron(&ComplexMatrix::identity(pair)) + p1.kron(u);
        self.conjugate(&cu, &[0, a, b])
    }

    /// `rho -> (1 - lambda) rho + lambda I / dim` on the whole register.
    pub fn apply_depolarizing(&self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("depolarizing strength {lambda} outside [0, 1]")));
        }
        let n = self.state.dim();
        let mixed = ComplexMatrix::identity(n).scale_re(lambda / n as f64);
        Ok(self.with_state(self.state.mat().scale_re(1.0 - lambda) + mixed))
    }

    /// Computational-basis measurement of the control, returning both branches.
    pub fn measure_control(&self) -> Result<(MeasurementOutcome, MeasurementOutcome)> {
        let dims = self.state.dims();
        let rest: Vec<usize> = (1..dims.len()).collect();
        let rest_dims: Vec<usize> = dims[1..].to_vec();
        let rest_slots: Vec<Slot> = self.slots[1..].to_vec();
        let branch = |outcome: u8| -> Result<MeasurementOutcome> {
            let proj = ComplexMatrix::ket_bra(outcome as usize, outcome as usize, 2);
            let full = ComplexMatrix::embed(&proj, dims, &[0])?;
            let projected = &(&full * self.state.mat()) * &full;
            let unnormalized = projected.partial_trace(dims, &rest)?;
            let probability = unnormalized.trace().re;
            let state = (probability >= tolerance::MIN_PROBABILITY).then(|| {
                DensityMatrix::new_unchecked(unnormalized.scale_re(1.0 / probability), rest_dims.clone())
            });
            Ok(MeasurementOutcome { outcome, probability, unnormalized, state, slots: rest_slots.clone() })
        };
        Ok((branch(0)?, branch(1)?))
    }
}

/// `|0><0| (x) I/d (x) rho` on `[control, A, B]`.
pub fn init_broadcast_register(rho: &DensityMatrix) -> Result<Register> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::UnsupportedDimension { dim: d, reason: "input dimension must be at least 2" });
    }
    let state = DensityMatrix::basis(0, 2)
        .kron(&DensityMatrix::maximally_mixed(d))
        .kron(&DensityMatrix::new_unchecked(rho.mat().clone(), vec![d]));
    Register::new(state, vec![Slot::Control, Slot::A, Slot::B])
}

/// `|0><0| (x) I/d (x) |Phi+><Phi+|` on `[control, A, ref, B]`.
pub fn init_choi_register(d: usize) -> Result<Register> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { dim: d, reason: "input dimension must be at least 2" });
    }
    let state = DensityMatrix::basis(0, 2).kron(&DensityMatrix::maximally_mixed(d)).kron(&bell_state(d));
    Register::new(state, vec![Slot::Control, Slot::A, Slot::Ref, Slot::B])
}

/// Circuit settings: partial-swap angle and optional pre-measurement depolarizing noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitConfig {
    pub theta: f64,
    pub noise: f64,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        Self { theta: FRAC_PI_2, noise: 0.0 }
    }
}

impl CircuitConfig {
    pub fn with_theta(theta: f64) -> Self {
        Self { theta, ..Self::default() }
    }

    /// Hadamard, controlled partial swap, Hadamard, then noise.
    pub fn evolve(&self, register: &Register) -> Result<Register> {
        let d = register.state.dims()[register.index_of(Slot::B)?];
        let u = partial_swap_gate(self.theta, d)?;
        let mut r = register.apply_hadamard_control()?;
        r = r.apply_controlled_unitary(&u)?;
        r = r.apply_hadamard_control()?;
        if self.noise > 0.0 {
            r = r.apply_depolarizing(self.noise)?;
        }
        Ok(r)
    }
}

/// Both branches of one broadcasting-circuit run on `[A, B]`.
#[derive(Debug, Clone)]
pub struct BroadcastRun {
    pub d: usize,
    pub config: CircuitConfig,
    pub p0: f64,
    pub state0: DensityMatrix,
    pub p1: f64,
    pub state1: DensityMatrix,
}

/// Final pre-measurement register of the broadcasting circuit.
pub fn broadcast_final_register(rho: &DensityMatrix, config: CircuitConfig) -> Result<Register> {
    config.evolve(&init_broadcast_register(rho)?)
}

pub fn run_broadcast_circuit_with(rho: &DensityMatrix, config: CircuitConfig) -> Result<BroadcastRun> {
    let (zero, one) = broadcast_final_register(rho, config)?.measure_control()?;
    Ok(BroadcastRun {
        d: rho.dim(),
        config,
        p0: zero.probability,
        state0: zero.require_state()?.clone(),
        p1: one.probability,
        state1: one.require_state()?.clone(),
    })
}

/// Noiseless run. At `theta = pi/2` the branches are the cloner and antisymmetrizer outputs.
pub fn run_broadcast_circuit(rho: &DensityMatrix, theta: f64) -> Result<BroadcastRun> {
    run_broadcast_circuit_with(rho, CircuitConfig::with_theta(theta))
}

/// Both branches of a Choi-preparation run; Choi states are ordered `[ref, A, B]`.
#[derive(Debug, Clone)]
pub struct ChoiRun {
    pub d: usize,
    pub config: CircuitConfig,
    pub p0: f64,
    pub choi0: DensityMatrix,
    pub p1: f64,
    pub choi1: DensityMatrix,
}

pub fn run_choi_circuit_with(d: usize, config: CircuitConfig) -> Result<ChoiRun> {
    let (zero, one) = config.evolve(&init_choi_register(d)?)?.measure_control()?;
    // [A, ref, B] -> [ref, A, B]
    let reorder = |o: &MeasurementOutcome| -> Result<DensityMatrix> {
        let s = o.require_state()?;
        let mat = s.mat().permute_subsystems(s.dims(), &[1, 0, 2])?;
        Ok(DensityMatrix::new_unchecked(mat, vec![d, d, d]))
    };
    Ok(ChoiRun {
        d,
        config,
        p0: zero.probability,
        choi0: reorder(&zero)?,
        p1: one.probability,
        choi1: reorder(&one)?,
    })
}

pub fn run_choi_circuit(theta: f64, d: usize) -> Result<ChoiRun> {
    run_choi_circuit_with(d, CircuitConfig::with_theta(theta))
}
