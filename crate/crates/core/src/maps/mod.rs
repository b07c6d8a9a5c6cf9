//! Structural operators and the broadcasting maps, in operator and Choi form.

mod broadcast;
mod channel;
mod operators;

pub use broadcast::{
    b_canonical, b_canonical_op, b_minus, b_minus_op, b_plus, b_plus_op, n_theta, n_theta_op, NThetaOutput,
};
pub use channel::{choi_of, classify, partial_swap_gate, Channel, Classification};
pub use operators::{
    check_unitary, partial_swap, swap_operator, sym_projectors, unitarity_deviation, PartialSwapParams,
};
