//! Controlled-Z-minimal preparation circuits for 3-qubit (and 2-qubit) pure states.
//!
//! A 3-qubit state is viewed as a pair of 2×2 amplitude blocks,
//! `|φ⟩ = |0⟩T₀ + |1⟩T₁`, and every gate in the synthesized circuit is chosen
//! so that the blocks acquire a target property (singular top block, vanishing
//! rows, rank-one rows, ...). The disentangling circuits produced here map the
//! input state to `|000⟩` using local gates and
//!
//! * at most three controlled-Z gates for an arbitrary complex state;
//! * at most four controlled-Z gates, with every local gate real, for a state
//!   with real amplitudes (at most three when its discriminant `Δ ≥ 0`).
//!
//! Reversing the circuit (see [`circuit::Circuit::inverse`]) yields the
//! preparation circuit `|000⟩ → |φ⟩`.
//!
//! The synthesis path only uses the four arithmetic operations and square
//! roots; no eigen-solvers or inverse trigonometric functions are involved.

// `!(x >= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod cli;
pub mod error;
pub mod mat2;
pub mod state;
pub mod sweep;
pub mod synth;

pub use circuit::{Circuit, CzPair, Gate};
pub use error::{Error, Result};
pub use mat2::{Mat2, UnitaryMat2, C64};
pub use state::{DeltaValue, PureState2, PureState3};
pub use synth::{Branch, Mode, SynthesisReport};
