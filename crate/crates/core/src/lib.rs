//! Gazeau–Klauder coherent states and excited coherent states for quantum
//! systems with a continuous, non-degenerate spectrum `H|E⟩ = ωE|E⟩`.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: error functions, closed-form Gaussian tail moments and an
//!   independent adaptive quadrature oracle.
//! - [`states`]: model parameters, state labels, normalisations, amplitudes,
//!   time evolution and overlaps.
//! - [`grid_ops`]: the ladder operators `a_ε`, `a_ε†`, `N_ε` and `H` as banded
//!   kernels on a commensurate energy grid, with eigenvalue, commutator and
//!   small-`α` checks.
//! - [`observables`]: Mandel parameter, `g²(0)`, quadrature and
//!   amplitude-squared dispersions, each in a formal (closed form) and an
//!   exact (truncated `[0, ∞)` domain) mode.
//! - [`axioms`]: the resolution-of-identity weight, the Stieltjes moment
//!   identity, the action variable and its inverse.
//! - [`cli`]: figure data, parameter sweeps and verification suites behind
//!   the `gkcs` binary.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

// `!(x > 0.0)` is used on purpose so that NaN is rejected with the bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod cli;
pub mod error;
pub mod grid_ops;
pub mod observables;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use observables::EvalMode;
pub use states::{ModelParams, StateLabel};
