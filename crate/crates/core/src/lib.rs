//! Classification of multiparty correlation tables by extremality in the
//! quantum set.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! * [`numkernel`]: dense Hermitian eigensolver, Gram rank, PSD projection.
//! * [`behavior`]: `(N, M, K)` probability tables, validation and Bell functionals.
//! * [`lhv`]: deterministic vertices, classical maxima and LP membership with a
//!   separating Bell functional.
//! * [`qubitmodel`]: the `(N, 2, 2)` qubit parametrization, Bell operators and
//!   Tsirelson-bound maximization, plus the final security classification.
//! * [`cert222`]: lowest-order Tsirelson certificates in the `(2, 2, 2)` scenario.
//! * [`csystem`]: vector systems realizing `(2, M, 2)` correlators and their rank.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod behavior;
pub mod cert222;
pub mod csystem;
mod error;
pub mod lhv;
pub mod numkernel;
pub mod qubitmodel;

pub use behavior::{BellFunctional, Behavior, CorrelationTable, Scenario, ValidationReport};
pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shared tolerance for normalization, positivity and no-signaling checks.
pub const BEHAVIOR_TOL: f64 = 1e-9;
