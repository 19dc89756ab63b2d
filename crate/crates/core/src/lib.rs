//! Classical simulation of the black-box DQC1 protocol.
//!
//! The crate estimates `|tr U|²` through the controlled-SWAP construction,
//! runs single-clean-qubit order finding and factoring end to end, and
//! provides the exact predictions (outcome distributions, eigenvalue counts,
//! success bounds) used to check those simulations.
//!
//! Module map:
//!
//! - [`numtheory`]: modular arithmetic, orders, orbits, continued fractions.
//! - [`qsim`]: dense unitaries, density matrices and the circuit-level oracles.
//! - [`dqc1`]: standard and black-box trace estimation, exact and sampled.
//! - [`order_finding`]: semiclassical phase estimation and the factoring driver.
//! - [`analysis`]: exact outcome distributions and counting arguments.
//! - [`verify`]: the invariant suite behind `bbdqc1 verify`.
//!
//! Random workloads are split into fixed batches with one ChaCha stream each
//! (see [`exec`]), so results do not depend on whether the `parallel`
//! feature is enabled.

pub mod analysis;
pub mod dqc1;
pub mod error;
pub mod exec;
pub mod numtheory;
pub mod order_finding;
pub mod qsim;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
