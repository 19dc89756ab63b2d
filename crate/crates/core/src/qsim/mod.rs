//! Small-dimension complex linear algebra: the oracle substrate for every
//! equivalence check in the crate.

mod density;
mod matrix_file;
mod ops;
pub mod random;
mod unitary;

pub use density::{
    build_tau_bb, build_tau_ctrl, control_coherence, control_reduced_state, tau_bb_block_formula,
    DensityMatrix,
};
pub use matrix_file::MatrixFile;
pub use ops::{
    adjoint, controlled, controlled_swap, identity, kron, max_abs_diff, partial_trace, phase_gate,
    swap_gate, unitarity_deviation, Subsystem,
};
pub use unitary::{trace_of, DenseUnitary, ModMul, UnitarySpec};

pub use num_complex::Complex64 as C64;

/// Dense complex matrix.
pub type Matrix = nalgebra::DMatrix<C64>;

/// Largest dimension `as_dense` will materialize.
pub const MAX_DENSE_DIM: usize = 64;
/// Largest dimension of any composite (control ⊗ registers) operator.
pub const MAX_PRODUCT_DIM: usize = 4096;

pub const UNITARY_TOL: f64 = 1e-10;
pub const DENSITY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
