//! Dense complex linear algebra for one to three qubits.
//!
//! Composite indices are big-endian: on `A ⊗ B` the basis index is `2a + b`,
//! on `A ⊗ B ⊗ B′` it is `4a + 2b + b′`. Every matrix layout in the crate
//! follows this ordering.

mod eig;
mod matrix;
pub mod pauli;
mod state;

pub use eig::{
    eig_hermitian, evolution_unitary, fix_global_phase, is_psd, EigenDecomposition, PsdCheck, JACOBI_MAX_SWEEPS,
    JACOBI_THRESHOLD,
};
pub use matrix::{kron, kron_vec, partial_trace, partial_transpose, ComplexMatrix, HERMITIAN_TOL, SUPPORTED_DIMS};
pub use state::{kets, trace_distance, trace_distance_pure, DensityMatrix, STATE_TOL};
