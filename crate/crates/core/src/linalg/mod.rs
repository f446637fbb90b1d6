//! Dense complex matrices for 2×2, 4×4 and 16×16 operators; decompositions
//! delegate to nalgebra.

pub mod eig;
pub mod matrix;
pub mod pauli;
pub mod svd;

pub use eig::{hermitian_eig, HermitianEigen};
pub use matrix::{
    anticommutator, commutator, kron, partial_trace, trace_of_product, ComplexMatrix, Subsystem,
    C64,
};
pub use svd::{singular_values, svd, trace_norm, Svd};
