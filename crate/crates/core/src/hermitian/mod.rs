//! Dense complex linear algebra for small Hermitian matrices.

mod density;
mod eigen;
mod matrix;

pub use density::{bures_fidelity, norms, sqrt_psd, superfidelity_bound, DensityMatrix, Norms};
pub use eigen::{eig_hermitian, Eigensystem};
pub use matrix::{
    embed_qubit_operator, is_psd_by_coefficients, pauli, positivity_coefficients, tensor, ComplexMatrix, C64,
};
