//! Pauli strings with exact phases, complex Pauli sums, and the dense
//! matrix oracle used to check them.

pub mod dense;
mod string;
mod sum;

pub use dense::{DenseMatrix, DENSE_CAP};
pub use string::{Pauli, PauliString, Word, MAX_QUBITS};
pub use sum::{PauliSum, ZERO_TOL};

pub(crate) use sum::phase_to_complex;
