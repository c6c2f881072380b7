//! Dense matrices used as a brute-force verification oracle.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::string::{Pauli, PauliString};
use super::sum::{phase_to_complex, PauliSum};
use crate::error::{Error, Result};

/// Complex `2^n × 2^n` matrix.
pub type DenseMatrix = DMatrix<Complex64>;

/// Largest qubit count accepted by the dense oracle (1024-dimensional).
pub const DENSE_CAP: usize = 10;

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        Err(Error::TooManyQubits { n, cap: DENSE_CAP })
    } else {
        Ok(())
    }
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Standard 2×2 matrix of a single Pauli letter.
pub fn pauli_matrix(p: Pauli) -> DenseMatrix {
    let entries = match p {
        Pauli::I => [c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
        Pauli::X => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        Pauli::Y => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        Pauli::Z => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
    };
    DenseMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product with `a` as the leftmost (most significant) factor.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

pub fn string_to_dense(p: &PauliString) -> Result<DenseMatrix> {
    check_cap(p.n())?;
    let mut m = DenseMatrix::from_element(1, 1, c(1., 0.));
    for letter in p.letters() {
        m = kron(&m, &pauli_matrix(letter));
    }
    Ok(m * phase_to_complex(p.phase_exp()))
}

pub fn sum_to_dense(s: &PauliSum) -> Result<DenseMatrix> {
    check_cap(s.n())?;
    let dim = 1usize << s.n();
    let mut m = DenseMatrix::zeros(dim, dim);
    for (p, coeff) in s.terms() {
        m += string_to_dense(&p)? * coeff;
    }
    Ok(m)
}

/// Pauli-basis expansion of a dense matrix: `c_P = tr(P·M) / 2^n`.
pub fn dense_to_sum(m: &DenseMatrix) -> Result<PauliSum> {
    let dim = m.nrows();
    if dim != m.ncols() || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "matrix of shape {}x{} is not a square power-of-two matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = dim.trailing_zeros() as usize;
    check_cap(n)?;
    let mut terms = Vec::new();
    for p in PauliString::enumerate(n)? {
        let coeff = (string_to_dense(&p)? * m).trace() / dim as f64;
        terms.push((p, coeff));
    }
    PauliSum::from_terms(n, terms)
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "dense shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_hermitian(m: &DenseMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// Largest entry magnitude of `ab - ba`.
pub fn commutator_norm(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    max_abs_diff(&(a * b), &(b * a))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DenseMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_y() {
        let i = string_to_dense(&"I".parse().unwrap()).unwrap();
        assert_eq!(i, DenseMatrix::identity(2, 2));
        let y = string_to_dense(&"Y".parse().unwrap()).unwrap();
        assert_eq!(y[(0, 1)], c(0., -1.));
        assert_eq!(y[(1, 0)], c(0., 1.));
    }

    #[test]
    fn leftmost_letter_is_most_significant() {
        // X⊗I flips the high bit: |00> (index 0) -> |10> (index 2)
        let m = string_to_dense(&"XI".parse().unwrap()).unwrap();
        assert_eq!(m[(2, 0)], c(1., 0.));
        assert_eq!(m[(1, 0)], c(0., 0.));
    }

    #[test]
    fn entangled_projector_is_rank_one() {
        let rho: PauliSum = "0.25*II + 0.25*XZ + 0.25*ZX + 0.25*YY".parse().unwrap();
        let m = sum_to_dense(&rho).unwrap();
        assert!((m.trace() - c(1., 0.)).norm() < 1e-12);
        let ev = hermitian_eigenvalues(&m);
        let expected = [0.0, 0.0, 0.0, 1.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10, "{ev:?}");
        }
    }

    #[test]
    fn cap_enforced() {
        let big = PauliString::identity(DENSE_CAP + 1);
        assert!(matches!(
            string_to_dense(&big),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn pauli_expansion_inverts_to_dense() {
        let s: PauliSum = "0.3*XY - 0.7i*ZI + (0.1+0.2i)*YY".parse().unwrap();
        let back = dense_to_sum(&sum_to_dense(&s).unwrap()).unwrap();
        assert!(back.approx_eq(&s, 1e-12));
    }
}
