//! State-vector evolution: states move, observables stay put.
//!
//! Basis index `b` stores qubit 0 in its most significant bit, matching the
//! tensor order of [`PauliString`].

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, GateOp};
use crate::error::{ensure_same_n, Error, Result};
use crate::pauli::dense::{check_cap, DenseMatrix};
use crate::pauli::{phase_to_complex, PauliString, PauliSum, Word};

/// Tolerance on `|‖ψ‖² − 1|` for a valid state.
pub const NORM_TOL: f64 = 1e-10;

/// Overlap tolerance for equality up to global phase: `|⟨ψ|χ⟩| ≥ 1 − tol`.
pub const OVERLAP_TOL: f64 = 1e-10;

/// Largest register the state-vector backend accepts.
pub const MAX_STATE_QUBITS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                cap: MAX_STATE_QUBITS,
            });
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![zero(); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Amplitudes must have power-of-two length and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        let s = Self { n, amps };
        if (s.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state is not normalized (norm² = {})",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    /// Tensor product, `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n + other.n;
        if n > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                cap: MAX_STATE_QUBITS,
            });
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    fn apply_local(&self, support: &[usize], u: &DenseMatrix) -> StateVector {
        let k = support.len();
        let masks: Vec<usize> = support.iter().map(|&q| self.bit(q)).collect();
        let all: usize = masks.iter().sum();
        let local_index = |j: usize| -> usize {
            // local index j -> global offset; support[0] is the local MSB
            (0..k)
                .filter(|&m| j >> (k - 1 - m) & 1 == 1)
                .map(|m| masks[m])
                .sum()
        };
        let offsets: Vec<usize> = (0..1 << k).map(local_index).collect();
        let mut out = self.amps.clone();
        let mut gathered = vec![zero(); 1 << k];
        for base in (0..self.amps.len()).filter(|b| b & all == 0) {
            for (j, off) in offsets.iter().enumerate() {
                gathered[j] = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                out[base + off] = (0..1 << k).map(|c| u[(r, c)] * gathered[c]).sum();
            }
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }

    /// `|ψ⟩ -> U|ψ⟩`.
    pub fn apply_gate(&self, g: &GateOp) -> Result<StateVector> {
        g.check_fits(self.n)?;
        let out = self.apply_local(g.support(), &g.local_matrix());
        debug_assert!((out.norm_sqr() - 1.0).abs() <= NORM_TOL);
        Ok(out)
    }

    /// `|ψ⟩ -> U†|ψ⟩`.
    pub fn apply_gate_adjoint(&self, g: &GateOp) -> Result<StateVector> {
        g.check_fits(self.n)?;
        Ok(self.apply_local(g.support(), &g.local_matrix().adjoint()))
    }

    /// Index mask and phase data for a word in this register's bit order.
    fn word_masks(&self, w: &Word) -> (usize, usize, u32) {
        let mut xm = 0;
        let mut zm = 0;
        for q in 0..self.n {
            let bit = self.bit(q);
            if w.x >> q & 1 == 1 {
                xm |= bit;
            }
            if w.z >> q & 1 == 1 {
                zm |= bit;
            }
        }
        (xm, zm, (xm & zm).count_ones())
    }

    /// Adds `c · W|ψ⟩` into `out` for an unsigned word `W`.
    fn add_word_image(&self, w: &Word, c: Complex64, out: &mut [Complex64]) {
        let (xm, zm, ys) = self.word_masks(w);
        // W|b> = i^ys (-1)^{|b & zm|} |b ^ xm>
        let base = c * phase_to_complex((ys % 4) as u8);
        for (b, a) in self.amps.iter().enumerate() {
            let sign = if (b & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ xm] += base * sign * a;
        }
    }

    /// `O|ψ⟩`, not normalized.
    pub fn apply_sum(&self, obs: &PauliSum) -> Result<Vec<Complex64>> {
        ensure_same_n(obs.n(), self.n)?;
        let mut out = vec![zero(); self.amps.len()];
        for (w, c) in obs.raw_terms() {
            self.add_word_image(w, *c, &mut out);
        }
        Ok(out)
    }

    pub fn apply_string(&self, p: &PauliString) -> Result<StateVector> {
        ensure_same_n(p.n(), self.n)?;
        let mut out = vec![zero(); self.amps.len()];
        self.add_word_image(&p.word(), phase_to_complex(p.phase_exp()), &mut out);
        Ok(StateVector {
            n: self.n,
            amps: out,
        })
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, obs: &PauliSum) -> Result<Complex64> {
        ensure_same_n(obs.n(), self.n)?;
        let mut total = zero();
        for (w, c) in obs.raw_terms() {
            let (xm, zm, ys) = self.word_masks(w);
            let base = c * phase_to_complex((ys % 4) as u8);
            let mut s = zero();
            for (b, a) in self.amps.iter().enumerate() {
                let sign = if (b & zm).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                s += self.amps[b ^ xm].conj() * a * sign;
            }
            total += base * s;
        }
        Ok(total)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        ensure_same_n(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Equality up to a global phase, via the overlap predicate.
    pub fn equal_up_to_phase(&self, other: &StateVector) -> bool {
        self.inner(other)
            .map(|o| o.norm() >= 1.0 - OVERLAP_TOL)
            .unwrap_or(false)
    }

    /// `|ψ⟩⟨ψ|` as a dense matrix.
    pub fn projector(&self) -> Result<DenseMatrix> {
        check_cap(self.n)?;
        let col = DMatrix::from_column_slice(self.amps.len(), 1, &self.amps);
        Ok(&col * col.adjoint())
    }

    /// Partial trace over every qubit not in `keep`. The kept qubits appear
    /// in ascending order, the lowest index most significant.
    pub fn reduced_density_matrix(&self, keep: &BTreeSet<usize>) -> Result<DenseMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "reduced state needs at least one qubit".into(),
            ));
        }
        if let Some(&qubit) = keep.iter().find(|&&q| q >= self.n) {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        check_cap(keep.len())?;
        let kept: Vec<usize> = keep.iter().copied().collect();
        let env: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let split = |b: usize, qubits: &[usize]| -> usize {
            qubits
                .iter()
                .fold(0, |acc, &q| (acc << 1) | usize::from(b & self.bit(q) != 0))
        };
        let mut m = DMatrix::from_element(1 << kept.len(), 1 << env.len(), zero());
        for (b, a) in self.amps.iter().enumerate() {
            m[(split(b, &kept), split(b, &env))] = *a;
        }
        Ok(&m * m.adjoint())
    }
}

/// Applies the gates of `c` left to right.
pub fn run_circuit(c: &Circuit, initial: &StateVector) -> Result<StateVector> {
    ensure_same_n(c.n(), initial.n())?;
    c.gates()
        .iter()
        .try_fold(initial.clone(), |s, g| s.apply_gate(g))
}
