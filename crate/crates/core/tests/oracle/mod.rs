//! Brute-force dense reference built from basis-state actions, sharing no
//! code with the library's matrix embedding.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qlocal::{Circuit, GateKind, GateOp, Pauli, PauliString, PauliSum, StateVector};

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Image of basis state `b` under a Pauli string: `(index, amplitude)`.
fn apply_letter(n: usize, q: usize, letter: Pauli, b: usize) -> (usize, Complex64) {
    let set = b & bit(n, q) != 0;
    match letter {
        Pauli::I => (b, c(1.0, 0.0)),
        Pauli::X => (b ^ bit(n, q), c(1.0, 0.0)),
        Pauli::Y => (b ^ bit(n, q), if set { c(0.0, -1.0) } else { c(0.0, 1.0) }),
        Pauli::Z => (b, if set { c(-1.0, 0.0) } else { c(1.0, 0.0) }),
    }
}

pub fn string_matrix(p: &PauliString) -> M {
    let n = p.n();
    let dim = 1 << n;
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase_exp() as usize % 4];
    let mut m = M::zeros(dim, dim);
    for b in 0..dim {
        let (mut idx, mut amp) = (b, phase);
        for q in (0..n).rev() {
            let (i, a) = apply_letter(n, q, p.letter(q), idx);
            idx = i;
            amp *= a;
        }
        m[(idx, b)] += amp;
    }
    m
}

pub fn sum_matrix(s: &PauliSum) -> M {
    let dim = 1 << s.n();
    s.terms().fold(M::zeros(dim, dim), |acc, (p, coef)| {
        acc + string_matrix(&p) * coef
    })
}

/// Column `b` of the gate unitary, written out per gate kind.
fn gate_column(g: &GateOp, n: usize, b: usize) -> Vec<(usize, Complex64)> {
    let s = g.support();
    let on = |q: usize| b & bit(n, q) != 0;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match g.kind() {
        GateKind::H => {
            let q = s[0];
            let sign = if on(q) { -h } else { h };
            vec![(b & !bit(n, q), c(h, 0.0)), (b | bit(n, q), c(sign, 0.0))]
        }
        GateKind::S => vec![(b, if on(s[0]) { c(0.0, 1.0) } else { c(1.0, 0.0) })],
        GateKind::X => vec![apply_letter(n, s[0], Pauli::X, b)],
        GateKind::Y => vec![apply_letter(n, s[0], Pauli::Y, b)],
        GateKind::Z => vec![apply_letter(n, s[0], Pauli::Z, b)],
        GateKind::Phase(phi) => {
            vec![(
                b,
                if on(s[0]) {
                    Complex64::from_polar(1.0, phi)
                } else {
                    c(1.0, 0.0)
                },
            )]
        }
        GateKind::CZ => vec![(
            b,
            if on(s[0]) && on(s[1]) {
                c(-1.0, 0.0)
            } else {
                c(1.0, 0.0)
            },
        )],
        GateKind::CX => vec![(if on(s[0]) { b ^ bit(n, s[1]) } else { b }, c(1.0, 0.0))],
    }
}

pub fn gate_matrix(g: &GateOp, n: usize) -> M {
    let dim = 1 << n;
    let mut m = M::zeros(dim, dim);
    for b in 0..dim {
        for (i, a) in gate_column(g, n, b) {
            m[(i, b)] += a;
        }
    }
    m
}

pub fn circuit_matrix(circ: &Circuit) -> M {
    let dim = 1 << circ.n();
    circ.gates()
        .iter()
        .fold(M::identity(dim, dim), |u, g| gate_matrix(g, circ.n()) * u)
}

pub fn column(psi: &StateVector) -> M {
    M::from_column_slice(psi.amplitudes().len(), 1, psi.amplitudes())
}

pub fn expectation(psi: &M, obs: &M) -> Complex64 {
    (psi.adjoint() * obs * psi)[(0, 0)]
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Tr_{others}` by explicit index sums, keeping one qubit.
pub fn reduce_to_qubit(rho: &M, n: usize, q: usize) -> M {
    let mut out = M::zeros(2, 2);
    for i in 0..rho.nrows() {
        for j in 0..rho.ncols() {
            if i & !bit(n, q) == j & !bit(n, q) {
                let (a, b) = (
                    usize::from(i & bit(n, q) != 0),
                    usize::from(j & bit(n, q) != 0),
                );
                out[(a, b)] += rho[(i, j)];
            }
        }
    }
    out
}
