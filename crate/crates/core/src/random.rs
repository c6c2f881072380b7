//! Seeded generators for circuits, observables and initial states.

use std::f64::consts::TAU;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::circuit::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::initial::{InitialState, LocalState};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::rules::ConjugationRules;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Choice {
    H,
    S,
    Cz,
    Cx,
    Phase,
}

/// A circuit of `depth` gates drawn uniformly from `{H, S, CZ, CX, PHASE(φ)}`
/// with `φ` uniform in `[0, 2π)`. Two-qubit gates are skipped when `n = 1`.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, depth: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "random circuit needs at least one qubit".into(),
        ));
    }
    let choices: &[Choice] = if n == 1 {
        &[Choice::H, Choice::S, Choice::Phase]
    } else {
        &[Choice::H, Choice::S, Choice::Cz, Choice::Cx, Choice::Phase]
    };
    let mut c = Circuit::new(n);
    for _ in 0..depth {
        let q = rng.random_range(0..n);
        let gate = match choices.choose(rng).expect("nonempty") {
            Choice::H => GateOp::h(q),
            Choice::S => GateOp::s(q),
            Choice::Phase => GateOp::phase(q, rng.random_range(0.0..TAU)),
            two => {
                let mut t = rng.random_range(0..n - 1);
                if t >= q {
                    t += 1;
                }
                if *two == Choice::Cz {
                    GateOp::cz(q, t)
                } else {
                    GateOp::cx(q, t)
                }
            }
        };
        c.push(gate)?;
    }
    Ok(c)
}

/// A uniformly random non-identity Hermitian Pauli string with random sign.
pub fn random_pauli<R: Rng>(rng: &mut R, n: usize) -> Result<PauliString> {
    loop {
        let letters: Vec<Pauli> = (0..n)
            .map(|_| *Pauli::ALL.choose(rng).expect("nonempty"))
            .collect();
        if letters.iter().all(|&p| p == Pauli::I) {
            continue;
        }
        let sign = if rng.random_bool(0.5) { 2 } else { 0 };
        return PauliString::new(&letters, sign);
    }
}

/// A random real combination of `terms` Pauli strings, coefficients in `[-1, 1]`.
pub fn random_observable<R: Rng>(rng: &mut R, n: usize, terms: usize) -> Result<PauliSum> {
    let pairs = (0..terms)
        .map(|_| Ok((random_pauli(rng, n)?, rng.random_range(-1.0..1.0))))
        .collect::<Result<Vec<_>>>()?;
    PauliSum::from_real_terms(n, &pairs)
}

pub fn random_product_state<R: Rng>(rng: &mut R, n: usize) -> InitialState {
    InitialState::Product(
        (0..n)
            .map(|_| *LocalState::ALL.choose(rng).expect("nonempty"))
            .collect(),
    )
}

/// A stabilizer state reached from `|0…0⟩` by `depth` random Clifford gates.
pub fn random_stabilizer_state<R: Rng>(
    rng: &mut R,
    n: usize,
    depth: usize,
) -> Result<InitialState> {
    let mut state = InitialState::Product(vec![LocalState::Zero; n]).factored()?;
    let rules = ConjugationRules::standard();
    for _ in 0..depth {
        let q = rng.random_range(0..n);
        let g = match rng.random_range(0..if n > 1 { 4 } else { 2 }) {
            0 => GateOp::h(q),
            1 => GateOp::s(q),
            k => {
                let t = (q + 1 + rng.random_range(0..n - 1)) % n;
                if k == 2 {
                    GateOp::cz(q, t)
                } else {
                    GateOp::cx(q, t)
                }
            }
        };
        state = state.evolve_with(&g, &rules)?;
    }
    Ok(InitialState::Stabilizer(
        state
            .generator_strings()
            .expect("Clifford evolution keeps single strings"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_output_is_reproducible() {
        let a = random_circuit(&mut ChaCha8Rng::seed_from_u64(7), 4, 20).unwrap();
        let b = random_circuit(&mut ChaCha8Rng::seed_from_u64(7), 4, 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn single_qubit_circuits_have_no_two_qubit_gates() {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(1), 1, 50).unwrap();
        assert!(c.gates().iter().all(|g| g.support().len() == 1));
    }

    #[test]
    fn random_strings_are_hermitian_and_nontrivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random_pauli(&mut rng, 3).unwrap();
            assert!(p.is_hermitian() && !p.is_identity_word());
        }
        assert!(random_observable(&mut rng, 3, 4).unwrap().is_hermitian());
        for n in 1..=4 {
            let s = random_stabilizer_state(&mut rng, n, 12).unwrap();
            assert_eq!(s.n(), n);
            assert!(s.state_vector().is_ok());
        }
    }
}
