//! Initial-state specifications shared by every backend.
//!
//! Text forms:
//! - a product of single-qubit states, one character per qubit from
//!   `0`, `1`, `+`, `-` (qubit 0 first), e.g. `++` or `0+`;
//! - `bell` for `(|00⟩ + |11⟩)/√2`;
//! - `stab:G0,G1,…` for the stabilizer state of `n` signed strings, e.g.
//!   `stab:XZ,ZX`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::product_form::FactoredState;
use crate::schrodinger::StateVector;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LocalState {
    Zero,
    One,
    Plus,
    Minus,
}

impl LocalState {
    pub const ALL: [LocalState; 4] = [
        LocalState::Zero,
        LocalState::One,
        LocalState::Plus,
        LocalState::Minus,
    ];

    pub fn as_char(self) -> char {
        match self {
            LocalState::Zero => '0',
            LocalState::One => '1',
            LocalState::Plus => '+',
            LocalState::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(LocalState::Zero),
            '1' => Some(LocalState::One),
            '+' => Some(LocalState::Plus),
            '-' => Some(LocalState::Minus),
            _ => None,
        }
    }

    /// The signed single-qubit stabilizer of this state.
    fn stabilizer(self) -> (Pauli, bool) {
        match self {
            LocalState::Zero => (Pauli::Z, false),
            LocalState::One => (Pauli::Z, true),
            LocalState::Plus => (Pauli::X, false),
            LocalState::Minus => (Pauli::X, true),
        }
    }

    fn amplitudes(self) -> [f64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            LocalState::Zero => [1.0, 0.0],
            LocalState::One => [0.0, 1.0],
            LocalState::Plus => [h, h],
            LocalState::Minus => [h, -h],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Product(Vec<LocalState>),
    Stabilizer(Vec<PauliString>),
}

impl InitialState {
    pub fn plus(n: usize) -> Self {
        InitialState::Product(vec![LocalState::Plus; n])
    }

    pub fn bell() -> Self {
        InitialState::Stabilizer(vec![
            "XX".parse().expect("valid"),
            "ZZ".parse().expect("valid"),
        ])
    }

    pub fn n(&self) -> usize {
        match self {
            InitialState::Product(locals) => locals.len(),
            InitialState::Stabilizer(gens) => gens.len(),
        }
    }

    pub fn generators(&self) -> Result<Vec<PauliString>> {
        match self {
            InitialState::Product(locals) => {
                let n = locals.len();
                locals
                    .iter()
                    .enumerate()
                    .map(|(q, l)| {
                        let (letter, negative) = l.stabilizer();
                        let p = PauliString::single(n, q, letter)?;
                        Ok(if negative { p.negated() } else { p })
                    })
                    .collect()
            }
            InitialState::Stabilizer(gens) => Ok(gens.clone()),
        }
    }

    pub fn factored(&self) -> Result<FactoredState> {
        if self.n() == 0 {
            return Err(Error::InvalidArgument("empty initial state".into()));
        }
        FactoredState::init_from_strings(&self.generators()?)
    }

    pub fn state_vector(&self) -> Result<StateVector> {
        match self {
            InitialState::Product(locals) => {
                if locals.is_empty() {
                    return Err(Error::InvalidArgument("empty initial state".into()));
                }
                let mut amps = vec![Complex64::new(1.0, 0.0)];
                for l in locals {
                    let [a, b] = l.amplitudes();
                    amps = amps.iter().flat_map(|x| [x * a, x * b]).collect();
                }
                StateVector::normalized(amps)
            }
            InitialState::Stabilizer(_) => {
                let projector = self.factored()?.expand();
                stabilizer_vector(&projector)
            }
        }
    }
}

/// A unit vector in the range of a rank-one projector, found by projecting
/// the computational basis state with the largest weight.
fn stabilizer_vector(projector: &PauliSum) -> Result<StateVector> {
    let n = projector.n();
    let dim = 1usize << n;
    for b in 0..dim {
        let image = StateVector::basis(n, b)?.apply_sum(projector)?;
        let weight: f64 = image.iter().map(|a| a.norm_sqr()).sum();
        // some basis state carries at least 1/dim of the weight
        if weight >= 0.5 / dim as f64 {
            return StateVector::normalized(image);
        }
    }
    Err(Error::InvalidGenerators(
        "generators do not define a state".into(),
    ))
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Product(locals) => {
                for l in locals {
                    write!(f, "{}", l.as_char())?;
                }
                Ok(())
            }
            InitialState::Stabilizer(gens) => {
                let list: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "stab:{}", list.join(","))
            }
        }
    }
}

impl std::str::FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("bell") {
            return Ok(InitialState::bell());
        }
        if let Some(list) = s.strip_prefix("stab:") {
            let gens = list
                .split(',')
                .map(|g| g.trim().parse::<PauliString>())
                .collect::<Result<Vec<_>>>()?;
            let state = InitialState::Stabilizer(gens);
            // validate eagerly so bad input fails at parse time
            state
                .factored()
                .map_err(|e| Error::parse(format!("invalid stabilizer state `{s}`: {e}")))?;
            return Ok(state);
        }
        if s.is_empty() {
            return Err(Error::parse("empty initial state"));
        }
        s.chars()
            .map(|c| {
                LocalState::from_char(c).ok_or_else(|| {
                    Error::parse(format!(
                        "invalid initial state `{s}`: expected 0/1/+/- per qubit, `bell` or `stab:…`"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(InitialState::Product)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_states() {
        let s: InitialState = "0+".parse().unwrap();
        assert_eq!(s.n(), 2);
        let v = s.state_vector().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(v.amplitudes(), &[c(h), c(h), c(0.0), c(0.0)]);
        let gens: Vec<String> = s
            .generators()
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(gens, ["ZI", "IX"]);
        let m: InitialState = "1-".parse().unwrap();
        let gens: Vec<String> = m
            .generators()
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(gens, ["-ZI", "-IX"]);
    }

    #[test]
    fn stabilizer_vectors_are_stabilized() {
        for text in ["bell", "stab:XZ,ZX", "stab:-XX,ZZ", "stab:YY,XX", "0-1+"] {
            let s: InitialState = text.parse().unwrap();
            let v = s.state_vector().unwrap();
            for g in s.generators().unwrap() {
                let e = v.expectation(&PauliSum::from(&g)).unwrap();
                assert!((e - c(1.0)).norm() < 1e-12, "{text}: {g}");
            }
            assert_eq!(s.to_string().parse::<InitialState>().unwrap(), s);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "0x", "stab:XX,XX", "stab:XI,ZI", "stab:XQ"] {
            assert!(bad.parse::<InitialState>().is_err(), "{bad}");
        }
    }
}
