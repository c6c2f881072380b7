//! Conjugation of Pauli operators by gates.
//!
//! Clifford gates are described by a table giving the images of the local
//! `X_k` and `Z_k` generators under `O -> U† O U`. The images under the
//! opposite direction `O -> U O U†` are derived from that table by
//! inversion, so the two directions can never disagree with each other.
//! `PHASE(φ)` is handled by the rotation rule
//! `X -> cos φ X - sin φ Y`, `Y -> sin φ X + cos φ Y`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::circuit::{GateKind, GateOp};
use crate::error::{Error, Result};
use crate::pauli::{phase_to_complex, Pauli, PauliString, PauliSum, Word};

/// Which way an operator is conjugated.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `O -> U† O U`: observables in the Heisenberg picture.
    Heisenberg,
    /// `ρ -> U ρ U†`: states (and their generators) in the Schrödinger picture.
    Schrodinger,
}

/// A deliberate rule corruption, for checking that the cross-backend checks
/// catch broken conjugation tables.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flips the sign of the CZ image `X⊗I -> X⊗Z`.
    CzSign,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::CzSign => f.write_str("cz-sign"),
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cz-sign" => Ok(Fault::CzSign),
            other => Err(Error::InvalidArgument(format!("unknown fault `{other}`"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
enum Clifford {
    H,
    S,
    X,
    Y,
    Z,
    CZ,
    CX,
}

impl Clifford {
    const ALL: [Clifford; 7] = [
        Clifford::H,
        Clifford::S,
        Clifford::X,
        Clifford::Y,
        Clifford::Z,
        Clifford::CZ,
        Clifford::CX,
    ];

    fn of(kind: GateKind) -> Option<Clifford> {
        match kind {
            GateKind::H => Some(Clifford::H),
            GateKind::S => Some(Clifford::S),
            GateKind::X => Some(Clifford::X),
            GateKind::Y => Some(Clifford::Y),
            GateKind::Z => Some(Clifford::Z),
            GateKind::CZ => Some(Clifford::CZ),
            GateKind::CX => Some(Clifford::CX),
            GateKind::Phase(_) => None,
        }
    }

    /// Images of (X_k, Z_k) under U† · U, as local signed strings.
    fn heisenberg_images(self) -> [(&'static str, &'static str); 2] {
        match self {
            Clifford::H => [("Z", "X"), ("", "")],
            Clifford::S => [("-Y", "Z"), ("", "")],
            Clifford::X => [("X", "-Z"), ("", "")],
            Clifford::Y => [("-X", "-Z"), ("", "")],
            Clifford::Z => [("-X", "Z"), ("", "")],
            Clifford::CZ => [("XZ", "ZI"), ("ZX", "IZ")],
            Clifford::CX => [("XX", "ZI"), ("IX", "ZZ")],
        }
    }

    fn arity(self) -> usize {
        match self {
            Clifford::CZ | Clifford::CX => 2,
            _ => 1,
        }
    }
}

/// Images of the local generators: `x[k]`, `z[k]` for local qubit `k`.
#[derive(Clone, Debug)]
struct LocalImages {
    x: Vec<PauliString>,
    z: Vec<PauliString>,
}

impl LocalImages {
    /// Image of a local string under the map these generator images define.
    fn apply(&self, local: &PauliString) -> PauliString {
        let k = local.n();
        let mut acc = PauliString::identity(k).with_phase(local.phase_exp());
        for q in 0..k {
            let piece = match local.letter(q) {
                Pauli::I => continue,
                Pauli::X => self.x[q].clone(),
                Pauli::Z => self.z[q].clone(),
                // Y = i X Z
                Pauli::Y => {
                    let xz = self.x[q].multiply(&self.z[q]).expect("same local size");
                    xz.with_phase(xz.phase_exp() + 1)
                }
            };
            acc = acc.multiply(&piece).expect("same local size");
        }
        acc
    }

    /// The inverse map, found by searching the local string group.
    fn inverse(&self) -> LocalImages {
        let k = self.x.len();
        let candidates = PauliString::enumerate(k).expect("local register is tiny");
        let preimage = |target: &PauliString| -> PauliString {
            for q in &candidates {
                let image = self.apply(q);
                if image.word() == target.word() {
                    // U† q U = i^a target  =>  U† (i^-a q) U = target
                    let a = (4 + image.phase_exp() - target.phase_exp()) % 4;
                    return q.with_phase((4 - a) % 4);
                }
            }
            unreachable!("Clifford table is not invertible")
        };
        let gens = |letter: Pauli| -> Vec<PauliString> {
            (0..k)
                .map(|q| preimage(&PauliString::single(k, q, letter).unwrap()))
                .collect()
        };
        LocalImages {
            x: gens(Pauli::X),
            z: gens(Pauli::Z),
        }
    }
}

/// Conjugation rule set shared by the Heisenberg and factored backends.
#[derive(Clone, Debug)]
pub struct ConjugationRules {
    heisenberg: HashMap<Clifford, LocalImages>,
    schrodinger: HashMap<Clifford, LocalImages>,
    fault: Option<Fault>,
}

impl Default for ConjugationRules {
    fn default() -> Self {
        Self::standard()
    }
}

impl ConjugationRules {
    pub fn standard() -> Self {
        Self::build(None)
    }

    pub fn with_fault(fault: Fault) -> Self {
        Self::build(Some(fault))
    }

    fn build(fault: Option<Fault>) -> Self {
        let mut heisenberg = HashMap::new();
        for gate in Clifford::ALL {
            let k = gate.arity();
            let table = gate.heisenberg_images();
            let parse = |s: &str| -> PauliString { s.parse().expect("valid table entry") };
            let mut images = LocalImages {
                x: (0..k).map(|q| parse(table[q].0)).collect(),
                z: (0..k).map(|q| parse(table[q].1)).collect(),
            };
            if fault == Some(Fault::CzSign) && gate == Clifford::CZ {
                images.x[0] = images.x[0].negated();
            }
            heisenberg.insert(gate, images);
        }
        let schrodinger = heisenberg
            .iter()
            .map(|(g, images)| (*g, images.inverse()))
            .collect();
        Self {
            heisenberg,
            schrodinger,
            fault,
        }
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    /// Conjugates a single string by a Clifford gate; `None` for `PHASE`.
    pub fn conjugate_clifford(
        &self,
        p: &PauliString,
        g: &GateOp,
        dir: Direction,
    ) -> Result<Option<PauliString>> {
        g.check_fits(p.n())?;
        let Some(gate) = Clifford::of(g.kind()) else {
            return Ok(None);
        };
        let table = match dir {
            Direction::Heisenberg => &self.heisenberg[&gate],
            Direction::Schrodinger => &self.schrodinger[&gate],
        };
        let support = g.support();
        let local_letters: Vec<Pauli> = support.iter().map(|&q| p.letter(q)).collect();
        let local = PauliString::new(&local_letters, 0)?;
        let image = table.apply(&local);
        let mut word = p.word();
        for (k, &q) in support.iter().enumerate() {
            word.set(q, image.letter(k));
        }
        Ok(Some(PauliString::from_word(
            p.n(),
            word,
            p.phase_exp() + image.phase_exp(),
        )))
    }

    pub fn conjugate_string(
        &self,
        p: &PauliString,
        g: &GateOp,
        dir: Direction,
    ) -> Result<PauliSum> {
        if let Some(image) = self.conjugate_clifford(p, g, dir)? {
            return Ok(image.into());
        }
        let GateKind::Phase(phi) = g.kind() else {
            unreachable!("non-Clifford gates are phase gates")
        };
        let angle = match dir {
            Direction::Heisenberg => phi,
            Direction::Schrodinger => -phi,
        };
        let mut acc = HashMap::new();
        rotate_into(
            &mut acc,
            &p.word(),
            phase_to_complex(p.phase_exp()),
            g.support()[0],
            angle,
        );
        Ok(PauliSum::from_word_map(p.n(), acc))
    }

    pub fn conjugate_sum(&self, s: &PauliSum, g: &GateOp, dir: Direction) -> Result<PauliSum> {
        g.check_fits(s.n())?;
        let mut acc: HashMap<Word, Complex64> = HashMap::with_capacity(2 * s.len());
        match g.kind() {
            GateKind::Phase(phi) => {
                let angle = match dir {
                    Direction::Heisenberg => phi,
                    Direction::Schrodinger => -phi,
                };
                for (w, c) in s.raw_terms() {
                    rotate_into(&mut acc, w, *c, g.support()[0], angle);
                }
            }
            _ => {
                for (w, c) in s.raw_terms() {
                    let p = PauliString::from_word(s.n(), *w, 0);
                    let image = self.conjugate_clifford(&p, g, dir)?.expect("Clifford gate");
                    *acc.entry(image.word()).or_insert(Complex64::new(0.0, 0.0)) +=
                        c * phase_to_complex(image.phase_exp());
                }
            }
        }
        Ok(PauliSum::from_word_map(s.n(), acc))
    }

    /// Conjugates by every gate of a list in turn.
    pub fn conjugate_through(
        &self,
        s: &PauliSum,
        gates: &[GateOp],
        dir: Direction,
    ) -> Result<PauliSum> {
        gates
            .iter()
            .try_fold(s.clone(), |acc, g| self.conjugate_sum(&acc, g, dir))
    }
}

/// Adds `c · U†(word)U` for `U = PHASE(angle)` on `qubit` into `acc`.
fn rotate_into(
    acc: &mut HashMap<Word, Complex64>,
    word: &Word,
    c: Complex64,
    qubit: usize,
    angle: f64,
) {
    let zero = Complex64::new(0.0, 0.0);
    let (sin, cos) = angle.sin_cos();
    let mut with = |letter: Pauli, factor: f64| {
        if factor != 0.0 {
            let mut w = *word;
            w.set(qubit, letter);
            *acc.entry(w).or_insert(zero) += c * factor;
        }
    };
    match word.letter(qubit) {
        Pauli::I | Pauli::Z => with(word.letter(qubit), 1.0),
        Pauli::X => {
            with(Pauli::X, cos);
            with(Pauli::Y, -sin);
        }
        Pauli::Y => {
            with(Pauli::X, sin);
            with(Pauli::Y, cos);
        }
    }
}
