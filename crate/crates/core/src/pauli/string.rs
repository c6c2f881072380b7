use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{ensure_same_n, Error, Result};

/// Largest qubit count a [`PauliString`] can hold.
pub const MAX_QUBITS: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Unsigned tensor word over {I,X,Y,Z}, stored as symplectic bit masks.
///
/// Bit `q` of `x`/`z` describes qubit `q`; qubit 0 is the leftmost tensor
/// factor. `Y` is the pair (x=1, z=1) and denotes the Hermitian Y itself.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub(crate) x: u64,
    pub(crate) z: u64,
}

impl Word {
    pub const IDENTITY: Word = Word { x: 0, z: 0 };

    pub fn letter(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub(crate) fn set(&mut self, qubit: usize, letter: Pauli) {
        let (x, z) = letter.bits();
        let mask = 1u64 << qubit;
        self.x = (self.x & !mask) | if x { mask } else { 0 };
        self.z = (self.z & !mask) | if z { mask } else { 0 };
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub(crate) fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn support(&self) -> BTreeSet<usize> {
        bit_indices(self.support_mask()).collect()
    }

    /// Product of two words as operators: `self * other = i^k * word`.
    pub(crate) fn mul(&self, other: &Word) -> (Word, u8) {
        let mut exp: i32 = 0;
        let mut both = self.support_mask() & other.support_mask();
        while both != 0 {
            let q = both.trailing_zeros();
            both &= both - 1;
            let (x1, z1) = (self.x >> q & 1, self.z >> q & 1);
            let (x2, z2) = (other.x >> q & 1, other.z >> q & 1);
            exp += letter_phase(x1 as i32, z1 as i32, x2 as i32, z2 as i32);
        }
        let word = Word {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        (word, exp.rem_euclid(4) as u8)
    }

    /// True iff the two words commute as operators.
    pub(crate) fn commutes(&self, other: &Word) -> bool {
        let anti = (self.x & other.z) ^ (self.z & other.x);
        anti.count_ones().is_multiple_of(2)
    }

    fn key(&self, q: usize) -> u8 {
        (self.x >> q & 1) as u8 | ((self.z >> q & 1) as u8) << 1
    }
}

/// Lexicographic order on letters with qubit 0 most significant and
/// I < X < Y < Z.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        let differ = (self.x ^ other.x) | (self.z ^ other.z);
        if differ == 0 {
            return Ordering::Equal;
        }
        let q = differ.trailing_zeros() as usize;
        let rank = |k: u8| match k {
            0 => 0, // I
            1 => 1, // X
            3 => 2, // Y
            _ => 3, // Z
        };
        rank(self.key(q)).cmp(&rank(other.key(q)))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent of `i` picked up by the single-qubit product (x1,z1)·(x2,z2).
fn letter_phase(x1: i32, z1: i32, x2: i32, z2: i32) -> i32 {
    match (x1, z1) {
        (0, 0) => 0,
        (1, 1) => z2 - x2,
        (1, 0) => z2 * (2 * x2 - 1),
        _ => x2 * (1 - 2 * z2),
    }
}

pub(crate) fn bit_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let q = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(q)
        }
    })
}

/// A Pauli string `i^phase_exp · P_0 ⊗ … ⊗ P_{n-1}` with exact phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    word: Word,
    phase_exp: u8,
}

impl PauliString {
    pub fn new(letters: &[Pauli], phase_exp: u8) -> Result<Self> {
        let n = letters.len();
        check_n(n)?;
        let mut word = Word::IDENTITY;
        for (q, &p) in letters.iter().enumerate() {
            word.set(q, p);
        }
        Ok(Self {
            n,
            word,
            phase_exp: phase_exp % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_word(n, Word::IDENTITY, 0)
    }

    /// Single letter `p` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Result<Self> {
        check_n(n)?;
        if qubit >= n {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        let mut word = Word::IDENTITY;
        word.set(qubit, p);
        Ok(Self::from_word(n, word, 0))
    }

    pub(crate) fn from_word(n: usize, word: Word, phase_exp: u8) -> Self {
        debug_assert!(n <= MAX_QUBITS);
        debug_assert!(n == MAX_QUBITS || word.support_mask() >> n == 0);
        Self {
            n,
            word,
            phase_exp: phase_exp % 4,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> Word {
        self.word
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.word.letter(qubit)
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.word.letter(q)).collect()
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        Self::from_word(self.n, self.word, phase_exp)
    }

    pub fn negated(&self) -> Self {
        self.with_phase(self.phase_exp + 2)
    }

    pub fn adjoint(&self) -> Self {
        self.with_phase((4 - self.phase_exp) % 4)
    }

    /// Hermitian iff the overall phase is ±1.
    pub fn is_hermitian(&self) -> bool {
        self.phase_exp.is_multiple_of(2)
    }

    pub fn is_identity_word(&self) -> bool {
        self.word.is_identity()
    }

    pub fn weight(&self) -> usize {
        self.word.support_mask().count_ones() as usize
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.word.support()
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        ensure_same_n(self.n, other.n)?;
        let (word, k) = self.word.mul(&other.word);
        Ok(Self::from_word(
            self.n,
            word,
            self.phase_exp + other.phase_exp + k,
        ))
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        ensure_same_n(self.n, other.n)?;
        Ok(self.word.commutes(&other.word))
    }

    /// All `4^n` unsigned strings on `n` qubits in canonical order.
    pub fn enumerate(n: usize) -> Result<Vec<PauliString>> {
        if n > 12 {
            return Err(Error::TooManyQubits { n, cap: 12 });
        }
        let mut out: Vec<PauliString> = (0..1u64 << (2 * n))
            .map(|code| {
                let mut word = Word::IDENTITY;
                for q in 0..n {
                    let letter = Pauli::ALL[(code >> (2 * q) & 3) as usize];
                    word.set(q, letter);
                }
                Self::from_word(n, word, 0)
            })
            .collect();
        out.sort_by_key(|p| p.word);
        Ok(out)
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        Err(Error::TooManyQubits { n, cap: MAX_QUBITS })
    } else {
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.word.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        if rest.is_empty() {
            return Err(Error::parse(format!("empty Pauli word in `{s}`")));
        }
        let letters = rest
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::parse(format!("invalid Pauli letter `{c}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(&letters, phase)
    }
}
