use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;

use super::string::{bit_indices, check_n, PauliString, Word};
use crate::error::{ensure_same_n, Error, Result};

/// Coefficients with magnitude below this are dropped from a [`PauliSum`].
pub const ZERO_TOL: f64 = 1e-12;

/// Complex linear combination of unsigned Pauli words on `n` qubits.
///
/// Phases of signed strings are folded into the coefficients, so each word
/// appears at most once and every stored coefficient has magnitude of at
/// least [`ZERO_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<Word, Complex64>,
}

pub(crate) fn phase_to_complex(phase_exp: u8) -> Complex64 {
    match phase_exp % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn complex_to_phase(c: Complex64) -> Option<u8> {
    match (c.re, c.im) {
        (re, im) if re == 1.0 && im == 0.0 => Some(0),
        (re, im) if re == 0.0 && im == 1.0 => Some(1),
        (re, im) if re == -1.0 && im == 0.0 => Some(2),
        (re, im) if re == 0.0 && im == -1.0 => Some(3),
        _ => None,
    }
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from(PauliString::identity(n))
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        check_n(n)?;
        let mut out = Self::zero(n);
        for (p, c) in terms {
            ensure_same_n(n, p.n())?;
            out.accumulate(p.word(), c * phase_to_complex(p.phase_exp()));
        }
        out.prune();
        Ok(out)
    }

    /// Real-coefficient sum, convenient for observables.
    pub fn from_real_terms(n: usize, terms: &[(PauliString, f64)]) -> Result<Self> {
        Self::from_terms(
            n,
            terms
                .iter()
                .map(|(p, c)| (p.clone(), Complex64::new(*c, 0.0))),
        )
    }

    pub(crate) fn from_word_map(n: usize, map: HashMap<Word, Complex64>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() >= ZERO_TOL)
            .collect();
        Self { n, terms }
    }

    fn accumulate(&mut self, word: Word, c: Complex64) {
        *self.terms.entry(word).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= ZERO_TOL);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`PauliSum::is_zero`]: a sum with no terms.
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Terms in canonical word order, each as an unsigned string.
    pub fn terms(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(w, c)| (PauliString::from_word(self.n, *w, 0), *c))
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    /// Coefficient of the unsigned word of `p` (the phase of `p` is ignored).
    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms
            .get(&p.word())
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        ensure_same_n(self.n, other.n)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(*w, *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> PauliSum {
        let mut out = Self {
            n: self.n,
            terms: self.terms.iter().map(|(w, v)| (*w, v * c)).collect(),
        };
        out.prune();
        out
    }

    /// Ordinary (operator) product, distributed over terms.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        ensure_same_n(self.n, other.n)?;
        let mut acc: HashMap<Word, Complex64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (w, k) = wa.mul(wb);
                *acc.entry(w).or_insert(Complex64::new(0.0, 0.0)) += ca * cb * phase_to_complex(k);
            }
        }
        Ok(Self::from_word_map(self.n, acc))
    }

    pub fn adjoint(&self) -> PauliSum {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (*w, c.conj())).collect(),
        }
    }

    /// Every word is Hermitian, so the sum is Hermitian iff its coefficients
    /// are real up to the pruning tolerance.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < ZERO_TOL)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        let mask = self
            .terms
            .keys()
            .fold(0u64, |acc, w| acc | w.support_mask());
        bit_indices(mask).collect()
    }

    /// The sum as a single signed string, when it is one exactly: one term
    /// whose coefficient is exactly one of ±1, ±i.
    pub fn as_single_string(&self) -> Option<PauliString> {
        if self.terms.len() != 1 {
            return None;
        }
        let (w, c) = self.terms.iter().next()?;
        complex_to_phase(*c).map(|k| PauliString::from_word(self.n, *w, k))
    }

    /// Largest coefficientwise difference between two sums.
    pub fn max_abs_diff(&self, other: &PauliSum) -> Result<f64> {
        ensure_same_n(self.n, other.n)?;
        let zero = Complex64::new(0.0, 0.0);
        let words: BTreeSet<&Word> = self.terms.keys().chain(other.terms.keys()).collect();
        Ok(words
            .into_iter()
            .map(|w| {
                let a = self.terms.get(w).copied().unwrap_or(zero);
                let b = other.terms.get(w).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        self.max_abs_diff(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// `tr(self · other)` computed from coefficients: distinct words are
    /// trace-orthogonal and every word squares to the identity.
    pub fn trace_product(&self, other: &PauliSum) -> Result<Complex64> {
        ensure_same_n(self.n, other.n)?;
        let dim = (self.n as f64).exp2();
        let s: Complex64 = self
            .terms
            .iter()
            .filter_map(|(w, a)| other.terms.get(w).map(|b| a * b))
            .sum();
        Ok(s * dim)
    }

    pub fn trace(&self) -> Complex64 {
        let dim = (self.n as f64).exp2();
        self.terms
            .get(&Word::IDENTITY)
            .map(|c| c * dim)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

impl From<PauliString> for PauliSum {
    fn from(p: PauliString) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p.word(), phase_to_complex(p.phase_exp()));
        Self { n: p.n(), terms }
    }
}

impl From<&PauliString> for PauliSum {
    fn from(p: &PauliString) -> Self {
        Self::from(p.clone())
    }
}

// Text form: `coeff*WORD` terms joined by ` + ` / ` - `.

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0*{}", PauliString::identity(self.n));
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = PauliString::from_word(self.n, *w, 0);
            let (negative, body) = if c.im == 0.0 {
                (c.re < 0.0, fmt_real(c.re.abs()))
            } else if c.re == 0.0 {
                (c.im < 0.0, format!("{}i", fmt_real(c.im.abs())))
            } else {
                let sign = if c.im < 0.0 { '-' } else { '+' };
                (
                    false,
                    format!("({}{}{}i)", fmt_real(c.re), sign, fmt_real(c.im.abs())),
                )
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{body}*{word}")?;
        }
        Ok(())
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(1.0);
    }
    t.parse::<f64>()
        .map_err(|_| Error::parse(format!("invalid number `{t}`")))
}

/// Parses `a`, `bi`, `i`, or `(a±bi)`.
fn parse_coefficient(s: &str) -> Result<Complex64> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let inner = inner.trim();
        let bytes = inner.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| {
                (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
            })
            .ok_or_else(|| Error::parse(format!("invalid complex coefficient `{s}`")))?;
        let re = parse_real(&inner[..split])?;
        let im_part = inner[split..]
            .strip_suffix('i')
            .ok_or_else(|| Error::parse(format!("invalid complex coefficient `{s}`")))?;
        let im = match im_part {
            "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        return Ok(Complex64::new(re, im));
    }
    if let Some(im) = s.strip_suffix('i') {
        return Ok(Complex64::new(0.0, parse_real(im)?));
    }
    Ok(Complex64::new(parse_real(s)?, 0.0))
}

/// Splits at top-level `+`/`-` separators, keeping each sign with its term.
fn split_terms(s: &str) -> Result<Vec<(f64, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1.0;
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        let exponent_sign = matches!(prev, Some('e') | Some('E'));
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(format!("unbalanced `)` in `{s}`")));
                }
            }
            '+' | '-' if depth == 0 && !exponent_sign => {
                if !current.trim().is_empty() {
                    out.push((sign, std::mem::take(&mut current)));
                    sign = 1.0;
                }
                if ch == '-' {
                    sign = -sign;
                }
                prev = Some(ch);
                continue;
            }
            _ => {}
        }
        current.push(ch);
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if depth != 0 {
        return Err(Error::parse(format!("unbalanced `(` in `{s}`")));
    }
    if current.trim().is_empty() {
        return Err(Error::parse(format!("dangling sign or empty sum in `{s}`")));
    }
    out.push((sign, current));
    Ok(out)
}

impl std::str::FromStr for PauliSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (sign, raw) in split_terms(s)? {
            let raw = raw.trim();
            let (coeff, word) = match raw.rfind('*') {
                Some(k) => (parse_coefficient(&raw[..k])?, raw[k + 1..].trim()),
                None => (Complex64::new(1.0, 0.0), raw),
            };
            let p: PauliString = word.parse()?;
            match n {
                None => n = Some(p.n()),
                Some(m) if m != p.n() => {
                    return Err(Error::parse(format!(
                        "terms of different length ({m} and {}) in `{s}`",
                        p.n()
                    )))
                }
                _ => {}
            }
            terms.push((p, coeff * sign));
        }
        let n = n.ok_or_else(|| Error::parse("empty sum"))?;
        PauliSum::from_terms(n, terms)
    }
}
