//! Gates, circuits, and the line-oriented circuit text format.
//!
//! One gate per line: `NAME q...` with an extra angle for `PHASE`, e.g.
//!
//! ```text
//! # comments and blank lines are ignored
//! qubits 2
//! H 1
//! CZ 0 1
//! PHASE 0 3.141592653589793
//! PHASE 1 -pi/7
//! ```
//!
//! The optional `qubits N` directive must precede the first gate; without it
//! the register size is one more than the largest qubit index used. Angles
//! are radians, written as a decimal number or as `[-][k*]pi[/m]`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::dense::{self, DenseMatrix};
use crate::pauli::{PauliString, PauliSum, Word};

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    S,
    X,
    Y,
    Z,
    /// `diag(1, e^{iφ})`.
    Phase(f64),
    /// `diag(1, 1, 1, -1)`.
    CZ,
    /// Controlled-X with the first support qubit as control.
    CX,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::CZ | GateKind::CX => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Phase(_) => "PHASE",
            GateKind::CZ => "CZ",
            GateKind::CX => "CX",
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, GateKind::Phase(_))
    }
}

/// A named unitary acting on an ordered list of distinct qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    support: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, support: Vec<usize>) -> Result<Self> {
        if support.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} acts on {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                support.len()
            )));
        }
        if support.len() == 2 && support[0] == support[1] {
            return Err(Error::InvalidGate(format!(
                "{} needs distinct qubits, got {} twice",
                kind.name(),
                support[0]
            )));
        }
        if let GateKind::Phase(phi) = kind {
            if !phi.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite phase {phi}")));
            }
        }
        Ok(Self { kind, support })
    }

    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, vec![q]).unwrap()
    }

    pub fn s(q: usize) -> Self {
        Self::new(GateKind::S, vec![q]).unwrap()
    }

    pub fn x(q: usize) -> Self {
        Self::new(GateKind::X, vec![q]).unwrap()
    }

    pub fn y(q: usize) -> Self {
        Self::new(GateKind::Y, vec![q]).unwrap()
    }

    pub fn z(q: usize) -> Self {
        Self::new(GateKind::Z, vec![q]).unwrap()
    }

    /// Panics if `phi` is not finite.
    pub fn phase(q: usize, phi: f64) -> Self {
        Self::new(GateKind::Phase(phi), vec![q]).unwrap()
    }

    /// Panics if `a == b`.
    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::CZ, vec![a, b]).unwrap()
    }

    /// Panics if `control == target`.
    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::CX, vec![control, target]).unwrap()
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn check_fits(&self, n: usize) -> Result<()> {
        match self.support.iter().find(|&&q| q >= n) {
            Some(&qubit) => Err(Error::QubitOutOfRange { qubit, n }),
            None => Ok(()),
        }
    }

    /// Unitary on the support, with `support[0]` as the most significant
    /// local index.
    pub fn local_matrix(&self) -> DenseMatrix {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self.kind {
            GateKind::H => DenseMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
            GateKind::S => DenseMatrix::from_row_slice(2, 2, &[o, z, z, i]),
            GateKind::X => DenseMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            GateKind::Y => DenseMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            GateKind::Z => DenseMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            GateKind::Phase(phi) => {
                DenseMatrix::from_row_slice(2, 2, &[o, z, z, Complex64::from_polar(1.0, phi)])
            }
            GateKind::CZ => {
                let mut m = DenseMatrix::identity(4, 4);
                m[(3, 3)] = -o;
                m
            }
            GateKind::CX => {
                DenseMatrix::from_row_slice(4, 4, &[o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z])
            }
        }
    }

    /// The full `2^n` unitary, built independently of the state-vector
    /// kernels: the local matrix is expanded in the Pauli basis, embedded on
    /// the support and Kronecker-expanded.
    pub fn to_dense(&self, n: usize) -> Result<DenseMatrix> {
        self.check_fits(n)?;
        dense::sum_to_dense(&self.pauli_expansion(n)?)
    }

    /// The gate unitary as a Pauli sum on `n` qubits.
    pub fn pauli_expansion(&self, n: usize) -> Result<PauliSum> {
        self.check_fits(n)?;
        let local = dense::dense_to_sum(&self.local_matrix())?;
        let terms = local
            .terms()
            .map(|(p, c)| (embed(&p, &self.support, n), c))
            .collect::<Vec<_>>();
        PauliSum::from_terms(n, terms)
    }
}

/// Places a local string (letter `k` on qubit `support[k]`) into `n` qubits.
pub(crate) fn embed(local: &PauliString, support: &[usize], n: usize) -> PauliString {
    let mut word = Word::IDENTITY;
    for (k, &q) in support.iter().enumerate() {
        word.set(q, local.letter(k));
    }
    PauliString::from_word(n, word, local.phase_exp())
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for q in &self.support {
            write!(f, " {q}")?;
        }
        if let GateKind::Phase(phi) = self.kind {
            write!(f, " {phi}")?;
        }
        Ok(())
    }
}

/// Parses a decimal angle or `[-][k*]pi[/m]`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let bad = || Error::parse(format!("invalid angle `{s}`"));
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let (numer, denom) = match rest.split_once('/') {
        Some((a, b)) => (a, b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (rest, 1.0),
    };
    let factor = match numer.trim().split_once('*') {
        Some((k, p)) if p.trim() == "pi" => k.trim().parse::<f64>().map_err(|_| bad())?,
        None if numer.trim() == "pi" => 1.0,
        _ => return Err(bad()),
    };
    let v = sign * factor * PI / denom;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

impl std::str::FromStr for GateOp {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (name, args) = tokens
            .split_first()
            .ok_or_else(|| Error::parse("empty gate line"))?;
        let kind = match name.to_ascii_uppercase().as_str() {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "CZ" => GateKind::CZ,
            "CX" | "CNOT" => GateKind::CX,
            "PHASE" => {
                let angle = args
                    .get(1)
                    .ok_or_else(|| Error::parse("PHASE needs a qubit and an angle"))?;
                GateKind::Phase(parse_angle(angle)?)
            }
            other => return Err(Error::parse(format!("unknown gate `{other}`"))),
        };
        let expected = kind.arity() + usize::from(matches!(kind, GateKind::Phase(_)));
        if args.len() != expected {
            return Err(Error::parse(format!(
                "{} expects {expected} argument(s), got {}",
                kind.name(),
                args.len()
            )));
        }
        let support = args[..kind.arity()]
            .iter()
            .map(|a| {
                a.parse::<usize>()
                    .map_err(|_| Error::parse(format!("invalid qubit index `{a}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        GateOp::new(kind, support).map_err(|e| Error::parse(e.to_string()))
    }
}

/// Ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<GateOp>) -> Result<Self> {
        let mut c = Self::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: GateOp) -> Result<()> {
        g.check_fits(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn with(mut self, g: GateOp) -> Result<Self> {
        self.push(g)?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    /// `U = U_k ··· U_1` for gates applied in list order.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        dense::check_cap(self.n)?;
        let mut u = DenseMatrix::identity(1 << self.n, 1 << self.n);
        for g in &self.gates {
            u = g.to_dense(self.n)? * u;
        }
        Ok(u)
    }

    /// Parses circuit text; `n` overrides (and must agree with) any
    /// `qubits` directive.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            if tokens.next().map(|t| t.eq_ignore_ascii_case("qubits")) == Some(true) {
                if !gates.is_empty() || declared.is_some() {
                    return Err(
                        Error::parse("`qubits` must appear once, before any gate").at_line(lineno)
                    );
                }
                let value = tokens
                    .next()
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|_| tokens.next().is_none())
                    .ok_or_else(|| Error::parse("expected `qubits N`").at_line(lineno))?;
                declared = Some(value);
                continue;
            }
            let g: GateOp = line.parse().map_err(|e: Error| e.at_line(lineno))?;
            if let Some(limit) = declared.or(n) {
                if let Err(e) = g.check_fits(limit) {
                    return Err(Error::parse(e.to_string()).at_line(lineno));
                }
            }
            gates.push(g);
        }
        let inferred = gates
            .iter()
            .flat_map(|g| g.support().iter().copied())
            .max()
            .map(|q| q + 1)
            .unwrap_or(0);
        let size = match (declared, n) {
            (Some(d), Some(m)) if d != m => {
                return Err(Error::parse(format!(
                    "circuit declares {d} qubits but {m} were expected"
                )))
            }
            (Some(d), _) => d,
            (None, Some(m)) => m,
            (None, None) => inferred.max(1),
        };
        Circuit::from_gates(size, gates)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Circuit::parse(s, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_validation() {
        assert!(GateOp::new(GateKind::CZ, vec![1, 1]).is_err());
        assert!(GateOp::new(GateKind::H, vec![0, 1]).is_err());
        assert!(GateOp::new(GateKind::Phase(f64::NAN), vec![0]).is_err());
        assert!(GateOp::cz(0, 3).check_fits(3).is_err());
        assert!(Circuit::new(2).with(GateOp::h(2)).is_err());
    }

    #[test]
    fn local_matrices_are_unitary() {
        for g in [
            GateOp::h(0),
            GateOp::s(0),
            GateOp::x(0),
            GateOp::y(0),
            GateOp::z(0),
            GateOp::phase(0, 0.3),
            GateOp::cz(0, 1),
            GateOp::cx(0, 1),
        ] {
            let u = g.local_matrix();
            let id = DenseMatrix::identity(u.nrows(), u.nrows());
            assert!(dense::max_abs_diff(&(u.adjoint() * &u), &id) < 1e-14, "{g}");
        }
    }

    #[test]
    fn phase_pi_is_z() {
        let p = GateOp::phase(0, PI).to_dense(1).unwrap();
        let z = GateOp::z(0).to_dense(1).unwrap();
        assert!(dense::max_abs_diff(&p, &z) < 1e-15);
    }

    #[test]
    fn cx_control_is_first_support_qubit() {
        // CX 1 0 on |01> (qubit 1 set) flips qubit 0 -> |11>
        let u = GateOp::cx(1, 0).to_dense(2).unwrap();
        assert!((u[(3, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let u = GateOp::cx(0, 1).to_dense(2).unwrap();
        assert!((u[(3, 2)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dense_embedding_matches_kronecker() {
        let h = GateOp::h(1).to_dense(2).unwrap();
        let expected = dense::kron(&DenseMatrix::identity(2, 2), &GateOp::h(0).local_matrix());
        assert!(dense::max_abs_diff(&h, &expected) < 1e-15);
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("3.5").unwrap(), 3.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/7").unwrap(), -PI / 7.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn circuit_text_round_trip() {
        let text = "# entangle then kick\nH 1\nCZ 0 1\nPHASE 0 3.14159265\ncx 1 0\n";
        let c: Circuit = text.parse().unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.len(), 4);
        assert_eq!(c.gates()[2].kind(), GateKind::Phase(3.14159265));
        assert_eq!(c.to_string().parse::<Circuit>().unwrap(), c);
        let empty: Circuit = "qubits 3\n".parse().unwrap();
        assert_eq!((empty.n(), empty.len()), (3, 0));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = "H 0\nCZ 0\n".parse::<Circuit>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(2), .. }), "{err}");
        let err = "H 0\n\nFOO 1".parse::<Circuit>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(3), .. }), "{err}");
        let err = "qubits 1\nCZ 0 1".parse::<Circuit>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(2), .. }), "{err}");
        let err = "PHASE 0 nope".parse::<Circuit>().unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(Circuit::parse("qubits 2\nH 0", Some(3)).is_err());
    }
}
