//! Factored density matrices `ρ = ∏_j ½(I + G_j)`.
//!
//! The generators `G_j` pairwise commute, so the ordinary product is
//! independent of factor order. Each gate conjugates every generator
//! forward (`G -> U G U†`); factors whose generator actually changed get a
//! provenance record naming the gate. Provenance is bookkeeping only and is
//! never consulted by the physics.
//!
//! Text dump, one line per factor after an optional header:
//!
//! ```text
//! # qubits 2 steps 2
//! 0: -1*XZ | provenance: #1 CZ 0 1; #2 PHASE 0 3.141592653589793
//! 1: 1*ZX | provenance: #1 CZ 0 1
//! ```

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::circuit::{Circuit, GateOp};
use crate::error::{ensure_same_n, Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, ZERO_TOL};
use crate::rules::{ConjugationRules, Direction};

/// One gate application that modified a factor.
#[derive(Clone, Debug, PartialEq)]
pub struct GateRecord {
    /// 1-based position of the gate in the state's history.
    pub seq: usize,
    pub gate: GateOp,
}

impl fmt::Display for GateRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {}", self.seq, self.gate)
    }
}

impl std::str::FromStr for GateRecord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix('#')
            .ok_or_else(|| Error::parse(format!("gate record `{s}` must start with `#`")))?;
        let (seq, gate) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(format!("gate record `{s}` has no gate")))?;
        let seq = seq
            .parse()
            .map_err(|_| Error::parse(format!("invalid sequence number in `{s}`")))?;
        Ok(Self {
            seq,
            gate: gate.parse()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactoredState {
    n: usize,
    generators: Vec<PauliSum>,
    provenance: Vec<Vec<GateRecord>>,
    steps: usize,
}

fn half_plus(g: &PauliSum) -> PauliSum {
    PauliSum::identity(g.n())
        .add(g)
        .expect("same register")
        .scale(Complex64::new(0.5, 0.0))
}

fn commutator_is_zero(a: &PauliSum, b: &PauliSum) -> Result<bool> {
    match (a.as_single_string(), b.as_single_string()) {
        (Some(p), Some(q)) => p.commutes(&q),
        _ => {
            // sums prune coefficients below ZERO_TOL
            Ok(a.multiply(b)?.sub(&b.multiply(a)?)?.is_zero())
        }
    }
}

/// Rank over GF(2) of the symplectic vectors of `strings`.
fn binary_rank(strings: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = strings
        .iter()
        .map(|p| {
            let w = p.word();
            (w.x as u128) | ((w.z as u128) << 64)
        })
        .collect();
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r] & mask != 0 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

fn generators_equal(a: &PauliSum, b: &PauliSum) -> bool {
    match (a.as_single_string(), b.as_single_string()) {
        (Some(p), Some(q)) => p == q,
        _ => a.approx_eq(b, ZERO_TOL),
    }
}

impl FactoredState {
    /// `|+⟩^⊗n`: generators `X_0, X_1, …`.
    pub fn init_plus(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("need at least one qubit".into()));
        }
        let gens = (0..n)
            .map(|q| PauliString::single(n, q, Pauli::X))
            .collect::<Result<Vec<_>>>()?;
        Self::init_from_strings(&gens)
    }

    /// Stabilizer-style start from `n` signed strings on `n` qubits that are
    /// Hermitian, pairwise commuting and independent.
    pub fn init_from_strings(gens: &[PauliString]) -> Result<Self> {
        let n = gens
            .first()
            .map(|g| g.n())
            .ok_or_else(|| Error::InvalidGenerators("no generators".into()))?;
        for g in gens {
            ensure_same_n(n, g.n())?;
            if !g.is_hermitian() {
                return Err(Error::InvalidGenerators(format!("{g} is not Hermitian")));
            }
        }
        if gens.len() != n {
            return Err(Error::InvalidGenerators(format!(
                "{} generators for {n} qubits",
                gens.len()
            )));
        }
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::InvalidGenerators(format!("{a} and {b} anticommute")));
                }
            }
        }
        if binary_rank(gens) != n {
            return Err(Error::InvalidGenerators(
                "generators are not independent".into(),
            ));
        }
        Ok(Self {
            n,
            generators: gens.iter().map(PauliSum::from).collect(),
            provenance: vec![Vec::new(); n],
            steps: 0,
        })
    }

    /// General generators (possibly sums); checks Hermiticity and pairwise
    /// commutation but not purity.
    pub fn from_generators(generators: Vec<PauliSum>) -> Result<Self> {
        let n = generators
            .first()
            .map(|g| g.n())
            .ok_or_else(|| Error::InvalidGenerators("no generators".into()))?;
        let count = generators.len();
        Self::with_provenance(n, generators, vec![Vec::new(); count], 0)
    }

    fn with_provenance(
        n: usize,
        generators: Vec<PauliSum>,
        provenance: Vec<Vec<GateRecord>>,
        steps: usize,
    ) -> Result<Self> {
        for g in &generators {
            ensure_same_n(n, g.n())?;
            if !g.is_hermitian() {
                return Err(Error::InvalidGenerators(format!("{g} is not Hermitian")));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !commutator_is_zero(a, b)? {
                    return Err(Error::InvalidGenerators(format!(
                        "{a} and {b} do not commute"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            generators,
            provenance,
            steps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliSum] {
        &self.generators
    }

    /// Generators as signed strings, if every one of them is exactly a string.
    pub fn generator_strings(&self) -> Option<Vec<PauliString>> {
        self.generators
            .iter()
            .map(|g| g.as_single_string())
            .collect()
    }

    pub fn provenance(&self) -> &[Vec<GateRecord>] {
        &self.provenance
    }

    /// Number of gates applied so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn evolve(&self, g: &GateOp) -> Result<FactoredState> {
        self.evolve_with(g, &ConjugationRules::standard())
    }

    /// `ρ -> U ρ U†`, applied factorwise as `G_j -> U G_j U†`.
    pub fn evolve_with(&self, g: &GateOp, rules: &ConjugationRules) -> Result<FactoredState> {
        g.check_fits(self.n)?;
        let seq = self.steps + 1;
        let mut generators = Vec::with_capacity(self.generators.len());
        let mut provenance = self.provenance.clone();
        for (j, gen) in self.generators.iter().enumerate() {
            let next = rules.conjugate_sum(gen, g, Direction::Schrodinger)?;
            if !generators_equal(gen, &next) {
                provenance[j].push(GateRecord {
                    seq,
                    gate: g.clone(),
                });
            }
            generators.push(next);
        }
        Ok(FactoredState {
            n: self.n,
            generators,
            provenance,
            steps: seq,
        })
    }

    pub fn evolve_circuit(&self, c: &Circuit, rules: &ConjugationRules) -> Result<FactoredState> {
        ensure_same_n(self.n, c.n())?;
        c.gates()
            .iter()
            .try_fold(self.clone(), |s, g| s.evolve_with(g, rules))
    }

    /// The ordinary product `∏_j ½(I + G_j)` in factor order.
    pub fn expand(&self) -> PauliSum {
        let order: Vec<usize> = (0..self.generators.len()).collect();
        self.expand_in_order(&order)
            .expect("canonical order is valid")
    }

    /// The same product taken in a caller-chosen factor order.
    pub fn expand_in_order(&self, order: &[usize]) -> Result<PauliSum> {
        let mut seen = BTreeSet::new();
        if order.len() != self.generators.len()
            || !order
                .iter()
                .all(|&j| j < self.generators.len() && seen.insert(j))
        {
            return Err(Error::InvalidArgument(
                "order must be a permutation of the factor indices".into(),
            ));
        }
        order
            .iter()
            .try_fold(PauliSum::identity(self.n), |acc, &j| {
                acc.multiply(&half_plus(&self.generators[j]))
            })
    }

    /// Expectation `tr(ρ O)`.
    pub fn expectation(&self, obs: &PauliSum) -> Result<Complex64> {
        self.expand().trace_product(obs)
    }

    /// Indices whose generator differs between `before` and `after`.
    pub fn changed_factors(
        before: &FactoredState,
        after: &FactoredState,
    ) -> Result<BTreeSet<usize>> {
        ensure_same_n(before.n, after.n)?;
        if before.generators.len() != after.generators.len() {
            return Err(Error::InvalidArgument(format!(
                "factor counts differ: {} vs {}",
                before.generators.len(),
                after.generators.len()
            )));
        }
        Ok(before
            .generators
            .iter()
            .zip(&after.generators)
            .enumerate()
            .filter(|(_, (a, b))| !generators_equal(a, b))
            .map(|(j, _)| j)
            .collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut generators = Vec::new();
        let mut provenance = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let tokens: Vec<&str> = comment.split_whitespace().collect();
                if let ["qubits", n, "steps", k] = tokens.as_slice() {
                    let parse = |v: &str| {
                        v.parse::<usize>().map_err(|_| {
                            Error::parse(format!("invalid header `{line}`")).at_line(lineno)
                        })
                    };
                    header = Some((parse(n)?, parse(k)?));
                }
                continue;
            }
            let parse_line = || -> Result<(PauliSum, Vec<GateRecord>)> {
                let (index, rest) = line
                    .split_once(':')
                    .ok_or_else(|| Error::parse("expected `j: <sum> | provenance: …`"))?;
                let index: usize = index
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("invalid factor index `{index}`")))?;
                if index != generators.len() {
                    return Err(Error::parse(format!(
                        "factor {index} out of order, expected {}",
                        generators.len()
                    )));
                }
                let (sum, prov) = rest
                    .split_once("| provenance:")
                    .ok_or_else(|| Error::parse("missing `| provenance:` section"))?;
                let records = match prov.trim() {
                    "-" => Vec::new(),
                    list => list
                        .split(';')
                        .map(str::parse)
                        .collect::<Result<Vec<GateRecord>>>()?,
                };
                Ok((sum.trim().parse()?, records))
            };
            let (sum, records) = parse_line().map_err(|e| e.at_line(lineno))?;
            generators.push(sum);
            provenance.push(records);
        }
        let n = match (header, generators.first()) {
            (_, Some(g)) => g.n(),
            (Some((n, _)), None) => n,
            (None, None) => return Err(Error::parse("no factors")),
        };
        let steps = header.map(|(_, k)| k).unwrap_or_else(|| {
            provenance
                .iter()
                .flatten()
                .map(|r: &GateRecord| r.seq)
                .max()
                .unwrap_or(0)
        });
        Self::with_provenance(n, generators, provenance, steps)
    }
}

impl fmt::Display for FactoredState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits {} steps {}", self.n, self.steps)?;
        for (j, (g, prov)) in self.generators.iter().zip(&self.provenance).enumerate() {
            write!(f, "{j}: {g} | provenance: ")?;
            if prov.is_empty() {
                write!(f, "-")?;
            } else {
                let list: Vec<String> = prov.iter().map(|r| r.to_string()).collect();
                write!(f, "{}", list.join("; "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::dense::{self, hermitian_eigenvalues, max_abs_diff};
    use std::f64::consts::PI;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn sum(s: &str) -> PauliSum {
        s.parse().unwrap()
    }

    fn entangled() -> FactoredState {
        FactoredState::init_plus(2)
            .unwrap()
            .evolve(&GateOp::cz(0, 1))
            .unwrap()
    }

    #[test]
    fn init_plus_generators() {
        let s = FactoredState::init_plus(2).unwrap();
        assert_eq!(s.generator_strings().unwrap(), vec![ps("XI"), ps("IX")]);
        assert!(s.provenance().iter().all(Vec::is_empty));
        assert_eq!(
            FactoredState::init_plus(1).unwrap().expand(),
            sum("0.5*I + 0.5*X")
        );
        assert!(FactoredState::init_plus(0).is_err());
    }

    #[test]
    fn init_plus_expands_to_plus_plus_projector() {
        let rho = dense::sum_to_dense(&FactoredState::init_plus(2).unwrap().expand()).unwrap();
        let plus = nalgebra::DMatrix::from_element(4, 1, Complex64::new(0.5, 0.0));
        assert!(max_abs_diff(&rho, &(&plus * plus.adjoint())) < 1e-15);
    }

    #[test]
    fn init_from_strings_validation() {
        let zz = FactoredState::init_from_strings(&[ps("ZI"), ps("IZ")]).unwrap();
        assert_eq!(zz.expand(), sum("0.25*II + 0.25*ZI + 0.25*IZ + 0.25*ZZ"));
        let direct = FactoredState::init_from_strings(&[ps("XZ"), ps("ZX")]).unwrap();
        assert_eq!(direct.expand(), entangled().expand());
        for bad in [
            vec![ps("XI"), ps("XI")],
            vec![ps("XI"), ps("ZI")],
            vec![ps("+iXI"), ps("IZ")],
            vec![ps("XI")],
            vec![ps("XX"), ps("ZZ"), ps("YY")],
            vec![ps("XX"), ps("-XX")],
        ] {
            assert!(
                matches!(
                    FactoredState::init_from_strings(&bad),
                    Err(Error::InvalidGenerators(_))
                ),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn cz_gives_cross_z_generators_exactly() {
        let s = entangled();
        assert_eq!(s.generator_strings().unwrap(), vec![ps("XZ"), ps("ZX")]);
        assert_eq!(
            FactoredState::changed_factors(&FactoredState::init_plus(2).unwrap(), &s).unwrap(),
            BTreeSet::from([0, 1])
        );
        assert_eq!(s.expand(), sum("0.25*II + 0.25*XZ + 0.25*ZX + 0.25*YY"));
    }

    #[test]
    fn phase_kick_flips_first_factor_only() {
        let before = entangled();
        let after = before.evolve(&GateOp::phase(0, PI)).unwrap();
        assert_eq!(
            after.generator_strings().unwrap(),
            vec![ps("-XZ"), ps("ZX")]
        );
        assert_eq!(
            FactoredState::changed_factors(&before, &after).unwrap(),
            BTreeSet::from([0])
        );
        assert_eq!(after.expand(), sum("0.25*II - 0.25*XZ + 0.25*ZX - 0.25*YY"));
        assert_eq!(after.provenance()[0].len(), 2);
        assert_eq!(after.provenance()[1].len(), 1);
    }

    #[test]
    fn identity_phase_changes_nothing() {
        let before = entangled();
        let after = before.evolve(&GateOp::phase(0, 0.0)).unwrap();
        assert!(FactoredState::changed_factors(&before, &after)
            .unwrap()
            .is_empty());
        assert_eq!(after.provenance(), before.provenance());
        assert_eq!(after.steps(), before.steps() + 1);
    }

    #[test]
    fn kick_on_either_side_gives_same_density_matrix() {
        let before = entangled();
        let first = before.evolve(&GateOp::phase(0, PI)).unwrap();
        let second = before.evolve(&GateOp::x(1)).unwrap();
        assert_eq!(first.expand(), second.expand());
        assert_eq!(
            FactoredState::changed_factors(&before, &first).unwrap(),
            FactoredState::changed_factors(&before, &second).unwrap(),
        );
        assert_ne!(first.provenance(), second.provenance());
    }

    #[test]
    fn expand_is_order_independent() {
        let s = FactoredState::init_plus(3)
            .unwrap()
            .evolve(&GateOp::cz(0, 1))
            .unwrap()
            .evolve(&GateOp::phase(1, 0.37))
            .unwrap()
            .evolve(&GateOp::cx(1, 2))
            .unwrap();
        let base = s.expand();
        for order in [[2, 1, 0], [1, 0, 2], [0, 2, 1]] {
            assert!(s.expand_in_order(&order).unwrap().approx_eq(&base, 1e-14));
        }
        assert!(s.expand_in_order(&[0, 0, 1]).is_err());
    }

    #[test]
    fn general_phase_keeps_a_valid_state() {
        let s = entangled().evolve(&GateOp::phase(1, 0.81)).unwrap();
        let rho = dense::sum_to_dense(&s.expand()).unwrap();
        assert!(dense::is_hermitian(&rho, 1e-12));
        assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let ev = hermitian_eigenvalues(&rho);
        assert!(ev.iter().all(|&e| e > -1e-10));
        assert!((ev[3] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dump_round_trip() {
        let s = entangled()
            .evolve(&GateOp::phase(0, PI))
            .unwrap()
            .evolve(&GateOp::phase(1, 0.3))
            .unwrap()
            .evolve(&GateOp::h(0))
            .unwrap();
        let text = s.to_string();
        assert!(text.contains("| provenance: #1 CZ 0 1;"), "{text}");
        assert_eq!(FactoredState::parse(&text).unwrap(), s);
        let fresh = FactoredState::init_plus(2).unwrap();
        assert_eq!(FactoredState::parse(&fresh.to_string()).unwrap(), fresh);
        assert!(FactoredState::parse("0: 1*XZ").is_err());
        assert!(FactoredState::parse("1: 1*X | provenance: -").is_err());
        assert!(FactoredState::parse("0: 1*XI | provenance: -\n1: 1*ZI | provenance: -").is_err());
        let err = FactoredState::parse("0: 1*X | provenance: #1 FOO 0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(1), .. }), "{err}");
    }

    #[test]
    fn gate_support_checked() {
        assert!(entangled().evolve(&GateOp::h(2)).is_err());
    }
}
