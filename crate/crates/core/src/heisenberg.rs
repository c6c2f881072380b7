//! Observable evolution `O -> U† O U` against a state that never moves.
//!
//! For a circuit applying `U_1, …, U_k` in order, `U = U_k ··· U_1` and
//! `U† O U = U_1† ··· U_k† O U_k ··· U_1`, so the innermost conjugation is
//! by the *last* gate: the list is walked backwards.
//!
//! Frames dump as one `name = <sum>` line per observable.

use std::fmt;

use num_complex::Complex64;

use crate::circuit::{Circuit, GateOp};
use crate::error::{ensure_same_n, Error, Result};
use crate::pauli::dense::DenseMatrix;
use crate::pauli::PauliSum;
use crate::rules::{ConjugationRules, Direction};
use crate::schrodinger::StateVector;

/// `U† O U` for a single gate, with the standard rules.
pub fn conjugate(obs: &PauliSum, g: &GateOp) -> Result<PauliSum> {
    ConjugationRules::standard().conjugate_sum(obs, g, Direction::Heisenberg)
}

/// `U† O U` for a whole circuit.
pub fn conjugate_circuit(
    obs: &PauliSum,
    c: &Circuit,
    rules: &ConjugationRules,
) -> Result<PauliSum> {
    ensure_same_n(obs.n(), c.n())?;
    c.gates().iter().rev().try_fold(obs.clone(), |o, g| {
        rules.conjugate_sum(&o, g, Direction::Heisenberg)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObservableFrame {
    observables: Vec<(String, PauliSum)>,
    fixed_state: StateVector,
}

impl ObservableFrame {
    pub fn new(fixed_state: StateVector) -> Self {
        Self {
            observables: Vec::new(),
            fixed_state,
        }
    }

    pub fn with_observables<I, S>(fixed_state: StateVector, observables: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, PauliSum)>,
        S: Into<String>,
    {
        let mut frame = Self::new(fixed_state);
        for (name, obs) in observables {
            frame.insert(name, obs)?;
        }
        Ok(frame)
    }

    pub fn insert(&mut self, name: impl Into<String>, obs: PauliSum) -> Result<()> {
        let name = name.into();
        ensure_same_n(obs.n(), self.n())?;
        if !obs.is_hermitian() {
            return Err(Error::InvalidArgument(format!(
                "observable `{name}` is not Hermitian"
            )));
        }
        if name.is_empty() || name.contains('=') || name.trim() != name {
            return Err(Error::InvalidArgument(format!(
                "invalid observable name `{name}`"
            )));
        }
        if self.observable(&name).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate observable `{name}`"
            )));
        }
        self.observables.push((name, obs));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.fixed_state.n()
    }

    pub fn fixed_state(&self) -> &StateVector {
        &self.fixed_state
    }

    pub fn observables(&self) -> &[(String, PauliSum)] {
        &self.observables
    }

    pub fn observable(&self, name: &str) -> Option<&PauliSum> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, o)| o)
    }

    pub fn evolve(&self, c: &Circuit) -> Result<ObservableFrame> {
        self.evolve_with(c, &ConjugationRules::standard())
    }

    /// Conjugates every observable by the full circuit unitary.
    pub fn evolve_with(&self, c: &Circuit, rules: &ConjugationRules) -> Result<ObservableFrame> {
        ensure_same_n(c.n(), self.n())?;
        let observables = self
            .observables
            .iter()
            .map(|(name, o)| Ok((name.clone(), conjugate_circuit(o, c, rules)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ObservableFrame {
            observables,
            fixed_state: self.fixed_state.clone(),
        })
    }

    /// Expectation of the (evolved) observable in the fixed state.
    pub fn expectation(&self, name: &str) -> Result<Complex64> {
        let obs = self
            .observable(name)
            .ok_or_else(|| Error::UnknownObservable(name.to_string()))?;
        self.fixed_state.expectation(obs)
    }

    /// Expectation of the ordered product of named observables, formed at
    /// query time.
    pub fn product_expectation(&self, names: &[&str]) -> Result<Complex64> {
        let mut product = PauliSum::identity(self.n());
        for name in names {
            let obs = self
                .observable(name)
                .ok_or_else(|| Error::UnknownObservable(name.to_string()))?;
            product = product.multiply(obs)?;
        }
        self.fixed_state.expectation(&product)
    }

    /// Dump lines `name = <sum>`.
    pub fn dump(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, fixed_state: StateVector) -> Result<Self> {
        Self::with_observables(fixed_state, parse_observables(text)?)
    }
}

impl fmt::Display for ObservableFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, obs) in &self.observables {
            writeln!(f, "{name} = {obs}")?;
        }
        Ok(())
    }
}

/// Parses observable lines `name = <sum>` or a bare `<sum>`, which is named
/// by its own text. `#` starts a comment.
pub fn parse_observables(text: &str) -> Result<Vec<(String, PauliSum)>> {
    let mut out: Vec<(String, PauliSum)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, body) = match line.split_once('=') {
            Some((name, body)) => (name.trim().to_string(), body),
            None => (line.to_string(), line),
        };
        if name.is_empty() {
            return Err(Error::parse("empty observable name").at_line(lineno));
        }
        if out.iter().any(|(n, _)| *n == name) {
            return Err(Error::parse(format!("duplicate observable `{name}`")).at_line(lineno));
        }
        let obs: PauliSum = body.parse().map_err(|e: Error| e.at_line(lineno))?;
        out.push((name, obs));
    }
    Ok(out)
}

/// Moving-basis view: returns `|a_t⟩⟨a_t|` with `|a_t⟩ = U†|a⟩`.
pub fn evolve_basis_projector(a: &StateVector, c: &Circuit) -> Result<DenseMatrix> {
    ensure_same_n(a.n(), c.n())?;
    let moved = c
        .gates()
        .iter()
        .rev()
        .try_fold(a.clone(), |s, g| s.apply_gate_adjoint(g))?;
    moved.projector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::dense::{self, hermitian_eigenvalues, max_abs_diff, sum_to_dense};
    use crate::pauli::PauliString;
    use crate::schrodinger::run_circuit;
    use std::f64::consts::PI;

    fn sum(s: &str) -> PauliSum {
        s.parse().unwrap()
    }

    fn plus_plus() -> StateVector {
        StateVector::normalized(vec![Complex64::new(1.0, 0.0); 4]).unwrap()
    }

    fn cz() -> Circuit {
        Circuit::new(2).with(GateOp::cz(0, 1)).unwrap()
    }

    fn frame() -> ObservableFrame {
        ObservableFrame::with_observables(
            plus_plus(),
            [
                ("X1", sum("XI")),
                ("X2", sum("IX")),
                ("Z1", sum("ZI")),
                ("Z2", sum("IZ")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn cz_conjugation_of_single_x() {
        assert_eq!(conjugate(&sum("XI"), &GateOp::cz(0, 1)).unwrap(), sum("XZ"));
        assert_eq!(conjugate(&sum("IX"), &GateOp::cz(0, 1)).unwrap(), sum("ZX"));
    }

    #[test]
    fn phase_pi_negates_x_on_kicked_qubit() {
        let g = GateOp::phase(0, PI);
        for rest in ["I", "X", "Y", "Z"] {
            let x = sum(&format!("X{rest}"));
            assert_eq!(
                conjugate(&x, &g).unwrap(),
                x.scale(Complex64::new(-1.0, 0.0))
            );
            let z = sum(&format!("Z{rest}"));
            assert_eq!(conjugate(&z, &g).unwrap(), z);
        }
    }

    #[test]
    fn phase_rule_matches_dense_oracle() {
        for phi in [PI / 7.0, PI / 3.0, 1.0] {
            let g = GateOp::phase(0, phi);
            let u = g.to_dense(1).unwrap();
            for s in ["X", "Y", "Z", "0.3*X - 0.2*Y + 0.5*Z"] {
                let o = sum(s);
                let want = u.adjoint() * sum_to_dense(&o).unwrap() * &u;
                let got = sum_to_dense(&conjugate(&o, &g).unwrap()).unwrap();
                assert!(max_abs_diff(&got, &want) < 1e-14);
            }
        }
    }

    #[test]
    fn frame_through_cz() {
        let evolved = frame().evolve(&cz()).unwrap();
        let expected = [("X1", "XZ"), ("X2", "ZX"), ("Z1", "ZI"), ("Z2", "IZ")];
        for (name, obs) in expected {
            assert_eq!(evolved.observable(name).unwrap(), &sum(obs), "{name}");
        }
        assert_eq!(frame().evolve(&Circuit::new(2)).unwrap(), frame());
        let twice = cz().with(GateOp::cz(0, 1)).unwrap();
        assert_eq!(frame().evolve(&twice).unwrap(), frame());
        assert!(frame().evolve(&Circuit::new(3)).is_err());
    }

    #[test]
    fn circuit_conjugation_matches_dense_oracle() {
        let c = Circuit::new(3)
            .with(GateOp::h(0))
            .unwrap()
            .with(GateOp::s(1))
            .unwrap()
            .with(GateOp::cx(0, 2))
            .unwrap()
            .with(GateOp::phase(2, 0.77))
            .unwrap()
            .with(GateOp::cz(2, 1))
            .unwrap();
        let u = c.to_dense().unwrap();
        for p in PauliString::enumerate(3).unwrap() {
            let o = PauliSum::from(&p);
            let want = u.adjoint() * sum_to_dense(&o).unwrap() * &u;
            let got = conjugate_circuit(&o, &c, &ConjugationRules::standard()).unwrap();
            assert!(
                max_abs_diff(&sum_to_dense(&got).unwrap(), &want) < 1e-12,
                "{p}"
            );
        }
    }

    #[test]
    fn heisenberg_expectations() {
        let evolved = frame().evolve(&cz()).unwrap();
        assert!(evolved.expectation("X1").unwrap().norm() < 1e-15);
        // (XZ)(ZX) = YY
        let xx = evolved.product_expectation(&["X1", "X2"]).unwrap();
        let schrodinger = run_circuit(&cz(), &plus_plus())
            .unwrap()
            .expectation(&sum("XX"))
            .unwrap();
        assert!((xx - schrodinger).norm() < 1e-15);
        assert!(xx.norm() < 1e-15);
        assert!(matches!(
            evolved.expectation("nope"),
            Err(Error::UnknownObservable(_))
        ));
        let plus = StateVector::normalized(vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        let single = ObservableFrame::with_observables(plus, [("X", sum("X"))]).unwrap();
        let e = single
            .evolve(&Circuit::new(1))
            .unwrap()
            .expectation("X")
            .unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn frame_validation() {
        let mut f = frame();
        assert!(f.insert("X1", sum("XX")).is_err());
        assert!(f.insert("bad", sum("0.5i*XX")).is_err());
        assert!(f.insert("short", sum("X")).is_err());
        assert!(f.insert("a=b", sum("XX")).is_err());
        assert!(f.insert("XX", sum("XX")).is_ok());
    }

    #[test]
    fn dump_round_trip() {
        let evolved = frame()
            .evolve(&cz().with(GateOp::phase(1, 0.4)).unwrap())
            .unwrap();
        let text = evolved.dump();
        assert!(text.starts_with("X1 = 1*XZ\n"), "{text}");
        let back = ObservableFrame::parse(&text, plus_plus()).unwrap();
        assert_eq!(back, evolved);
        let parsed = parse_observables("# stabilizers\nXZ\ns = ZX\n").unwrap();
        assert_eq!(parsed[0].0, "XZ");
        assert_eq!(parsed[1], ("s".to_string(), sum("ZX")));
        let err = parse_observables("a = XX\nb = X Q").unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(2), .. }), "{err}");
        assert!(parse_observables("a = XX\na = ZZ").is_err());
    }

    #[test]
    fn moving_basis_view() {
        let c = Circuit::new(2)
            .with(GateOp::h(1))
            .unwrap()
            .with(GateOp::cz(0, 1))
            .unwrap()
            .with(GateOp::phase(0, 0.6))
            .unwrap();
        let a = StateVector::basis(2, 1).unwrap();
        assert_eq!(
            evolve_basis_projector(&a, &Circuit::new(2)).unwrap(),
            a.projector().unwrap()
        );
        // forward evolution of |a_t> by the same circuit returns |a>
        let u = c.to_dense().unwrap();
        let p = evolve_basis_projector(&a, &c).unwrap();
        let back = &u * p * u.adjoint();
        assert!(max_abs_diff(&back, &a.projector().unwrap()) < 1e-14);

        // spectral reconstruction of A = X⊗Z in the moving basis
        let obs = sum("XZ");
        let dense_obs = sum_to_dense(&obs).unwrap();
        let eig = nalgebra::SymmetricEigen::new(dense_obs.clone());
        let mut rebuilt = DenseMatrix::zeros(4, 4);
        for k in 0..4 {
            let v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
            let basis_state = StateVector::normalized(v).unwrap();
            rebuilt += evolve_basis_projector(&basis_state, &c).unwrap()
                * Complex64::new(eig.eigenvalues[k], 0.0);
        }
        let heis = conjugate_circuit(&obs, &c, &ConjugationRules::standard()).unwrap();
        assert!(max_abs_diff(&rebuilt, &sum_to_dense(&heis).unwrap()) < 1e-12);
    }

    #[test]
    fn phase_conjugation_preserves_spectrum() {
        let o = sum("0.5*XZ + 0.25*YI - 0.75*ZY");
        let g = GateOp::phase(0, 1.3);
        let c = conjugate(&o, &g).unwrap();
        assert!(c.is_hermitian());
        let a = hermitian_eigenvalues(&sum_to_dense(&o).unwrap());
        let b = hermitian_eigenvalues(&sum_to_dense(&c).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(dense::is_hermitian(&sum_to_dense(&c).unwrap(), 1e-12));
    }
}
