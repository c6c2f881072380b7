//! Interchangeable simulation backends behind one trait, looked up by name.

use std::sync::Arc;

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{ensure_same_n, Error, Result};
use crate::heisenberg;
use crate::initial::InitialState;
use crate::pauli::PauliSum;
use crate::rules::ConjugationRules;
use crate::schrodinger::run_circuit;

/// Largest allowed expectation discrepancy between backends.
pub const AGREEMENT_TOL: f64 = 1e-9;

pub trait Backend: Send + Sync {
    fn name(&self) -> &'static str;

    /// One-line description shown by `list`.
    fn describe(&self) -> &'static str;

    /// `⟨O⟩` after `circuit`, one value per observable, in input order.
    fn expectations(
        &self,
        circuit: &Circuit,
        initial: &InitialState,
        observables: &[(String, PauliSum)],
    ) -> Result<Vec<Complex64>>;
}

fn check_dims(
    circuit: &Circuit,
    initial: &InitialState,
    observables: &[(String, PauliSum)],
) -> Result<()> {
    ensure_same_n(circuit.n(), initial.n())?;
    for (_, o) in observables {
        ensure_same_n(circuit.n(), o.n())?;
    }
    Ok(())
}

/// Dense state-vector evolution.
pub struct SchrodingerBackend;

impl Backend for SchrodingerBackend {
    fn name(&self) -> &'static str {
        "schrodinger"
    }

    fn describe(&self) -> &'static str {
        "state vector evolves, observables fixed"
    }

    fn expectations(
        &self,
        circuit: &Circuit,
        initial: &InitialState,
        observables: &[(String, PauliSum)],
    ) -> Result<Vec<Complex64>> {
        check_dims(circuit, initial, observables)?;
        let psi = run_circuit(circuit, &initial.state_vector()?)?;
        observables
            .iter()
            .map(|(_, o)| psi.expectation(o))
            .collect()
    }
}

/// Observables conjugated through the circuit, state fixed.
pub struct HeisenbergBackend {
    rules: Arc<ConjugationRules>,
}

impl HeisenbergBackend {
    pub fn new(rules: Arc<ConjugationRules>) -> Self {
        Self { rules }
    }
}

impl Backend for HeisenbergBackend {
    fn name(&self) -> &'static str {
        "heisenberg"
    }

    fn describe(&self) -> &'static str {
        "observables evolve as Pauli sums, state fixed"
    }

    fn expectations(
        &self,
        circuit: &Circuit,
        initial: &InitialState,
        observables: &[(String, PauliSum)],
    ) -> Result<Vec<Complex64>> {
        check_dims(circuit, initial, observables)?;
        let psi = initial.state_vector()?;
        observables
            .iter()
            .map(|(_, o)| psi.expectation(&heisenberg::conjugate_circuit(o, circuit, &self.rules)?))
            .collect()
    }
}

/// Factored density matrix `∏ ½(I + G_j)` with evolving generators.
pub struct ProductFormBackend {
    rules: Arc<ConjugationRules>,
}

impl ProductFormBackend {
    pub fn new(rules: Arc<ConjugationRules>) -> Self {
        Self { rules }
    }
}

impl Backend for ProductFormBackend {
    fn name(&self) -> &'static str {
        "product-form"
    }

    fn describe(&self) -> &'static str {
        "factored density matrix with per-factor provenance"
    }

    fn expectations(
        &self,
        circuit: &Circuit,
        initial: &InitialState,
        observables: &[(String, PauliSum)],
    ) -> Result<Vec<Complex64>> {
        check_dims(circuit, initial, observables)?;
        let rho = initial
            .factored()?
            .evolve_circuit(circuit, &self.rules)?
            .expand();
        observables
            .iter()
            .map(|(_, o)| rho.trace_product(o))
            .collect()
    }
}

#[derive(Default)]
pub struct BackendRegistry {
    backends: Vec<Box<dyn Backend>>,
}

impl BackendRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The three built-in backends sharing one rule set.
    pub fn standard(rules: Arc<ConjugationRules>) -> Self {
        let mut reg = Self::new();
        reg.backends.push(Box::new(SchrodingerBackend));
        reg.backends
            .push(Box::new(HeisenbergBackend::new(rules.clone())));
        reg.backends.push(Box::new(ProductFormBackend::new(rules)));
        reg
    }

    pub fn register(&mut self, backend: Box<dyn Backend>) -> Result<()> {
        if self.get(backend.name()).is_some() {
            return Err(Error::InvalidArgument(format!(
                "backend `{}` is already registered",
                backend.name()
            )));
        }
        self.backends.push(backend);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn Backend> {
        self.backends
            .iter()
            .find(|b| b.name() == name)
            .map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.backends.iter().map(|b| b.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Backend> {
        self.backends.iter().map(|b| b.as_ref())
    }

    /// Runs the named backends (all when `names` is empty) side by side.
    pub fn compare(
        &self,
        names: &[&str],
        circuit: &Circuit,
        initial: &InitialState,
        observables: &[(String, PauliSum)],
    ) -> Result<Comparison> {
        let selected: Vec<&dyn Backend> = if names.is_empty() {
            self.iter().collect()
        } else {
            names
                .iter()
                .map(|n| {
                    self.get(n)
                        .ok_or_else(|| Error::InvalidArgument(format!("unknown backend `{n}`")))
                })
                .collect::<Result<_>>()?
        };
        let columns = selected
            .iter()
            .map(|b| b.expectations(circuit, initial, observables))
            .collect::<Result<Vec<_>>>()?;
        let rows = observables
            .iter()
            .enumerate()
            .map(|(i, (name, _))| {
                let values: Vec<Complex64> = columns.iter().map(|col| col[i]).collect();
                let spread = values
                    .iter()
                    .flat_map(|a| values.iter().map(move |b| (a - b).norm()))
                    .fold(0.0, f64::max);
                ComparisonRow {
                    observable: name.clone(),
                    values,
                    spread,
                }
            })
            .collect();
        Ok(Comparison {
            backends: selected.iter().map(|b| b.name().to_string()).collect(),
            rows,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub observable: String,
    pub values: Vec<Complex64>,
    /// Largest pairwise difference across backends.
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub backends: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn max_spread(&self) -> f64 {
        self.rows.iter().map(|r| r.spread).fold(0.0, f64::max)
    }

    pub fn agrees(&self) -> bool {
        self.max_spread() <= AGREEMENT_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateOp;

    fn obs(texts: &[&str]) -> Vec<(String, PauliSum)> {
        texts
            .iter()
            .map(|t| (t.to_string(), t.parse().unwrap()))
            .collect()
    }

    #[test]
    fn registry_lookup() {
        let mut reg = BackendRegistry::standard(Arc::default());
        assert_eq!(reg.names(), ["schrodinger", "heisenberg", "product-form"]);
        assert!(reg.get("heisenberg").is_some());
        assert!(reg.get("nope").is_none());
        assert!(reg.register(Box::new(SchrodingerBackend)).is_err());
    }

    #[test]
    fn cz_stabilizers_agree_across_backends() {
        let reg = BackendRegistry::standard(Arc::default());
        let c = Circuit::from_gates(2, vec![GateOp::cz(0, 1)]).unwrap();
        let cmp = reg
            .compare(
                &[],
                &c,
                &InitialState::plus(2),
                &obs(&["XZ", "ZX", "YY", "XI"]),
            )
            .unwrap();
        assert!(cmp.agrees());
        let first: Vec<f64> = cmp.rows.iter().map(|r| r.values[0].re).collect();
        for (got, want) in first.iter().zip([1.0, 1.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_circuit_single_qubit() {
        let reg = BackendRegistry::standard(Arc::default());
        let cmp = reg
            .compare(&[], &Circuit::new(1), &"0".parse().unwrap(), &obs(&["Z"]))
            .unwrap();
        assert!(cmp.rows[0].values.iter().all(|v| (v - 1.0).norm() < 1e-12));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let reg = BackendRegistry::standard(Arc::default());
        assert!(reg
            .compare(&[], &Circuit::new(2), &InitialState::plus(2), &obs(&["Z"]))
            .is_err());
        assert!(reg
            .compare(
                &["bogus"],
                &Circuit::new(1),
                &InitialState::plus(1),
                &obs(&["Z"])
            )
            .is_err());
    }
}
