//! Locality analyses: Einstein-locality audits, data hiding, CHSH values and
//! indistinguishability of locally applied gates.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::initial::InitialState;
use crate::pauli::dense::max_abs_diff;
use crate::pauli::{DenseMatrix, Pauli, PauliString, PauliSum, Word};
use crate::product_form::FactoredState;
use crate::report::{Check, Report};
use crate::rules::{ConjugationRules, Direction};
use crate::schrodinger::{run_circuit, StateVector, OVERLAP_TOL};

/// Tolerance for reduced-state comparisons.
pub const REDUCED_TOL: f64 = 1e-12;

/// Largest complement enumerated by the Heisenberg check (`4^k - 1` strings).
pub const MAX_AUDIT_COMPLEMENT: usize = 8;

pub const TSIRELSON: f64 = 2.0 * SQRT_2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub gate: String,
    pub region: Vec<usize>,
    pub heisenberg: Check,
    pub product_form: Check,
    pub schrodinger: Check,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.heisenberg.passed && self.product_form.passed && self.schrodinger.passed
    }

    pub fn checks(&self) -> [&Check; 3] {
        [&self.heisenberg, &self.product_form, &self.schrodinger]
    }

    pub fn to_report(&self, title: &str) -> Report {
        let mut r = Report::new(title);
        r.extend(self.checks().into_iter().cloned());
        r.set_data("gate", &self.gate);
        r.set_data("region", &self.region);
        r
    }
}

/// Non-identity strings supported inside `qubits`, in canonical order.
fn strings_on(n: usize, qubits: &[usize]) -> Vec<PauliString> {
    let k = qubits.len();
    (1..1usize << (2 * k))
        .map(|code| {
            let mut word = Word::IDENTITY;
            for (i, &q) in qubits.iter().enumerate() {
                word.set(q, Pauli::ALL[(code >> (2 * (k - 1 - i))) & 3]);
            }
            PauliString::from_word(n, word, 0)
        })
        .collect()
}

/// Checks that applying `g` after `c` changes nothing outside `region`.
///
/// The Heisenberg check enumerates every string on the complement and
/// requires exact invariance. The product-form check requires each factor
/// changed by `g` to have had support meeting `region`. The Schrödinger check
/// compares the reduced state on the complement.
pub fn einstein_locality_audit(
    c: &Circuit,
    g: &GateOp,
    region: &BTreeSet<usize>,
    initial: &InitialState,
    rules: &ConjugationRules,
) -> Result<AuditReport> {
    let n = c.n();
    if initial.n() != n {
        return Err(Error::QubitMismatch {
            left: n,
            right: initial.n(),
        });
    }
    g.check_fits(n)?;
    if let Some(&qubit) = region.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit, n });
    }
    if let Some(q) = g.support().iter().find(|q| !region.contains(q)) {
        return Err(Error::InvalidArgument(format!(
            "gate `{g}` acts on qubit {q} outside the audited region"
        )));
    }
    let complement: Vec<usize> = (0..n).filter(|q| !region.contains(q)).collect();
    if complement.len() > MAX_AUDIT_COMPLEMENT {
        return Err(Error::TooManyQubits {
            n: complement.len(),
            cap: MAX_AUDIT_COMPLEMENT,
        });
    }

    let remote = strings_on(n, &complement);
    let mut moved = Vec::new();
    for p in &remote {
        let image = rules.conjugate_string(p, g, Direction::Heisenberg)?;
        if image != PauliSum::from(p) {
            moved.push(format!("{p} -> {image}"));
        }
    }
    let heisenberg = Check::new(
        "heisenberg",
        moved.is_empty(),
        format!("{} of {} remote strings moved", moved.len(), remote.len()),
    )
    .with_witnesses(moved);

    let before = initial.factored()?.evolve_circuit(c, rules)?;
    let after = before.evolve_with(g, rules)?;
    let changed = FactoredState::changed_factors(&before, &after)?;
    let mut remote_changes = Vec::new();
    let mut local_changes = Vec::new();
    for &j in &changed {
        let prior = &before.generators()[j];
        let line = format!("factor {j}: {prior} -> {}", after.generators()[j]);
        if prior.support().is_disjoint(region) {
            remote_changes.push(line);
        } else {
            local_changes.push(line);
        }
    }
    let product_form = Check::new(
        "product-form",
        remote_changes.is_empty(),
        format!(
            "changed factors {:?}; {} without support in the region",
            changed,
            remote_changes.len()
        ),
    )
    .with_witnesses(if remote_changes.is_empty() {
        local_changes
    } else {
        remote_changes
    });

    let schrodinger = if complement.is_empty() {
        Check::new("schrodinger", true, "region covers every qubit")
    } else {
        let keep: BTreeSet<usize> = complement.iter().copied().collect();
        let psi = run_circuit(c, &initial.state_vector()?)?;
        let rho = psi.reduced_density_matrix(&keep)?;
        let rho_after = psi.apply_gate(g)?.reduced_density_matrix(&keep)?;
        let diff = max_abs_diff(&rho, &rho_after);
        Check::new(
            "schrodinger",
            diff <= REDUCED_TOL,
            format!("reduced state on {complement:?} moved by {diff:.3e}"),
        )
    };

    Ok(AuditReport {
        gate: g.to_string(),
        region: region.iter().copied().collect(),
        heisenberg,
        product_form,
        schrodinger,
    })
}

fn half_identity() -> DenseMatrix {
    DenseMatrix::identity(2, 2).map(|x| x * 0.5)
}

/// Largest deviation of either single-qubit reduction from `I/2`.
pub fn reduction_deviation(psi: &StateVector) -> Result<f64> {
    (0..psi.n()).try_fold(0.0_f64, |acc, q| {
        let rho = psi.reduced_density_matrix(&BTreeSet::from([q]))?;
        Ok(acc.max(max_abs_diff(&rho, &half_identity())))
    })
}

/// Phase-kicked entangled families checked for maximally mixed reductions:
/// `(|00⟩ + e^{iφ}|11⟩)/√2` and `(|0+⟩ + e^{iφ}|1−⟩)/√2`.
pub fn data_hiding_check(grid: &[f64]) -> Result<Report> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("phase grid is empty".into()));
    }
    let families: [(&str, InitialState, Vec<GateOp>); 2] = [
        ("bell-kick", InitialState::bell(), vec![]),
        ("cz-kick", InitialState::plus(2), vec![GateOp::cz(0, 1)]),
    ];
    let mut report = Report::new("data-hiding");
    let mut deviations = Vec::new();
    for (family, initial, prefix) in &families {
        for &phi in grid {
            let mut gates = prefix.clone();
            gates.push(GateOp::new(crate::circuit::GateKind::Phase(phi), vec![0])?);
            let psi = run_circuit(&Circuit::from_gates(2, gates)?, &initial.state_vector()?)?;
            let dev = reduction_deviation(&psi)?;
            deviations.push(serde_json::json!({ "family": family, "phi": phi, "deviation": dev }));
            report.push(Check::new(
                format!("{family} phi={phi}"),
                dev <= REDUCED_TOL,
                format!("max |rho_q - I/2| = {dev:.3e}"),
            ));
        }
    }
    report.set_data("deviations", deviations);
    Ok(report)
}

/// A single-qubit measurement direction `n·σ` with `|n| = 1`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Setting {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Setting {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "setting ({x}, {y}, {z}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Direction with polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    fn components(&self) -> [(Pauli, f64); 3] {
        [(Pauli::X, self.x), (Pauli::Y, self.y), (Pauli::Z, self.z)]
    }
}

/// `a = Z`, `a′ = X`, `b = (Z+X)/√2`, `b′ = (Z−X)/√2`.
pub fn optimal_settings() -> [Setting; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        Setting {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        },
        Setting {
            x: 1.0,
            y: 0.0,
            z: 0.0,
        },
        Setting { x: h, y: 0.0, z: h },
        Setting {
            x: -h,
            y: 0.0,
            z: h,
        },
    ]
}

/// `(a·σ) ⊗ (b·σ)` as a two-qubit Pauli sum.
pub fn correlator(a: &Setting, b: &Setting) -> Result<PauliSum> {
    let terms = a
        .components()
        .iter()
        .flat_map(|&(pa, ca)| {
            b.components()
                .map(move |(pb, cb)| (PauliString::new(&[pa, pb], 0), Complex64::new(ca * cb, 0.0)))
        })
        .map(|(p, c)| p.map(|p| (p, c)))
        .collect::<Result<Vec<_>>>()?;
    PauliSum::from_terms(2, terms)
}

pub fn correlation(state: &StateVector, a: &Setting, b: &Setting) -> Result<f64> {
    if state.n() != 2 {
        return Err(Error::QubitMismatch {
            left: state.n(),
            right: 2,
        });
    }
    Ok(state.expectation(&correlator(a, b)?)?.re)
}

/// `E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)`.
pub fn chsh_value(
    state: &StateVector,
    a: &Setting,
    a_prime: &Setting,
    b: &Setting,
    b_prime: &Setting,
) -> Result<f64> {
    Ok(correlation(state, a, b)?
        + correlation(state, a, b_prime)?
        + correlation(state, a_prime, b)?
        - correlation(state, a_prime, b_prime)?)
}

/// Largest CHSH value over all settings, `2·sqrt(t1 + t2)` with `t1 ≥ t2` the
/// top eigenvalues of `TᵀT`, `T_ij = ⟨σ_i ⊗ σ_j⟩`.
pub fn max_chsh(state: &StateVector) -> Result<f64> {
    if state.n() != 2 {
        return Err(Error::QubitMismatch {
            left: state.n(),
            right: 2,
        });
    }
    let axes = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut t = nalgebra::Matrix3::zeros();
    for (i, &a) in axes.iter().enumerate() {
        for (j, &b) in axes.iter().enumerate() {
            t[(i, j)] = state.expectation(&PauliString::new(&[a, b], 0)?.into())?.re;
        }
    }
    let mut eig: Vec<f64> = (t.transpose() * t)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(2.0 * (eig[0] + eig[1]).max(0.0).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Indistinguishability {
    /// `|⟨ψ1|ψ2⟩|`.
    pub overlap: f64,
    pub states_equal: bool,
    pub circuits_differ: bool,
    pub changed_1: BTreeSet<usize>,
    pub changed_2: BTreeSet<usize>,
    pub provenance_1: Vec<Vec<String>>,
    pub provenance_2: Vec<Vec<String>>,
    pub provenance_differs: bool,
    /// Largest coefficient difference between the expanded factored states.
    pub expanded_diff: f64,
}

impl Indistinguishability {
    pub fn passed(&self) -> bool {
        self.states_equal && self.circuits_differ
    }

    pub fn verdict(&self) -> &'static str {
        match (self.states_equal, self.circuits_differ) {
            (true, true) => "indistinguishable",
            (true, false) => "same circuit",
            (false, _) => "distinguishable",
        }
    }

    pub fn to_report(&self, title: &str) -> Report {
        let mut r = Report::new(title);
        r.push(Check::new(
            "states-equal",
            self.states_equal,
            format!("overlap {:.12}", self.overlap),
        ));
        r.push(Check::new(
            "circuits-differ",
            self.circuits_differ,
            if self.circuits_differ {
                "circuits differ"
            } else {
                "circuits are identical"
            },
        ));
        r.set_data("verdict", self.verdict());
        r.set_data("result", self);
        r
    }
}

fn provenance_strings(s: &FactoredState) -> Vec<Vec<String>> {
    s.provenance()
        .iter()
        .map(|records| records.iter().map(|r| r.to_string()).collect())
        .collect()
}

/// Compares the final states of two circuits from the same start, together
/// with the per-factor gate provenance each circuit leaves behind.
pub fn indistinguishability_check(
    c1: &Circuit,
    c2: &Circuit,
    initial: &InitialState,
    rules: &ConjugationRules,
) -> Result<Indistinguishability> {
    if c1.n() != c2.n() {
        return Err(Error::QubitMismatch {
            left: c1.n(),
            right: c2.n(),
        });
    }
    let psi0 = initial.state_vector()?;
    let psi1 = run_circuit(c1, &psi0)?;
    let psi2 = run_circuit(c2, &psi0)?;
    let overlap = psi1.inner(&psi2)?.norm();

    let start = initial.factored()?;
    let f1 = start.evolve_circuit(c1, rules)?;
    let f2 = start.evolve_circuit(c2, rules)?;
    let provenance_1 = provenance_strings(&f1);
    let provenance_2 = provenance_strings(&f2);
    Ok(Indistinguishability {
        overlap,
        states_equal: overlap >= 1.0 - OVERLAP_TOL,
        circuits_differ: c1 != c2,
        changed_1: FactoredState::changed_factors(&start, &f1)?,
        changed_2: FactoredState::changed_factors(&start, &f2)?,
        provenance_differs: provenance_1 != provenance_2,
        provenance_1,
        provenance_2,
        expanded_diff: f1.expand().max_abs_diff(&f2.expand())?,
    })
}

/// Every stabilizer state on `n ≤ 3` qubits, reached from `|0…0⟩` by
/// breadth-first search over `H`, `S` and `CX`.
pub fn stabilizer_states(n: usize) -> Result<Vec<InitialState>> {
    if n == 0 || n > 3 {
        return Err(Error::TooManyQubits { n, cap: 3 });
    }
    let mut gates: Vec<GateOp> = (0..n).flat_map(|q| [GateOp::h(q), GateOp::s(q)]).collect();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                gates.push(GateOp::cx(a, b));
            }
        }
    }
    let start = InitialState::Product(vec![crate::initial::LocalState::Zero; n]).factored()?;
    let key = |s: &FactoredState| s.expand().to_string();
    let mut seen = HashSet::from([key(&start)]);
    let mut frontier = vec![start.generator_strings().expect("Clifford")];
    let mut out = frontier.clone();
    let rules = ConjugationRules::standard();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for gens in &frontier {
            let state = FactoredState::init_from_strings(gens)?;
            for g in &gates {
                let evolved = state.evolve_with(g, &rules)?;
                if seen.insert(key(&evolved)) {
                    next.push(evolved.generator_strings().expect("Clifford"));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out.into_iter().map(InitialState::Stabilizer).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rules() -> ConjugationRules {
        ConjugationRules::standard()
    }

    #[test]
    fn audit_of_phase_kick_after_cz() {
        let c = Circuit::from_gates(2, vec![GateOp::cz(0, 1)]).unwrap();
        let g = GateOp::phase(0, PI);
        let report = einstein_locality_audit(
            &c,
            &g,
            &BTreeSet::from([0]),
            &InitialState::plus(2),
            &rules(),
        )
        .unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.heisenberg.detail, "0 of 3 remote strings moved");
        assert!(report
            .product_form
            .detail
            .starts_with("changed factors {0}"));
    }

    #[test]
    fn identity_gate_audit_is_trivial() {
        let c = Circuit::new(3);
        let report = einstein_locality_audit(
            &c,
            &GateOp::phase(1, 0.0),
            &BTreeSet::from([1]),
            &"+0-".parse().unwrap(),
            &rules(),
        )
        .unwrap();
        assert!(report.passed());
        assert!(report.product_form.detail.starts_with("changed factors {}"));
    }

    #[test]
    fn audit_rejects_gate_outside_region() {
        let err = einstein_locality_audit(
            &Circuit::new(2),
            &GateOp::cz(0, 1),
            &BTreeSet::from([0]),
            &InitialState::plus(2),
            &rules(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn remote_factor_rewrite_is_caught() {
        // H on qubit 0 rewrites factor 1 (ZX -> XX), whose support meets the region.
        let c = Circuit::from_gates(2, vec![GateOp::cz(0, 1)]).unwrap();
        let r = einstein_locality_audit(
            &c,
            &GateOp::h(0),
            &BTreeSet::from([0]),
            &InitialState::plus(2),
            &rules(),
        )
        .unwrap();
        assert!(r.passed());
        assert!(r.product_form.detail.starts_with("changed factors {0, 1}"));
    }

    #[test]
    fn stabilizer_state_counts() {
        assert_eq!(stabilizer_states(1).unwrap().len(), 6);
        assert_eq!(stabilizer_states(2).unwrap().len(), 60);
    }

    #[test]
    fn data_hiding_grid() {
        let r = data_hiding_check(&[0.0, PI / 7.0, PI / 3.0, 1.0, PI]).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks.len(), 10);
        assert!(data_hiding_check(&[]).is_err());
    }

    #[test]
    fn chsh_bell_and_degenerate_settings() {
        let bell = InitialState::bell().state_vector().unwrap();
        let [a, a2, b, b2] = optimal_settings();
        let v = chsh_value(&bell, &a, &a2, &b, &b2).unwrap();
        assert!((v - TSIRELSON).abs() < 1e-12);
        let e = correlation(&bell, &a, &b).unwrap();
        let same = chsh_value(&bell, &a, &a, &b, &b).unwrap();
        assert!((same - 2.0 * e).abs() < 1e-12);
        assert!(Setting::new(1.0, 1.0, 0.0).is_err());
        let three = InitialState::plus(3).state_vector().unwrap();
        assert!(chsh_value(&three, &a, &a2, &b, &b2).is_err());
        assert!((max_chsh(&bell).unwrap() - TSIRELSON).abs() < 1e-12);
        let product = InitialState::plus(2).state_vector().unwrap();
        assert!((max_chsh(&product).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn phase_location_is_hidden_in_bell_state() {
        let phi = 0.7;
        let c1 = Circuit::from_gates(2, vec![GateOp::phase(0, phi)]).unwrap();
        let c2 = Circuit::from_gates(2, vec![GateOp::phase(1, phi)]).unwrap();
        let r = indistinguishability_check(&c1, &c2, &InitialState::bell(), &rules()).unwrap();
        assert!(r.passed());
        assert!(r.provenance_differs);
        assert_eq!(r.changed_1, r.changed_2);
        assert!(r.expanded_diff <= 1e-12);

        let same = indistinguishability_check(&c1, &c1, &InitialState::bell(), &rules()).unwrap();
        assert!(!same.passed() && !same.provenance_differs);
        assert_eq!(same.verdict(), "same circuit");

        let product =
            indistinguishability_check(&c1, &c2, &InitialState::plus(2), &rules()).unwrap();
        assert_eq!(product.verdict(), "distinguishable");
    }
}
