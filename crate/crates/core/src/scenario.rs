//! Named end-to-end scenarios, each producing a [`Report`].

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::backend::{BackendRegistry, AGREEMENT_TOL};
use crate::circuit::{Circuit, GateOp};
use crate::classical::{collision_report, EnsembleConfig, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::initial::InitialState;
use crate::locality::{
    chsh_value, data_hiding_check, einstein_locality_audit, indistinguishability_check, max_chsh,
    optimal_settings, stabilizer_states, Setting, TSIRELSON,
};
use crate::pauli::dense::{hermitian_eigenvalues, max_abs_diff, sum_to_dense};
use crate::pauli::{PauliString, PauliSum};
use crate::random::{random_circuit, random_pauli, random_product_state, random_stabilizer_state};
use crate::report::{Check, Report};
use crate::rules::ConjugationRules;
use crate::schrodinger::{run_circuit, StateVector};

/// Expanded product form against the dense density matrix.
pub const DENSE_TOL: f64 = 1e-10;
/// Slack on the CHSH bounds.
pub const CHSH_TOL: f64 = 1e-9;

/// Command-line knobs; each scenario supplies its own defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScenarioOptions {
    pub qubits: Option<usize>,
    pub depth: Option<usize>,
    pub seeds: Option<usize>,
    pub phi: Option<f64>,
    pub samples: Option<usize>,
    pub seed: u64,
}

pub struct ScenarioContext {
    pub options: ScenarioOptions,
    pub rules: Arc<ConjugationRules>,
}

impl ScenarioContext {
    pub fn new(options: ScenarioOptions, rules: Arc<ConjugationRules>) -> Self {
        Self { options, rules }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.options.seed);
        rng.set_stream(stream);
        rng
    }
}

pub trait Scenario: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn run(&self, ctx: &ScenarioContext) -> Result<Report>;
}

#[derive(Default)]
pub struct ScenarioRegistry {
    scenarios: Vec<Box<dyn Scenario>>,
}

impl ScenarioRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn standard() -> Self {
        let mut reg = Self::new();
        reg.scenarios.push(Box::new(BellPhaseKick));
        reg.scenarios.push(Box::new(CzEntangler));
        reg.scenarios.push(Box::new(DataHiding));
        reg.scenarios.push(Box::new(Chsh));
        reg.scenarios.push(Box::new(EinsteinAudit));
        reg.scenarios.push(Box::new(ClassicalCollision));
        reg.scenarios.push(Box::new(PictureEquivalence));
        reg
    }

    pub fn register(&mut self, scenario: Box<dyn Scenario>) -> Result<()> {
        if self.get(scenario.name()).is_some() {
            return Err(Error::InvalidArgument(format!(
                "scenario `{}` is already registered",
                scenario.name()
            )));
        }
        self.scenarios.push(scenario);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn Scenario> {
        self.scenarios
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.scenarios.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Scenario> {
        self.scenarios.iter().map(|s| s.as_ref())
    }
}

fn sum(text: &str) -> PauliSum {
    text.parse().expect("valid literal")
}

fn cz_state(rules: &ConjugationRules) -> Result<crate::product_form::FactoredState> {
    InitialState::plus(2)
        .factored()?
        .evolve_with(&GateOp::cz(0, 1), rules)
}

/// `CZ` on `|++⟩`: exact generators, exact expansion, rank-one projector and
/// cross-backend stabilizer expectations.
pub struct CzEntangler;

impl Scenario for CzEntangler {
    fn name(&self) -> &'static str {
        "cz-entangler"
    }

    fn describe(&self) -> &'static str {
        "CZ on |++>: generators XZ, ZX and the expanded projector"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let mut r = Report::new(self.name());
        let state = cz_state(&ctx.rules)?;
        let strings = state.generator_strings();
        let want: Vec<PauliString> = vec!["XZ".parse()?, "ZX".parse()?];
        let shown: Vec<String> = state.generators().iter().map(|g| g.to_string()).collect();
        r.push(Check::new(
            "generators",
            strings.as_ref() == Some(&want),
            format!("generators [{}]", shown.join(", ")),
        ));

        let expanded = state.expand();
        let expected = sum("0.25*II + 0.25*XZ + 0.25*YY + 0.25*ZX");
        r.push(Check::new(
            "expansion",
            expanded == expected,
            format!("expanded {expanded}"),
        ));

        let rho = sum_to_dense(&expanded)?;
        let eig = hermitian_eigenvalues(&rho);
        let want_eig = [0.0, 0.0, 0.0, 1.0];
        let eig_err = eig
            .iter()
            .zip(want_eig)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let trace = expanded.trace().re;
        r.push(Check::new(
            "rank-one-projector",
            eig_err <= DENSE_TOL && (trace - 1.0).abs() <= DENSE_TOL,
            format!("eigenvalues {eig:?}, trace {trace}"),
        ));

        let registry = BackendRegistry::standard(ctx.rules.clone());
        let observables: Vec<(String, PauliSum)> = ["XZ", "ZX", "YY"]
            .iter()
            .map(|t| (t.to_string(), sum(t)))
            .collect();
        let c = Circuit::from_gates(2, vec![GateOp::cz(0, 1)])?;
        let cmp = registry.compare(&[], &c, &InitialState::plus(2), &observables)?;
        let off: Vec<String> = cmp
            .rows
            .iter()
            .flat_map(|row| {
                cmp.backends
                    .iter()
                    .zip(&row.values)
                    .filter(|(_, v)| (*v - 1.0).norm() > AGREEMENT_TOL)
                    .map(move |(b, v)| format!("{b}: <{}> = {v}", row.observable))
            })
            .collect();
        r.push(
            Check::new(
                "stabilizer-expectations",
                off.is_empty(),
                format!("<XZ>, <ZX>, <YY> = 1 on {} backends", cmp.backends.len()),
            )
            .with_witnesses(off),
        );
        r.set_data("generators", shown);
        r.set_data("expanded", expanded.to_string());
        r.set_data("eigenvalues", eig);
        Ok(r)
    }
}

/// `PHASE(φ)` on qubit 0 of the CZ state: one factor changes, the sign of
/// its `XZ` term follows `cos φ`, and the kick location is hidden in a Bell
/// pair.
pub struct BellPhaseKick;

impl Scenario for BellPhaseKick {
    fn name(&self) -> &'static str {
        "bell-phase-kick"
    }

    fn describe(&self) -> &'static str {
        "phase kick on one qubit of an entangled pair: factor provenance and hidden location"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let phi = ctx.options.phi.unwrap_or(PI);
        let kick = GateOp::phase(0, phi);
        let mut r = Report::new(self.name());
        let before = cz_state(&ctx.rules)?;
        let after = before.evolve_with(&kick, &ctx.rules)?;
        let changed = crate::product_form::FactoredState::changed_factors(&before, &after)?;
        r.push(Check::new(
            "changed-factors",
            changed == BTreeSet::from([0]),
            format!("changed factors {changed:?}"),
        ));

        let xz = after.generators()[0].coefficient(&"XZ".parse()?);
        let sign_ok = (xz.re - phi.cos()).abs() <= DENSE_TOL && xz.im.abs() <= DENSE_TOL;
        r.push(Check::new(
            "factor-sign",
            sign_ok,
            format!(
                "factor 0 = {}, XZ coefficient {:.12}",
                after.generators()[0],
                xz.re
            ),
        ));

        let expanded = after.expand();
        let psi = run_circuit(
            &Circuit::from_gates(2, vec![GateOp::cz(0, 1), kick.clone()])?,
            &InitialState::plus(2).state_vector()?,
        )?;
        let diff = max_abs_diff(&sum_to_dense(&expanded)?, &psi.projector()?);
        r.push(Check::new(
            "dense-agreement",
            diff <= DENSE_TOL,
            format!("expanded vs dense projector {diff:.3e}"),
        ));
        if phi == PI {
            let want = sum("0.25*II - 0.25*XZ - 0.25*YY + 0.25*ZX");
            r.push(Check::new(
                "expansion-at-pi",
                expanded == want,
                format!("expanded {expanded}"),
            ));
        }

        let c0 = Circuit::from_gates(2, vec![GateOp::phase(0, phi)])?;
        let c1 = Circuit::from_gates(2, vec![GateOp::phase(1, phi)])?;
        let ind = indistinguishability_check(&c0, &c1, &InitialState::bell(), &ctx.rules)?;
        r.push(Check::new(
            "kick-location-hidden",
            ind.passed() && ind.provenance_differs,
            format!(
                "{}: overlap {:.12}, provenance differs {}, expanded diff {:.3e}",
                ind.verdict(),
                ind.overlap,
                ind.provenance_differs,
                ind.expanded_diff
            ),
        ));
        r.set_data("phi", phi);
        r.set_data(
            "factors",
            after
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
        );
        r.set_data("expanded", expanded.to_string());
        r.set_data("indistinguishability", &ind);
        Ok(r)
    }
}

pub struct DataHiding;

impl Scenario for DataHiding {
    fn name(&self) -> &'static str {
        "data-hiding"
    }

    fn describe(&self) -> &'static str {
        "phase-kicked entangled pairs have maximally mixed single-qubit reductions"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let mut grid = vec![0.0, PI / 7.0, PI / 3.0, 1.0, PI];
        if let Some(phi) = ctx.options.phi {
            if !grid.contains(&phi) {
                grid.push(phi);
            }
        }
        data_hiding_check(&grid)
    }
}

fn random_setting<R: Rng>(rng: &mut R) -> Setting {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-6 {
            return Setting {
                x: v[0] / norm,
                y: v[1] / norm,
                z: v[2] / norm,
            };
        }
    }
}

/// CHSH at optimal settings, a random-settings sweep against the Tsirelson
/// bound, and product states against the classical bound.
pub struct Chsh;

impl Scenario for Chsh {
    fn name(&self) -> &'static str {
        "chsh"
    }

    fn describe(&self) -> &'static str {
        "CHSH value of the Bell state versus random settings and product states"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let sweeps = ctx.options.samples.unwrap_or(10_000);
        let phi = ctx.options.phi.unwrap_or(PI / 3.0);
        let mut r = Report::new(self.name());
        let bell = InitialState::bell().state_vector()?;
        let [a, a2, b, b2] = optimal_settings();
        let optimal = chsh_value(&bell, &a, &a2, &b, &b2)?;
        r.push(Check::new(
            "optimal-settings",
            (optimal - TSIRELSON).abs() <= CHSH_TOL,
            format!("S = {optimal:.12} against 2*sqrt(2) = {TSIRELSON:.12}"),
        ));

        let mut kicked = Vec::new();
        for q in 0..2 {
            let c = Circuit::from_gates(2, vec![GateOp::phase(q, phi)])?;
            kicked.push(max_chsh(&run_circuit(&c, &bell)?)?);
        }
        r.push(Check::new(
            "kicked-optimum",
            kicked.iter().all(|v| (v - TSIRELSON).abs() <= CHSH_TOL),
            format!(
                "best S after PHASE({phi}) on qubit 0 / 1: {:.12} / {:.12}",
                kicked[0], kicked[1]
            ),
        ));

        let mut states: Vec<(String, StateVector)> = vec![("bell".into(), bell.clone())];
        let mut rng = ctx.rng(0);
        for _ in 0..4 {
            let c = random_circuit(&mut rng, 2, 12)?;
            let s = random_product_state(&mut rng, 2);
            states.push((format!("random({s})"), run_circuit(&c, &s.state_vector()?)?));
        }
        let mut products: Vec<(String, StateVector)> =
            vec![("00".into(), "00".parse::<InitialState>()?.state_vector()?)];
        for _ in 0..4 {
            let s = random_product_state(&mut rng, 2);
            products.push((s.to_string(), s.state_vector()?));
        }

        let settings: Vec<[Setting; 4]> = (0..sweeps)
            .map(|_| [0; 4].map(|_| random_setting(&mut rng)))
            .collect();
        let sweep = |psi: &StateVector| -> Result<f64> {
            settings
                .par_iter()
                .map(|[a, a2, b, b2]| chsh_value(psi, a, a2, b, b2).map(f64::abs))
                .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
        };
        let mut worst_entangled = Vec::new();
        for (name, psi) in &states {
            let m = sweep(psi)?;
            if m > TSIRELSON + CHSH_TOL {
                worst_entangled.push(format!("{name}: {m}"));
            }
        }
        let mut worst_product = Vec::new();
        let mut product_max = 0.0_f64;
        for (name, psi) in &products {
            let m = sweep(psi)?;
            product_max = product_max.max(m);
            if m > 2.0 + CHSH_TOL {
                worst_product.push(format!("{name}: {m}"));
            }
        }
        r.push(
            Check::new(
                "tsirelson-bound",
                worst_entangled.is_empty(),
                format!(
                    "{} states x {sweeps} random settings, |S| <= 2*sqrt(2)",
                    states.len()
                ),
            )
            .with_witnesses(worst_entangled),
        );
        r.push(
            Check::new(
                "product-bound",
                worst_product.is_empty(),
                format!(
                    "{} product states, largest |S| = {product_max:.12}",
                    products.len()
                ),
            )
            .with_witnesses(worst_product),
        );
        r.set_data("optimal", optimal);
        r.set_data("settings", optimal_settings());
        r.set_data("random_settings", sweeps);
        Ok(r)
    }
}

/// Exhaustive two-qubit audit over stabilizer states plus seeded random
/// audits on larger registers.
pub struct EinsteinAudit;

fn single_qubit_gates(q: usize) -> Vec<GateOp> {
    vec![
        GateOp::h(q),
        GateOp::s(q),
        GateOp::x(q),
        GateOp::y(q),
        GateOp::z(q),
        GateOp::phase(q, PI / 7.0),
        GateOp::phase(q, PI / 3.0),
        GateOp::phase(q, PI),
    ]
}

impl Scenario for EinsteinAudit {
    fn name(&self) -> &'static str {
        "einstein-audit"
    }

    fn describe(&self) -> &'static str {
        "local gates leave remote observables, factors and reduced states untouched"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let qubits = ctx.options.qubits.unwrap_or(4);
        if !(2..=8).contains(&qubits) {
            return Err(Error::InvalidArgument(format!(
                "einstein-audit needs 2..=8 qubits, got {qubits}"
            )));
        }
        let seeds = ctx.options.seeds.unwrap_or(50);
        let depth = ctx.options.depth.unwrap_or(10);
        let mut r = Report::new(self.name());

        let states = stabilizer_states(2)?;
        let gates = single_qubit_gates(0);
        let region = BTreeSet::from([0]);
        let empty = Circuit::new(2);
        let failures: Vec<String> = states
            .par_iter()
            .map(|s| -> Result<Vec<String>> {
                let mut out = Vec::new();
                for g in &gates {
                    let a = einstein_locality_audit(&empty, g, &region, s, &ctx.rules)?;
                    for c in a.checks().into_iter().filter(|c| !c.passed) {
                        out.push(format!("{s} / {g}: {} {}", c.name, c.detail));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        r.push(
            Check::new(
                "exhaustive-two-qubit",
                failures.is_empty(),
                format!(
                    "{} stabilizer states x {} gates on qubit 0",
                    states.len(),
                    gates.len()
                ),
            )
            .with_witnesses(failures),
        );

        let failures: Vec<String> = (0..seeds as u64)
            .into_par_iter()
            .map(|seed| -> Result<Vec<String>> {
                let mut rng = ctx.rng(seed + 1);
                let n = rng.random_range(2..=qubits);
                let initial = random_stabilizer_state(&mut rng, n, 3 * n)?;
                let prefix = random_circuit(&mut rng, n, depth)?;
                let g = random_circuit(&mut rng, n, 1)?.gates()[0].clone();
                let mut region: BTreeSet<usize> = g.support().iter().copied().collect();
                region.extend((0..n).filter(|_| rng.random_bool(0.25)));
                let a = einstein_locality_audit(&prefix, &g, &region, &initial, &ctx.rules)?;
                Ok(a.checks()
                    .into_iter()
                    .filter(|c| !c.passed)
                    .map(|c| format!("seed {seed} {g} region {region:?}: {} {}", c.name, c.detail))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        r.push(
            Check::new(
                "random-audits",
                failures.is_empty(),
                format!("{seeds} seeded audits, up to {qubits} qubits, prefix depth {depth}"),
            )
            .with_witnesses(failures),
        );

        let c = Circuit::from_gates(2, vec![GateOp::cz(0, 1)])?;
        let example = einstein_locality_audit(
            &c,
            &GateOp::phase(0, PI),
            &region,
            &InitialState::plus(2),
            &ctx.rules,
        )?;
        r.set_data("example", &example);
        Ok(r)
    }
}

pub struct ClassicalCollision;

impl Scenario for ClassicalCollision {
    fn name(&self) -> &'static str {
        "classical-collision"
    }

    fn describe(&self) -> &'static str {
        "elastic collision of two particles builds correlations from a product ensemble"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let config = EnsembleConfig {
            samples: ctx.options.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: ctx.options.seed,
            ..Default::default()
        };
        collision_report(&config, 10.0)
    }
}

/// Seeded random circuits evaluated by every backend.
pub struct PictureEquivalence;

#[derive(Serialize)]
struct SeedResult {
    seed: u64,
    qubits: usize,
    initial: String,
    expectation_spread: f64,
    dense_diff: f64,
}

impl Scenario for PictureEquivalence {
    fn name(&self) -> &'static str {
        "picture-equivalence"
    }

    fn describe(&self) -> &'static str {
        "Schrodinger, Heisenberg and product-form backends agree on random circuits"
    }

    fn run(&self, ctx: &ScenarioContext) -> Result<Report> {
        let qubits = ctx.options.qubits.unwrap_or(5);
        if !(1..=8).contains(&qubits) {
            return Err(Error::InvalidArgument(format!(
                "picture-equivalence needs 1..=8 qubits, got {qubits}"
            )));
        }
        let depth = ctx.options.depth.unwrap_or(20);
        let seeds = ctx.options.seeds.unwrap_or(100);
        let registry = BackendRegistry::standard(ctx.rules.clone());
        let results: Vec<SeedResult> = (0..seeds as u64)
            .into_par_iter()
            .map(|seed| -> Result<SeedResult> {
                let mut rng = ctx.rng(seed);
                let n = rng.random_range(1..=qubits);
                let c = random_circuit(&mut rng, n, depth)?;
                let initial = random_product_state(&mut rng, n);
                let observables = (0..10)
                    .map(|k| Ok((format!("o{k}"), random_pauli(&mut rng, n)?.into())))
                    .collect::<Result<Vec<_>>>()?;
                let cmp = registry.compare(&[], &c, &initial, &observables)?;
                let expanded = initial.factored()?.evolve_circuit(&c, &ctx.rules)?.expand();
                let psi = run_circuit(&c, &initial.state_vector()?)?;
                Ok(SeedResult {
                    seed,
                    qubits: n,
                    initial: initial.to_string(),
                    expectation_spread: cmp.max_spread(),
                    dense_diff: max_abs_diff(&sum_to_dense(&expanded)?, &psi.projector()?),
                })
            })
            .collect::<Result<_>>()?;

        let spread = results
            .iter()
            .map(|s| s.expectation_spread)
            .fold(0.0, f64::max);
        let dense = results.iter().map(|s| s.dense_diff).fold(0.0, f64::max);
        let bad_spread: Vec<String> = results
            .iter()
            .filter(|s| s.expectation_spread > AGREEMENT_TOL)
            .map(|s| {
                format!(
                    "seed {} ({} qubits): spread {:.3e}",
                    s.seed, s.qubits, s.expectation_spread
                )
            })
            .collect();
        let bad_dense: Vec<String> = results
            .iter()
            .filter(|s| s.dense_diff > DENSE_TOL)
            .map(|s| {
                format!(
                    "seed {} ({} qubits): diff {:.3e}",
                    s.seed, s.qubits, s.dense_diff
                )
            })
            .collect();
        let mut r = Report::new(self.name());
        r.push(
            Check::new(
                "expectations",
                bad_spread.is_empty(),
                format!("{seeds} circuits, depth {depth}, up to {qubits} qubits; max discrepancy {spread:.3e}"),
            )
            .with_witnesses(bad_spread),
        );
        r.push(
            Check::new(
                "product-form-dense",
                bad_dense.is_empty(),
                format!("max entrywise deviation of expanded product form {dense:.3e}"),
            )
            .with_witnesses(bad_dense),
        );
        r.set_data("max_expectation_discrepancy", spread);
        r.set_data("max_dense_deviation", dense);
        r.set_data("backends", registry.names());
        r.set_data("per_seed", results);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Fault;

    fn ctx(options: ScenarioOptions) -> ScenarioContext {
        ScenarioContext::new(options, Arc::default())
    }

    #[test]
    fn registry_names() {
        let reg = ScenarioRegistry::standard();
        assert_eq!(
            reg.names(),
            [
                "bell-phase-kick",
                "cz-entangler",
                "data-hiding",
                "chsh",
                "einstein-audit",
                "classical-collision",
                "picture-equivalence"
            ]
        );
        let mut reg = reg;
        assert!(reg.register(Box::new(Chsh)).is_err());
    }

    #[test]
    fn quick_scenarios_pass() {
        let reg = ScenarioRegistry::standard();
        let opts = ScenarioOptions {
            seeds: Some(5),
            samples: Some(2000),
            ..Default::default()
        };
        for name in reg.names() {
            let r = reg.get(name).unwrap().run(&ctx(opts.clone())).unwrap();
            assert!(r.passed, "{}", r.to_markdown());
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn phase_kick_off_pi() {
        let r = BellPhaseKick
            .run(&ctx(ScenarioOptions {
                phi: Some(3.14159265),
                ..Default::default()
            }))
            .unwrap();
        assert!(r.passed, "{}", r.to_markdown());
        assert!(!r.checks.iter().any(|c| c.name == "expansion-at-pi"));
    }

    #[test]
    fn faulty_cz_rule_is_detected() {
        let faulty = ScenarioContext::new(
            ScenarioOptions {
                seeds: Some(10),
                ..Default::default()
            },
            Arc::new(ConjugationRules::with_fault(Fault::CzSign)),
        );
        assert!(!CzEntangler.run(&faulty).unwrap().passed);
        assert!(!PictureEquivalence.run(&faulty).unwrap().passed);
    }

    #[test]
    fn reports_are_deterministic() {
        let opts = ScenarioOptions {
            seeds: Some(8),
            ..Default::default()
        };
        let a = PictureEquivalence
            .run(&ctx(opts.clone()))
            .unwrap()
            .to_json();
        let b = PictureEquivalence.run(&ctx(opts)).unwrap().to_json();
        assert_eq!(a, b);
    }
}
