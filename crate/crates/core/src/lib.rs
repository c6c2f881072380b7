//! Small-system qubit simulation in three equivalent pictures, with locality
//! analyses and a classical phase-space analogue.

pub mod backend;
pub mod circuit;
pub mod classical;
pub mod error;
pub mod heisenberg;
pub mod initial;
pub mod locality;
pub mod pauli;
pub mod product_form;
pub mod random;
pub mod report;
pub mod rules;
pub mod scenario;
pub mod schrodinger;

pub use backend::{Backend, BackendRegistry};
pub use circuit::{Circuit, GateKind, GateOp};
pub use error::{Error, Result};
pub use heisenberg::ObservableFrame;
pub use initial::{InitialState, LocalState};
pub use pauli::{DenseMatrix, Pauli, PauliString, PauliSum};
pub use product_form::{FactoredState, GateRecord};
pub use report::{Check, Report};
pub use rules::{ConjugationRules, Direction, Fault};
pub use scenario::{Scenario, ScenarioContext, ScenarioOptions, ScenarioRegistry};
pub use schrodinger::{run_circuit, StateVector};
