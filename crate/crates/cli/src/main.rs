//! `qlocal`: run named scenarios or compare backends on user-supplied inputs.
//!
//! Exit codes: 0 every check passed, 1 usage or input error, 2 a check
//! failed, 3 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use qlocal::backend::{BackendRegistry, Comparison};
use qlocal::circuit::parse_angle;
use qlocal::heisenberg::parse_observables;
use qlocal::{
    Check, Circuit, ConjugationRules, Error, Fault, InitialState, Report, ScenarioContext,
    ScenarioOptions, ScenarioRegistry,
};

const EXIT_PASS: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qlocal",
    version,
    about = "Locality scenarios for small qubit systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Directory for the JSON report and markdown summary.
    #[arg(long, default_value = "reports")]
    out_dir: PathBuf,

    /// Report format echoed to stdout; both files are always written.
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,

    /// Corrupt a conjugation rule to check that the scenarios notice.
    #[arg(long, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario and write its report.
    Scenario {
        name: String,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        seeds: Option<usize>,
        /// Phase angle in radians, e.g. `1.2` or `pi/3`.
        #[arg(long, value_parser = parse_phi, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evolve a circuit under every backend and compare expectations.
    Run {
        #[arg(long)]
        circuit: PathBuf,
        /// `0`/`1`/`+`/`-` per qubit, `bell`, or `stab:G1,G2,...`.
        #[arg(long, allow_hyphen_values = true)]
        initial: String,
        #[arg(long)]
        observables: PathBuf,
        /// Comma-separated subset of backends (default: all).
        #[arg(long, value_delimiter = ',')]
        backends: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List scenarios and backends.
    List,
}

fn parse_phi(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            });
        }
    };
    match dispatch(cli.command) {
        Ok(true) => ExitCode::from(EXIT_PASS),
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn rules(fault: Option<Fault>) -> Arc<ConjugationRules> {
    Arc::new(match fault {
        Some(f) => ConjugationRules::with_fault(f),
        None => ConjugationRules::standard(),
    })
}

fn dispatch(command: Command) -> Result<bool, Failure> {
    match command {
        Command::List => {
            println!("scenarios:");
            for s in ScenarioRegistry::standard().iter() {
                println!("  {:<22} {}", s.name(), s.describe());
            }
            println!("backends:");
            for b in BackendRegistry::standard(Arc::default()).iter() {
                println!("  {:<22} {}", b.name(), b.describe());
            }
            Ok(true)
        }
        Command::Scenario {
            name,
            qubits,
            depth,
            seeds,
            phi,
            samples,
            seed,
            output,
        } => {
            let registry = ScenarioRegistry::standard();
            let scenario = registry.get(&name).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown scenario `{name}`; expected one of: {}",
                    registry.names().join(", ")
                ))
            })?;
            let options = ScenarioOptions {
                qubits,
                depth,
                seeds,
                phi,
                samples,
                seed,
            };
            let ctx = ScenarioContext::new(options, rules(output.inject_fault));
            let report = scenario.run(&ctx)?;
            emit(&report, &output)
        }
        Command::Run {
            circuit,
            initial,
            observables,
            backends,
            output,
        } => {
            let initial: InitialState = initial
                .parse()
                .map_err(|e: Error| Failure::Usage(format!("--initial: {e}")))?;
            let circuit_text = read_input(&circuit)?;
            let circuit = Circuit::parse(&circuit_text, Some(initial.n()))
                .map_err(|e| Failure::Usage(format!("{}: {e}", circuit.display())))?;
            let obs_text = read_input(&observables)?;
            let observables = parse_observables(&obs_text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", observables.display())))?;
            let registry = BackendRegistry::standard(rules(output.inject_fault));
            let names: Vec<&str> = backends.iter().map(String::as_str).collect();
            let cmp = registry.compare(&names, &circuit, &initial, &observables)?;
            print!("{}", table(&cmp));
            let report = run_report(&cmp, &circuit, &initial);
            emit(&report, &output)
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() < 1e-12 {
        format!("{:.12}", z.re)
    } else {
        format!("{:.12}{:+.12}i", z.re, z.im)
    }
}

fn table(cmp: &Comparison) -> String {
    let mut header = vec!["observable".to_string()];
    header.extend(cmp.backends.iter().cloned());
    header.push("spread".into());
    let mut rows = vec![header];
    for row in &cmp.rows {
        let mut line = vec![row.observable.clone()];
        line.extend(row.values.iter().map(|v| fmt_complex(*v)));
        line.push(format!("{:.3e}", row.spread));
        rows.push(line);
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            cells.join("  ").trim_end().to_string() + "\n"
        })
        .collect()
}

fn run_report(cmp: &Comparison, circuit: &Circuit, initial: &InitialState) -> Report {
    let mut report = Report::new("run");
    let disagreeing: Vec<String> = cmp
        .rows
        .iter()
        .filter(|r| r.spread > qlocal::backend::AGREEMENT_TOL)
        .map(|r| format!("{}: spread {:.3e}", r.observable, r.spread))
        .collect();
    report.push(
        Check::new(
            "backend-agreement",
            disagreeing.is_empty(),
            format!(
                "{} observables on {}",
                cmp.rows.len(),
                cmp.backends.join(", ")
            ),
        )
        .with_witnesses(disagreeing),
    );
    let values: Vec<_> = cmp
        .rows
        .iter()
        .map(|r| {
            let by_backend: serde_json::Map<String, serde_json::Value> = cmp
                .backends
                .iter()
                .zip(&r.values)
                .map(|(b, v)| (b.clone(), serde_json::json!([v.re, v.im])))
                .collect();
            serde_json::json!({ "observable": r.observable, "values": by_backend, "spread": r.spread })
        })
        .collect();
    report.set_data("initial", initial.to_string());
    report.set_data("circuit", circuit.to_string());
    report.set_data("expectations", values);
    report
}

fn emit(report: &Report, output: &OutputArgs) -> Result<bool, Failure> {
    let json = report.to_json();
    let md = report.to_markdown();
    let write = |ext: &str, body: &str| -> Result<(), Failure> {
        let path = output.out_dir.join(format!("{}.{ext}", report.title));
        fs::write(&path, body)
            .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
    };
    fs::create_dir_all(&output.out_dir).map_err(|e| {
        Failure::Internal(format!("cannot create {}: {e}", output.out_dir.display()))
    })?;
    write("json", &json)?;
    write("md", &md)?;
    match output.format {
        Format::Json => println!("{json}"),
        Format::Md => print!("{md}"),
    }
    Ok(report.passed)
}
