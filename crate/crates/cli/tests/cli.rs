use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qlocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlocal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn cz_circuit_stabilizers_from_every_backend() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = write(dir.path(), "cz.txt", "# entangler\nqubits 2\nCZ 0 1\n");
    let obs = write(dir.path(), "obs.txt", "XZ\nZX\nYY\n");
    let out_dir = dir.path().join("out");
    let o = qlocal(&[
        "run",
        "--circuit",
        &circuit,
        "--initial",
        "++",
        "--observables",
        &obs,
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(
        header.contains("schrodinger")
            && header.contains("heisenberg")
            && header.contains("product-form")
    );
    for name in ["XZ", "ZX", "YY"] {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        assert_eq!(line.matches("1.000000000000").count(), 3, "{line}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("run.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(out_dir.join("run.md").exists());
}

#[test]
fn empty_circuit_single_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = write(dir.path(), "empty.txt", "");
    let obs = write(dir.path(), "obs.txt", "z = Z\n");
    let o = qlocal(&[
        "run",
        "--circuit",
        &circuit,
        "--initial",
        "0",
        "--observables",
        &obs,
        "--backends",
        "schrodinger,heisenberg",
        "--format",
        "json",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("z ")).unwrap();
    assert_eq!(line.matches("1.000000000000").count(), 2, "{line}");
    assert!(text.contains("\"passed\": true"));
}

#[test]
fn malformed_gate_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = write(dir.path(), "bad.txt", "qubits 2\nH 0\nFOO 1\n");
    let obs = write(dir.path(), "obs.txt", "ZZ\n");
    let o = qlocal(&[
        "run",
        "--circuit",
        &circuit,
        "--initial",
        "00",
        "--observables",
        &obs,
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn dimension_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = write(dir.path(), "c.txt", "qubits 3\nH 0\n");
    let obs = write(dir.path(), "obs.txt", "ZZ\n");
    let o = qlocal(&[
        "run",
        "--circuit",
        &circuit,
        "--initial",
        "00",
        "--observables",
        &obs,
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        qlocal(&["scenario", "no-such-thing"]).status.code(),
        Some(1)
    );
    assert_eq!(qlocal(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        qlocal(&["scenario", "chsh", "--phi", "abc"]).status.code(),
        Some(1)
    );
    assert_eq!(qlocal(&["--help"]).status.code(), Some(0));
}

#[test]
fn list_names_scenarios_and_backends() {
    let o = qlocal(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "cz-entangler",
        "picture-equivalence",
        "product-form",
        "heisenberg",
    ] {
        assert!(text.contains(name), "{name}");
    }
    assert!(!text.contains("inject"));
}

#[test]
fn scenario_reports_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = qlocal(&[
            "scenario",
            "picture-equivalence",
            "--seeds",
            "10",
            "--seed",
            "7",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    for file in ["picture-equivalence.json", "picture-equivalence.md"] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap()
        );
    }
}

#[test]
fn phase_kick_accepts_symbolic_and_negative_angles() {
    let dir = tempfile::tempdir().unwrap();
    for phi in ["3.14159265", "-pi/3", "pi"] {
        let o = qlocal(&[
            "scenario",
            "bell-phase-kick",
            "--phi",
            phi,
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{phi}: {}", stdout(&o));
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("bell-phase-kick.json")).unwrap())
            .unwrap();
    assert_eq!(
        report["data"]["expanded"],
        "0.25*II - 0.25*XZ - 0.25*YY + 0.25*ZX"
    );
}
