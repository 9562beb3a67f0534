use std::process::{Command, Output};

use graphon_cheeger::StepGraphon;
use graphon_cheeger_cli::{emit_graphon, load_graphon, Format, Report};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_graphon-cheeger"));
    cmd.env_remove("GRAPHON_CHEEGER_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Report {
    Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn spectrum_of_the_constant_graphon() {
    let out = run(&["spectrum", "--preset", "constant:1", "--n", "8", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let s = report(&out).spectrum.unwrap();
    let expected = [0.0, 1.0, 1.0];
    for (got, want) in s.discrete.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got}");
    }
    assert_eq!(s.graphon.len(), 3);
}

#[test]
fn spectrum_beyond_n_is_one() {
    let out = run(&["spectrum", "--preset", "product", "--n", "2", "--k", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let s = report(&out).spectrum.unwrap();
    assert_eq!(s.discrete.len(), 2);
    assert_eq!(&s.graphon[2..], &[1.0, 1.0]);
}

#[test]
fn oracle_halves_the_constant_graphon() {
    let out = run(&["oracle", "--preset", "constant:1", "--n", "8", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let o = report(&out).oracle.unwrap();
    assert!((o.h_exact_cellwise - 0.5).abs() < 1e-12);
}

#[test]
fn partition_verifies_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("p.json");
    let csv = dir.path().join("p.csv");
    let out = run(&[
        "partition",
        "--preset",
        "sbm:2,1.0,0.05",
        "--n",
        "32",
        "--k",
        "2",
        "--seed",
        "7",
        "--verify",
        "--out",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = Report::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let verdict = r.verify.unwrap();
    assert!(verdict.passed);
    assert!(verdict.checks.iter().all(|c| c.passed));
    let p = r.partition.unwrap();
    assert_eq!(p.sets.len(), 2);
    assert!(p.h_alg <= p.bound);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 3);

    let out = run(&[
        "verify",
        "--preset",
        "sbm:2,1.0,0.05",
        "--n",
        "32",
        "--result",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).verify.unwrap().passed);
}

#[test]
fn tampered_result_fails_verification_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("p.json");
    let out = run(&[
        "partition",
        "--preset",
        "constant:1",
        "--n",
        "8",
        "--k",
        "2",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    value["partition"]["h_alg"] = serde_json::json!(0.01);
    std::fs::write(&json, value.to_string()).unwrap();
    let out = run(&[
        "verify",
        "--preset",
        "constant:1",
        "--n",
        "8",
        "--result",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["spectrum", "--n", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["spectrum", "--preset", "bogus", "--n", "4", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["spectrum", "--preset", "constant:1", "--n", "4", "--k", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let out = run(&["spectrum", "--preset", "sbm:2,1,0", "--n", "4", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "domain");

    assert_eq!(
        run(&[
            "spectrum",
            "--preset",
            "sbm:3,1,0.1",
            "--n",
            "4",
            "--k",
            "2"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(&["oracle", "--preset", "constant:1", "--n", "20", "--k", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn disconnected_input_allowed_only_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    std::fs::write(&path, "2\n1 0\n0 1\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["oracle", "--input", p, "--k", "2"]).status.code(),
        Some(1)
    );
    let out = run(&[
        "oracle",
        "--input",
        p,
        "--k",
        "2",
        "--require-connected",
        "false",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).oracle.unwrap().h_exact_cellwise, 0.0);
}

#[test]
fn file_inputs_in_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let w = StepGraphon::new(
        vec![
            vec![0.9, 0.2, 0.1],
            vec![0.2, 0.8, 0.3],
            vec![0.1, 0.3, 0.7],
        ],
        true,
    )
    .unwrap();
    let mut reports = Vec::new();
    for (format, name) in [
        (Format::DenseText, "w.txt"),
        (Format::Csv, "w.csv"),
        (Format::Json, "w.json"),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, emit_graphon(&w, format).unwrap()).unwrap();
        assert_eq!(load_graphon(&path, format, true).unwrap(), w);
        let out = run(&["spectrum", "--input", path.to_str().unwrap(), "--k", "3"]);
        assert_eq!(out.status.code(), Some(0));
        reports.push(report(&out).spectrum.unwrap());
    }
    assert!(reports.windows(2).all(|p| p[0] == p[1]));
}

#[test]
fn csv_entry_out_of_range_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    std::fs::write(&path, "a,b\n1,1.5\n1.5,1\n").unwrap();
    let out = run(&["spectrum", "--input", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    let message = err["error"]["message"].as_str().unwrap();
    assert!(
        message.contains("line 2") && message.contains("1.5"),
        "{message}"
    );
}

#[test]
fn sweep_profile_is_sorted_and_contains_the_minimizer() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(&[
        "sweep",
        "--preset",
        "sbm:2,1,0.1",
        "--n",
        "10",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = report(&out).sweep.unwrap();
    assert!(s.expansion <= s.bound + 1e-10);

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let rows: Vec<(f64, usize, Option<f64>)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().ok(),
            )
        })
        .collect();
    assert!(rows.windows(2).all(|p| p[0].0 > p[1].0));
    let best = rows
        .iter()
        .filter_map(|r| r.2)
        .fold(f64::INFINITY, f64::min);
    let at = rows.iter().find(|r| r.2 == Some(best)).unwrap();
    assert_eq!(at.1, s.set.len());
    assert!((best - s.expansion).abs() < 1e-12);
}

#[test]
fn sweep_of_a_function_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "1, 1, 0.5\n0 0 0\n").unwrap();
    let out = run(&[
        "sweep",
        "--preset",
        "constant:1",
        "--n",
        "6",
        "--function",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = report(&out).sweep.unwrap();
    assert_eq!(s.function, "file");
    assert_eq!(s.set, vec![0, 1, 2]);
    assert!((s.expansion - 0.5).abs() < 1e-12);
}

#[test]
fn seed_from_environment() {
    let base = ["partition", "--preset", "mean", "--n", "12", "--k", "3"];
    let with_flag = run(&[&base[..], &["--seed", "11"]].concat());
    let with_env = bin()
        .args(base)
        .env("GRAPHON_CHEEGER_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(with_flag.status.code(), Some(0));
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_eq!(report(&with_env).partition.unwrap().seed, 11);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "partition",
        "--preset",
        "min",
        "--n",
        "16",
        "--k",
        "3",
        "--seed",
        "5",
        "--verify",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
