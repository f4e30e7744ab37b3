use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pareto_forge::{dominates, ProblemId, ProblemSpec};
use tempfile::TempDir;

fn pareto_forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pareto-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn run_writes_all_outputs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let status = pareto_forge(&[
        "run", "--problem", "zdt1", "--algo", "sslpsa", "--seed", "7", "--generations", "15",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    for file in ["front.csv", "decisions.csv", "trace.csv", "result.json"] {
        assert!(out.join(file).exists(), "{file}");
    }

    let (header, front) = read_rows(&out.join("front.csv"));
    assert_eq!(header, "f1,f2");
    for a in &front {
        for b in &front {
            assert!(!dominates(a, b).unwrap());
        }
    }
    for w in front.windows(2) {
        assert!(w[0][0] <= w[1][0]);
    }

    let (header, decisions) = read_rows(&out.join("decisions.csv"));
    assert!(header.starts_with("x1,x2,"));
    assert_eq!(decisions.len(), front.len());
    let problem = ProblemSpec::new(ProblemId::Zdt1);
    for (x, f) in decisions.iter().zip(&front) {
        assert_eq!(problem.evaluate(&x.clone().into()).unwrap().0, *f);
    }

    let (header, trace) = read_rows(&out.join("trace.csv"));
    assert_eq!(header, "generation,archive_size,n_qabc,n_tbga,xi");
    assert_eq!(trace.len(), 15);
}

#[test]
fn result_config_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    let status = pareto_forge(&[
        "run", "--problem", "sch", "--algo", "nsga2", "--seed", "3", "--generations", "10", "--pop", "40",
        "--out", first.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("result.json")).unwrap()).unwrap();
    let mut config = json["config"].clone();
    let second = dir.path().join("second");
    config["out"] = serde_json::Value::String(second.to_str().unwrap().into());
    let config_path = dir.path().join("config.json");
    fs::write(&config_path, config.to_string()).unwrap();

    let status = pareto_forge(&["run", "--config", config_path.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(
        fs::read(first.join("front.csv")).unwrap(),
        fs::read(second.join("front.csv")).unwrap()
    );
    assert_eq!(json["final_population"].as_array().unwrap().len(), 40);
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let config_path = dir.path().join("config.json");
    fs::write(&config_path, r#"{"problem": "zdt2", "generations": 50, "xi": 0.9}"#).unwrap();
    let out = dir.path().join("out");
    let status = pareto_forge(&[
        "run", "--config", config_path.to_str().unwrap(), "--generations", "4",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let (_, trace) = read_rows(&out.join("trace.csv"));
    assert_eq!(trace.len(), 4);
    // ξ = 0.9 from the file: 3 QABC, 27 TBGA.
    assert_eq!(trace[0][2], 3.0);
    assert_eq!(trace[0][3], 27.0);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(pareto_forge(&["run", "--problem", "bogus"]).status.code(), Some(2));
    assert_eq!(pareto_forge(&["run"]).status.code(), Some(2));
    assert_eq!(pareto_forge(&["run", "--problem", "zdt1", "--xi", "1.5"]).status.code(), Some(2));
    assert_eq!(pareto_forge(&["frobnicate"]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"problem": "zdt1", "unknown_key": 1}"#).unwrap();
    let output = pareto_forge(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());

    let missing = dir.path().join("missing.json");
    assert_eq!(pareto_forge(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let out = blocker.join("run");
    let status = pareto_forge(&["run", "--problem", "sch", "--generations", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn compare_writes_metrics_and_summary() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cmp");
    let status = Command::new(env!("CARGO_BIN_EXE_pareto-forge"))
        .args(["compare", "--problem", "sch", "--runs", "3", "--generations", "10", "--seed", "100"])
        .args(["--out", out.to_str().unwrap()])
        .env("PARETO_FORGE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));

    let text = fs::read_to_string(out.join("metrics.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem,algorithm,run,seed,gamma,delta,igd,spread,archive_size,wall_time"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    let seeds: Vec<&str> = rows.iter().map(|r| r[3]).collect();
    assert_eq!(seeds, ["100", "101", "102", "100", "101", "102"]);
    assert_eq!(rows[0][1], "sslpsa");
    assert_eq!(rows[3][1], "nsga2");

    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(summary.starts_with("problem,algorithm,runs,gamma_mean,gamma_std,"));
}

#[test]
fn single_run_summary_has_zero_std() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("one");
    let status = pareto_forge(&[
        "compare", "--problem", "fon", "--algo", "sslpsa", "--runs", "1", "--generations", "5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    for std_column in [4, 6, 8, 10] {
        assert_eq!(row[std_column], "0");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let status = Command::new(env!("CARGO_BIN_EXE_pareto-forge"))
        .args(["compare", "--problem", "sch", "--runs", "1", "--generations", "1"])
        .env("PARETO_FORGE_THREADS", "zero")
        .current_dir(TempDir::new().unwrap().path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn front_export() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("zdt1.csv");
    let status = pareto_forge(&["front", "--problem", "zdt1", "-k", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "f1,f2\n0,1\n0.5,0.2928932188134524\n1,0\n"
    );

    let path = dir.path().join("fon.csv");
    let status = pareto_forge(&["front", "--problem", "fon", "--points", "1000", "--out", path.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let (header, rows) = read_rows(&path);
    assert_eq!(header, "f1,f2");
    assert_eq!(rows.len(), 1000);
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            assert!(!dominates(a, b).unwrap() && !dominates(b, a).unwrap());
        }
    }

    let stdout = pareto_forge(&["front", "--problem", "sch", "-k", "2"]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), "f1,f2\n0,4\n4,0\n");
    assert_eq!(pareto_forge(&["front", "--problem", "sch", "-k", "1"]).status.code(), Some(2));
}
