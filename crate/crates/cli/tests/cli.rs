use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qwalk_cli::dataset::Dataset;

fn qwalk(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn numeric_body(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    text.lines().skip(1).collect::<Vec<_>>().join("\n")
}

#[test]
fn reproduce_all_writes_every_dataset_and_a_consistent_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwalk(&["reproduce-all", "--out", "run1"], dir.path());
    let run = dir.path().join("run1");
    for name in [
        "fig2.csv", "fig3a.csv", "fig3b.csv", "fig4.csv", "fig5.csv", "fig6a.csv", "fig6b.csv", "table1.csv",
        "table2.csv",
    ] {
        let text = fs::read_to_string(run.join(name)).unwrap();
        Dataset::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(run.join("summary.json")).unwrap()).unwrap();
    let checks = summary["checks"].as_array().unwrap();
    assert!(checks.len() >= 30);
    for c in checks {
        for key in ["check_name", "expected", "observed", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "{c} lacks {key}");
        }
    }
    let all_pass = checks.iter().all(|c| c["pass"] == true);
    assert_eq!(summary["pass"], all_pass);
    assert_eq!(out.status.success(), all_pass, "exit status must mirror the summary");
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));

    let stdout = String::from_utf8_lossy(&out.stdout);
    for id in 1..=10 {
        assert!(stdout.contains(&format!("criterion {id:>2} ")), "{stdout}");
    }

    qwalk(&["reproduce-all", "--out", "run2"], dir.path());
    for entry in fs::read_dir(&run).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().ends_with(".csv") {
            let second = dir.path().join("run2").join(&name);
            assert_eq!(numeric_body(&run.join(&name)), numeric_body(&second), "{name:?} differs between runs");
        }
    }
}

#[test]
fn invalid_instance_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.conf"), "n1 = 4\nk1 = 5\n").unwrap();
    let out = qwalk(&["evolve", "--config", "bad.conf", "--out", "x.csv"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("k1 = 5 exceeds n1 = 4"));

    let out = qwalk(&["reproduce-all", "--k1", "600", "--out", "rep"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k1 = 600 exceeds n1 = 512"));

    let out = qwalk(&["overlap", "--gamma", "-1", "--out", "y.csv"], dir.path());
    assert!(!out.status.success());

    let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, vec![std::ffi::OsString::from("bad.conf")], "no partial output may remain");
}

#[test]
fn json_config_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("inst.json"), r#"{"n1": 40, "n2": 20, "k1": 3, "k2": 5, "walk": "adjacency"}"#).unwrap();
    let out = qwalk(&["evolve", "--config", "inst.json", "--k2", "2", "--points", "11", "--out", "e.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let data = Dataset::parse(&fs::read_to_string(dir.path().join("e.csv")).unwrap()).unwrap();
    let inst = data.metadata.instance.unwrap();
    assert_eq!((inst.n1(), inst.n2(), inst.k1(), inst.k2()), (40, 20, 3, 2));
    assert_eq!(data.rows().len(), 11);
    assert_eq!(data.metadata.parameters["walk"], "adjacency");
}

#[test]
fn compare_to_stdout_matches_the_crossover() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwalk(&["compare", "--n2", "1024", "--k1", "3", "--k2", "1", "--vary", "k2", "--to", "40"], dir.path());
    assert!(out.status.success());
    let data = Dataset::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let k = data.numbers("k2").unwrap();
    let verdicts = data.column("verdict").unwrap();
    let first_laplacian = k
        .iter()
        .zip(verdicts)
        .find(|(_, v)| format!("{v:?}").contains("laplacian_faster") || format!("{v:?}").contains("tie"))
        .map(|(k, _)| *k);
    assert_eq!(first_laplacian, Some(18.0));
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qwalk"))
            .args(["detune", "--points", "5"])
            .env("QWALK_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success());
    let body = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&one), body(&four));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn remaining_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["predict"],
        vec!["coupon", "--k1", "1", "--k2", "0"],
        vec!["critical-gamma", "--n1", "128", "--n2", "64", "--k1", "2", "--k2", "2"],
        vec!["detune", "--eps=-1e-4,1e-4"],
        vec!["overlap", "--walk", "adjacency", "--points", "20"],
    ] {
        let out = qwalk(&args, dir.path());
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        Dataset::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    }
}
