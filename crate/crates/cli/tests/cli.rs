use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_with_stdin(args, "")
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cornertree"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(stdout(&run(&["count", "132", "2 3 6 4 7 5 1"])).trim(), "7");
    let id = stdout(&run(&["gen", "10", "--kind", "identity"]));
    assert_eq!(stdout(&run_with_stdin(&["count", "1234"], &id)).trim(), "210");
    let v = json(&run(&["count", "12", "3,1,2", "--json"]));
    assert_eq!(v["count"], "1");
}

#[test]
fn count_agrees_with_oracle_on_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perms.txt");
    let perms = stdout(&run(&["gen", "40", "--seed", "5", "--count", "6"]));
    std::fs::write(&path, &perms).unwrap();
    let file = path.to_str().unwrap();
    for pattern in ["3241", "1324", "2413", "231"] {
        let fast = stdout(&run(&["count", pattern, "--file", file]));
        let oracle = stdout(&run(&["oracle", pattern, "--file", file]));
        let brute = stdout(&run(&["count", pattern, "--file", file, "--brute"]));
        assert_eq!(fast, oracle, "{pattern}");
        assert_eq!(brute, oracle, "{pattern}");
        assert_eq!(fast.lines().count(), 6);
    }
    for alg in ["3214", "brute"] {
        let alt = stdout(&run(&["count", "1324", "--file", file, "--algorithm", alg, "--m", "3"]));
        assert_eq!(alt, stdout(&run(&["oracle", "1324", "--file", file])));
    }
}

#[test]
fn profiles() {
    let v = json(&run(&["profile", "4", "1 2 3 4 5 6 7 8"]));
    let map = v.as_object().unwrap();
    assert_eq!(map.len(), 24);
    for (k, c) in map {
        assert_eq!(c, if k == "1234" { "70" } else { "0" }, "{k}");
    }
    let v = json(&run(&["profile", "3", "2 3 6 4 7 5 1"]));
    let total: u64 = v.as_object().unwrap().values().map(|c| c.as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 35);
    let pi = stdout(&run(&["gen", "10", "--seed", "11"]));
    let fast = json(&run_with_stdin(&["profile", "4"], &pi));
    let oracle = json(&run_with_stdin(&["oracle", "4", "--profile"], &pi));
    assert_eq!(fast, oracle);
    assert_eq!(code(&run(&["profile", "5", "1 2 3 4 5"])), 2);
}

#[test]
fn algebra_commands() {
    assert_eq!(stdout(&run(&["span", "4"])).trim(), "23");
    let v = json(&run(&["span", "3", "--json"]));
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["basis"].as_array().unwrap().len(), 6);
    assert_eq!(stdout(&run(&["expand", "R(NE)"])).trim(), r#"{"12":1}"#);
    assert_eq!(stdout(&run(&["solve", "3142", "4"])).trim(), "NotInSpan");
    let v = json(&run(&["solve", "3142", "4", "--json"]));
    assert_eq!(v["status"], "NotInSpan");
    let v = json(&run(&["solve", "213", "3", "--json"]));
    assert_eq!(v["status"], "Solved");
    let v = json(&run(&["solve", r#"{"213":1,"312":1}"#, "3"]));
    assert!(!v.as_array().unwrap().is_empty());
    assert_eq!(stdout(&run(&["trees", "2"])).lines().count(), 4);
    let v = json(&run(&["trees", "3", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), 26);
    assert_eq!(code(&run(&["expand", "R(NE"])), 2);
}

#[test]
fn tstar_and_tau() {
    let monotone: String = (0..50).map(|i| format!("{i},{}\n", 2 * i + 1)).collect();
    let v = json(&run_with_stdin(&["tstar"], &format!("x,y\n{monotone}")));
    assert_eq!(v["tstar_normalized"], 1.0);
    assert_eq!(v["tstar_normalized_exact"], "1");
    assert_eq!(v["tau"], 1.0);
    assert_eq!(v["n"], 50);
    assert!(v.get("pvalue").is_none());

    let v = json(&run_with_stdin(&["tau"], "1,3\n2,2\n3,1\n"));
    assert_eq!(v["tau_exact"], "-1");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sample.csv");
    let mut csv = String::from("id,a,b\n");
    for i in 0..40 {
        csv.push_str(&format!("{i},{},{}\n", (i * 7919) % 101, (i * 104729) % 211));
    }
    std::fs::write(&path, csv).unwrap();
    let file = path.to_str().unwrap();
    let args = ["tstar", file, "--x-col", "1", "--y-col", "2", "--pvalue", "200", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let single = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(stdout(&single), stdout(&a));
    let v = json(&a);
    let p = v["pvalue"].as_f64().unwrap();
    assert!(p > 0.0 && p <= 1.0);
    assert_eq!(code(&run(&["tstar", file, "--pvalue", "10"])), 2);
}

#[test]
fn independent_sample_is_near_one_third() {
    let xs = stdout(&run(&["gen", "1000", "--seed", "1"]));
    let ys = stdout(&run(&["gen", "1000", "--seed", "2"]));
    let csv: String = xs
        .split_whitespace()
        .zip(ys.split_whitespace())
        .map(|(x, y)| format!("{x},{y}\n"))
        .collect();
    let v = json(&run_with_stdin(&["tstar"], &csv));
    let t = v["tstar_normalized"].as_f64().unwrap();
    assert!((t - 0.33).abs() <= 0.02, "{t}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["count", "12", "1 1"])), 2);
    assert_eq!(code(&run(&["count", "12", "1 x"])), 2);
    assert_eq!(code(&run(&["count", "1x2", "1 2"])), 2);
    assert_eq!(code(&run(&["count", "12", "1 2", "--bogus"])), 2);
    assert_eq!(code(&run(&["count", "12", "1 2", "--algorithm", "9999"])), 2);
    assert_eq!(code(&run(&["count", "12345", "1 2 3 4 5"])), 3);
    assert_eq!(stdout(&run(&["count", "12345", "1 2 3 4 5", "--brute"])).trim(), "1");
    assert_eq!(code(&run(&["span", "9"])), 3);
    assert_eq!(code(&run(&["trees", "8"])), 3);
    assert_eq!(code(&run_with_stdin(&["tstar"], "1,1\n1,2\n3,3\n4,4\n")), 4);
    assert_eq!(code(&run_with_stdin(&["tau"], "1,1\n2,1\n")), 4);
    let stable = run_with_stdin(&["tstar", "--ties", "stable"], "1,1\n1,2\n3,3\n4,4\n");
    assert_eq!(json(&stable)["n"], 4);
    assert_eq!(code(&run_with_stdin(&["tstar"], "1,1\n2,2\n")), 2);
    assert_eq!(code(&run(&["count", "12"])), 2);
}

#[test]
fn hidden_self_test() {
    let v = json(&run(&["self-test", "--cases", "31"]));
    assert_eq!(v["failures"], 0);
    let help = stdout(&run(&["--help"]));
    assert!(!help.contains("self-test"));
}
