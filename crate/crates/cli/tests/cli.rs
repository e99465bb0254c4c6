use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dspec(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_dspec"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` line in\n{out}"))
}

#[test]
fn worked_search_example() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: t\ncoords: t, t^2 + 1/t\n");
    let c = write(&d, "corpus.txt", "X2 - X1^2\n");
    let r = dspec(&[
        "search", "run", "--alpha", s(&a), "--corpus", s(&c), "--r", "2", "--q", "1,1", "--lambda", "1", "--count", "5",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(field(&r.stdout, "outcome"), "report");
    assert_eq!(field(&r.stdout, "index"), "2");
    assert!(r.stdout.contains("value[1]: X2 - X1^2 -> (-2*t^2 + 1)/t (infinite)"));
}

#[test]
fn plan_prints_count_and_step() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: t\ncoords: t, t^2 + 1/t\n");
    let c = write(&d, "corpus.txt", "X2 - X1^2\n");
    let r = dspec(&["search", "plan", "--alpha", s(&a), "--corpus", s(&c), "--r", "1", "--q", "1,1"]);
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, "count"), "5");
    assert_eq!(field(&r.stdout, "lambda"), "1/15");
}

#[test]
fn refutation_exits_with_three() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: u, t\ncoords: t, t + 1/u\n");
    let c = write(&d, "corpus.txt", "X2 - X1\n");
    let r = dspec(&["search", "run", "--alpha", s(&a), "--corpus", s(&c), "--r", "1"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert_eq!(field(&r.stdout, "outcome"), "certificate");
    assert_eq!(field(&r.stdout, "check_value"), "0");
    assert_eq!(field(&r.stdout, "d"), "-1, 1");
    assert_ne!(field(&r.stdout, "clearance"), "infinite");
}

#[test]
fn inadmissible_direction_is_a_usage_error() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: t\ncoords: t, t^2 + 1/t\n");
    let c = write(&d, "corpus.txt", "X2 - X1^2\n");
    let r = dspec(&["search", "run", "--alpha", s(&a), "--corpus", s(&c), "--r", "1", "--q", "0,1"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not in U_F"), "{}", r.stderr);
    let r = dspec(&["search", "run", "--alpha", s(&a), "--corpus", s(&c), "--r", "1", "--q", "1,1,1"]);
    assert_eq!(r.code, 1);
}

#[test]
fn spec_check_exit_codes() {
    let d = TempDir::new().unwrap();
    let good = write(&d, "good.pt", "generators: u, t\ncoords: t, u*t\n");
    let bad = write(&d, "bad.pt", "generators: u, t\ncoords: t, t + 1/u\n");
    let c = write(&d, "corpus.txt", "X2 - X1\nX1*X2 - 3\n");
    for mode in ["discrete", "m-discrete", "arithmetical", "transcendental"] {
        let r = dspec(&["spec", "check", "--point", s(&good), "--corpus", s(&c), "--mode", mode]);
        assert_eq!(r.code, 0, "{mode}: {}", r.stdout);
        assert_eq!(field(&r.stdout, "predicate"), mode);
    }
    let r = dspec(&["spec", "check", "--point", s(&bad), "--corpus", s(&c), "--mode", "discrete"]);
    assert_eq!(r.code, 2);
    assert_eq!(field(&r.stdout, "result"), "fail");
    let r = dspec(&["spec", "check", "--point", s(&bad), "--corpus", s(&c), "--mode", "sideways"]);
    assert_eq!(r.code, 1);
}

#[test]
fn clearance_and_distance() {
    let d = TempDir::new().unwrap();
    let good = write(&d, "good.pt", "generators: t\ncoords: t, t^2 + 1/t\n");
    let bad = write(&d, "bad.pt", "generators: u, t\ncoords: t, t + 1/u\n");
    assert_eq!(dspec(&["spec", "clearance", "--point", s(&good), "--bound", "5"]).code, 0);
    let r = dspec(&["spec", "clearance", "--point", s(&bad), "--bound", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("infinitesimal"));
    let p = write(&d, "p.pt", "generators: t\ncoords: 1/2, 3\n");
    let q = write(&d, "q.pt", "generators: t\ncoords: -1, 1/3\n");
    let r = dspec(&["spec", "dist", "--p", s(&p), "--q", s(&q)]);
    assert_eq!(r.code, 0);
    // (3/2)^2 + (8/3)^2 = 9/4 + 64/9 = 337/36
    assert_eq!(field(&r.stdout, "distance_squared"), "337/36");
}

#[test]
fn nabla_commands() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "f.txt", "X1^2*X2\n");
    let r = dspec(&["nabla", "expand", "--poly", s(&f)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("G_1 = X1^2*T2 + 2*X1*X2*T1"), "{}", r.stdout);
    assert!(r.stdout.contains("G_2 = "));
    let r = dspec(&["nabla", "expand", "--poly", s(&f), "--k", "2"]);
    assert!(!r.stdout.contains("G_1 ="));
    assert_eq!(dspec(&["nabla", "expand", "--poly", s(&f), "--k", "3"]).code, 1);

    assert_eq!(dspec(&["nabla", "check-direction", "--polys", s(&f), "--q", "1,2"]).code, 0);
    let r = dspec(&["nabla", "check-direction", "--polys", s(&f), "--q", "0,1"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("u1: fail"));

    let lin = write(&d, "lin.txt", "3*X1\n");
    assert_eq!(dspec(&["nabla", "check-direction", "--polys", s(&lin), "--q", "2"]).code, 0);
    assert_eq!(dspec(&["nabla", "check-direction", "--polys", s(&lin), "--q", "0"]).code, 2);
}

#[test]
fn order_commands() {
    let r = dspec(&["order", "compare", "--generators", "u, t", "--x", "u^100", "--y", "t"]);
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, "result"), "lt (x < y)");
    let r = dspec(&["order", "classify", "--generators", "u, t", "--x", "-(t + 1)/t"]);
    assert_eq!(field(&r.stdout, "sign"), "-1");
    assert_eq!(field(&r.stdout, "magnitude"), "finite_noninfinitesimal");
    let r = dspec(&["order", "classify", "--generators", "u, t", "--x", "v"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("`v`"));
}

#[test]
fn parse_errors_name_line_and_column() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: u, t\n\ncoords: t, u*tt\n");
    let c = write(&d, "corpus.txt", "X1\n");
    let r = dspec(&["spec", "check", "--point", s(&a), "--corpus", s(&c), "--mode", "discrete"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("alpha.pt:3:14:"), "{}", r.stderr);
    assert!(r.stderr.contains("`tt`"));
}

#[test]
fn machine_output_is_sorted_json() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: t\ncoords: t, t^2 + 1/t\n");
    let c = write(&d, "corpus.txt", "X2 - X1^2\n");
    let r = dspec(&[
        "--format", "machine", "search", "run", "--alpha", s(&a), "--corpus", s(&c), "--r", "2", "--q", "1,1", "--lambda", "1", "--count", "5",
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.ends_with("}\n"));
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["command"], "search run");
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["report"]["outcome"], "report");
    assert_eq!(v["report"]["index"], 2);
    assert_eq!(v["report"]["values"][0]["magnitude"], "infinite");
    let keys: Vec<&String> = v["report"].as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "alpha.pt", "generators: u, t\ncoords: t + 1/u, u*t\n");
    let c = write(&d, "corpus.txt", "X1^2*X2 - 3\nX2 - X1\n");
    let args = ["--seed", "7", "search", "run", "--alpha", s(&a), "--corpus", s(&c), "--r", "1/2"];
    let first = dspec(&args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(field(&first.stdout, "seed"), "7");
    assert_eq!(dspec(&args).stdout, first.stdout);
    let suite = ["--seed", "3", "verify", "suite", "--trials", "5"];
    assert_eq!(dspec(&suite).stdout, dspec(&suite).stdout);
}

#[test]
fn suite_runs_and_warns_on_zero_trials() {
    let r = dspec(&["verify", "suite", "--trials", "4"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(field(&r.stdout, "result"), "pass");
    assert!(r.stdout.contains("total-order: pass (4/4 passed)"));
    let r = dspec(&["verify", "suite", "--trials", "0"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("warning: "));
}
