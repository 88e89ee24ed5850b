use std::process::{Command, Output};

fn pwu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn unified_prints_bindings_and_exits_zero() {
    let out = pwu(&["unify", "f(X)", "f(a)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "X = a\n");
}

#[test]
fn clash_exits_one_with_diagnosis() {
    let out = pwu(&["unify", "f(X,Y)", "g(X)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("clash: f/2 vs g/1"), "{}", stderr(&out));
}

#[test]
fn cycle_exits_two() {
    let out = pwu(&["unify", "X", "f(X)", "--variant", "fixed"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cycle: occurs check at f/1#1"), "{}", stderr(&out));
}

#[test]
fn buggy_variant_trips_guard_and_exits_three() {
    let out = pwu(&["unify", "X", "f(X)", "--variant", "buggy"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("non-termination guard tripped after"), "{}", err);
    assert!(err.contains("BUILD-SIGMA"), "{}", err);
}

#[test]
fn parse_error_exits_four() {
    let out = pwu(&["unify", "f(", "a"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("offset 2"), "{}", stderr(&out));
}

#[test]
fn arity_error_exits_four() {
    let out = pwu(&["unify", "f(a)", "f(a,b)"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn check_flag_reports_oracle_agreement() {
    let out = pwu(&["unify", "f(X,Y)", "f(Y,a)", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    // Bindings come out in SIGMA order: Y is absorbed before X here.
    assert_eq!(stdout(&out), "Y = a\nX = a\n");
    assert!(stderr(&out).contains("oracle: agree"), "{}", stderr(&out));
}

#[test]
fn check_agrees_on_failures_too() {
    let out = pwu(&["unify", "X", "f(X)", "--check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("oracle: agree"), "{}", stderr(&out));
}

#[test]
fn trace_goes_to_stderr_before_the_verdict() {
    let out = pwu(&["unify", "X", "f(X)", "--variant", "buggy", "--trace"]);
    let err = stderr(&out);
    let trace_pos = err.find("LINK\tX#0\tf/1#1").expect("trace line present");
    let verdict_pos = err.find("non-termination").expect("verdict present");
    assert!(trace_pos < verdict_pos);
    assert!(err.contains("SUBS\tX#0\tf/1#1"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn size_cap_switches_to_symbol_count() {
    let out = pwu(&["unify", "X", "f(a,g(b))", "--size-cap", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "X = <dag:4 symbols>\n");
}

#[test]
fn bench_emits_csv() {
    let out = pwu(&["bench", "chain", "--sizes", "1,8"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,nodes,links,steps,wall_micros");
    assert_eq!(lines.len(), 3);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "1");
    assert!(first[3].parse::<u64>().unwrap() > 0);
}

#[test]
fn bench_sharing_handles_exponential_solutions() {
    let out = pwu(&["bench", "sharing", "--sizes", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn bench_writes_csv_file() {
    let dir = std::env::temp_dir().join(format!("pwu-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.csv");
    let out = pwu(&["bench", "chain", "--sizes", "2,4", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.starts_with("n,nodes,links,steps,wall_micros\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
