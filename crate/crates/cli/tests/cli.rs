//! End-to-end CLI tests: golden output records and the exit-code
//! contract (0 success, 2 parse, 3 bounds/usage, 4 arithmetic,
//! 5 validation failure).

use std::io::Write;
use std::process::{Command, Output};
use tempfile::NamedTempFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumseq"))
}

fn data_file(lines: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(lines.as_bytes()).unwrap();
    file.flush().unwrap();
    file
}

fn digits() -> NamedTempFile {
    data_file("3\n1\n4\n1\n5\n9\n2\n6\n")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_line(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).trim_end().to_string()
}

fn path_of(file: &NamedTempFile) -> String {
    file.path().to_str().unwrap().to_string()
}

#[test]
fn sum_range_golden() {
    let file = digits();
    let out = run(&["sum", &path_of(&file), "2", "5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"sum":10,"from":2,"to":5,"nodes_visited":10,"additions":3}"#
    );
}

#[test]
fn sum_same_in_both_modes() {
    let file = digits();
    let f64_out = stdout_line(&run(&["sum", &path_of(&file), "2", "5"]));
    let i64_out = stdout_line(&run(&["sum", &path_of(&file), "2", "5", "--mode", "i64"]));
    assert_eq!(f64_out, i64_out);
}

#[test]
fn sum_empty_range_is_zero() {
    let file = digits();
    let out = run(&["sum", &path_of(&file), "4", "4"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"sum":0,"from":4,"to":4,"nodes_visited":0,"additions":0}"#
    );
}

#[test]
fn sum_prefix_flag_uses_prefix_walk() {
    let file = digits();
    let out = run(&["sum", &path_of(&file), "0", "4", "--prefix"]);
    assert!(out.status.success());
    // Fanout 8 over 8 elements: the first top node covers exactly the
    // first four elements, so the prefix walk touches a single node.
    assert_eq!(
        stdout_line(&out),
        r#"{"sum":9,"from":0,"to":4,"nodes_visited":1,"additions":1}"#
    );
}

#[test]
fn sum_bounds_error_exits_3() {
    let file = digits();
    let out = run(&["sum", &path_of(&file), "2", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout_line(&out).is_empty());
}

#[test]
fn sum_overflow_exits_4() {
    let file = data_file("9223372036854775807\n9223372036854775807\n");
    let out = run(&["sum", &path_of(&file), "0", "2", "--mode", "i64"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn parse_failure_reports_line_number() {
    let file = data_file("1\n2\nbogus\n4\n");
    let out = run(&["sum", &path_of(&file), "0", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
}

#[test]
fn integer_mode_rejects_float_literals() {
    let file = data_file("1\n2.5\n");
    let out = run(&["sum", &path_of(&file), "0", "1", "--mode", "i64"]);
    assert_eq!(out.status.code(), Some(2));
    // The same file parses fine as floats.
    let out = run(&["sum", &path_of(&file), "0", "2"]);
    assert!(out.status.success());
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let file = data_file("# header\n\n3\n  \n1\n# trailing\n4\n");
    let out = run(&["sum", &path_of(&file), "0", "3"]);
    assert!(out.status.success());
    assert!(stdout_line(&out).starts_with(r#"{"sum":8,"#));
}

#[test]
fn stats_golden() {
    let file = digits();
    let out = run(&["stats", &path_of(&file), "2", "5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"count":3,"sum":10,"sum_sq":42,"mean":3.3333333333333335,"variance":2.8888888888888875,"stddev":1.6996731711975945}"#
    );
}

#[test]
fn stats_constant_file_has_zero_variance() {
    let file = data_file("7\n7\n7\n7\n");
    let out = run(&["stats", &path_of(&file), "0", "4"]);
    assert!(out.status.success());
    let line = stdout_line(&out);
    assert!(line.contains(r#""variance":0"#), "line: {line}");
    assert!(line.contains(r#""stddev":0"#), "line: {line}");
}

#[test]
fn stats_agrees_with_sum_on_same_range() {
    let file = digits();
    let stats = stdout_line(&run(&["stats", &path_of(&file), "2", "5"]));
    let sum = stdout_line(&run(&["sum", &path_of(&file), "2", "5"]));
    assert!(stats.contains(r#""sum":10"#));
    assert!(sum.contains(r#""sum":10"#));
}

#[test]
fn stats_empty_range_exits_3() {
    let file = digits();
    let out = run(&["stats", &path_of(&file), "3", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn select_golden() {
    let file = digits();
    let out = run(&["select", &path_of(&file), "0"]);
    assert_eq!(stdout_line(&out), r#"{"rank":0,"value":3}"#);
    let out = run(&["select", &path_of(&file), "5"]);
    assert_eq!(stdout_line(&out), r#"{"rank":5,"value":9}"#);
}

#[test]
fn select_past_end_exits_3() {
    let file = digits();
    let out = run(&["select", &path_of(&file), "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validate_well_formed_file() {
    let file = digits();
    let out = run(&["validate", &path_of(&file)]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"ok":true,"size":8,"levels":2,"violations":0}"#
    );
}

#[test]
fn validate_survives_seeded_mutation_script() {
    let values: String = (0..1_000).map(|i| format!("{}\n", i % 97)).collect();
    let file = data_file(&values);
    let out = run(&[
        "validate",
        &path_of(&file),
        "--mutations",
        "10000",
        "--seed",
        "42",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_line(&out).starts_with(r#"{"ok":true,"#));
}

#[test]
fn validate_corrupted_structure_exits_5() {
    let file = digits();
    let out = run(&["validate", &path_of(&file), "--corrupt"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout_line(&out).starts_with(r#"{"ok":false,"#));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("aggregate-sum"), "stderr: {stderr}");
}

#[test]
fn bench_emits_csv_rows() {
    let out = run(&[
        "bench", "--sizes", "1024,4096", "--trials", "8", "--seed", "9",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(
        lines[0],
        "size,query_kind,trials,mean_nodes_visited,mean_additions,naive_ops"
    );
    assert_eq!(lines.len(), 1 + 2 * 3);
    // naive_ops: full span for prefix rows, the fixed distance otherwise.
    assert!(lines[1].starts_with("1024,prefix,8,") && lines[1].ends_with(",1024"));
    assert!(lines[2].starts_with("1024,range_fixed_d,8,") && lines[2].ends_with(",64"));
    assert!(lines[3].starts_with("1024,stats,8,") && lines[3].ends_with(",64"));
    assert!(lines[4].starts_with("4096,prefix,8,") && lines[4].ends_with(",4096"));
}

#[test]
fn bench_is_deterministic_for_fixed_seed() {
    let args = ["bench", "--sizes", "1024", "--trials", "16", "--seed", "5"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn bench_rejects_bad_sizes() {
    let out = run(&["bench", "--sizes", "2048,1024"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["bench", "--sizes", "0,1024"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["bench", "--sizes", "1024", "--distance", "2048"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_3() {
    let out = run(&["sum"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["unknown-subcommand"]);
    assert_eq!(out.status.code(), Some(3));
    let file = digits();
    let out = run(&["sum", &path_of(&file), "0", "2", "--fanout", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_and_version_exit_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn no_squares_disables_stats_but_not_sums() {
    let file = digits();
    let out = run(&["stats", &path_of(&file), "0", "4", "--no-squares"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["sum", &path_of(&file), "0", "4", "--no-squares"]);
    assert!(out.status.success());
}
