//! Black-box tests of the `udl` binary: output, diagnostics, and exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn udl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fixture_arg(name: &str) -> String {
    fixture(name).display().to_string()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("not killed by a signal")
}

/// Writes a temporary program file and keeps it alive for the test.
fn temp_program(source: &str) -> NamedTempFile {
    let mut file = tempfile::Builder::new()
        .suffix(".udl")
        .tempfile()
        .expect("temp file");
    file.write_all(source.as_bytes()).expect("write");
    file
}

#[test]
fn run_prints_the_free_fall_time() {
    let out = udl(&["run", &fixture_arg("free_fall.udl")]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "t = 0.4515236409857309 s\n");
    assert_eq!(stderr(&out), "");
}

#[test]
fn run_fast_prints_the_identical_line() {
    let checked = udl(&["run", &fixture_arg("free_fall.udl")]);
    let fast = udl(&["run", "--fast", &fixture_arg("free_fall.udl")]);
    assert_eq!(exit_code(&fast), 0);
    assert_eq!(stdout(&fast), stdout(&checked));
}

#[test]
fn run_si_units_prints_conversions() {
    let out = udl(&["run", &fixture_arg("si_units.udl")]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "height = 175 cm\nc = 299792458 m / s\nenergy = 4.5 J\n"
    );
}

#[test]
fn check_on_clean_files_is_silent() {
    let out = udl(&[
        "check",
        &fixture_arg("free_fall.udl"),
        &fixture_arg("si_units.udl"),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "");
    assert_eq!(stderr(&out), "");
}

#[test]
fn check_prints_positioned_diagnostics_and_exits_1() {
    let file = temp_program(
        "dim time;\nunit s = base(time, 1.0);\nlet t : s = 1 * s;\nprint t in q;\n",
    );
    let path = file.path().display().to_string();
    let out = udl(&["check", &path]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout(&out), "");
    assert_eq!(
        stderr(&out),
        format!("{path}:4:12: error[UnknownUnit]: unknown unit or constant `q`\n")
    );
}

#[test]
fn check_reports_files_in_argument_order() {
    let first = temp_program("dim time;\nunit s = base(time, 1.0);\nprint 1 in s;\n");
    let second = temp_program("print 2 in zz;\n");
    let out = udl(&[
        "check",
        &first.path().display().to_string(),
        &second.path().display().to_string(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let err = stderr(&out);
    let first_at = err.find(&first.path().display().to_string()).expect("first file reported");
    let second_at = err.find(&second.path().display().to_string()).expect("second file reported");
    assert!(first_at < second_at, "diagnostics out of file order:\n{err}");
}

#[test]
fn run_on_a_rejected_program_prints_nothing() {
    let file = temp_program(
        "dim time;\nunit s = base(time, 1.0);\nlet t : s = 1;\nprint t in s;\n",
    );
    let out = udl(&["run", &file.path().display().to_string()]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout(&out), "", "no partial output on a rejected program");
    assert!(stderr(&out).contains("error[DimensionMismatch]"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = udl(&["check", "/nonexistent/nowhere.udl"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn zero_iterations_is_a_usage_error() {
    let out = udl(&[
        "bench",
        &fixture_arg("free_fall.udl"),
        "--iterations",
        "0",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn compat_requires_the_packed_encoding() {
    let out = udl(&[
        "run",
        "--compat",
        "--encoding",
        "vector",
        &fixture_arg("free_fall.udl"),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("--compat"));
}

#[test]
fn tiny_radix_is_a_usage_error() {
    let out = udl(&["check", "--radix", "2", &fixture_arg("free_fall.udl")]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn runtime_domain_error_exits_3() {
    let file = temp_program("let x : 1 = 0 - 9;\nprint pow(x, 1, 2) in 1;\n");
    let out = udl(&["run", &file.path().display().to_string()]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(stdout(&out), "");
    assert!(stderr(&out).contains("error[DomainError]"));
}

#[test]
fn bench_reports_counters_and_equality() {
    let out = udl(&[
        "bench",
        &fixture_arg("free_fall.udl"),
        "--iterations",
        "50",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert!(report.contains("iterations: 50"), "{report}");
    assert!(report.contains("dim-ops-per-eval: 8"), "{report}");
    assert!(report.contains("checked-dim-ops: 400"), "{report}");
    assert!(report.contains("fast-dim-ops: 0"), "{report}");
    assert!(report.contains("outputs-equal: true"), "{report}");
}

#[test]
fn dump_units_lists_units_and_constants_with_packed_codes() {
    let out = udl(&["dump-units", &fixture_arg("si_units.udl")]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "\
m  m^1  1  1
g  kg^1  0.001  10
s  s^1  1  100
cm  m^1  0.01  1
kg  kg^1  1  10
J  m^2 kg^1 s^-2  1  -188
c  m^1 s^-1  299792458  -99
"
    );
}

#[test]
fn dump_units_under_the_vector_encoding_has_no_code_column() {
    let out = udl(&[
        "dump-units",
        "--encoding",
        "vector",
        &fixture_arg("si_units.udl"),
    ]);
    assert_eq!(exit_code(&out), 0);
    let report = stdout(&out);
    assert!(report.contains("cm  m^1  0.01\n"), "{report}");
    assert!(report.contains("J  m^2 kg^1 s^-2  1\n"), "{report}");
}

#[test]
fn dump_units_on_an_empty_program_prints_nothing() {
    let file = temp_program("");
    let out = udl(&["dump-units", &file.path().display().to_string()]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "");
}

#[test]
fn compat_runs_an_aliased_program_that_strict_rejects() {
    let source = "\
dim length;
dim mass;
unit m = base(length, 1.0);
unit g = base(mass, 1e-3);
let x : g = (1 * m)^10;
print x in g;
";
    let file = temp_program(source);
    let path = file.path().display().to_string();

    let compat = udl(&["run", "--compat", &path]);
    assert_eq!(exit_code(&compat), 0, "{}", stderr(&compat));
    assert_eq!(stdout(&compat), "x = 1000 g\n");

    let strict = udl(&["run", &path]);
    assert_eq!(exit_code(&strict), 1);
    assert!(stderr(&strict).contains("error[CapacityOverflow]"));
}

#[test]
fn the_exit_code_does_not_depend_on_the_encoding_for_in_window_programs() {
    for encoding in ["packed", "vector"] {
        let ok = udl(&["check", "--encoding", encoding, &fixture_arg("si_units.udl")]);
        assert_eq!(exit_code(&ok), 0);

        let bad = temp_program("dim time;\nunit s = base(time, 1.0);\nprint 1 in s;\n");
        let out = udl(&["check", "--encoding", encoding, &bad.path().display().to_string()]);
        assert_eq!(exit_code(&out), 1);
    }
}
