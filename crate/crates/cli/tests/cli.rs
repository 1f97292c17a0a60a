//! End-to-end tests of the binary: argument handling, exit codes, file
//! output, and the documented behavior of each subcommand.

use std::path::Path;
use std::process::{Command, Output};

fn toristab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toristab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn coefficient_count_mismatch_exits_two() {
    let out = toristab(&["compute", "--variety", "P2", "--divisor", "1,1"]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("3"), "message should name the expected count");
}

#[test]
fn non_big_divisor_exits_three_naming_the_check() {
    let out = toristab(&["compute", "--variety", "P2", "--divisor", "-1,-1,-1"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("big"));
}

#[test]
fn missing_variety_file_exits_two() {
    let out = toristab(&["compute", "--variety", "no/such/file.fan", "--divisor", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no/such/file.fan"));
}

#[test]
fn corrupted_variety_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.fan");
    std::fs::write(&path, "dim 2\nray 1 0\nray zero one\ncone 0 1\n").unwrap();
    let out = toristab(&["compute", "--variety", path.to_str().unwrap(), "--divisor", "1,1"]);
    assert_eq!(code(&out), 2);

    // The same file fails fast under `check` as well.
    let out = toristab(&[
        "check",
        "--suite",
        "scaling",
        "--seed",
        "7",
        "--variety",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn variety_files_compute_like_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p1.fan");
    std::fs::write(&path, "# the projective line\ndim 1\nray 1\nray -1\ncone 0\ncone 1\n")
        .unwrap();
    let from_file = toristab(&["compute", "--variety", path.to_str().unwrap(), "--divisor", "1,1"]);
    assert_eq!(code(&from_file), 0);
    let builtin = toristab(&["compute", "--variety", "P1", "--divisor", "1,1"]);
    assert_eq!(stdout(&from_file), stdout(&builtin));
}

#[test]
fn compute_csv_format_has_header_and_one_row() {
    let out = toristab(&["compute", "--variety", "dP1", "--divisor", "1,1,1,1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("delta,"));
    assert!(lines[1].starts_with("6/7,"));
}

#[test]
fn compute_out_writes_the_same_bytes_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_file = toristab(&[
        "compute",
        "--variety",
        "P1xP1",
        "--divisor",
        "1,1,2,2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 0);
    assert!(stdout(&to_file).is_empty());
    let to_stdout = toristab(&["compute", "--variety", "P1xP1", "--divisor", "1,1,2,2"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&to_stdout));
    assert!(!path.with_file_name("report.json.tmp").exists());
}

#[test]
fn check_scaling_and_comparison_pass_with_the_documented_seed() {
    for suite in ["scaling", "comparison"] {
        let out = toristab(&["check", "--suite", suite, "--seed", "7"]);
        assert_eq!(code(&out), 0, "suite {suite}: {}", stderr(&out));
        assert!(stdout(&out).contains("PASS"));
    }
}

#[test]
fn unknown_check_suite_exits_two_listing_the_choices() {
    let out = toristab(&["check", "--suite", "frobnicate"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bishop"));
}

#[test]
fn sweep_emits_one_row_per_step_with_monotone_gamma() {
    let out = toristab(&[
        "sweep",
        "--variety",
        "P1xP1",
        "--divisor",
        "1,1,1,1",
        "--direction",
        "1,0,0,0",
        "--gamma-range",
        "0:1/2",
        "--steps",
        "11",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], "gamma,delta,delta_witness,alpha,s,beta,vol,flags");
    let gammas: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(gammas.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(gammas[0], 0.0);
    assert_eq!(gammas[10], 0.5);
}

#[test]
fn sweeping_along_the_base_divides_delta_by_one_plus_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = toristab(&[
        "sweep",
        "--variety",
        "P2",
        "--divisor",
        "1,1,1",
        "--direction",
        "1,1,1",
        "--gamma-range",
        "0:1",
        "--steps",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let exact = std::fs::read_to_string(dir.path().join("sweep.exact.csv")).unwrap();
    let expected_gamma =
        ["0", "1/10", "1/5", "3/10", "2/5", "1/2", "3/5", "7/10", "4/5", "9/10", "1"];
    let expected_delta = [
        "1", "10/11", "5/6", "10/13", "5/7", "2/3", "5/8", "10/17", "5/9", "10/19", "1/2",
    ];
    for (row, line) in exact.lines().skip(1).enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], expected_gamma[row]);
        assert_eq!(cells[1], expected_delta[row], "delta at gamma {}", cells[0]);
    }

    // The decimal CSV has the same shape.
    let decimal = std::fs::read_to_string(&path).unwrap();
    assert_eq!(decimal.lines().count(), 12);
}

#[test]
fn samples_outside_the_big_cone_are_flagged_with_empty_values() {
    let out = toristab(&[
        "sweep",
        "--variety",
        "P2",
        "--divisor",
        "1,1,1",
        "--direction",
        "-1,-1,-1",
        "--gamma-range",
        "0:2",
        "--steps",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert!(cells[7].contains("not_big"), "row: {row}");
        assert!(cells[1].is_empty(), "delta must be empty outside the big cone");
    }
}

#[test]
fn degenerate_sweep_spec_exits_three() {
    let out = toristab(&[
        "sweep",
        "--variety",
        "P2",
        "--divisor",
        "1,1,1",
        "--direction",
        "1,0,0",
        "--gamma-range",
        "1:0",
        "--steps",
        "11",
    ]);
    assert_eq!(code(&out), 3);

    let out = toristab(&["sweep", "--variety", "P2", "--divisor", "1,1,1", "--direction", "1,0,0", "--steps", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn malformed_gamma_range_exits_two() {
    let out = toristab(&[
        "sweep",
        "--variety",
        "P2",
        "--divisor",
        "1,1,1",
        "--direction",
        "1,0,0",
        "--gamma-range",
        "zero-to-one",
    ]);
    assert_eq!(code(&out), 2);
}

/// Slopes of the quotient against log(1/c) bracket the critical exponent:
/// negative below 2, flat at 2, positive above.
#[test]
fn probe_slopes_change_sign_at_the_critical_exponent() {
    let out = toristab(&["mt-probe", "--lambdas", "1.8,2.0,2.2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut slopes = Vec::new();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let lambda: f64 = cells[0].parse().unwrap();
        let slope: f64 = cells[6].parse().unwrap();
        if slopes.last().map(|(l, _)| *l) != Some(lambda) {
            slopes.push((lambda, slope));
        }
    }
    assert_eq!(slopes.len(), 3);
    assert!(slopes[0].1 < -0.05, "subcritical slope {}", slopes[0].1);
    assert!(slopes[1].1.abs() < 0.05, "critical slope {}", slopes[1].1);
    assert!(slopes[2].1 > 0.05, "supercritical slope {}", slopes[2].1);
}

#[test]
fn probe_slopes_are_stable_under_grid_refinement() {
    let slope_at = |nodes: &str| -> f64 {
        let out = toristab(&["mt-probe", "--grid", nodes, "--lambdas", "1.8"]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
        let text = stdout(&out);
        let line = text.lines().nth(1).unwrap();
        line.split(',').nth(6).unwrap().parse().unwrap()
    };
    let coarse = slope_at("128");
    let fine = slope_at("256");
    assert!(
        (coarse - fine).abs() < 0.02,
        "slopes {coarse} and {fine} drifted under refinement"
    );
}

#[test]
fn inadmissible_probe_parameters_exit_three() {
    // The concentration family needs the one-dimensional unit class.
    let out = toristab(&["mt-probe", "--class", "1,1"]);
    assert_eq!(code(&out), 3);
    // At least two concentration parameters.
    let out = toristab(&["mt-probe", "--c-values", "1e-2"]);
    assert_eq!(code(&out), 3);
    // Positive exponents.
    let out = toristab(&["mt-probe", "--lambdas", "-1.0"]);
    assert_eq!(code(&out), 3);
    // Grid too small for the stencils.
    let out = toristab(&["mt-probe", "--grid", "32"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn laboratory_checks_run_on_both_surface_and_interval_grids() {
    let out = toristab(&["mt-probe", "--class", "1,1", "--check", "ding", "--seed", "7"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("PASS"));

    let out = toristab(&["mt-probe", "--check", "cocycle", "--seed", "7"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let out = toristab(&["mt-probe", "--check", "frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn probe_rejects_a_twist_combined_with_a_check() {
    let out = toristab(&["mt-probe", "--check", "ding", "--twist", "1/2"]);
    assert_eq!(code(&out), 2, "clap rejects conflicting flags");
}

#[test]
fn the_acceptance_suite_reports_every_criterion_and_passes() {
    let out = toristab(&["suite", "--seed", "7"]);
    assert_eq!(code(&out), 0, "stderr: {}\nstdout: {}", stderr(&out), stdout(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    for (index, line) in lines.iter().enumerate() {
        assert!(line.starts_with(&format!("criterion {:02} ", index + 1)), "line: {line}");
        assert!(line.contains("PASS"), "criterion failed: {line}");
    }
}

#[test]
fn help_names_every_subcommand() {
    let out = toristab(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for sub in ["compute", "sweep", "check", "mt-probe", "suite"] {
        assert!(text.contains(sub), "help misses {sub}");
    }
}

#[test]
fn golden_files_exist_for_every_builtin() {
    // The actual byte comparison lives in the golden test; here we pin the
    // inventory so a new builtin cannot silently ship without a golden file.
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["P1", "P2", "P3", "P1xP1", "dP1"] {
        assert!(dir.join(format!("{name}.json")).exists(), "missing golden for {name}");
    }
}
