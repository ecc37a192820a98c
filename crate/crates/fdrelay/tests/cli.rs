//! End-to-end tests of the `fdrelay` binary: exit codes, CSV output shape
//! and byte determinism, and the validation report.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdrelay"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary must run")
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const SELECTION_SCENARIO: &str = r#"
[system]
n_t = 2
m_r = 2
m_t = 2
n_r = 2
c_sr = 1.0
c_rd = 1.0
c_rr = 0.05
r0 = 2.0

[power]
p_s_db = { start = 0.0, stop = 20.0, step = 10.0 }
alpha = 1.0

[run]
schemes = ["OP", "MM", "PR", "LI"]
methods = ["montecarlo", "exact"]
trials = 20000
seed = 11
out = "curves.csv"
"#;

#[test]
fn sweep_writes_sorted_csv_and_skips_op_exact() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "fig4.toml", SELECTION_SCENARIO);
    let out = run(&["sweep", "--scenario", &scenario], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("skipping exact for OP"), "{stderr}");

    let csv = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "scheme,method,P_S_dB,p_out,stderr");
    // 4 schemes x 3 Monte Carlo points + 3 schemes x 3 exact points.
    assert_eq!(lines.len(), 1 + 12 + 9);
    // Sorted by (scheme, method, P_S_dB); schemes sort as LI < MM < OP < PR.
    let first_fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first_fields[0], "LI");
    assert_eq!(first_fields[1], "exact");
    let p_out: f64 = first_fields[3].parse().unwrap();
    assert!((0.0..=1.0).contains(&p_out));
    // Monte Carlo rows carry a standard error, analytic rows leave it empty.
    assert!(lines.iter().any(|l| l.contains(",montecarlo,") && !l.ends_with(',')));
    assert!(lines.iter().all(|l| !l.contains(",exact,") || l.ends_with(',')));
}

#[test]
fn sweep_output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "fig4.toml", SELECTION_SCENARIO);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let status = run(
            &["sweep", "--scenario", &scenario, "--out", out.to_str().unwrap()],
            dir.path(),
        );
        assert!(status.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn scenario_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    let empty = SELECTION_SCENARIO.replace(
        "schemes = [\"OP\", \"MM\", \"PR\", \"LI\"]",
        "schemes = []",
    );
    let path = write_scenario(dir.path(), "empty.toml", &empty);
    let out = run(&["sweep", "--scenario", &path], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schemes"));

    let negative = SELECTION_SCENARIO.replace("c_rr = 0.05", "c_rr = -0.05");
    let path = write_scenario(dir.path(), "neg.toml", &negative);
    let out = run(&["validate", "--scenario", &path], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let unknown = SELECTION_SCENARIO.replace("seed = 11", "seed = 11\nwhatever = 3");
    let path = write_scenario(dir.path(), "unknown.toml", &unknown);
    let out = run(&["sweep", "--scenario", &path], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("whatever") && stderr.contains("line"), "{stderr}");

    let out = run(&["sweep", "--scenario", "does_not_exist.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_scheme_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let single_rx = SELECTION_SCENARIO
        .replace("m_r = 2", "m_r = 1")
        .replace(
            "schemes = [\"OP\", \"MM\", \"PR\", \"LI\"]",
            "schemes = [\"receive_zf\"]",
        );
    let path = write_scenario(dir.path(), "bad.toml", &single_rx);
    let out = run(&["sweep", "--scenario", &path], dir.path());
    assert_eq!(out.status.code(), Some(3));

    // Nothing runnable at all: the optimal rule has no exact form.
    let nothing = SELECTION_SCENARIO
        .replace(
            "schemes = [\"OP\", \"MM\", \"PR\", \"LI\"]",
            "schemes = [\"OP\"]",
        )
        .replace("methods = [\"montecarlo\", \"exact\"]", "methods = [\"exact\"]");
    let path = write_scenario(dir.path(), "nothing.toml", &nothing);
    let out = run(&["sweep", "--scenario", &path], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validate_passes_on_consistent_engines() {
    let dir = tempfile::tempdir().unwrap();
    let mm_only = SELECTION_SCENARIO
        .replace(
            "schemes = [\"OP\", \"MM\", \"PR\", \"LI\"]",
            "schemes = [\"MM\"]",
        )
        .replace("trials = 20000", "trials = 200000");
    let path = write_scenario(dir.path(), "mm.toml", &mm_only);
    let out = run(&["validate", "--scenario", &path], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("validation: PASS"), "{stdout}");
    assert!(stdout.lines().filter(|l| l.contains(" ok")).count() >= 3);
}

#[test]
fn validate_marks_op_as_bounds_only() {
    let dir = tempfile::tempdir().unwrap();
    // alpha inside (0,1) so the bracket exists; the grid stays low-power so
    // the report shows the regime note rather than a bracket check.
    let op = SELECTION_SCENARIO
        .replace(
            "schemes = [\"OP\", \"MM\", \"PR\", \"LI\"]",
            "schemes = [\"OP\", \"MM\"]",
        )
        .replace("alpha = 1.0", "alpha = 0.5")
        .replace("trials = 20000", "trials = 100000");
    let path = write_scenario(dir.path(), "op.toml", &op);
    let out = run(&["validate", "--scenario", &path], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("MC + bounds only"), "{stdout}");
}

#[test]
fn constants_prints_reference_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["constants", "--n-t", "2", "--m-r", "2", "--m-t", "2", "--n-r", "2"],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    for needle in ["1/2 (0.500)", "2/3 (0.667)", "4/3 (1.333)", "16", "10"] {
        assert!(stdout.contains(needle), "missing {needle} in\n{stdout}");
    }

    let out = run(
        &["constants", "--n-t", "0", "--m-r", "2", "--m-t", "2", "--n-r", "2"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schemes_flag_overrides_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "fig4.toml", SELECTION_SCENARIO);
    let out = run(
        &["sweep", "--scenario", &scenario, "--schemes", "MM,LI", "--trials", "5000"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert!(!csv.contains("OP,"));
    assert!(csv.contains("MM,"));
    assert!(csv.contains("LI,"));
}
