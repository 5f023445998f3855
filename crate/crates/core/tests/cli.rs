//! The `epi-lab` binary: exit codes, output formats and report round trips.

use std::process::{Command, Output};

use epi_lab::harness::from_json;

fn epi_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epi-lab")).args(args).env("EPI_LAB_THREADS", "1").output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn help_lists_grammar_and_exits_zero() {
    let o = epi_lab(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for word in ["register:p=", "gauss:t", "--t-list", "--k-list", "--grid-extent", "EXIT STATUS"] {
        assert!(text.contains(word), "help lacks {word}");
    }
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cap.json");
    let o = epi_lab(&["capacity", "--E", "0.5,1,2", "--noise", "gauss:0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reports = from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.pass && r.is_consistent()));
    assert!((reports[1].lhs - 1.206_828_724_584_78).abs() < 1e-6);
}

#[test]
fn csv_flattens_params() {
    let o = epi_lab(&["qou", "--state", "fock:1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("check_name,pass,lhs,rhs,margin,tolerance,"), "{header}");
    assert!(header.contains(",t"), "{header}");
}

#[test]
fn failing_inequality_exits_one() {
    // A single small k leaves the tightness gap far above its requirement.
    let o = epi_lab(&["tightness", "--k-list", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let reports = from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert!(!reports[0].pass && reports[0].is_consistent());
    assert!(stderr(&o).contains("1 of 1 checks failed"));
}

#[test]
fn tolerance_override_recomputes_pass() {
    // Exact Gaussian equality case: only rounding separates the two sides.
    let o = epi_lab(&["classical-epi", "--noise", "gauss:0.5|gauss:1", "--tolerance", "0"]);
    let reports = from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!(reports[0].tolerance, 0.0);
    assert!(reports[0].margin.abs() < 1e-9 && reports[0].is_consistent());
    assert_eq!(o.status.code(), Some(if reports[0].pass { 0 } else { 1 }));
}

#[test]
fn corrupted_noise_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "not a grid\n1 2 3\n").unwrap();
    let o = epi_lab(&["capacity", "--noise", &format!("file:{}", path.display())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn qou_parameter_error_exits_two() {
    let o = epi_lab(&["qou", "--state", "fock:1", "--mu", "0.5", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid parameter"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "command = epi\nwidth = 3\n").unwrap();
    let o = epi_lab(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("width"));
    assert_eq!(epi_lab(&["epi", "--state", "squeezed:2"]).status.code(), Some(2));
    assert_eq!(epi_lab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "command = epi\nstate = thermal:1\nnoise = gauss:0.5\n").unwrap();
    let o = epi_lab(&["--config", path.to_str().unwrap(), "--noise", "gauss:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reports = from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert!(reports.iter().all(|r| r.params["noise"] == "gauss:1"));
}
