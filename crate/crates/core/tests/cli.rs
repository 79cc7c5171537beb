use std::path::PathBuf;
use std::process::{Command, Output};

fn ellsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellsub")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn height_prints_certified_value() {
    let o = ellsub(&["height", "3,5", "--curve", "0,-2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("height = 0.67478841"), "{text}");
    assert!(text.contains("torsion = false"));
}

#[test]
fn height_of_torsion_is_zero() {
    let o = ellsub(&["height", "2,3", "--curve", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("torsion = true"));
}

#[test]
fn invalid_input_exits_one() {
    assert_eq!(ellsub(&["height", "3,6", "--curve", "0,-2"]).status.code(), Some(1));
    assert_eq!(ellsub(&["height", "3,5", "--curve", "0,0"]).status.code(), Some(1));
    assert_eq!(ellsub(&["reduce", "[2x2] 1 2 2 4"]).status.code(), Some(1));
    assert_eq!(ellsub(&["nonsense"]).status.code(), Some(1));
    assert_eq!(ellsub(&["--help"]).status.code(), Some(0));
}

#[test]
fn tiny_tolerance_is_a_precision_failure() {
    let o = ellsub(&["height", "3,5", "--curve", "0,-2", "--tol", "1e-400"]);
    assert!(matches!(o.status.code(), Some(1) | Some(3)), "{:?}", o.status);
}

#[test]
fn reduce_reports_form() {
    let o = ellsub(&["reduce", "[1x2] 2 1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pivot = 2"), "{text}");
    assert!(text.contains("containment = true"));
}

#[test]
fn enumerate_counts() {
    for (args, n) in [(["-g", "2", "-r", "1", "-M", "1"], 3), (["-g", "2", "-r", "1", "-M", "2"], 8), (["-g", "2", "-r", "2", "-M", "1"], 1)] {
        let mut all = vec!["enumerate"];
        all.extend(args);
        let o = ellsub(&all);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).ends_with(&format!("count = {n}\n")), "{}", stdout(&o));
    }
    let o = ellsub(&["enumerate", "-g", "2", "-r", "1", "-s", "1", "-M", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bounds_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("ok.toml");
    std::fs::write(&ok, "[curve]\nA = \"0\"\nB = \"-2\"\n[ambient]\ng = 2\ns = 1\n[params]\neps1_override = \"3/10\"\ngamma_norm = \"2\"\n").unwrap();
    let out = dir.path().join("bounds.txt");
    let o = ellsub(&["bounds", "--config", ok.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("delta = 1/14332723200000000\n"), "{text}");

    let diag = dir.path().join("diag.toml");
    std::fs::write(&diag, "[curve]\nA = \"0\"\nB = \"-2\"\n[ambient]\ng = 3\ns = 0\n").unwrap();
    let o = ellsub(&["bounds", "--config", diag.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("EXPONENT_NONPOSITIVE"));
}

#[test]
fn scan_of_empty_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let pts = dir.path().join("empty.txt");
    std::fs::write(&pts, "# nothing\n").unwrap();
    let o = ellsub(&["scan", "--config", fixtures.join("kernel_scan.toml").to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# --- summary ---"));
    assert!(text.lines().all(|l| l.starts_with('#') || l.contains("\"hit\":0") || l.contains("\"hit\": 0")), "{text}");
}

#[test]
fn check_passes() {
    let o = ellsub(&["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
