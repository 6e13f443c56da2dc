use std::path::Path;
use std::process::{Command, Output};

fn cxint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cxint")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn canonical(dir: &Path, name: &str, spec: &str) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let o = cxint(&["canonical", "--signature", spec, "--out", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn sigma_table_matches_rows_and_is_stable() {
    let a = cxint(&["sigma", "--kmax", "10", "--nmax", "15"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.contains("    4 |              1  1  3  3  6  6 10 10 15 15 21 21\n"), "{text}");
    assert!(text.lines().last().unwrap().ends_with("1  1  6  6 21 21"));
    assert_eq!(stdout(&cxint(&["sigma"])), text);
}

#[test]
fn sigma_single_row_and_json() {
    let o = cxint(&["sigma", "--kmax", "0", "--nmax", "3"]);
    assert_eq!(stdout(&o).lines().nth(2).unwrap(), "    0 | 1 1 1 1");
    let o = cxint(&["sigma", "--kmax", "3", "--nmax", "6", "--format", "json"]);
    let rows: Vec<Vec<Option<i64>>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[3], vec![None, None, None, Some(1), Some(0), Some(2), Some(0)]);
}

#[test]
fn invalid_flags_exit_one() {
    assert_eq!(cxint(&["sigma", "--kmax", "4", "--nmax", "3"]).status.code(), Some(1));
    assert_eq!(cxint(&["sigma", "--kmax", "x"]).status.code(), Some(1));
    assert_eq!(cxint(&["verify", "--mode", "orth-same", "--n", "2", "--k", "1"]).status.code(), Some(1));
    assert_eq!(cxint(&["canonical", "--signature", "1.0;l=0"]).status.code(), Some(1));
    assert_eq!(cxint(&["classify", "--pair", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn classify_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let jj = canonical(dir.path(), "jj.json", ";l=2;s=0");
    let o = cxint(&["classify", "--pair", &jj]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("l=2, s=0"));
    let h = canonical(dir.path(), "h.json", "1.5707963267948966:1;l=0;s=0");
    assert!(stdout(&cxint(&["classify", "--pair", &h])).contains("theta=1.5708 (mult 1)"));
    let bad = dir.path().join("bad.json");
    let text = r#"{"dim": 2, "J0": [[0,-1],[1,0]], "J1": [[0,-2],[0.5,0]]}"#;
    std::fs::write(&bad, text).unwrap();
    let o = cxint(&["classify", "--pair", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotOrthogonal"));
}

#[test]
fn intersect_reports_continuum_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let jj = canonical(dir.path(), "jj.json", ";l=2;s=0");
    let o = cxint(&["intersect", "--pair", &jj, "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("continuum component"));
    let pair = canonical(dir.path(), "p.json", "0.8:1;l=1;s=0");
    let o = cxint(&["intersect", "--pair", &pair, "--k", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["raw_count_same"], 1);
    assert_eq!(v["expected_same"], 1);
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    assert_eq!(cxint(&["intersect", "--pair", &pair, "--k", "4"]).status.code(), Some(1));
}

#[test]
fn verify_orth_same() {
    let o = cxint(&["verify", "--mode", "orth-same", "--n", "4", "--k", "2", "--trials", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("100/100 pass"), "{text}");
    assert!(text.contains("100 x pass    raw (2, 0)"), "{text}");
    let json = cxint(&["verify", "--mode", "orth-same", "--n", "2", "--k", "1", "--trials", "5", "--seed", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["pass_count"], 5);
}

#[test]
fn example_r4_line() {
    let o = cxint(&["example-r4", "--a", "1.2", "--b", "0.8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "2 points, signs +1 -1, signed total 0");
    assert_eq!(cxint(&["example-r4", "--a", "1", "--b", "1"]).status.code(), Some(2));
    assert_eq!(cxint(&["example-r4", "--a", "-1", "--b", "1"]).status.code(), Some(1));
    let o = cxint(&["r4-boundary", "--b", "0.7071067811865476"]);
    assert!(stdout(&o).starts_with("u_max = 0.600000000"));
}
