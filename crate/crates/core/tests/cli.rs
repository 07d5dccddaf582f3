use std::process::{Command, Output};

use erasure_exit::codebook::{direct_sum, repetition_code, single_parity_check_code, write_code_file};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erasure-exit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_then_reload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rm13.txt");
    let o = bin(&["construct", "--family", "rm", "--v", "1", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("8 4 RM(1,3)\n"));
    assert_eq!(text.lines().count(), 5);
    let o = bin(&["area-check", "--code-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("area = 1/2 = K/N PASS"));
}

#[test]
fn area_check_line() {
    let o = bin(&["area-check", "--family", "rm", "--v", "1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# erasure-exit "));
    assert_eq!(lines.next().unwrap(), "area = 5/16 = K/N PASS");
}

#[test]
fn exit_mc_csv_is_reproducible_and_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = bin(&[
            "exit-mc", "--family", "ebch", "--v", "1", "--n", "4", "--step", "0.1", "--trials", "2000",
            "--seed", "5", "--out", a.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        runs.push(std::fs::read(&a).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let text = runs.pop().unwrap();
    let text = String::from_utf8(text).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "n,N,rate,p,h_mean,h_stderr,pb_mean,pb_stderr,pB_mean,pB_stderr,trials,seed"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][3], 0.0);
    assert_eq!(rows[0][4], 0.0);
    assert_eq!(rows[10][4], 1.0);
    assert!(rows.iter().all(|r| r.len() == 12 && r[1] == 16.0 && r[10] == 2000.0));
}

#[test]
fn width_exact_reports_bound() {
    let o = bin(&["width", "--family", "rm", "--v", "1", "--n", "4", "--eps", "0.1,0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let widths: Vec<&str> = out.lines().filter(|l| l.starts_with("eps = ")).collect();
    assert_eq!(widths.len(), 2);
    assert!(widths.iter().all(|l| l.ends_with("PASS")));
}

#[test]
fn width_mc_out_of_grid() {
    let o = bin(&["width", "--family", "rep", "--len", "3", "--method", "mc", "--step", "1", "--trials", "100"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error[range]"), "{err}");
}

#[test]
fn symmetry_check_refutes_direct_sum() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sum.txt");
    let code = direct_sum(&repetition_code(3).unwrap(), &single_parity_check_code(3).unwrap()).unwrap();
    std::fs::write(&path, write_code_file(&code)).unwrap();
    let o = bin(&["symmetry-check", "--code-file", path.to_str().unwrap(), "--property", "transitive"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: refuted"));
}

#[test]
fn bounds_check_passes() {
    let o = bin(&["bounds-check", "--family", "rm", "--v", "1", "--n", "4", "--trials", "2000"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.lines().filter(|l| l.ends_with("PASS")).count() >= 8);
}

#[test]
fn exit_exact_lists_enumerators() {
    let o = bin(&["exit-exact", "--family", "rep", "--len", "3", "--step", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("omega 0: 0 0 1"));
    assert!(out.contains("0.5,0.25,1"));
    assert!(out.contains("area = 1/3 = K/N PASS"));
}

#[test]
fn usage_and_config_errors() {
    assert_eq!(bin(&[]).status.code(), Some(2));
    assert_eq!(bin(&["construct", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(bin(&["exit-mc", "--family", "rep", "--len", "3", "--trials", "0"]).status.code(), Some(2));
    let o = bin(&["area-check", "--family", "rm", "--v", "2", "--n", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("error[cap]"));
    assert_eq!(bin(&["--version"]).status.code(), Some(0));
}

#[test]
fn figure1_widths_decrease() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let o = bin(&["figure1", "--n", "5,7,9", "--trials", "20000", "--seed", "7", "--out", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("widths strictly decreasing PASS"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 2 + 3 * 101);
    assert!(csv.lines().nth(2).unwrap().starts_with("5,32,0.5000000000,0,0,"));
}
