//! End-to-end runs of the `bpslab` binary: exit codes, CSV shapes, and the
//! bit-exact float printing contract.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bpslab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_exit_codes_follow_condition_i() {
    let ok = run(&["check", "--preset", "example1"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let text = stdout(&ok);
    assert!(text.contains("period m = 27"));
    assert!(text.contains("condition i: holds"));
    assert!(text.contains("bounded"));

    let bad = run(&["check", "--preset", "one"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("unbounded"));
}

#[test]
fn check_rejects_malformed_and_invalid_files() {
    let dir = tempfile::tempdir().unwrap();
    let nonprime = dir.path().join("nonprime.json");
    std::fs::write(&nonprime, r#"{"exceptional":[{"p":4,"values":[[1,0]]}]}"#).unwrap();
    let o = run(&["check", "--spec", nonprime.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not prime"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"exceptional\": [oops").unwrap();
    let o = run(&["check", "--spec", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "stderr: {}", stderr(&o));

    let o = run(&["check", "--spec", "no-such-file-or-preset"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["check"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_prints_17_digit_values() {
    let o = run(&["eval", "--preset", "example2", "--n", "25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // f(25) = -20 - 4 pi
    let want = -20.0 - 4.0 * std::f64::consts::PI;
    let re: f64 = text
        .split('=')
        .nth(1)
        .unwrap()
        .split('+')
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert_eq!(re.to_bits(), want.to_bits(), "printed {text}");
}

#[test]
fn sum_and_convolve_emit_csv() {
    let o = run(&["sum", "--preset", "parity", "--nmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,re,im"));
    let row2 = lines.nth(1).unwrap(); // x = 2
    assert!(row2.starts_with("2,"));
    let s2: f64 = row2.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(s2, 0.0);

    let o = run(&[
        "convolve", "--spec1", "parity", "--spec2", "parity", "--nmax", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("n,re,im\n"));
    let v4: f64 = text
        .lines()
        .nth(4)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(v4, -1.0);
}

#[test]
fn verify_thm4_accepts_preset_names_for_spec_flags() {
    let o = run(&[
        "verify-thm4",
        "--spec1",
        "parity",
        "--spec2",
        "parity",
        "--xmax",
        "1e4",
        "--samples",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("x,left_re,left_im,right_re,right_im,residual\n"));
    assert_eq!(text.lines().count(), 51);
    assert!(stderr(&o).contains("max residual"));

    // xmax below m1*m2 is a validation failure
    let o = run(&[
        "verify-thm4",
        "--spec1",
        "parity",
        "--spec2",
        "parity",
        "--xmax",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_tong_l2_taucorr_witness_smoke() {
    let o = run(&["delta", "--x", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("D(5) = 10"));
    assert!(text.contains("1.1806"), "got {text}");

    let o = run(&["tong", "--nmax", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("A_zeta"));
    assert!(text.contains("gap within bracket: yes"));

    let o = run(&["l2", "--n", "1", "--x", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n,X,norm,ratio_to_tong\n"));

    let o = run(&["tau-corr", "--a", "1", "--b", "1", "--x", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "83");

    let o = run(&["witness", "--m", "2", "--x", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("n = 45"));
    assert!(text.contains("tau(n) = 6"));

    let o = run(&["witness", "--m", "2", "--x", "20"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gram_reports_matrix_eigenvalues_and_quadratic_form() {
    let o = run(&[
        "gram", "--moduli", "1,2,4", "--x", "500", "--spec1", "parity", "--spec2", "parity",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("i,j,value\n"));
    assert_eq!(text.lines().count(), 10); // header + 9 entries
    let err = stderr(&o);
    assert!(err.contains("eigenvalues:"));
    assert!(err.contains("quadratic form ="));
}

#[test]
fn figure1_csv_svg_and_finding() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let svg = dir.path().join("fig1.svg");
    let o = run(&[
        "figure1",
        "--xmax",
        "3000",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,partial_sum,upper,lower"));

    let row1: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row1[0], "1");
    assert_eq!(row1[1].parse::<f64>().unwrap(), 1.0);
    assert_eq!(row1[2].parse::<f64>().unwrap(), 4.0);
    assert_eq!(row1[3].parse::<f64>().unwrap(), -4.0);

    let row5: Vec<&str> = text.lines().nth(5).unwrap().split(',').collect();
    assert_eq!(row5[0], "5");
    assert_eq!(row5[1].parse::<f64>().unwrap(), 2.0);

    // every float round-trips bit-exactly through its printed form
    for line in text.lines().skip(1) {
        for field in line.split(',').skip(1) {
            let v: f64 = field.parse().unwrap();
            assert_eq!(bpslab::output::fmt_float(v), field);
        }
    }

    // the envelope is first exceeded at x = 2305 (S = 28 > 4 * 2305^(1/4))
    assert!(stderr(&o).contains("x = 2305"), "stderr: {}", stderr(&o));

    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert_eq!(svg_text.matches("<polyline").count(), 3);

    let o = run(&["figure1", "--xmax", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no bound violation"));

    let o = run(&["figure1", "--xmax", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_budget_exit_code() {
    let o = run(&[
        "sum", "--preset", "parity", "--nmax", "1e6", "--mem", "0.0001",
    ]);
    assert_eq!(o.status.code(), Some(3), "stderr: {}", stderr(&o));
    assert!(stderr(&o).contains("memory budget"));
}

#[test]
fn mem_env_fallback_is_honored() {
    let o = bin()
        .args(["sum", "--preset", "parity", "--nmax", "1e6"])
        .env("BPSLAB_MEM_GIB", "0.0001")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));

    // explicit flag wins over the environment
    let o = bin()
        .args(["sum", "--preset", "parity", "--nmax", "1000", "--mem", "1"])
        .env("BPSLAB_MEM_GIB", "0.0001")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn spec_file_and_preset_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("example1.json");
    std::fs::write(
        &path,
        r#"{"exceptional":[{"p":3,"values":[[2,0],[-15,0],[0,0]]}]}"#,
    )
    .unwrap();
    let from_file = run(&["eval", "--spec", path.to_str().unwrap(), "--n", "9"]);
    let from_preset = run(&["eval", "--preset", "example1", "--n", "9"]);
    assert_eq!(stdout(&from_file), stdout(&from_preset));
    assert!(stdout(&from_file).contains("f(9)"));
    assert!(Path::new(&path).exists());
}

#[test]
fn complex_valued_spec_file_checks_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("complex.json");
    std::fs::write(
        &path,
        r#"{"exceptional":[{"p":2,"values":[[0,2],[-2,-2]]}]}"#,
    )
    .unwrap();
    let o = run(&["check", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("period m = 4"));
    assert!(text.contains("condition i: holds"));

    let o = run(&["eval", "--spec", path.to_str().unwrap(), "--n", "6"]);
    // f(6) = f(2) f(3) = 2i
    let text = stdout(&o);
    assert!(
        text.contains("0.0000000000000000e0 + 2.0000000000000000e0 i"),
        "{text}"
    );
}

#[test]
fn threads_flag_does_not_change_results() {
    let a = run(&["l2", "--n", "2", "--x", "20000", "--threads", "1"]);
    let b = run(&["l2", "--n", "2", "--x", "20000", "--threads", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    let a = run(&[
        "gram",
        "--moduli",
        "1,3,9",
        "--x",
        "30000",
        "--threads",
        "1",
    ]);
    let b = run(&[
        "gram",
        "--moduli",
        "1,3,9",
        "--x",
        "30000",
        "--threads",
        "7",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stderr(&a), stderr(&b));
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    let o = run(&["check", "--preset", "parity", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tolerance"));

    let o = run(&["check", "--preset", "parity", "--tol", "-1e-9"]);
    assert_eq!(o.status.code(), Some(2));
}
