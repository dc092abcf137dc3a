//! Exercise the C ABI from Rust and, end to end, from an actual C program
//! compiled against the generated header and the cdylib.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use bpslab_ffi::*;

fn preset(name: &str) -> *mut BpsSpec {
    let name = CString::new(name).unwrap();
    let mut spec: *mut BpsSpec = ptr::null_mut();
    let st = unsafe { bps_spec_preset(name.as_ptr(), &mut spec) };
    assert_eq!(st, BpsStatus::Ok);
    assert!(!spec.is_null());
    spec
}

#[test]
fn spec_lifecycle_and_values() {
    let spec = preset("example1");
    unsafe {
        let mut period = 0u64;
        assert_eq!(bps_spec_period(spec, &mut period), BpsStatus::Ok);
        assert_eq!(period, 27);

        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(bps_spec_evaluate(spec, 9, &mut re, &mut im), BpsStatus::Ok);
        assert_eq!((re, im), (-15.0, 0.0));

        assert_eq!(
            bps_spec_evaluate(spec, 0, &mut re, &mut im),
            BpsStatus::InvalidInput
        );
        let msg = CStr::from_ptr(bps_last_error_message());
        assert!(msg.to_str().unwrap().contains("n >= 1"));

        assert_eq!(
            bps_spec_euler_factor(spec, 3, &mut re, &mut im),
            BpsStatus::Ok
        );
        assert!(re.abs() <= 1e-12 && im == 0.0);
        assert_eq!(
            bps_spec_euler_factor(spec, 4, &mut re, &mut im),
            BpsStatus::InvalidInput
        );

        let mut holds = false;
        assert_eq!(bps_spec_condition_i(spec, 1e-9, &mut holds), BpsStatus::Ok);
        assert!(holds);

        assert_eq!(bps_spec_period_sum(spec, &mut re, &mut im), BpsStatus::Ok);
        assert!(re.abs() <= 1e-12);

        bps_spec_free(spec);
        bps_spec_free(ptr::null_mut());
    }
}

#[test]
fn from_json_and_errors() {
    let good = CString::new(r#"{"exceptional":[{"p":5,"values":[[-4,0]]}]}"#).unwrap();
    let mut spec: *mut BpsSpec = ptr::null_mut();
    unsafe {
        assert_eq!(bps_spec_from_json(good.as_ptr(), &mut spec), BpsStatus::Ok);
        let mut period = 0;
        bps_spec_period(spec, &mut period);
        assert_eq!(period, 5);
        bps_spec_free(spec);

        let bad = CString::new(r#"{"exceptional":[{"p":4,"values":[[1,0]]}]}"#).unwrap();
        assert_eq!(
            bps_spec_from_json(bad.as_ptr(), &mut spec),
            BpsStatus::InvalidInput
        );

        assert_eq!(
            bps_spec_preset(ptr::null(), &mut spec),
            BpsStatus::InvalidInput
        );

        let unknown = CString::new("nope").unwrap();
        assert_eq!(
            bps_spec_preset(unknown.as_ptr(), &mut spec),
            BpsStatus::InvalidInput
        );
    }
}

#[test]
fn scalar_functions() {
    unsafe {
        let mut d = 0u64;
        assert_eq!(bps_tau_summatory(10.0, &mut d), BpsStatus::Ok);
        assert_eq!(d, 27);
        assert_eq!(bps_tau_summatory(-1.0, &mut d), BpsStatus::InvalidInput);

        let mut v = 0.0;
        assert_eq!(bps_delta(5.0, &mut v), BpsStatus::Ok);
        assert!((v - 1.180_653_788_814_169_7).abs() < 1e-12);
        assert_eq!(bps_delta(0.2, &mut v), BpsStatus::InvalidInput);

        assert!((bps_lambda(5.0) - 3.4929).abs() <= 1e-4);

        let (mut series, mut zeta, mut bracket) = (0.0, 0.0, 0.0);
        assert_eq!(
            bps_tong(10_000, 2.0, &mut series, &mut zeta, &mut bracket),
            BpsStatus::Ok
        );
        assert!((0.64..=0.67).contains(&zeta));
        assert!(zeta - series >= 0.0 && zeta - series <= bracket);
        assert_eq!(
            bps_tong(10, 2.0, &mut series, &mut zeta, &mut bracket),
            BpsStatus::InvalidInput
        );
        assert_eq!(
            bps_tong(10_000_000, 1e-6, &mut series, &mut zeta, &mut bracket),
            BpsStatus::ResourceLimit
        );

        let (mut n, mut tau, mut ratio) = (0u64, 0u64, 0.0);
        assert_eq!(
            bps_omega_witness(2, 100, &mut n, &mut tau, &mut ratio),
            BpsStatus::Ok
        );
        assert_eq!((n, tau), (45, 6));
    }
}

#[test]
fn evaluator_handle() {
    unsafe {
        let mut ev: *mut BpsDeltaEvaluator = ptr::null_mut();
        assert_eq!(bps_evaluator_new(2000, 2.0, &mut ev), BpsStatus::Ok);
        let mut norm = 0.0;
        assert_eq!(bps_l2_norm_delta(ev, 1, 2.0, &mut norm), BpsStatus::Ok);
        assert!((norm - 0.466_800_647_225_335_05).abs() < 1e-13);
        assert_eq!(
            bps_l2_norm_delta(ev, 5, 4.0, &mut norm),
            BpsStatus::InvalidInput
        );
        bps_evaluator_free(ev);
        bps_evaluator_free(ptr::null_mut());

        assert_eq!(
            bps_evaluator_new(1 << 40, 0.001, &mut ev),
            BpsStatus::ResourceLimit
        );
    }
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include").join("bpslab.h");
    assert!(header.exists(), "generated header missing at {header:?}");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "bps_spec_preset",
        "bps_spec_evaluate",
        "bps_delta",
        "bps_tong",
        "bps_l2_norm_delta",
        "BpsStatus",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }

    // the cdylib sits in deps/ next to the test executable, or one level up
    // after a plain `cargo build`
    let exe = std::env::current_exe().unwrap();
    let deps_dir = exe.parent().unwrap().to_path_buf();
    let debug_dir = [deps_dir.clone(), deps_dir.parent().unwrap().to_path_buf()]
        .into_iter()
        .find(|d| d.join("libbpslab_ffi.so").exists())
        .expect("libbpslab_ffi.so not found near the test executable");

    let dir = tempfile_dir();
    let c_src = dir.join("smoke.c");
    std::fs::write(
        &c_src,
        r#"
#include <stdio.h>
#include <stdlib.h>
#include "bpslab.h"

int main(void) {
    BpsSpec *spec = NULL;
    if (bps_spec_preset("parity", &spec) != BPS_STATUS_OK) return 1;
    uint64_t period = 0;
    if (bps_spec_period(spec, &period) != BPS_STATUS_OK || period != 2) return 2;
    double re = 0.0, im = 0.0;
    if (bps_spec_evaluate(spec, 6, &re, &im) != BPS_STATUS_OK) return 3;
    if (re != -1.0 || im != 0.0) return 4;
    bool holds = false;
    if (bps_spec_condition_i(spec, 1e-9, &holds) != BPS_STATUS_OK || !holds) return 5;
    bps_spec_free(spec);
    uint64_t d10 = 0;
    if (bps_tau_summatory(10.0, &d10) != BPS_STATUS_OK || d10 != 27) return 6;
    if (bps_delta(0.5, &re) != BPS_STATUS_INVALID_INPUT) return 7;
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe_path = dir.join("smoke");
    let compile = std::process::Command::new("cc")
        .arg(&c_src)
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg("-L")
        .arg(&debug_dir)
        .arg("-lbpslab_ffi")
        .arg("-o")
        .arg(&exe_path)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "C compilation failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = std::process::Command::new(&exe_path)
        .env("LD_LIBRARY_PATH", &debug_dir)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "C smoke test exited with {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    let _ = std::fs::remove_dir_all(dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bpslab-ffi-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
