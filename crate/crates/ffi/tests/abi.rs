use std::ffi::{CStr, CString};
use std::ptr;

use gmhd_ffi::*;

fn last_error() -> String {
    let p = gmhd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(gmhd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn params_roundtrip() {
    let mut p = ptr::null_mut();
    let st = unsafe { gmhd_params_derive(1.0, 1.0, 0.1, 2, f64::NAN, &mut p) };
    assert_eq!(st, GmhdStatus::Ok);
    assert!(!p.is_null());
    let mut v = GmhdParamValues::default();
    assert_eq!(unsafe { gmhd_params_values(p, &mut v) }, GmhdStatus::Ok);
    assert_eq!(v.r, 2);
    assert_eq!(v.alpha1, 1.0);
    assert!(v.k_base >= 1);
    assert!(v.t_final > 0.0 && v.delta > 0.0);

    let (mut b0, mut b1) = (0.0, 0.0);
    assert_eq!(unsafe { gmhd_b10_besov(p, 0.0, 1.0, &mut b0) }, GmhdStatus::Ok);
    assert_eq!(unsafe { gmhd_b10_besov(p, v.t_final, 1.0, &mut b1) }, GmhdStatus::Ok);
    assert_eq!(b0, 0.0);
    assert!(b1 > 0.0 && b1.is_finite());
    assert_eq!(unsafe { gmhd_b10_besov(p, v.t_final, -1.0, &mut b1) }, GmhdStatus::InvalidArgument);
    unsafe { gmhd_params_free(p) };
    unsafe { gmhd_params_free(ptr::null_mut()) };
}

#[test]
fn infeasible_params_report_status() {
    let mut p = ptr::null_mut();
    let st = unsafe { gmhd_params_derive(1.0, 1.0, 0.1, 0, f64::NAN, &mut p) };
    assert_ne!(st, GmhdStatus::Ok);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_out_pointer() {
    let st = unsafe { gmhd_params_derive(1.0, 1.0, 0.1, 2, f64::NAN, ptr::null_mut()) };
    assert_eq!(st, GmhdStatus::NullPointer);
    assert!(last_error().contains("out"));
    let st = unsafe { gmhd_run(ptr::null(), ptr::null_mut()) };
    assert_eq!(st, GmhdStatus::NullPointer);
}

#[test]
fn plane_wave_besov_values() {
    let e = (-0.5f64).exp() * 0.5f64.sqrt() / 4.0;
    assert!((gmhd_plane_wave_besov(4.0, 1.0, 1.0) - e).abs() < 1e-15);
    assert!(gmhd_plane_wave_besov(0.0, 1.0, 1.0).is_nan());
    assert!(gmhd_plane_wave_besov(1.0, 1.0, -1.0).is_nan());
}

#[test]
fn analytic_run_report() {
    let cfg = CString::new(r#"{"analytic_only": true, "s_list": [0.5, 1.0]}"#).unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { gmhd_run(cfg.as_ptr(), &mut rep) }, GmhdStatus::Ok);
    assert_eq!(unsafe { gmhd_report_index_count(rep) }, 2);
    let (mut s, mut bi, mut bf, mut f) = (0.0, 0.0, 0.0, 0.0);
    assert_eq!(unsafe { gmhd_report_index(rep, 1, &mut s, &mut bi, &mut bf, &mut f) }, GmhdStatus::Ok);
    assert_eq!(s, 1.0);
    assert!(bi > 0.0 && bf > 0.0);
    assert!((f - bf / bi).abs() <= 1e-12 * f.abs());
    assert_eq!(
        unsafe { gmhd_report_index(rep, 2, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        GmhdStatus::InvalidArgument
    );
    let json = unsafe { CStr::from_ptr(gmhd_report_json(rep)) }.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["analytic_only"], true);
    assert_eq!(v["indices"].as_array().unwrap().len(), 2);
    unsafe { gmhd_report_free(rep) };
}

#[test]
fn bad_config_is_rejected() {
    let mut rep = ptr::null_mut();
    let cfg = CString::new(r#"{"no_such_key": 1}"#).unwrap();
    assert_eq!(unsafe { gmhd_run(cfg.as_ptr(), &mut rep) }, GmhdStatus::Config);
    assert!(rep.is_null());
    assert!(last_error().contains("no_such_key"));
    let cfg = CString::new(r#"{"s_list": []}"#).unwrap();
    assert_eq!(unsafe { gmhd_run(cfg.as_ptr(), &mut rep) }, GmhdStatus::Config);
}

#[test]
fn verify_reports_pass_flag() {
    let cfg = CString::new("{}").unwrap();
    let mut passed = -1;
    assert_eq!(unsafe { gmhd_verify(cfg.as_ptr(), &mut passed) }, GmhdStatus::Ok);
    assert_eq!(passed, 1);
}
