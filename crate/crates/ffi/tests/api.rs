use std::ffi::{c_char, CStr, CString};
use std::ptr;

use repgrowth_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { rg_string_free(s) };
    out
}

fn last_error() -> String {
    let p = rg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn named_group_zeta_and_fibers() {
    let name = CString::new("s3").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(rg_group_new_named(name.as_ptr(), &mut g), RgStatus::Ok);
        let mut order = 0u64;
        assert_eq!(rg_group_order(g, &mut order), RgStatus::Ok);
        assert_eq!(order, 6);
        let mut classes = 0usize;
        assert_eq!(rg_group_class_count(g, &mut classes), RgStatus::Ok);
        assert_eq!(classes, 3);
        let mut z = ptr::null_mut();
        assert_eq!(rg_group_zeta(g, 2, 1, &mut z), RgStatus::Ok);
        assert_eq!(take(z), "9/4");
        // commutators in S_3 hit the identity 18 times out of 36
        let mut f = ptr::null_mut();
        assert_eq!(rg_group_fiber_count(g, 1, 0, &mut f), RgStatus::Ok);
        assert_eq!(take(f), "18");
        assert_eq!(rg_group_zeta(g, 3, 1, &mut z), RgStatus::InvalidArgument);
        rg_group_free(g);
    }
}

#[test]
fn sl_group_and_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("g.bin").to_str().unwrap()).unwrap();
    let ring = CString::new("zmod:3^1").unwrap();
    let (mut g, mut h) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(
            rg_group_new_sl(2, ring.as_ptr(), 1_000_000, &mut g),
            RgStatus::Ok
        );
        assert_eq!(rg_group_save(g, path.as_ptr()), RgStatus::Ok);
        assert_eq!(rg_group_load(path.as_ptr(), &mut h), RgStatus::Ok);
        let mut z = ptr::null_mut();
        assert_eq!(rg_group_zeta(h, 2, 1, &mut z), RgStatus::Ok);
        assert_eq!(take(z), "139/36");
        rg_group_free(g);
        rg_group_free(h);
    }
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    let bad = CString::new("nonsense").unwrap();
    let ring = CString::new("zmod:7^2").unwrap();
    unsafe {
        assert_eq!(
            rg_group_new_named(bad.as_ptr(), &mut g),
            RgStatus::InvalidArgument
        );
        assert!(last_error().contains("nonsense"));
        assert_eq!(
            rg_group_new_named(ptr::null(), &mut g),
            RgStatus::NullPointer
        );
        assert_eq!(
            rg_group_new_sl(2, ring.as_ptr(), 1000, &mut g),
            RgStatus::BudgetExceeded
        );
        assert!(g.is_null());
        assert_eq!(rg_group_order(ptr::null(), &mut 0), RgStatus::NullPointer);
        let edge = CString::new("path:4").unwrap();
        let f5 = CString::new("zmod:5^1").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            rg_pointcount(edge.as_ptr(), 2, f5.as_ptr(), 10, &mut s),
            RgStatus::BudgetExceeded
        );
        rg_group_free(ptr::null_mut());
        rg_string_free(ptr::null_mut());
    }
}

#[test]
fn counts_bounds_and_pushforward() {
    let edge = CString::new("edge").unwrap();
    let f3 = CString::new("zmod:3^1").unwrap();
    let e8 = CString::new("e8").unwrap();
    let (a, b) = (CString::new("1,1").unwrap(), CString::new("0,1").unwrap());
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            rg_pointcount(edge.as_ptr(), 2, f3.as_ptr(), 1_000_000, &mut s),
            RgStatus::Ok
        );
        assert_eq!(take(s), "33");
        let mut bound = 0u64;
        assert_eq!(rg_bound_root(e8.as_ptr(), &mut bound), RgStatus::Ok);
        assert_eq!(bound, 745);
        let (mut head, mut strict) = (0u64, 0u64);
        assert_eq!(rg_min_genus(bound, &mut head, &mut strict), RgStatus::Ok);
        assert_eq!(head, 374);
        let mut j = ptr::null_mut();
        assert_eq!(
            rg_pushforward_json(a.as_ptr(), b.as_ptr(), 3, 10, &mut j),
            RgStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(v["behavior"], "convergent");
        assert_eq!(v["continuity"]["guaranteed"], true);
    }
}

#[test]
fn pipeline_handle() {
    let ty = CString::new("sp").unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(rg_pipeline_run(ty.as_ptr(), 3, &mut p), RgStatus::Ok);
        let mut n = 0usize;
        assert_eq!(rg_pipeline_dot_count(p, &mut n), RgStatus::Ok);
        assert!(n > 0);
        let (mut name, mut doc) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(rg_pipeline_dot(p, 0, &mut name, &mut doc), RgStatus::Ok);
        assert!(take(name).starts_with("sp3"));
        assert!(take(doc).starts_with("graph"));
        assert_eq!(
            rg_pipeline_dot(p, n, &mut name, &mut doc),
            RgStatus::InvalidArgument
        );
        let mut j = ptr::null_mut();
        assert_eq!(rg_pipeline_report_json(p, &mut j), RgStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(v["d"], 3);
        let mut count = 0usize;
        assert_eq!(rg_pipeline_discrepancy_count(p, &mut count), RgStatus::Ok);
        assert_eq!(count, v["discrepancies"].as_array().unwrap().len());
        rg_pipeline_free(p);
        let bad = CString::new("sp").unwrap();
        assert_eq!(
            rg_pipeline_run(bad.as_ptr(), 0, &mut p),
            RgStatus::InvalidArgument
        );
    }
}

#[test]
fn verify_through_ffi() {
    let mut passed = false;
    let mut detail = ptr::null_mut();
    unsafe {
        assert_eq!(
            rg_verify_criterion(9, false, 1, &mut passed, &mut detail),
            RgStatus::Ok
        );
        assert!(passed);
        assert!(take(detail).contains("745"));
        assert_eq!(
            rg_verify_criterion(0, false, 1, &mut passed, ptr::null_mut()),
            RgStatus::InvalidArgument
        );
    }
    let v = unsafe { CStr::from_ptr(rg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
