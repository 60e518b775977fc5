use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use heatspec_ffi::*;

fn model(spec: &str) -> *mut HsModel {
    let spec = CString::new(spec).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hs_model_new(spec.as_ptr(), &mut out) }, HsStatus::Ok);
    out
}

fn last_error() -> String {
    let p = hs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn coefficients_and_determinants() {
    let disk = model("disk:radius=1");
    let mut m = 0;
    assert_eq!(unsafe { hs_model_dimension(disk, &mut m) }, HsStatus::Ok);
    assert_eq!(m, 2);
    let mut a = [0.0; 4];
    assert_eq!(
        unsafe { hs_heat_coefficients(disk, 0, HsBoundaryCondition::Dirichlet, a.as_mut_ptr()) },
        HsStatus::Ok
    );
    let sp = std::f64::consts::PI.sqrt();
    assert_eq!(a, [0.25, -sp / 4.0, 1.0 / 6.0, sp / 128.0]);

    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { hs_heat_coefficients_json(disk, 1, HsBoundaryCondition::Absolute, &mut json) },
        HsStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { hs_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["a"][2]["num"], "-2");
    assert_eq!(v["a"][2]["den"], "3");

    for (pair, det) in [(HsPair::DirichletNeumann, -144), (HsPair::Absolute01, 1584), (HsPair::Relative01, -432)] {
        let (mut n, mut d) = (0, 0);
        assert_eq!(hs_pair_determinant(pair, 7, &mut n, &mut d), HsStatus::Ok);
        assert_eq!((n, d), (det, 1));
    }
    unsafe { hs_model_free(disk) };
}

#[test]
fn errors_are_reported() {
    let spec = CString::new("disk:radius=-1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hs_model_new(spec.as_ptr(), &mut out) }, HsStatus::InvalidArgument);
    assert!(out.is_null());
    assert!(last_error().contains("radius"));

    assert_eq!(unsafe { hs_model_new(ptr::null(), &mut out) }, HsStatus::NullPointer);
    let disk = model("disk");
    let mut a = [0.0; 4];
    assert_eq!(
        unsafe { hs_heat_coefficients(disk, 5, HsBoundaryCondition::Dirichlet, a.as_mut_ptr()) },
        HsStatus::InvalidArgument
    );
    let hemi = model("hemisphere");
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { hs_compare_models_json(hemi, disk, HsPair::DirichletNeumann, &mut json) },
        HsStatus::HypothesisViolation
    );
    assert!(json.is_null());
    assert_eq!(hs_pair_determinant(HsPair::Absolute01, 1, &mut 0, &mut 0), HsStatus::InvalidArgument);
    assert!(!last_error().is_empty());

    let mut m = 0;
    assert_eq!(unsafe { hs_model_dimension(disk, &mut m) }, HsStatus::Ok);
    assert!(hs_last_error_message().is_null());
    unsafe {
        hs_model_free(disk);
        hs_model_free(hemi);
        hs_model_free(ptr::null_mut());
        hs_string_free(ptr::null_mut());
    }
}

#[test]
fn spectra_fit_and_classify() {
    let hemi = model("hemisphere");
    let mut lists = [ptr::null_mut(); 2];
    for (slot, bc) in lists.iter_mut().zip([HsBoundaryCondition::Dirichlet, HsBoundaryCondition::Neumann]) {
        assert_eq!(unsafe { hs_spectrum_new(hemi, 0, bc, 4e4, slot) }, HsStatus::Ok);
    }
    let mut len = 0;
    assert_eq!(unsafe { hs_spectrum_len(lists[0], &mut len) }, HsStatus::Ok);
    let (mut l, mut k) = (0.0, 0);
    assert_eq!(unsafe { hs_spectrum_entry(lists[0], 0, &mut l, &mut k) }, HsStatus::Ok);
    assert_eq!((l, k), (2.0, 1));
    assert_eq!(unsafe { hs_spectrum_entry(lists[0], len, &mut l, &mut k) }, HsStatus::InvalidArgument);

    let mut a = [0.0; 10];
    let mut cond = 0.0;
    let status = unsafe { hs_fit(lists[0], 7e-4, 7e-2, 60, 10, a.as_mut_ptr(), a.len(), &mut cond) };
    assert_eq!(status, HsStatus::Ok, "{}", last_error());
    let target = -std::f64::consts::PI.sqrt() / 16.0;
    assert!((a[3] - target).abs() < 1e-2 * target.abs());
    assert!(cond > 1.0 && cond < 1e13);
    assert_eq!(
        unsafe { hs_fit(lists[0], 7e-4, 7e-2, 60, 10, a.as_mut_ptr(), 4, ptr::null_mut()) },
        HsStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { hs_fit(lists[0], 1e-6, 1e-5, 60, 10, a.as_mut_ptr(), a.len(), ptr::null_mut()) },
        HsStatus::NumericPrecondition
    );

    let mut c = HsClassification::default();
    let status = unsafe { hs_classify_spectra(lists[0], lists[1], HsPair::DirichletNeumann, 2, 2, 1, 0.0, &mut c) };
    assert_eq!(status, HsStatus::Ok, "{}", last_error());
    assert!(c.totally_geodesic && c.minimal);
    assert!((c.vol_dm - 2.0 * std::f64::consts::PI).abs() < 1e-3);
    unsafe {
        for s in lists {
            hs_spectrum_free(s);
        }
        hs_model_free(hemi);
    }
}

#[test]
fn csv_round_trip() {
    let text = CString::new("lambda,multiplicity\n1,1\n4,2\n9,2\n").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hs_spectrum_from_csv(text.as_ptr(), 1, 10.0, &mut s) }, HsStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { hs_spectrum_len(s, &mut len) }, HsStatus::Ok);
    assert_eq!(len, 3);
    unsafe { hs_spectrum_free(s) };
    let bad = CString::new("1;1\n").unwrap();
    assert_eq!(unsafe { hs_spectrum_from_csv(bad.as_ptr(), 1, 0.0, &mut s) }, HsStatus::InvalidArgument);
}

#[test]
fn header_is_current() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/heatspec.h")).unwrap();
    for symbol in [
        "hs_model_new",
        "hs_heat_coefficients",
        "hs_pair_determinant",
        "hs_spectrum_new",
        "hs_fit",
        "hs_classify_spectra",
        "hs_compare_models_json",
        "hs_last_error_message",
        "typedef struct HsModel HsModel;",
        "HS_STATUS_NUMERIC_PRECONDITION = 4",
    ] {
        assert!(header.contains(symbol), "{symbol}");
    }
}

/// Compiles `tests/c/smoke.c` against the generated header and the static
/// library and runs it.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libheatspec_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = tempfile_path("heatspec_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}_{}", std::process::id()))
}
