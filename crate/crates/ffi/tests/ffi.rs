//! Exercises the C ABI from Rust and compiles a C client against the
//! generated header.

use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use homlie_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { homlie_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(homlie_last_error_message()) }.to_str().unwrap().to_owned()
}

fn family(json: &str) -> (HomlieStatus, *mut HomlieAlgebra) {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { homlie_algebra_from_family(c.as_ptr(), &mut out) };
    (status, out)
}

#[test]
fn algebra_round_trip() {
    let (status, alg) = family(r#"{"family":"kummer-witt","n":4,"r":2}"#);
    assert_eq!(status, HomlieStatus::Ok);
    let mut rank = 0usize;
    assert_eq!(unsafe { homlie_algebra_rank(alg, &mut rank) }, HomlieStatus::Ok);
    assert_eq!(rank, 4);
    let mut passed = false;
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_check_axioms(alg, &mut passed, &mut report) }, HomlieStatus::Ok);
    assert!(passed);
    let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(report["jacobi"], true);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_to_json(alg, &mut json) }, HomlieStatus::Ok);
    let json = CString::new(take_string(json)).unwrap();
    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_from_json(json.as_ptr(), &mut copy) }, HomlieStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_to_json(copy, &mut again) }, HomlieStatus::Ok);
    assert_eq!(take_string(again), json.to_str().unwrap());

    let mut series = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_derived_series(alg, &mut series) }, HomlieStatus::Ok);
    let series: serde_json::Value = serde_json::from_str(&take_string(series)).unwrap();
    assert_eq!(series["dims"], serde_json::json!([4, 2, 0]));

    let mut latex = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_to_latex(alg, &mut latex) }, HomlieStatus::Ok);
    assert!(take_string(latex).contains("\\varepsilon"));
    unsafe {
        homlie_algebra_free(copy);
        homlie_algebra_free(alg);
    }
}

#[test]
fn error_codes_and_messages() {
    let (status, alg) = family(r#"{"family":"kummer-witt","n":3,"bogus":1}"#);
    assert_eq!(status, HomlieStatus::Parse);
    assert!(alg.is_null());
    assert!(last_error().contains("bogus"));
    let (status, _) = family(r#"{"family":"kummer-witt","n":3,"r":3}"#);
    assert_eq!(status, HomlieStatus::Precondition);
    let (status, _) = family(r#"{"family":"artin-schreier","p":4}"#);
    assert_eq!(status, HomlieStatus::InvalidConstruction);
    // Null arguments.
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { homlie_algebra_from_family(ptr::null(), &mut out) }, HomlieStatus::NullPointer);
    let mut rank = 0usize;
    assert_eq!(unsafe { homlie_algebra_rank(ptr::null(), &mut rank) }, HomlieStatus::NullPointer);
    let (status, alg) = family(r#"{"family":"jackson","n":3}"#);
    assert_eq!(status, HomlieStatus::Ok);
    assert_eq!(last_error(), "");
    assert_eq!(unsafe { homlie_algebra_rank(alg, ptr::null_mut()) }, HomlieStatus::NullPointer);
    // Invalid UTF-8.
    let bytes = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { homlie_algebra_from_json(bytes.as_ptr().cast(), &mut out) }, HomlieStatus::InvalidUtf8);
    unsafe {
        homlie_algebra_free(alg);
        homlie_algebra_free(ptr::null_mut());
        homlie_string_free(ptr::null_mut());
    }
}

#[test]
fn presentations() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { homlie_presentation_jackson(3, &mut p) }, HomlieStatus::Ok);
    let elt = CString::new("e2*e0").unwrap();
    let mut nf = ptr::null_mut();
    assert_eq!(unsafe { homlie_presentation_normal_form(p, elt.as_ptr(), &mut nf) }, HomlieStatus::Ok);
    assert_eq!(take_string(nf), "xi*e0*e2");
    let mut central = false;
    let cube = CString::new("e1^3").unwrap();
    assert_eq!(unsafe { homlie_presentation_is_central(p, cube.as_ptr(), &mut central) }, HomlieStatus::Ok);
    assert!(central);
    let square = CString::new("e1^2").unwrap();
    assert_eq!(unsafe { homlie_presentation_is_central(p, square.as_ptr(), &mut central) }, HomlieStatus::Ok);
    assert!(!central);
    let mut confluent = false;
    assert_eq!(unsafe { homlie_presentation_confluent(p, 4, &mut confluent) }, HomlieStatus::Ok);
    assert!(confluent);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { homlie_presentation_to_json(p, &mut json) }, HomlieStatus::Ok);
    let json = CString::new(take_string(json)).unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { homlie_presentation_from_json(json.as_ptr(), &mut q) }, HomlieStatus::Ok);
    let bad = CString::new("e7").unwrap();
    assert_eq!(unsafe { homlie_presentation_normal_form(q, bad.as_ptr(), &mut nf) }, HomlieStatus::Parse);
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { homlie_presentation_jackson(0, &mut z) }, HomlieStatus::InvalidConstruction, "{}", last_error());
    unsafe {
        homlie_presentation_free(q);
        homlie_presentation_free(p);
    }
}

#[test]
fn zeta_json() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { homlie_zeta_jackson(3, 7, 2, 1, 1, &mut out) }, HomlieStatus::Ok, "{}", last_error());
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["perK"][0]["onePoints"], 7);
    assert_eq!(v["zetaRam"], serde_json::json!(["1", "11"]));
    assert_eq!(unsafe { homlie_zeta_jackson(3, 9, 0, 1, 1, &mut out) }, HomlieStatus::Unsupported);
    assert_eq!(unsafe { homlie_zeta_jackson(3, 7, 3, 1, 1, &mut out) }, HomlieStatus::Precondition);
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn c_compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/homlie.h")).unwrap();
    let source = std::fs::read_to_string(manifest_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
    }
    assert!(header.contains("typedef struct HomlieAlgebra HomlieAlgebra;"));
}

/// Compile the C client against the header; link and run it when the static
/// library of this profile is present.
#[test]
fn c_client_compiles_and_runs() {
    let Some(cc) = c_compiler() else {
        eprintln!("no C compiler available; skipping");
        return;
    };
    let dir = manifest_dir();
    let src = dir.join("tests/c/smoke.c");
    let include = dir.join("include");
    let syntax = Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&include).arg(&src).status().unwrap();
    assert!(syntax.success());

    // target/<profile>/deps/<test binary> → target/<profile>/libhomlie_ffi.a
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libhomlie_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; link step skipped", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("homlie_smoke_{}", std::process::id()));
    let link = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(link.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("rank=3 passed=1 nf=xi*e0*e2 central=1 bad=3"), "{stdout}");
}
