use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use unclosed_ffi::*;

fn last_error() -> Option<String> {
    let p = unclosed_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn expansion_handle_roundtrip() {
    unsafe {
        let mut h: *mut UnclosedExpansion = ptr::null_mut();
        assert_eq!(unclosed_expansion_new(3, 25, &mut h), UnclosedStatus::Ok);
        assert!(!h.is_null());
        assert_eq!(unclosed_expansion_max_order(h), 3);

        let mut b = 0.0;
        assert_eq!(unclosed_expansion_b(h, 0, &mut b), UnclosedStatus::Ok);
        assert_eq!(b, 1.0);
        assert_eq!(unclosed_expansion_b(h, 2, &mut b), UnclosedStatus::Ok);
        assert_eq!(b, 69.0 / 3200.0);
        let mut c = 0.0;
        assert_eq!(unclosed_expansion_c(h, 2, &mut c), UnclosedStatus::Ok);
        assert!((c - 0.02).abs() < 1e-16);
        assert_eq!(unclosed_expansion_c(h, 0, &mut c), UnclosedStatus::OutOfRange);
        assert!(last_error().unwrap().contains("index 0"));

        let mut s: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(unclosed_expansion_json(h, &mut s), UnclosedStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        unclosed_string_free(s);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["b"][1]["q"], "1/40");
        unclosed_expansion_free(h);
    }
}

#[test]
fn argument_errors() {
    unsafe {
        let mut h: *mut UnclosedExpansion = ptr::null_mut();
        assert_eq!(unclosed_expansion_new(0, 20, &mut h), UnclosedStatus::OutOfRange);
        assert!(h.is_null());
        assert_eq!(unclosed_expansion_new(25, 20, &mut h), UnclosedStatus::OutOfRange);
        assert_eq!(unclosed_expansion_new(2, 20, ptr::null_mut()), UnclosedStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(unclosed_expansion_b(ptr::null(), 0, &mut x), UnclosedStatus::NullPointer);
        assert_eq!(unclosed_expansion_max_order(ptr::null()), 0);
        assert_eq!(unclosed_r_numeric(10.0, &mut x), UnclosedStatus::OutOfRange);
        assert_eq!(unclosed_r_numeric(-1.0, &mut x), UnclosedStatus::OutOfRange);
        assert_eq!(unclosed_r_numeric(1e-4, &mut x), UnclosedStatus::PrecisionPolicy);
        assert!(last_error().is_some());
        unclosed_expansion_free(ptr::null_mut());
        unclosed_string_free(ptr::null_mut());
        // a successful call clears the message
        assert_eq!(unclosed_r_numeric(1.0, &mut x), UnclosedStatus::Ok);
        assert!(last_error().is_none());
    }
}

#[test]
fn r_and_e_values() {
    unsafe {
        let mut r = 0.0;
        assert_eq!(unclosed_r_numeric(0.05, &mut r), UnclosedStatus::Ok);
        assert!((r - 1.002_850_255_985_1).abs() < 1e-15);

        let mut s: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(unclosed_en_value_json(3, &mut s), UnclosedStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        unclosed_string_free(s);
        assert_eq!(doc["exact"], "112");
        assert_eq!(doc["subfield"], "RATIONAL");
        assert_eq!(unclosed_en_value_json(201, &mut s), UnclosedStatus::OutOfRange);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("unclosed.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "unclosed_expansion_new",
        "unclosed_expansion_free",
        "unclosed_expansion_b",
        "unclosed_expansion_c",
        "unclosed_expansion_json",
        "unclosed_r_numeric",
        "unclosed_en_value_json",
        "unclosed_last_error",
        "unclosed_string_free",
        "UNCLOSED_STATUS_PRECISION_POLICY",
        "typedef struct UnclosedExpansion UnclosedExpansion",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

/// Builds and runs a small C program against the static library.
#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler on PATH");
        return;
    }
    // test binaries live in deps/, next to the library artifacts
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps.join("libunclosed_ffi.a"), deps.parent().unwrap().join("libunclosed_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("static library next to the test binary");
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let bin = out_dir.join("unclosed_smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("c").join("smoke.c");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "C program exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
