use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use realbrauer_ffi::*;

fn fixture(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn load(name: &str) -> *mut RbGroupoid {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { rb_groupoid_from_json(fixture(name).as_ptr(), &mut g) },
        RbStatus::Ok
    );
    g
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { rb_string_free(s) };
    out
}

fn last_error() -> String {
    let p = rb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn cohomology_and_brauer_through_handles() {
    let g = load("z2group.json");
    let (mut objects, mut arrows) = (0, 0);
    assert_eq!(unsafe { rb_groupoid_size(g, &mut objects, &mut arrows) }, RbStatus::Ok);
    assert_eq!((objects, arrows), (1, 2));
    let mut s = ptr::null_mut();
    let z2 = CString::new("Z2").unwrap();
    assert_eq!(
        unsafe { rb_cohomology_checked(g, z2.as_ptr(), 2, 1 << 20, &mut s) },
        RbStatus::Ok
    );
    assert_eq!(take(s), "Z/2");
    let s1 = CString::new("S1").unwrap();
    assert_eq!(unsafe { rb_cohomology(g, s1.as_ptr(), 1, &mut s) }, RbStatus::Ok);
    assert_eq!(take(s), "Z/2");
    let mut order = 0;
    assert_eq!(unsafe { rb_brauer_order(g, &mut order) }, RbStatus::Ok);
    assert_eq!(order, 32);
    assert_eq!(unsafe { rb_brauer_json(g, &mut s) }, RbStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["total_order"], 32);
    unsafe { rb_groupoid_free(g) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut g = ptr::null_mut();
    let bad = CString::new("{\"kind\":\"nonsense\"}").unwrap();
    assert_eq!(
        unsafe { rb_groupoid_from_json(bad.as_ptr(), &mut g) },
        RbStatus::InvalidInput
    );
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    let g = load("z4group.json");
    let mut s = ptr::null_mut();
    let q = CString::new("Q").unwrap();
    assert_eq!(
        unsafe { rb_cohomology(g, q.as_ptr(), 0, &mut s) },
        RbStatus::InvalidInput
    );
    let z4 = CString::new("Zm(4,+1)").unwrap();
    assert_eq!(
        unsafe { rb_cohomology_checked(g, z4.as_ptr(), 3, 100, &mut s) },
        RbStatus::BudgetExceeded
    );
    assert!(last_error().contains("budget"));
    assert_eq!(
        unsafe { rb_cohomology(ptr::null(), z4.as_ptr(), 0, &mut s) },
        RbStatus::NullPointer
    );
    assert_eq!(
        unsafe { rb_cohomology(g, z4.as_ptr(), 0, ptr::null_mut()) },
        RbStatus::NullPointer
    );
    assert_eq!(unsafe { rb_cohomology(g, z4.as_ptr(), 0, &mut s) }, RbStatus::Ok);
    assert!(rb_last_error().is_null());
    assert_eq!(take(s), "Z/4");
    unsafe { rb_groupoid_free(g) };
    unsafe { rb_groupoid_free(ptr::null_mut()) };
    unsafe { rb_string_free(ptr::null_mut()) };
}

#[test]
fn types_through_the_abi() {
    let mut t = 0u8;
    assert_eq!(unsafe { rb_type_product(3, 6, &mut t) }, RbStatus::Ok);
    assert_eq!(t, 1);
    assert_eq!(
        unsafe { rb_classify_model_json(fixture("model_k6.json").as_ptr(), &mut t) },
        RbStatus::Ok
    );
    assert_eq!(t, 6);
    assert_eq!(
        unsafe { CStr::from_ptr(rb_version()) }.to_str().unwrap(),
        env!("CARGO_PKG_VERSION")
    );
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("librealbrauer_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_the_header() {
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "realbrauer.h"

int main(void) {
    RbGroupoid *g = NULL;
    if (rb_groupoid_from_json("{\"kind\":\"real_space\",\"points\":1}", &g) != RB_STATUS_OK) return 10;
    uint64_t order = 0;
    if (rb_brauer_order(g, &order) != RB_STATUS_OK || order != 8) return 11;
    char *h = NULL;
    if (rb_cohomology(g, "Z8", 0, &h) != RB_STATUS_OK || strcmp(h, "Z/8") != 0) return 12;
    rb_string_free(h);
    if (rb_cohomology(g, "bogus", 0, &h) != RB_STATUS_INVALID_INPUT || rb_last_error() == NULL) return 13;
    rb_groupoid_free(g);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
