//! C ABI over `realbrauer`.
//!
//! Every function returns an [`RbStatus`]. On failure the message is kept
//! per thread and read with [`rb_last_error`]. Strings returned through
//! `out` parameters are owned by the caller and released with
//! [`rb_string_free`]; groupoid handles with [`rb_groupoid_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use realbrauer::brauer::{BrauerGroup, DEFAULT_ENUMERATION_LIMIT};
use realbrauer::coefficients::RealCoefficient;
use realbrauer::cohomology::{circle_cohomology, cohomology};
use realbrauer::groupoid::{GroupoidDescription, RealGroupoid};
use realbrauer::oracle::brute_force_cohomology;
use realbrauer::types::{classify_type, graded_tensor, reference_model, GradedRealAlgebraModel, TypeIndex};
use realbrauer::Error;

/// Status codes. The nonzero values agree with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    InvalidInput = 1,
    BudgetExceeded = 2,
    OracleMismatch = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Opaque handle to a validated Real groupoid.
pub struct RbGroupoid {
    inner: RealGroupoid,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RbStatus {
    match e.exit_code() {
        2 => RbStatus::BudgetExceeded,
        3 => RbStatus::OracleMismatch,
        _ => RbStatus::InvalidInput,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RbStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            RbStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".into());
            RbStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Parse(format!("{what} is not valid UTF-8"))))
}

unsafe fn handle<'a>(g: *const RbGroupoid) -> Result<&'a RealGroupoid, Failure> {
    g.as_ref().map(|h| &h.inner).ok_or(Failure::Null("groupoid"))
}

unsafe fn put<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Lib(Error::Unsupported("result contains NUL".into())))?;
    put(out, c.into_raw(), "out")
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a groupoid description (JSON).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_groupoid_from_json(json: *const c_char, out: *mut *mut RbGroupoid) -> RbStatus {
    guard(|| {
        let g = GroupoidDescription::from_json_str(text(json, "json")?)?.build()?;
        put(out, Box::into_raw(Box::new(RbGroupoid { inner: g })), "out")
    })
}

/// Releases a groupoid handle. NULL is ignored.
///
/// # Safety
/// `g` must come from [`rb_groupoid_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rb_groupoid_free(g: *mut RbGroupoid) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Object and arrow counts.
///
/// # Safety
/// `g` must be a live handle; `objects` and `arrows` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_groupoid_size(g: *const RbGroupoid, objects: *mut usize, arrows: *mut usize) -> RbStatus {
    guard(|| {
        let g = handle(g)?;
        put(objects, g.object_count(), "objects")?;
        put(arrows, g.arrow_count(), "arrows")
    })
}

/// `HR^degree(G, A)` as text, e.g. `"Z/2 + Z"`. `coefficient` is a literal
/// such as `"Z2"`, `"Zm(4,-1)"`, `"Z(0,1)"` or `"S1"`.
///
/// # Safety
/// `g` must be a live handle, `coefficient` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_cohomology(
    g: *const RbGroupoid,
    coefficient: *const c_char,
    degree: u32,
    out: *mut *mut c_char,
) -> RbStatus {
    guard(|| {
        let g = handle(g)?;
        let a = RealCoefficient::parse(text(coefficient, "coefficient")?)?;
        let h = if a.is_circle() {
            circle_cohomology(g, degree as usize)?
        } else {
            cohomology(g, degree as usize, &a)?
        };
        put_string(out, h.to_string())
    })
}

/// Like [`rb_cohomology`] for finite coefficients, cross-checked against
/// cochain enumeration with at most `budget` steps.
///
/// # Safety
/// As for [`rb_cohomology`].
#[no_mangle]
pub unsafe extern "C" fn rb_cohomology_checked(
    g: *const RbGroupoid,
    coefficient: *const c_char,
    degree: u32,
    budget: u64,
    out: *mut *mut c_char,
) -> RbStatus {
    guard(|| {
        let g = handle(g)?;
        let a = RealCoefficient::parse(text(coefficient, "coefficient")?)?;
        let h = cohomology(g, degree as usize, &a)?;
        let brute = brute_force_cohomology(g, degree as usize, &a, budget)?;
        if h.as_discrete() != Some(&brute) {
            return Err(Error::OracleMismatch(format!("{h} by Smith normal form, {brute} by enumeration")).into());
        }
        put_string(out, h.to_string())
    })
}

/// Order of the Real graded Brauer group; 0 if it is infinite.
///
/// # Safety
/// `g` must be a live handle; `order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_brauer_order(g: *const RbGroupoid, order: *mut u64) -> RbStatus {
    guard(|| {
        let b = BrauerGroup::new(handle(g)?)?;
        put(order, b.order().unwrap_or(0), "order")
    })
}

/// Brauer group summary as a JSON object.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_brauer_json(g: *const RbGroupoid, out: *mut *mut c_char) -> RbStatus {
    guard(|| {
        let g = handle(g)?;
        let report = BrauerGroup::new(g)?.report(g, DEFAULT_ENUMERATION_LIMIT)?;
        let json = serde_json::to_string(&report).map_err(Error::from)?;
        put_string(out, json)
    })
}

/// Type of the graded tensor product of the reference models of types `p`
/// and `q`, computed from the matrix model.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_type_product(p: u8, q: u8, out: *mut u8) -> RbStatus {
    guard(|| {
        let m = graded_tensor(
            &reference_model(TypeIndex::new(p.into())),
            &reference_model(TypeIndex::new(q.into())),
        )?;
        put(out, classify_type(&m)?.value(), "out")
    })
}

/// Type index in `0..8` of an algebra model given as JSON.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rb_classify_model_json(json: *const c_char, out: *mut u8) -> RbStatus {
    guard(|| {
        let model: GradedRealAlgebraModel = serde_json::from_str(text(json, "json")?).map_err(Error::from)?;
        put(out, classify_type(&model)?.value(), "out")
    })
}
