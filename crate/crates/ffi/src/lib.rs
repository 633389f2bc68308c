//! C ABI over the `unclosed` library.
//!
//! Handles are opaque and owned by the caller: every `*_new` has a matching
//! `*_free`, and every returned `char *` must go back through
//! [`unclosed_string_free`]. Functions report through [`UnclosedStatus`]; the
//! message for the most recent failure on the calling thread is available from
//! [`unclosed_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unclosed::expansion::{render_expansion, Format, MAX_SUPPORTED_ORDER};
use unclosed::numeric::{parse_s, r_numeric, PrecisionContext, MAX_WORKING_DIGITS};
use unclosed::real::bits_for_digits;
use unclosed::sequences::en_value;
use unclosed::{compute_expansion, Error, ExpansionResult};

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnclosedStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PrecisionPolicy = 3,
    OutOfRange = 4,
    Internal = 5,
}

/// Exact expansion coefficients `b_0 … b_J` and `c_1 … c_J`.
pub struct UnclosedExpansion {
    inner: ExpansionResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> UnclosedStatus {
    match err {
        Error::PrecisionPolicy { .. } => UnclosedStatus::PrecisionPolicy,
        _ => UnclosedStatus::InvalidArgument,
    }
}

/// Runs `f`, converting panics and library errors into status codes.
fn guard(f: impl FnOnce() -> Result<(), (UnclosedStatus, String)>) -> UnclosedStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UnclosedStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UnclosedStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (UnclosedStatus, String) {
    (status_of(&e), e.to_string())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Computes the expansion through order `max_order` (1 ≤ `max_order` ≤ 24),
/// rendering floats with `precision` significant digits.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn unclosed_expansion_new(
    max_order: u32,
    precision: u32,
    out: *mut *mut UnclosedExpansion,
) -> UnclosedStatus {
    guard(|| {
        if out.is_null() {
            return Err((UnclosedStatus::NullPointer, "out is null".into()));
        }
        let j = max_order as usize;
        if !(1..=MAX_SUPPORTED_ORDER).contains(&j) {
            return Err((
                UnclosedStatus::OutOfRange,
                format!("max_order must be in [1, {MAX_SUPPORTED_ORDER}]"),
            ));
        }
        if precision == 0 {
            return Err((UnclosedStatus::InvalidArgument, "precision must be positive".into()));
        }
        let inner = compute_expansion(j, precision).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(UnclosedExpansion { inner }));
        Ok(())
    })
}

/// Releases a handle from [`unclosed_expansion_new`]. Null is ignored.
///
/// # Safety
/// `handle` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn unclosed_expansion_free(handle: *mut UnclosedExpansion) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Order `J` of the expansion, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn unclosed_expansion_max_order(handle: *const UnclosedExpansion) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.max_order)
}

unsafe fn coefficient(
    handle: *const UnclosedExpansion,
    j: usize,
    out: *mut f64,
    pick: fn(&ExpansionResult, usize) -> Option<f64>,
) -> UnclosedStatus {
    guard(|| {
        let h = handle.as_ref().ok_or((UnclosedStatus::NullPointer, "handle is null".to_string()))?;
        if out.is_null() {
            return Err((UnclosedStatus::NullPointer, "out is null".into()));
        }
        let v = pick(&h.inner, j)
            .ok_or((UnclosedStatus::OutOfRange, format!("index {j} outside the computed range")))?;
        *out = v;
        Ok(())
    })
}

/// `b_j` as a double, `0 ≤ j ≤ J`.
///
/// # Safety
/// `handle` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn unclosed_expansion_b(
    handle: *const UnclosedExpansion,
    j: usize,
    out: *mut f64,
) -> UnclosedStatus {
    coefficient(handle, j, out, |r, j| r.b(j).map(|x| x.to_f64()))
}

/// `c_j` as a double, `1 ≤ j ≤ J`.
///
/// # Safety
/// `handle` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn unclosed_expansion_c(
    handle: *const UnclosedExpansion,
    j: usize,
    out: *mut f64,
) -> UnclosedStatus {
    coefficient(handle, j, out, |r, j| r.c(j).map(|x| x.to_f64()))
}

/// The expansion as the same JSON document `unclosed coeffs` writes.
///
/// # Safety
/// `handle` must be a live handle and `out` writable. Free the string with
/// [`unclosed_string_free`].
#[no_mangle]
pub unsafe extern "C" fn unclosed_expansion_json(
    handle: *const UnclosedExpansion,
    out: *mut *mut c_char,
) -> UnclosedStatus {
    guard(|| {
        let h = handle.as_ref().ok_or((UnclosedStatus::NullPointer, "handle is null".to_string()))?;
        if out.is_null() {
            return Err((UnclosedStatus::NullPointer, "out is null".into()));
        }
        *out = into_c_string(render_expansion(&h.inner, Format::Json));
        Ok(())
    })
}

/// `R(s) = F(e^{−s})·√(2π√5/s)·e^{−π²/(5s)}` rounded to a double, with the
/// working precision chosen by the library's policy. `s` is read through its
/// shortest decimal representation.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn unclosed_r_numeric(s: f64, out: *mut f64) -> UnclosedStatus {
    guard(|| {
        if out.is_null() {
            return Err((UnclosedStatus::NullPointer, "out is null".into()));
        }
        if !(s > 0.0 && s <= 5.0) {
            return Err((UnclosedStatus::OutOfRange, format!("s = {s} outside (0, 5]")));
        }
        let ctx = PrecisionContext::for_s(s, 20);
        if ctx.digits > MAX_WORKING_DIGITS {
            return Err((
                UnclosedStatus::PrecisionPolicy,
                format!("s = {s} needs {} working digits", ctx.digits),
            ));
        }
        let sr = parse_s(&s.to_string(), bits_for_digits(ctx.digits + ctx.guard)).map_err(lib_err)?;
        *out = r_numeric(&sr, &ctx).map_err(lib_err)?.to_f64();
        Ok(())
    })
}

/// Exact `E_n` (0 ≤ `n` ≤ 200) as JSON: the field coordinates, the smallest
/// subfield and a 30-digit float.
///
/// # Safety
/// `out` must be writable. Free the string with [`unclosed_string_free`].
#[no_mangle]
pub unsafe extern "C" fn unclosed_en_value_json(n: u32, out: *mut *mut c_char) -> UnclosedStatus {
    guard(|| {
        if out.is_null() {
            return Err((UnclosedStatus::NullPointer, "out is null".into()));
        }
        if n > 200 {
            return Err((UnclosedStatus::OutOfRange, "n must be at most 200".into()));
        }
        let e = en_value(n as usize);
        let doc = serde_json::json!({
            "n": n,
            "subfield": e.subfield(),
            "exact": e.to_string(),
            "value": e,
            "float": e.to_real(40).to_sci(30),
        });
        *out = into_c_string(doc.to_string());
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn unclosed_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn unclosed_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
