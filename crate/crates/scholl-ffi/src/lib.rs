//! C ABI over the core library.
//!
//! Every fallible call returns a [`SchollStatus`]; on failure the message is
//! available from [`scholl_last_error`] until the next call on the same
//! thread. Handles are created by `*_new` / solver calls and released with
//! the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use scholl::asd::{solve_from_eta, ASDQuartic};
use scholl::charsums::{trace_sum_with, Method};
use scholl::frobenius::induce_charpoly;
use scholl::places::{enumerate_places, Place};
use scholl::Error;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SchollStatus {
    Ok = 0,
    NotPrime = 1,
    Reducible = 2,
    Domain = 3,
    Capacity = 4,
    Consistency = 5,
    Precision = 6,
    Ambiguity = 7,
    Inconsistency = 8,
    NullPointer = 9,
    /// The output buffer is too small; the needed length was still written.
    BufferTooSmall = 10,
    /// An integer result does not fit in 64 bits.
    Overflow = 11,
    Panic = 12,
    Unavailable = 13,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SchollMethod {
    Auto = 0,
    Brute = 1,
    Greene = 2,
}

/// The places of Q(ζ_n) above p.
pub struct SchollPlaces {
    places: Vec<Place>,
}

/// A solved Atkin–Swinnerton-Dyer quartic.
pub struct SchollQuartic {
    quartic: ASDQuartic,
    r_used: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SchollStatus {
    match e {
        Error::NotPrime(..) => SchollStatus::NotPrime,
        Error::Reducible { .. } => SchollStatus::Reducible,
        Error::Domain(_) => SchollStatus::Domain,
        Error::Capacity(_) => SchollStatus::Capacity,
        Error::Consistency(_) => SchollStatus::Consistency,
        Error::Precision(_) => SchollStatus::Precision,
        Error::Ambiguity(_) => SchollStatus::Ambiguity,
        Error::Inconsistency(_) => SchollStatus::Inconsistency,
        Error::Unavailable(_) => SchollStatus::Unavailable,
    }
}

struct Fail(SchollStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SchollStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SchollStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SchollStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(SchollStatus::NullPointer, "null pointer argument".into())
}

/// Copies `values` into `out[..cap]` and stores the full length in `len`.
unsafe fn write_ints<'a>(
    values: impl ExactSizeIterator<Item = &'a BigInt>,
    out: *mut i64,
    cap: usize,
    len: *mut usize,
) -> Result<(), Fail> {
    if len.is_null() {
        return Err(null());
    }
    let n = values.len();
    *len = n;
    if n > cap {
        return Err(Fail(SchollStatus::BufferTooSmall, format!("need room for {n} values, got {cap}")));
    }
    if n > 0 && out.is_null() {
        return Err(null());
    }
    for (k, v) in values.enumerate() {
        *out.add(k) = v.to_i64().ok_or_else(|| Fail(SchollStatus::Overflow, format!("{v} exceeds 64 bits")))?;
    }
    Ok(())
}

/// Message for the last failed call on this thread ("" after a success).
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn scholl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Enumerates the places of Q(ζ_n) above the prime p.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free
/// with [`scholl_places_free`].
#[no_mangle]
pub unsafe extern "C" fn scholl_places_new(n: u64, p: u64, out: *mut *mut SchollPlaces) -> SchollStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let places = enumerate_places(n, p)?;
        *out = Box::into_raw(Box::new(SchollPlaces { places }));
        Ok(())
    })
}

/// Number of places in the handle (0 for null).
///
/// # Safety
/// `h` must be null or a live handle from [`scholl_places_new`].
#[no_mangle]
pub unsafe extern "C" fn scholl_places_count(h: *const SchollPlaces) -> usize {
    h.as_ref().map_or(0, |h| h.places.len())
}

/// Size of the residue field at place `index`, or 0 if out of range.
///
/// # Safety
/// `h` must be null or a live handle from [`scholl_places_new`].
#[no_mangle]
pub unsafe extern "C" fn scholl_places_norm(h: *const SchollPlaces, index: usize) -> u64 {
    h.as_ref().and_then(|h| h.places.get(index)).map_or(0, |pl| pl.np())
}

/// # Safety
/// `h` must be null or a handle from [`scholl_places_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scholl_places_free(h: *mut SchollPlaces) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// S(n, i, 𝔭) at place `index` as φ(n) power-basis coefficients in ζ_n.
///
/// # Safety
/// `h` must be a live places handle, `out` must have room for `cap` values
/// and `len` must be valid. `len` receives φ(n) even when `cap` is too small.
#[no_mangle]
pub unsafe extern "C" fn scholl_trace_sum(
    h: *const SchollPlaces,
    index: usize,
    i: u64,
    method: SchollMethod,
    out: *mut i64,
    cap: usize,
    len: *mut usize,
) -> SchollStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        let pl = h
            .places
            .get(index)
            .ok_or_else(|| Fail(SchollStatus::Domain, format!("place index {index} out of range")))?;
        let m = match method {
            SchollMethod::Auto => Method::auto(pl.np()),
            SchollMethod::Brute => Method::Brute,
            SchollMethod::Greene => Method::Greene,
        };
        let r = trace_sum_with(pl, i, m)?;
        write_ints(r.value.coeffs().iter(), out, cap, len)
    })
}

/// Integer polynomial induced from the new part at (n, p), constant term
/// first.
///
/// # Safety
/// `out` must have room for `cap` values and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scholl_induce(n: u64, p: u64, out: *mut i64, cap: usize, len: *mut usize) -> SchollStatus {
    guard(|| {
        let r = induce_charpoly(n, p)?;
        write_ints(r.product.0.iter(), out, cap, len)
    })
}

/// Recovers the quartic at p from the computed weight-4 coefficients,
/// using congruences up to `r_cap`.
///
/// # Safety
/// `out` must be valid; on success it receives a handle to free with
/// [`scholl_quartic_free`].
#[no_mangle]
pub unsafe extern "C" fn scholl_asd_solve(p: u64, r_cap: i64, out: *mut *mut SchollQuartic) -> SchollStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let sol = solve_from_eta(p, r_cap)?;
        *out = Box::into_raw(Box::new(SchollQuartic { quartic: sol.quartic, r_used: sol.r_used }));
        Ok(())
    })
}

/// Writes [A3, A2, A1, A0] to `out`.
///
/// # Safety
/// `h` must be a live quartic handle and `out` must have room for 4 values.
#[no_mangle]
pub unsafe extern "C" fn scholl_quartic_coeffs(h: *const SchollQuartic, out: *mut i64) -> SchollStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        let mut len = 0usize;
        write_ints(h.quartic.coefficients().into_iter(), out, 4, &mut len)
    })
}

/// Largest r whose congruences were needed, or -2 for null.
///
/// # Safety
/// `h` must be null or a live quartic handle.
#[no_mangle]
pub unsafe extern "C" fn scholl_quartic_r_used(h: *const SchollQuartic) -> i64 {
    h.as_ref().map_or(-2, |h| h.r_used)
}

/// # Safety
/// `h` must be null or a handle from [`scholl_asd_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn scholl_quartic_free(h: *mut SchollQuartic) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
