//! C interface to `polysep`.
//!
//! Handles are opaque and owned by the caller once returned; release them with
//! the matching `*_free` function. Strings returned through out-parameters are
//! NUL-terminated UTF-8 and must be released with [`ps_string_free`]. Every
//! fallible call returns a [`PsStatus`]; on failure the message is available
//! from [`ps_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polysep::caps::ConvexDisc;
use polysep::geom::{power, EDisc, EPoint};
use polysep::io::{self, IoError, Meta, Packing, PackingDocument, TilingDocument};
use polysep::nonsep::{counterexample, NonsepError};
use polysep::tiling::{Tiling, TilingError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    Utf8 = 2,
    /// The JSON document was malformed or violated the schema.
    Parse = 3,
    InvalidInput = 4,
    /// A tiling or certificate check ran and failed.
    Verification = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// A validated packing.
pub struct PsPacking {
    inner: Packing,
}

/// A tiling built from a packing.
pub struct PsTiling {
    inner: Tiling,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Error(PsStatus, String);

impl From<IoError> for Error {
    fn from(e: IoError) -> Self {
        let status = match e {
            IoError::Utf8(_) => PsStatus::Utf8,
            IoError::Schema { .. } => PsStatus::Parse,
            _ => PsStatus::InvalidInput,
        };
        Error(status, e.to_string())
    }
}

impl From<TilingError> for Error {
    fn from(e: TilingError) -> Self {
        Error(PsStatus::InvalidInput, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            PsStatus::Ok
        }
        Ok(Err(Error(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PsStatus::Panic
        }
    }
}

fn null(what: &str) -> Error {
    Error(PsStatus::Null, format!("{what} is null"))
}

/// # Safety
/// `s` must be null or a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a [u8], Error> {
    if s.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { CStr::from_ptr(s) }.to_bytes())
}

fn into_c_string(s: String) -> Result<*mut c_char, Error> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Error(PsStatus::InvalidInput, "output contains NUL".into()))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a packing document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_packing_from_json(json: *const c_char, out: *mut *mut PsPacking) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = ptr::null_mut() };
        let bytes = unsafe { read_str(json, "json") }?;
        let inner = io::parse_packing(bytes)?.packing()?;
        unsafe { *out = Box::into_raw(Box::new(PsPacking { inner })) };
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`ps_packing_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_packing_free(p: *mut PsPacking) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Number of discs; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live packing handle.
#[no_mangle]
pub unsafe extern "C" fn ps_packing_len(p: *const PsPacking) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.inner.len())
}

/// Builds the least-potential tiling. `clip_radius` bounds the hyperbolic
/// domain; pass 0 for the default.
///
/// # Safety
/// `p` must be a live packing handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_tiling_build(p: *const PsPacking, clip_radius: f64, out: *mut *mut PsTiling) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = ptr::null_mut() };
        let p = unsafe { p.as_ref() }.ok_or_else(|| null("packing"))?;
        let clip = (clip_radius != 0.0).then_some(clip_radius);
        let inner = p.inner.tile(clip)?;
        unsafe { *out = Box::into_raw(Box::new(PsTiling { inner })) };
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle from [`ps_tiling_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_tiling_free(t: *mut PsTiling) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

/// Number of cells; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live tiling handle.
#[no_mangle]
pub unsafe extern "C" fn ps_tiling_cell_count(t: *const PsTiling) -> usize {
    unsafe { t.as_ref() }.map_or(0, |t| t.inner.cell_count())
}

/// Checks that every cell holds exactly its own disc and that the cells cover
/// the domain. Returns `PS_STATUS_VERIFICATION` with the first failure on error.
///
/// # Safety
/// `p` and `t` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn ps_tiling_verify(p: *const PsPacking, t: *const PsTiling, tol: f64) -> PsStatus {
    guard(|| {
        let p = unsafe { p.as_ref() }.ok_or_else(|| null("packing"))?;
        let t = unsafe { t.as_ref() }.ok_or_else(|| null("tiling"))?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error(PsStatus::InvalidInput, format!("tolerance {tol}")));
        }
        let report = p.inner.verify(&t.inner, tol)?;
        match report.failure {
            None => Ok(()),
            Some(msg) => Err(Error(PsStatus::Verification, msg)),
        }
    })
}

/// Serializes a tiling as JSON.
///
/// # Safety
/// `t` must be a live tiling handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_tiling_to_json(t: *const PsTiling, out: *mut *mut c_char) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = ptr::null_mut() };
        let t = unsafe { t.as_ref() }.ok_or_else(|| null("tiling"))?;
        let text = io::emit_tiling(&TilingDocument::from_tiling(&t.inner));
        unsafe { *out = into_c_string(text)? };
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Power `|AO|² − r²` of the point `(x, y)` with respect to the circle of
/// center `(cx, cy)` and radius `r`.
#[no_mangle]
pub extern "C" fn ps_euclid_power(x: f64, y: f64, cx: f64, cy: f64, r: f64) -> f64 {
    match EDisc::new(EPoint::new(cx, cy), r) {
        Ok(c) => power(EPoint::new(x, y), &c),
        Err(_) => f64::NAN,
    }
}

/// Builds a certified non-separable packing of copies of the convex polygon
/// `{"vertices": [[x, y], ...]}` and writes the packing document, certificate
/// included, to `out`. A failed certificate still writes the document and
/// returns `PS_STATUS_VERIFICATION`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_counterexample_from_polygon(json: *const c_char, out: *mut *mut c_char) -> PsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = ptr::null_mut() };
        let bytes = unsafe { read_str(json, "json") }?;
        let disc: ConvexDisc = io::parse_polygon(bytes)?;
        let (c, cert) = counterexample(&disc).map_err(|e| match e {
            NonsepError::TooCircular | NonsepError::Cap(_) => Error(PsStatus::InvalidInput, e.to_string()),
            e => Error(PsStatus::Verification, e.to_string()),
        })?;
        let pass = cert.pass;
        let doc = PackingDocument::from_construction(&c, Some(cert), Meta::tool());
        unsafe { *out = into_c_string(io::emit_packing(&doc))? };
        if pass {
            Ok(())
        } else {
            Err(Error(PsStatus::Verification, "certificate failed".into()))
        }
    })
}
