//! C ABI over `ellsub`.
//!
//! Curves and morphisms are opaque handles owned by the caller and released with the
//! matching `*_free`. Every fallible call returns an [`EllsubStatus`]; on failure the
//! message is available from [`ellsub_last_error`] on the same thread. Strings returned
//! through out-parameters must be released with [`ellsub_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ellsub::bounds::main_delta_chain;
use ellsub::config::RunConfig;
use ellsub::elliptic::Curve;
use ellsub::morphism::{gauss_reduce, IntMorphism};
use ellsub::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllsubStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    Dimension = 4,
    RankDeficient = 5,
    Parse = 6,
    Degenerate = 7,
    Precision = 8,
    Budget = 9,
    Io = 10,
    Panic = 11,
}

/// Elliptic curve `y^2 = x^3 + Ax + B` over the rationals.
pub struct EllsubCurve(Curve);

/// Integer matrix acting on `E^g`.
pub struct EllsubMorphism(IntMorphism);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EllsubStatus {
    match e {
        Error::Validation(_) => EllsubStatus::Validation,
        Error::Dimension(_) => EllsubStatus::Dimension,
        Error::RankDeficient { .. } => EllsubStatus::RankDeficient,
        Error::Parse(_) => EllsubStatus::Parse,
        Error::Degenerate(_) => EllsubStatus::Degenerate,
        Error::Precision(_) => EllsubStatus::Precision,
        Error::Budget(_) => EllsubStatus::Budget,
        Error::Io(_) => EllsubStatus::Io,
    }
}

enum Fail {
    Status(EllsubStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EllsubStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EllsubStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            EllsubStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(EllsubStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(EllsubStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn ellsub_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ellsub_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ellsub_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the curve `y^2 = x^3 + Ax + B` from rational strings such as `"-2"` or `"3/4"`.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings; `out_curve` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ellsub_curve_new(a: *const c_char, b: *const c_char, out_curve: *mut *mut EllsubCurve) -> EllsubStatus {
    guard(|| {
        let slot = out(out_curve, "out_curve")?;
        *slot = ptr::null_mut();
        let c = Curve::parse(text(a, "a")?, text(b, "b")?)?;
        *slot = Box::into_raw(Box::new(EllsubCurve(c)));
        Ok(())
    })
}

/// Releases a curve. NULL is ignored.
///
/// # Safety
/// `curve` must come from [`ellsub_curve_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ellsub_curve_free(curve: *mut EllsubCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Certified canonical height of a point written as `"x,y"` or `"O"`.
///
/// `value` receives the height and `err` a bound on its error; torsion gives exactly 0.
///
/// # Safety
/// Pointers must be valid; `curve` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ellsub_height(
    curve: *const EllsubCurve,
    point: *const c_char,
    tol: f64,
    value: *mut f64,
    err: *mut f64,
) -> EllsubStatus {
    guard(|| {
        let c = &curve.as_ref().ok_or_else(|| null("curve"))?.0;
        let (v, e) = (out(value, "value")?, out(err, "err")?);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Validation(format!("tolerance must be positive, got {tol}")).into());
        }
        let p = c.parse_point(text(point, "point")?)?;
        let h = ellsub::elliptic::canonical_height(c, &p, tol)?;
        *v = h.value;
        *e = h.tol;
        Ok(())
    })
}

/// Writes 1 to `out_torsion` if the point has finite order, else 0.
///
/// # Safety
/// Pointers must be valid; `curve` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ellsub_is_torsion(curve: *const EllsubCurve, point: *const c_char, out_torsion: *mut c_int) -> EllsubStatus {
    guard(|| {
        let c = &curve.as_ref().ok_or_else(|| null("curve"))?.0;
        let o = out(out_torsion, "out_torsion")?;
        let p = c.parse_point(text(point, "point")?)?;
        *o = c_int::from(c.is_torsion(&p)?);
        Ok(())
    })
}

/// Parses a morphism such as `"[2x3] 2 0 3 0 2 5"` or `"[[2,0,3],[0,2,5]]"`.
///
/// # Safety
/// `s` must be a NUL-terminated string; `out_morphism` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ellsub_morphism_parse(s: *const c_char, out_morphism: *mut *mut EllsubMorphism) -> EllsubStatus {
    guard(|| {
        let slot = out(out_morphism, "out_morphism")?;
        *slot = ptr::null_mut();
        let m: IntMorphism = text(s, "s")?.parse()?;
        *slot = Box::into_raw(Box::new(EllsubMorphism(m)));
        Ok(())
    })
}

/// Releases a morphism. NULL is ignored.
///
/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ellsub_morphism_free(m: *mut EllsubMorphism) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row and column counts of a morphism.
///
/// # Safety
/// Pointers must be valid; `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ellsub_morphism_shape(m: *const EllsubMorphism, rows: *mut usize, cols: *mut usize) -> EllsubStatus {
    guard(|| {
        let m = &m.as_ref().ok_or_else(|| null("m"))?.0;
        *out(rows, "rows")? = m.rows();
        *out(cols, "cols")? = m.cols();
        Ok(())
    })
}

/// Nested-list rendering of a morphism; release with [`ellsub_string_free`].
///
/// # Safety
/// Pointers must be valid; `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ellsub_morphism_to_string(m: *const EllsubMorphism, out_text: *mut *mut c_char) -> EllsubStatus {
    guard(|| {
        let m = &m.as_ref().ok_or_else(|| null("m"))?.0;
        let slot = out(out_text, "out_text")?;
        *slot = c_string(m.to_string());
        Ok(())
    })
}

/// Gauss-reduced morphism whose kernel contains the kernel of `m` up to torsion.
///
/// The pivot `a` is written as a decimal string to `out_pivot` (release with
/// [`ellsub_string_free`]); pass NULL to skip it.
///
/// # Safety
/// Pointers must be valid; `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ellsub_gauss_reduce(
    m: *const EllsubMorphism,
    out_reduced: *mut *mut EllsubMorphism,
    out_pivot: *mut *mut c_char,
) -> EllsubStatus {
    guard(|| {
        let m = &m.as_ref().ok_or_else(|| null("m"))?.0;
        let slot = out(out_reduced, "out_reduced")?;
        *slot = ptr::null_mut();
        let f = gauss_reduce(m)?;
        if let Some(p) = out_pivot.as_mut() {
            *p = c_string(f.pivot.to_string());
        }
        *slot = Box::into_raw(Box::new(EllsubMorphism(f.matrix)));
        Ok(())
    })
}

/// Runs the bound chain for a TOML run configuration.
///
/// The report (text, or JSON when `json` is non-zero) goes to `out_report`; the number of
/// diagnostics raised goes to `out_diagnostics` when it is not NULL.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ellsub_bounds(
    config_toml: *const c_char,
    json: c_int,
    out_report: *mut *mut c_char,
    out_diagnostics: *mut usize,
) -> EllsubStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        *slot = ptr::null_mut();
        let cfg = RunConfig::parse(text(config_toml, "config_toml")?)?;
        let rep = main_delta_chain(&cfg.bound_params()?)?;
        let body = if json != 0 {
            serde_json::to_string_pretty(&rep.to_json()).map_err(|e| Error::Io(e.to_string()))? + "\n"
        } else {
            rep.to_text()
        };
        if let Some(d) = out_diagnostics.as_mut() {
            *d = rep.diagnostics.len();
        }
        *slot = c_string(body);
        Ok(())
    })
}
