//! C ABI for `weitz`.
//!
//! Every fallible function returns a [`WeitzStatus`]. On failure the message
//! is available from [`weitz_last_error`] on the same thread until the next
//! call. Handles are opaque and must be released with their `_free`
//! function; strings returned through `out_*` pointers are released with
//! [`weitz_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use weitz::curvature::{curvature_from_json, curvature_to_json, CurvatureOperator};
use weitz::representations::Rep;
use weitz::selectors::{CurvatureSource, RepSelector};
use weitz::so_algebra::SoBasis;
use weitz::weitzenbock::k_term;
use weitz::Error;

/// Result codes shared by all fallible functions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeitzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    DimensionMismatch = 4,
    NotSquare = 5,
    NotHermitian = 6,
    Precondition = 7,
    Unsupported = 8,
    Schema = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Opaque curvature operator.
pub struct WeitzCurvature(CurvatureOperator);

/// Opaque representation of so(n).
pub struct WeitzRep(Rep);

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

fn status_of(e: &Error) -> WeitzStatus {
    match e {
        Error::NotSquare { .. } => WeitzStatus::NotSquare,
        Error::NotHermitian { .. } => WeitzStatus::NotHermitian,
        Error::DimensionMismatch(_) => WeitzStatus::DimensionMismatch,
        Error::InvalidArgument(_) => WeitzStatus::InvalidArgument,
        Error::Unsupported(_) => WeitzStatus::Unsupported,
        Error::Precondition(_) => WeitzStatus::Precondition,
        Error::Schema(_) | Error::Json(_) => WeitzStatus::Schema,
        Error::Io(_) => WeitzStatus::Io,
    }
}

struct Fail(WeitzStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(WeitzStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WeitzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WeitzStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            WeitzStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(WeitzStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(WeitzStatus::InvalidArgument, "output contains a NUL byte".into()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn weitz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn weitz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weitz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a curvature operator from a source string (`sphere`, `random:<seed>`,
/// `random-symmetric:<seed>`, `group:<type><rank>`, `file:<path>`). `n = 0`
/// takes the dimension from the source.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weitz_curvature_load(
    source: *const c_char,
    n: usize,
    out: *mut *mut WeitzCurvature,
) -> WeitzStatus {
    guard(|| {
        let src: CurvatureSource = str_arg(source, "source")?.parse()?;
        let op = src.load((n > 0).then_some(n))?;
        put(out, Box::into_raw(Box::new(WeitzCurvature(op))), "out")
    })
}

/// Parses the curvature JSON schema.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weitz_curvature_from_json(json: *const c_char, out: *mut *mut WeitzCurvature) -> WeitzStatus {
    guard(|| {
        let op = curvature_from_json(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(WeitzCurvature(op))), "out")
    })
}

/// Serializes to the curvature JSON schema. Free the result with
/// [`weitz_string_free`].
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weitz_curvature_to_json(c: *const WeitzCurvature, out: *mut *mut c_char) -> WeitzStatus {
    guard(|| {
        let c = ref_arg(c, "curvature")?;
        put(out, c_string(curvature_to_json(&c.0))?, "out")
    })
}

/// Dimension `n` of the underlying space, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn weitz_curvature_n(c: *const WeitzCurvature) -> usize {
    c.as_ref().map_or(0, |c| c.0.n())
}

/// Scalar curvature and maximal Bianchi defect.
///
/// # Safety
/// `c` must be a live handle; either output may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn weitz_curvature_invariants(
    c: *const WeitzCurvature,
    scalar: *mut f64,
    bianchi_residual: *mut f64,
) -> WeitzStatus {
    guard(|| {
        let c = ref_arg(c, "curvature")?;
        if !scalar.is_null() {
            scalar.write(c.0.scalar());
        }
        if !bianchi_residual.is_null() {
            bianchi_residual.write(c.0.bianchi_residual());
        }
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weitz_curvature_free(c: *mut WeitzCurvature) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Builds a representation of so(n) from a selector (`vector`, `adjoint`,
/// `exterior:p`, `sym:p`, `sym0`, `spin`, `spin+`, `tensor:a,b`, ...).
///
/// # Safety
/// `selector` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weitz_rep_new(n: usize, selector: *const c_char, out: *mut *mut WeitzRep) -> WeitzStatus {
    guard(|| {
        let sel: RepSelector = str_arg(selector, "selector")?.parse()?;
        let basis = Arc::new(SoBasis::new(n)?);
        let rep = sel.build(&basis)?;
        put(out, Box::into_raw(Box::new(WeitzRep(rep))), "out")
    })
}

/// Dimension of the representation space, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn weitz_rep_dim(r: *const WeitzRep) -> usize {
    r.as_ref().map_or(0, |r| r.0.dim())
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn weitz_rep_free(r: *mut WeitzRep) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

fn check_capacity(need: usize, capacity: usize) -> Result<(), Fail> {
    if capacity < need {
        return Err(Fail(
            WeitzStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {need} needed"),
        ));
    }
    Ok(())
}

/// Ascending eigenvalues of `K(R)` on the representation. `out_len`
/// receives the count even when the buffer is too small, so a first call
/// with `capacity = 0` queries the size.
///
/// # Safety
/// Handles must be live; `values` must hold `capacity` doubles (may be null
/// when `capacity` is 0); `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn weitz_k_spectrum(
    c: *const WeitzCurvature,
    r: *const WeitzRep,
    values: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> WeitzStatus {
    guard(|| {
        let (c, r) = (ref_arg(c, "curvature")?, ref_arg(r, "rep")?);
        let need = r.0.dim();
        put(out_len, need, "out_len")?;
        check_capacity(need, capacity)?;
        if values.is_null() {
            return Err(null("values"));
        }
        let k = k_term(&c.0, &r.0)?;
        ptr::copy_nonoverlapping(k.spectrum.as_ptr(), values, need);
        Ok(())
    })
}

/// Row-major real and imaginary parts of `K(R)`, each `dim * dim` doubles.
///
/// # Safety
/// Handles must be live; `re` and `im` must each hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn weitz_k_matrix(
    c: *const WeitzCurvature,
    r: *const WeitzRep,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> WeitzStatus {
    guard(|| {
        let (c, r) = (ref_arg(c, "curvature")?, ref_arg(r, "rep")?);
        let d = r.0.dim();
        check_capacity(d * d, capacity)?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let k = k_term(&c.0, &r.0)?;
        for (i, z) in k.matrix.as_slice().iter().enumerate() {
            re.add(i).write(z.re);
            im.add(i).write(z.im);
        }
        Ok(())
    })
}

/// Runs a command line of the `weitz` tool (without the program name) and
/// returns its report text and exit code. A failing check or a tool-level
/// error is not a library failure: the call returns `Ok` with a nonzero
/// `out_exit` and the JSON error object as text.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; outputs must be
/// writable. Free `out_text` with [`weitz_string_free`].
#[no_mangle]
pub unsafe extern "C" fn weitz_execute(
    argc: usize,
    argv: *const *const c_char,
    out_text: *mut *mut c_char,
    out_exit: *mut i32,
) -> WeitzStatus {
    guard(|| {
        if argc > 0 && argv.is_null() {
            return Err(null("argv"));
        }
        let mut args = vec!["weitz".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argument")?.to_string());
        }
        let outcome = weitz::cli::execute_args(args);
        if out_text.is_null() || out_exit.is_null() {
            return Err(null("output"));
        }
        out_text.write(c_string(outcome.text)?);
        out_exit.write(outcome.code);
        Ok(())
    })
}
