//! C interface.
//!
//! Frames are opaque `PfFrame` handles owned by the caller and released with
//! [`pf_frame_free`]. Every fallible call returns a [`PfStatus`]; the message of
//! the last failure on the calling thread is available from [`pf_last_error`].
//! Strings returned by the library are released with [`pf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padic_frames::cli::exit_code;
use padic_frames::{
    build_frame, verify_frame, BuildOptions, Error, FrameDocument, FrameSystem, GroupParams,
    Transform, VerifyOptions,
};

/// Status codes; the first five agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    VerifyFailed = 1,
    Infeasible = 2,
    BadInput = 3,
    Io = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Opaque frame handle.
pub struct PfFrame {
    frame: FrameSystem,
    options: BuildOptions,
}

/// Summary of [`pf_frame_verify`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct PfReport {
    pub passed: bool,
    pub parseval_max: f64,
    pub lemma31_max: f64,
    pub system_residual: f64,
    pub refinement_error: f64,
    pub min_nonzero_ratio: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PfStatus {
    set_error(e.to_string());
    match exit_code(e) {
        1 => PfStatus::VerifyFailed,
        2 => PfStatus::Infeasible,
        4 => PfStatus::Io,
        _ => PfStatus::BadInput,
    }
}

/// Runs `f`, turning panics into [`PfStatus::Panic`].
fn guard(f: impl FnOnce() -> PfStatus) -> PfStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        PfStatus::Panic
    })
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<Option<&'a str>, PfStatus> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s).to_str().map(Some).map_err(|_| {
        set_error("string argument is not UTF-8");
        PfStatus::BadInput
    })
}

fn null_pointer() -> PfStatus {
    set_error("null pointer argument");
    PfStatus::NullPointer
}

/// Builds a frame for `p`, `N = M = n`.
///
/// `transforms` is null or a comma-separated list such as `"i:0,ii:4"`.
/// On success `*out` receives a new handle.
///
/// # Safety
/// `transforms` must be null or a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_build(
    p: u32,
    n: u32,
    transforms: *const c_char,
    out: *mut *mut PfFrame,
) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        *out = ptr::null_mut();
        let spec = match str_arg(transforms) {
            Ok(s) => s.unwrap_or(""),
            Err(s) => return s,
        };
        let transforms = match spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse::<Transform>)
            .collect::<padic_frames::Result<Vec<_>>>()
        {
            Ok(t) => t,
            // A malformed argument, not a malformed document.
            Err(e) => {
                set_error(e.to_string());
                return PfStatus::BadInput;
            }
        };
        let result = (|| -> padic_frames::Result<PfFrame> {
            let params = GroupParams::symmetric(p, n)?;
            let options = BuildOptions {
                transforms,
                ..BuildOptions::default()
            };
            let frame = build_frame(params, None, &options)?;
            Ok(PfFrame { frame, options })
        })();
        match result {
            Ok(f) => {
                *out = Box::into_raw(Box::new(f));
                PfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Loads a frame from a JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_from_json(
    json: *const c_char,
    out: *mut *mut PfFrame,
) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        *out = ptr::null_mut();
        let text = match str_arg(json) {
            Ok(Some(s)) => s,
            Ok(None) => return null_pointer(),
            Err(s) => return s,
        };
        let result = FrameDocument::from_json(text).and_then(|doc| {
            let frame = doc.to_frame()?;
            Ok(PfFrame {
                frame,
                options: doc.options()?,
            })
        });
        match result {
            Ok(f) => {
                *out = Box::into_raw(Box::new(f));
                PfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Serializes a frame; the result is released with [`pf_string_free`].
/// Returns null if `frame` is null.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_to_json(frame: *const PfFrame) -> *mut c_char {
    let Some(f) = frame.as_ref() else {
        set_error("null pointer argument");
        return ptr::null_mut();
    };
    let json = FrameDocument::from_frame(&f.frame, &f.options).to_json();
    CString::new(json).map_or(ptr::null_mut(), CString::into_raw)
}

/// Number of wavelets, or 0 for a null handle.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_wavelet_count(frame: *const PfFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.frame.wavelets.len())
}

/// `true` when the frame degenerates to an orthogonal scaling function.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_is_orthogonal(frame: *const PfFrame) -> bool {
    frame.as_ref().is_some_and(|f| f.frame.is_orthogonal())
}

/// Number of mask tree nodes (`p^{2N+1}`), or 0 for a null handle.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_mask_len(frame: *const PfFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.frame.mask.lambda().len())
}

/// Copies the mask values into `re` and `im`, each of length `len`, which must
/// equal [`pf_frame_mask_len`].
///
/// # Safety
/// `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_mask_values(
    frame: *const PfFrame,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> PfStatus {
    guard(|| {
        let Some(f) = frame.as_ref() else {
            return null_pointer();
        };
        if re.is_null() || im.is_null() {
            return null_pointer();
        }
        let lambda = f.frame.mask.lambda();
        if len != lambda.len() {
            set_error(format!(
                "buffer length {len}, mask has {} values",
                lambda.len()
            ));
            return PfStatus::BadInput;
        }
        let re = std::slice::from_raw_parts_mut(re, len);
        let im = std::slice::from_raw_parts_mut(im, len);
        for (k, v) in lambda.iter().enumerate() {
            re[k] = v.re;
            im[k] = v.im;
        }
        PfStatus::Ok
    })
}

/// Runs the verification suite with `tests` random functions.
/// Returns [`PfStatus::VerifyFailed`] when a check exceeds `tol`; `*report`
/// is filled either way.
///
/// # Safety
/// `frame` must be a live handle; `report` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_verify(
    frame: *const PfFrame,
    tests: usize,
    tol: f64,
    seed: u64,
    report: *mut PfReport,
) -> PfStatus {
    guard(|| {
        let Some(f) = frame.as_ref() else {
            return null_pointer();
        };
        let opts = VerifyOptions {
            tests,
            tol,
            seed,
            ..VerifyOptions::default()
        };
        match verify_frame(&f.frame, &opts) {
            Ok(r) => {
                if let Some(out) = report.as_mut() {
                    *out = PfReport {
                        passed: r.passed,
                        parseval_max: r.parseval_max,
                        lemma31_max: r.lemma31_max,
                        system_residual: r.system_residual,
                        refinement_error: r.refinement_error,
                        min_nonzero_ratio: r.min_nonzero_ratio,
                    };
                }
                if r.passed {
                    PfStatus::Ok
                } else {
                    set_error("verification failed");
                    PfStatus::VerifyFailed
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `frame` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_free(frame: *mut PfFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
