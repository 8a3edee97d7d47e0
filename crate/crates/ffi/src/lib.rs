//! C ABI over `sing2ep`.
//!
//! Every fallible call returns a [`Sing2epStatus`]; on failure the message is
//! available from [`sing2ep_last_error`] on the same thread. Handles are
//! opaque and freed with their own `*_free` function. Strings returned by the
//! library are freed with [`sing2ep_string_free`]. Complex matrices cross the
//! boundary as row-major arrays of interleaved `re, im` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sing2ep::io::{PencilFile, ProblemFile, SolveReport};
use sing2ep::pencil::kcf_structure;
use sing2ep::twopar::{solve, RotateMode, SolveOptions, SolveResult};
use sing2ep::{rng_from_seed, CMatrix, Error, Tolerances, TwoParameterProblem, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sing2epStatus {
    Ok = 0,
    /// Malformed JSON or matrix data.
    Parse = 1,
    /// A rank decision could not be settled at the given tolerance.
    Ambiguity = 2,
    NullPointer = 3,
    /// Well-formed input the solver cannot accept, such as a singular `W_i`.
    InvalidInput = 4,
    Numerical = 5,
    IndexOutOfRange = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

pub const SING2EP_ROTATE_AUTO: i32 = 0;
pub const SING2EP_ROTATE_NONE: i32 = 1;
pub const SING2EP_ROTATE_ANGLE: i32 = 2;

/// A two-parameter problem `W_i = A_i + λB_i + μC_i`.
pub struct Sing2epProblem {
    name: String,
    inner: TwoParameterProblem,
}

/// The outcome of [`sing2ep_solve`].
pub struct Sing2epSolution {
    name: String,
    inner: SolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Sing2epStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => Sing2epStatus::Parse,
        Error::ToleranceAmbiguity(_) => Sing2epStatus::Ambiguity,
        Error::Numerical(_) => Sing2epStatus::Numerical,
        _ => Sing2epStatus::InvalidInput,
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (Sing2epStatus, String)>) -> Sing2epStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Sing2epStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            Sing2epStatus::Internal
        }
    }
}

fn fail(e: Error) -> (Sing2epStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (Sing2epStatus, String) {
    (Sing2epStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (Sing2epStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (Sing2epStatus::Parse, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sing2ep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sing2ep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a problem file's JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_problem_from_json(
    json: *const c_char,
    out: *mut *mut Sing2epProblem,
) -> Sing2epStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let f = ProblemFile::parse(text).map_err(fail)?;
        let p = f.to_problem().map_err(fail)?;
        *out = Box::into_raw(Box::new(Sing2epProblem {
            name: f.name,
            inner: p,
        }));
        Ok(())
    })
}

unsafe fn read_matrices(data: *const f64, n: usize) -> [CMatrix; 3] {
    let vals = if n == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(data, 6 * n * n)
    };
    std::array::from_fn(|k| {
        CMatrix::from_fn(n, n, |i, j| {
            let at = 2 * (k * n * n + i * n + j);
            C64::new(vals[at], vals[at + 1])
        })
    })
}

/// Builds a problem from raw data. `w1` holds `A₁, B₁, C₁` one after the
/// other, each `n1 × n1` row-major with interleaved `re, im`, so
/// `6·n1²` doubles; likewise `w2`.
///
/// # Safety
/// `w1` and `w2` must point to that many readable doubles and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_problem_new(
    n1: usize,
    w1: *const f64,
    n2: usize,
    w2: *const f64,
    out: *mut *mut Sing2epProblem,
) -> Sing2epStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if (n1 > 0 && w1.is_null()) || (n2 > 0 && w2.is_null()) {
            return Err(null("matrix data"));
        }
        let p =
            TwoParameterProblem::new(read_matrices(w1, n1), read_matrices(w2, n2)).map_err(fail)?;
        *out = Box::into_raw(Box::new(Sing2epProblem {
            name: String::new(),
            inner: p,
        }));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_problem_free(p: *mut Sing2epProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_problem_dims(
    p: *const Sing2epProblem,
    n1: *mut usize,
    n2: *mut usize,
) -> Sing2epStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("problem"))?;
        if n1.is_null() || n2.is_null() {
            return Err(null("out"));
        }
        *n1 = p.inner.n1();
        *n2 = p.inner.n2();
        Ok(())
    })
}

/// Solves `p`. `rotate` is one of the `SING2EP_ROTATE_*` constants; `angle`
/// is used only with `SING2EP_ROTATE_ANGLE`. A non-positive `tol` keeps the
/// default threshold for matrices evaluated at computed eigenvalues.
///
/// # Safety
/// `p` must be a live problem handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_solve(
    p: *const Sing2epProblem,
    seed: u64,
    rotate: i32,
    angle: f64,
    tol: f64,
    out: *mut *mut Sing2epSolution,
) -> Sing2epStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let bad = |m: String| (Sing2epStatus::InvalidInput, m);
        let rotate = match rotate {
            SING2EP_ROTATE_AUTO => RotateMode::Auto,
            SING2EP_ROTATE_NONE => RotateMode::None,
            SING2EP_ROTATE_ANGLE if angle.is_finite() => RotateMode::Angle(angle),
            SING2EP_ROTATE_ANGLE => return Err(bad(format!("angle {angle} is not finite"))),
            r => return Err(bad(format!("unknown rotation mode {r}"))),
        };
        let mut t = Tolerances::default();
        if tol > 0.0 {
            if !(tol < 1.0) {
                return Err(bad(format!("tolerance {tol} is not below 1")));
            }
            t.shifted_rank = tol;
        }
        let r = solve(
            &p.inner,
            &SolveOptions {
                rotate,
                seed,
                tol: t,
            },
        )
        .map_err(fail)?;
        *out = Box::into_raw(Box::new(Sing2epSolution {
            name: p.name.clone(),
            inner: r,
        }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_solution_free(s: *mut Sing2epSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of eigenvalues, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_solution_count(s: *const Sing2epSolution) -> usize {
    s.as_ref().map_or(0, |s| s.inner.eigenvalues.len())
}

/// Writes eigenvalue `i` as `[re λ, im λ, re μ, im μ]` into `out`, and its
/// flags into the two optional pointers.
///
/// # Safety
/// `s` must be a live solution handle and `out` must have room for four
/// doubles. `on_common_factor` and `multiplicity_hint` may be null.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_solution_eigenvalue(
    s: *const Sing2epSolution,
    i: usize,
    out: *mut f64,
    on_common_factor: *mut bool,
    multiplicity_hint: *mut usize,
) -> Sing2epStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = s.inner.eigenvalues.get(i).ok_or_else(|| {
            (
                Sing2epStatus::IndexOutOfRange,
                format!("index {i} out of {}", s.inner.eigenvalues.len()),
            )
        })?;
        let vals = [e.lambda.re, e.lambda.im, e.mu.re, e.mu.im];
        ptr::copy_nonoverlapping(vals.as_ptr(), out, 4);
        if !on_common_factor.is_null() {
            *on_common_factor = e.on_common_factor;
        }
        if !multiplicity_hint.is_null() {
            *multiplicity_hint = e.multiplicity_hint;
        }
        Ok(())
    })
}

/// The full report as JSON, in the same format as the command-line tool.
/// Free the result with [`sing2ep_string_free`].
///
/// # Safety
/// `s` must be a live solution handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_solution_to_json(
    s: *const Sing2epSolution,
    out: *mut *mut c_char,
) -> Sing2epStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(SolveReport::new(&s.name, &s.inner).to_json());
        Ok(())
    })
}

/// Kronecker structure string of the pencil in a `{A, B}` JSON document.
/// Free the result with [`sing2ep_string_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sing2ep_kcf(
    json: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> Sing2epStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let pencil = PencilFile::parse(text)
            .and_then(|f| f.to_pencil())
            .map_err(fail)?;
        let s = kcf_structure(&pencil, &mut rng_from_seed(seed), &Tolerances::default())
            .map_err(fail)?;
        *out = into_c_string(s.to_string());
        Ok(())
    })
}
