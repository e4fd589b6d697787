//! C ABI for phasekit.
//!
//! Matrices cross the boundary as opaque `PkMatrix` handles created with
//! `pk_matrix_new` (interleaved `re, im` pairs in row-major order) and
//! released with `pk_matrix_free`. Every fallible call returns a
//! `PkStatus`; on failure the message is available from
//! `pk_last_error_message` until the next failing call on the same thread.
//! Panics never unwind into C: they are reported as `PK_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use phasekit::analysis::{rank_margin, BindingSide};
use phasekit::majorization::{is_log_majorized, is_majorized, is_weakly_majorized};
use phasekit::numrange::classify_sector;
use phasekit::phase::{gcf, phases, sectorial_decomposition, spd};
use phasekit::{c64, io, ComplexMatrix, Error};

/// Opaque matrix handle.
pub struct PkMatrix(ComplexMatrix);

/// Status codes. Values are stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input text or inconsistent dimensions.
    Parse = 2,
    /// The matrix is not sectorial (or is zero).
    NotSectorial = 3,
    /// Any other domain error, e.g. non-square or singular input.
    Domain = 4,
    /// Infeasible completion window or cone.
    Infeasible = 5,
    /// The caller's output buffer is too small; the required length was
    /// written to the length argument.
    BufferTooSmall = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PkSectorInfo {
    pub sectorial: bool,
    pub gamma_star: f64,
    pub phi_max: f64,
    pub phi_min: f64,
    pub field_angle: f64,
    pub accretivity: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PkMargin {
    pub k: usize,
    pub phase_margin_alpha: f64,
    pub magnitude_margin_gamma: f64,
    /// 1 when the upper phase sum binds, -1 when the lower one does.
    pub binding_side: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkMajorizationKind {
    Strong = 0,
    Weak = 1,
    Log = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PkStatus {
    match e {
        Error::Parse(_) => PkStatus::Parse,
        Error::NotSectorial { .. } | Error::ZeroMatrix => PkStatus::NotSectorial,
        Error::InfeasibleWindow { .. } | Error::NotInCone { .. } | Error::NotBanded { .. } => PkStatus::Infeasible,
        _ => PkStatus::Domain,
    }
}

enum Fail {
    Status(PkStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(PkStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PkStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PkStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PkStatus::Panic
        }
    }
}

unsafe fn matrix<'a>(m: *const PkMatrix) -> Result<&'a ComplexMatrix, Fail> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| null("matrix"))
}

unsafe fn store(out: *mut *mut PkMatrix, m: ComplexMatrix) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(PkMatrix(m)));
    Ok(())
}

/// Copies `values` into `out` (capacity `*len`); always writes the
/// required length back to `*len`.
unsafe fn copy_out(values: &[f64], out: *mut f64, len: *mut usize) -> Result<(), Fail> {
    let len = len.as_mut().ok_or_else(|| null("length"))?;
    let cap = *len;
    *len = values.len();
    if cap < values.len() {
        return Err(Fail::Status(
            PkStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", values.len()),
        ));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("output buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New `rows x cols` matrix from `2 * rows * cols` doubles holding
/// interleaved real and imaginary parts in row-major order.
///
/// # Safety
/// `data` must point to `2 * rows * cols` readable doubles (or may be null
/// when that count is zero); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_new(rows: usize, cols: usize, data: *const f64, out: *mut *mut PkMatrix) -> PkStatus {
    guard(|| {
        let count = rows.checked_mul(cols).and_then(|x| x.checked_mul(2)).ok_or_else(|| {
            Fail::Status(PkStatus::Domain, format!("{rows} x {cols} overflows"))
        })?;
        let raw = slice(data, count, "data")?;
        let entries = raw.chunks_exact(2).map(|p| c64::new(p[0], p[1])).collect();
        let m = ComplexMatrix::new(rows, cols, entries)?;
        m.ensure_finite()?;
        store(out, m)
    })
}

/// Matrix from matrix-file JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_from_json(json: *const c_char, out: *mut *mut PkMatrix) -> PkStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail::Lib(Error::Parse(e.to_string())))?;
        store(out, io::matrix_from_str(text)?)
    })
}

/// Matrix-file JSON text for `m`; free it with `pk_string_free`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_to_json(m: *const PkMatrix, hexfloat: bool, out: *mut *mut c_char) -> PkStatus {
    guard(|| {
        let m = matrix(m)?;
        if out.is_null() {
            return Err(null("output string"));
        }
        let fmt = if hexfloat { io::FloatFormat::Hex } else { io::FloatFormat::Decimal };
        let s = CString::new(io::matrix_to_string(m, fmt)).expect("JSON has no interior nul");
        *out = s.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a matrix handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_free(m: *mut PkMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_rows(m: *const PkMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Column count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_cols(m: *const PkMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies the entries as interleaved `re, im` pairs. `*len` is the
/// capacity in doubles on entry and the required count on return.
///
/// # Safety
/// `m` must be a live handle; `out` must hold `*len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_matrix_data(m: *const PkMatrix, out: *mut f64, len: *mut usize) -> PkStatus {
    guard(|| {
        let m = matrix(m)?;
        let flat: Vec<f64> = m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect();
        copy_out(&flat, out, len)
    })
}

/// Sectoriality, supporting-ray angles and accretivity.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_classify_sector(m: *const PkMatrix, out: *mut PkSectorInfo) -> PkStatus {
    guard(|| {
        let info = classify_sector(matrix(m)?)?;
        let out = out.as_mut().ok_or_else(|| null("output"))?;
        *out = PkSectorInfo {
            sectorial: info.sectorial,
            gamma_star: info.gamma_star,
            phi_max: info.phi_max,
            phi_min: info.phi_min,
            field_angle: info.field_angle,
            accretivity: info.accretivity,
        };
        Ok(())
    })
}

/// Phases in descending order. `*len` is the capacity on entry and the
/// matrix order on return. `theta` (may be null) receives the lower end of
/// the branch interval. Pass `use_theta = true` to force that interval.
///
/// # Safety
/// `m` must be a live handle; `out` must hold `*len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_phases(
    m: *const PkMatrix,
    use_theta: bool,
    theta_in: f64,
    out: *mut f64,
    len: *mut usize,
    theta: *mut f64,
) -> PkStatus {
    guard(|| {
        let pv = phases(matrix(m)?, use_theta.then_some(theta_in))?;
        copy_out(&pv.phases, out, len)?;
        if let Some(t) = theta.as_mut() {
            *t = pv.theta;
        }
        Ok(())
    })
}

/// `C = T* D T` with `D` diagonal unitary.
///
/// # Safety
/// `m` must be a live handle; `t` and `d` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_sectorial_decomposition(m: *const PkMatrix, t: *mut *mut PkMatrix, d: *mut *mut PkMatrix) -> PkStatus {
    guard(|| {
        if t.is_null() || d.is_null() {
            return Err(null("output handle"));
        }
        let dec = sectorial_decomposition(matrix(m)?)?;
        store(t, dec.t)?;
        store(d, dec.d)
    })
}

/// Symmetric polar decomposition `C = P U P`.
///
/// # Safety
/// `m` must be a live handle; `p` and `u` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_spd(m: *const PkMatrix, p: *mut *mut PkMatrix, u: *mut *mut PkMatrix) -> PkStatus {
    guard(|| {
        if p.is_null() || u.is_null() {
            return Err(null("output handle"));
        }
        let f = spd(matrix(m)?)?;
        store(p, f.p)?;
        store(u, f.u)
    })
}

/// Generalized Cholesky factorization `C = R* W R`.
///
/// # Safety
/// `m` must be a live handle; `r` and `w` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_gcf(m: *const PkMatrix, r: *mut *mut PkMatrix, w: *mut *mut PkMatrix) -> PkStatus {
    guard(|| {
        if r.is_null() || w.is_null() {
            return Err(null("output handle"));
        }
        let f = gcf(matrix(m)?)?;
        store(r, f.r)?;
        store(w, f.w)
    })
}

/// Phase and magnitude rank margins of order `k`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_rank_margin(m: *const PkMatrix, k: usize, out: *mut PkMargin) -> PkStatus {
    guard(|| {
        let r = rank_margin(matrix(m)?, k)?;
        let out = out.as_mut().ok_or_else(|| null("output"))?;
        *out = PkMargin {
            k: r.k,
            phase_margin_alpha: r.phase_margin_alpha,
            magnitude_margin_gamma: r.magnitude_margin_gamma,
            binding_side: match r.binding_side {
                BindingSide::Upper => 1,
                BindingSide::Lower => -1,
            },
        };
        Ok(())
    })
}

/// Whether `x` is majorized by `y` (both of length `n`) in the given sense.
/// `slack` (may be null) receives the smallest margin.
///
/// # Safety
/// `x` and `y` must hold `n` doubles; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_majorization(
    kind: PkMajorizationKind,
    x: *const f64,
    y: *const f64,
    n: usize,
    tol: f64,
    holds: *mut bool,
    slack: *mut f64,
) -> PkStatus {
    guard(|| {
        let x = slice(x, n, "x")?;
        let y = slice(y, n, "y")?;
        let r = match kind {
            PkMajorizationKind::Strong => is_majorized(x, y, tol)?,
            PkMajorizationKind::Weak => is_weakly_majorized(x, y, tol)?,
            PkMajorizationKind::Log => is_log_majorized(x, y, tol)?,
        };
        *holds.as_mut().ok_or_else(|| null("holds"))? = r.holds;
        if let Some(s) = slack.as_mut() {
            *s = r.slack;
        }
        Ok(())
    })
}
