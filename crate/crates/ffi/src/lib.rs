//! C ABI over `fresnel_tomo`.
//!
//! Objects cross the boundary as opaque handles created by `ft_*_new`-style
//! constructors and released with the matching `ft_*_free`. Every fallible
//! call returns an [`FtStatus`]; on failure a message is kept per thread and
//! can be copied out with [`ft_last_error_message`]. Panics are caught and
//! reported as `FT_STATUS_PANIC`.
//!
//! Buffers are caller-owned. Complex numbers are interleaved `re, im` pairs.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fresnel_tomo::fockspace::fresnel_operator;
use fresnel_tomo::gridtransform::fresnel_transform;
use fresnel_tomo::phasespace::{radon, tomogram_via_fresnel, wigner};
use fresnel_tomo::states::make_state_grid;
use fresnel_tomo::{
    Complex64, Elementary, Error, GridSpec, GridWavefunction, Quadrature, RayMatrix, SrPair,
    StateSpec, WignerGrid,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotUnimodular = 4,
    Numerical = 5,
    BufferTooSmall = 6,
    Io = 7,
    Panic = 8,
}

/// Which quadrature a tomogram measures.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtMode {
    /// Distribution of `DX - BP`.
    Position = 0,
    /// Distribution of `AP - CX`.
    Momentum = 1,
}

impl From<FtMode> for Quadrature {
    fn from(m: FtMode) -> Self {
        match m {
            FtMode::Position => Quadrature::Position,
            FtMode::Momentum => Quadrature::Momentum,
        }
    }
}

/// A unimodular ray matrix.
pub struct FtMatrix(RayMatrix);

/// A wavefunction sampled on a uniform grid.
pub struct FtState(GridWavefunction);

/// A Wigner function on a square phase-space grid.
pub struct FtWigner(WignerGrid);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FtStatus {
    match e {
        Error::NotUnimodular { .. } | Error::NotNormalizedPair { .. } => FtStatus::NotUnimodular,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => FtStatus::Parse,
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::DegenerateKernel(_) => {
            FtStatus::InvalidArgument
        }
        Error::QuadratureTolerance { .. } | Error::ImaginaryResidue(_) => FtStatus::Numerical,
        Error::Io(_) => FtStatus::Io,
    }
}

enum Failure {
    Status(FtStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn fail<T>(status: FtStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Status(status, msg.into()))
}

/// Runs `f`, converting errors and panics into a status and the thread's message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            FtStatus::Ok
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            FtStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    match p.as_ref() {
        Some(r) => Ok(r),
        None => fail(FtStatus::NullPointer, format!("{what} is null")),
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(FtStatus::NullPointer, format!("{what} is null"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(_) => fail(FtStatus::Parse, format!("{what} is not UTF-8")),
    }
}

unsafe fn out_buffer<'a>(p: *mut f64, len: usize, needed: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return fail(FtStatus::NullPointer, format!("{what} is null"));
    }
    if len < needed {
        return fail(FtStatus::BufferTooSmall, format!("{what} holds {len} values, {needed} needed"));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(FtStatus::NullPointer, "output handle pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes,
/// not counting the terminator; 0 means the last call succeeded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ft_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a matrix from its entries; fails unless `AD - BC = 1` to `1e-12`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_new(a: f64, b: f64, c: f64, d: f64, out: *mut *mut FtMatrix) -> FtStatus {
    guard(|| put(out, FtMatrix(RayMatrix::new(a, b, c, d)?)))
}

/// Parses `identity`, `rotation:T`, `free:L`, `lens:K` or `scale:M`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_elementary(spec: *const c_char, out: *mut *mut FtMatrix) -> FtStatus {
    guard(|| {
        let e: Elementary = c_str(spec, "spec")?.parse()?;
        put(out, FtMatrix(e.to_matrix()?))
    })
}

/// Builds a matrix from `(s, r)` with `|s|^2 - |r|^2 = 1`.
///
/// # Safety
/// `out` must be a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_from_sr(
    s_re: f64,
    s_im: f64,
    r_re: f64,
    r_im: f64,
    out: *mut *mut FtMatrix,
) -> FtStatus {
    guard(|| {
        let p = SrPair::new(Complex64::new(s_re, s_im), Complex64::new(r_re, r_im))?;
        put(out, FtMatrix(p.to_ray()))
    })
}

/// `lhs * rhs` as a new handle.
///
/// # Safety
/// Handles must be valid or null; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_compose(
    lhs: *const FtMatrix,
    rhs: *const FtMatrix,
    out: *mut *mut FtMatrix,
) -> FtStatus {
    guard(|| {
        let m = deref(lhs, "lhs")?.0 * deref(rhs, "rhs")?.0;
        put(out, FtMatrix(m))
    })
}

/// Writes `A, B, C, D` into `entries[0..4]`.
///
/// # Safety
/// `m` must be valid or null; `entries` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_entries(m: *const FtMatrix, entries: *mut f64) -> FtStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        out_buffer(entries, 4, 4, "entries")?.copy_from_slice(&m.0.entries());
        Ok(())
    })
}

/// Writes `Re s, Im s, Re r, Im r` into `sr[0..4]`.
///
/// # Safety
/// `m` must be valid or null; `sr` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_sr(m: *const FtMatrix, sr: *mut f64) -> FtStatus {
    guard(|| {
        let p = deref(m, "matrix")?.0.to_sr();
        out_buffer(sr, 4, 4, "sr")?.copy_from_slice(&[p.s().re, p.s().im, p.r().re, p.r().im]);
        Ok(())
    })
}

/// Releases a matrix; null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_matrix_free(m: *mut FtMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Samples a state spec (`vacuum`, `fock:N`, `coherent:RE[,IM]`,
/// `squeezed:LAMBDA`, `cat:RE[,IM]`) on `points` nodes over `[-half_width, half_width]`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_state_new(
    spec: *const c_char,
    half_width: f64,
    points: usize,
    out: *mut *mut FtState,
) -> FtStatus {
    guard(|| {
        let spec: StateSpec = c_str(spec, "spec")?.parse()?;
        let grid = GridSpec::new(half_width, points)?;
        put(out, FtState(make_state_grid(&spec, &grid)?))
    })
}

/// Wraps caller samples (`2 * points` interleaved doubles) as a state.
///
/// # Safety
/// `samples` must point to `2 * points` doubles; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_state_from_samples(
    samples: *const f64,
    half_width: f64,
    points: usize,
    out: *mut *mut FtState,
) -> FtStatus {
    guard(|| {
        if samples.is_null() {
            return fail(FtStatus::NullPointer, "samples is null");
        }
        let grid = GridSpec::new(half_width, points)?;
        let raw = std::slice::from_raw_parts(samples, 2 * points);
        let values = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        put(out, FtState(GridWavefunction::new(grid, values)?))
    })
}

/// Number of grid nodes, or 0 for a null handle.
///
/// # Safety
/// `s` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ft_state_len(s: *const FtState) -> usize {
    s.as_ref().map_or(0, |s| s.0.grid().len())
}

/// Copies the samples as interleaved `re, im` into `buf` (`len >= 2 * points`).
///
/// # Safety
/// `s` must be valid or null; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_state_samples(s: *const FtState, buf: *mut f64, len: usize) -> FtStatus {
    guard(|| {
        let s = deref(s, "state")?;
        let out = out_buffer(buf, len, 2 * s.0.grid().len(), "buf")?;
        for (o, v) in out.chunks_exact_mut(2).zip(s.0.samples()) {
            o[0] = v.re;
            o[1] = v.im;
        }
        Ok(())
    })
}

/// `sum |psi_j|^2 dx` by the trapezoid rule.
///
/// # Safety
/// `s` must be valid or null; `norm` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_state_norm_sqr(s: *const FtState, norm: *mut f64) -> FtStatus {
    guard(|| {
        let s = deref(s, "state")?;
        out_buffer(norm, 1, 1, "norm")?[0] = s.0.norm_sqr();
        Ok(())
    })
}

/// Applies the Fresnel transform of `m` to `s`; the result shares the grid.
///
/// # Safety
/// Handles must be valid or null; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_state_fresnel(
    s: *const FtState,
    m: *const FtMatrix,
    out: *mut *mut FtState,
) -> FtStatus {
    guard(|| {
        let psi = fresnel_transform(&deref(m, "matrix")?.0, &deref(s, "state")?.0);
        put(out, FtState(psi))
    })
}

/// Quadrature distribution of the state for `m`, one value per grid node,
/// obtained from the Fresnel-transformed wavefunction.
///
/// # Safety
/// Handles must be valid or null; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_tomogram(
    s: *const FtState,
    m: *const FtMatrix,
    mode: FtMode,
    buf: *mut f64,
    len: usize,
) -> FtStatus {
    guard(|| {
        let s = deref(s, "state")?;
        let t = tomogram_via_fresnel(&s.0, &deref(m, "matrix")?.0, mode.into())?;
        out_buffer(buf, len, t.len(), "buf")?.copy_from_slice(t.values());
        Ok(())
    })
}

/// Releases a state; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_state_free(s: *mut FtState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Wigner function of `s` on the square grid built from the state's grid.
///
/// # Safety
/// `s` must be valid or null; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_new(s: *const FtState, out: *mut *mut FtWigner) -> FtStatus {
    guard(|| put(out, FtWigner(wigner(&deref(s, "state")?.0)?)))
}

/// Nodes per axis, or 0 for a null handle. The grid holds its square.
///
/// # Safety
/// `w` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_side(w: *const FtWigner) -> usize {
    w.as_ref().map_or(0, |w| w.0.grid().len())
}

/// Copies `W(x_j, p_k)` row-major (`x` outer) into `buf`.
///
/// # Safety
/// `w` must be valid or null; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_values(w: *const FtWigner, buf: *mut f64, len: usize) -> FtStatus {
    guard(|| {
        let w = deref(w, "wigner")?;
        let v = w.0.values();
        out_buffer(buf, len, v.len(), "buf")?.copy_from_slice(v);
        Ok(())
    })
}

/// Interpolated `W(x, p)`, zero outside the grid.
///
/// # Safety
/// `w` must be valid or null; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_value_at(w: *const FtWigner, x: f64, p: f64, value: *mut f64) -> FtStatus {
    guard(|| {
        let w = deref(w, "wigner")?;
        out_buffer(value, 1, 1, "value")?[0] = w.0.value_at(x, p);
        Ok(())
    })
}

/// `\int W dx dp`.
///
/// # Safety
/// `w` must be valid or null; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_normalization(w: *const FtWigner, value: *mut f64) -> FtStatus {
    guard(|| {
        let w = deref(w, "wigner")?;
        out_buffer(value, 1, 1, "value")?[0] = w.0.normalization();
        Ok(())
    })
}

/// Radon transform of `w` along the line family of `m`, sampled at the
/// `n` abscissas in `at`, written to `buf[0..n]`.
///
/// # Safety
/// Handles must be valid or null; `at` and `buf` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_radon(
    w: *const FtWigner,
    m: *const FtMatrix,
    mode: FtMode,
    at: *const f64,
    buf: *mut f64,
    n: usize,
) -> FtStatus {
    guard(|| {
        let w = deref(w, "wigner")?;
        let m = deref(m, "matrix")?;
        if at.is_null() {
            return fail(FtStatus::NullPointer, "at is null");
        }
        let xs = std::slice::from_raw_parts(at, n).to_vec();
        let t = radon(&w.0, &m.0, &xs, mode.into())?;
        out_buffer(buf, n, n, "buf")?.copy_from_slice(t.values());
        Ok(())
    })
}

/// Releases a Wigner grid; null is ignored.
///
/// # Safety
/// `w` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ft_wigner_free(w: *mut FtWigner) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// The `dim x dim` Fock-space matrix of the Fresnel operator of `m`,
/// row-major, interleaved `re, im` (`len >= 2 * dim * dim`).
///
/// # Safety
/// `m` must be valid or null; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ft_fresnel_operator(m: *const FtMatrix, dim: usize, buf: *mut f64, len: usize) -> FtStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let op = fresnel_operator(&m.0.to_sr(), dim)?;
        let out = out_buffer(buf, len, 2 * dim * dim, "buf")?;
        for (o, v) in out.chunks_exact_mut(2).zip(op.entries().iter()) {
            o[0] = v.re;
            o[1] = v.im;
        }
        Ok(())
    })
}
