//! C ABI for `stokes-core`.
//!
//! Every function returns a [`StokesStatus`]; results go through out-pointers.
//! On failure the message is available from [`stokes_last_error_message`]
//! until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stokes_core::dispersion::tau_star;
use stokes_core::expansion::second_order;
use stokes_core::irrotational;
use stokes_core::stream::stream_profile_with;
use stokes_core::{Error, SolverOptions, StreamSolution, VorticitySpec};

/// Status codes shared by every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StokesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NearResonance = 3,
    NoRoot = 4,
    NoBracket = 5,
    Numerical = 6,
    Panic = 7,
}

impl From<&Error> for StokesStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NoRoot { .. } => StokesStatus::NoRoot,
            Error::NearResonance { .. } => StokesStatus::NearResonance,
            Error::NoBracket { .. } => StokesStatus::NoBracket,
            Error::InvalidInput(_)
            | Error::BelowShearFloor { .. }
            | Error::NoSubcriticalStream { .. }
            | Error::NoTwoRoots { .. }
            | Error::NoThetaRoot { .. }
            | Error::TauBelowMinimum { .. } => StokesStatus::InvalidInput,
            _ => StokesStatus::Numerical,
        }
    }
}

/// Opaque uniform stream.
pub struct StokesStream {
    inner: StreamSolution,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StokesStreamSummary {
    pub s: f64,
    pub depth: f64,
    pub bernoulli: f64,
    pub kappa: f64,
    pub froude: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StokesSecondOrder {
    pub tau_star: f64,
    pub lambda0: f64,
    pub lambda2: f64,
    /// Second-order coefficient of the wavelength itself, `-lambda2 * lambda0`.
    pub big_lambda2: f64,
    pub mu2: f64,
    pub i1: f64,
    pub i2: f64,
    pub relation_residual: f64,
    pub y_form_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, converting errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), StokesStatusError>) -> StokesStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StokesStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.message);
            e.status
        }
        Err(_) => {
            set_error("internal panic".into());
            StokesStatus::Panic
        }
    }
}

struct StokesStatusError {
    status: StokesStatus,
    message: String,
}

impl From<Error> for StokesStatusError {
    fn from(e: Error) -> Self {
        Self {
            status: (&e).into(),
            message: e.to_string(),
        }
    }
}

fn null(what: &str) -> StokesStatusError {
    StokesStatusError {
        status: StokesStatus::NullPointer,
        message: format!("{what} is null"),
    }
}

/// Message of the last failure on this thread, or null after a success. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn stokes_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds the uniform stream for `ω(p) = Σ coeffs[i] pⁱ` and shear `s` on
/// `grid_points` nodes (0 selects the default). Free with
/// [`stokes_stream_free`].
///
/// # Safety
/// `coeffs` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_stream_new(
    coeffs: *const f64,
    len: usize,
    s: f64,
    grid_points: usize,
    out: *mut *mut StokesStream,
) -> StokesStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if coeffs.is_null() && len > 0 {
            return Err(null("coeffs"));
        }
        let c = if len == 0 {
            vec![0.0]
        } else {
            // SAFETY: caller guarantees `len` readable doubles at `coeffs`.
            unsafe { std::slice::from_raw_parts(coeffs, len) }.to_vec()
        };
        let v = VorticitySpec::new(c)?;
        let mut opts = SolverOptions::default();
        if grid_points > 0 {
            opts = opts.with_grid_points(grid_points);
        }
        let inner = stream_profile_with(&v, s, &opts)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(StokesStream { inner })) };
        Ok(())
    })
}

/// # Safety
/// `stream` must come from [`stokes_stream_new`] and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn stokes_stream_free(stream: *mut StokesStream) {
    if !stream.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(stream) });
    }
}

unsafe fn stream_ref<'a>(stream: *const StokesStream) -> Result<&'a StreamSolution, StokesStatusError> {
    // SAFETY: forwarded from the caller's contract.
    unsafe { stream.as_ref() }
        .map(|s| &s.inner)
        .ok_or_else(|| null("stream"))
}

/// # Safety
/// `stream` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_stream_summary(
    stream: *const StokesStream,
    out: *mut StokesStreamSummary,
) -> StokesStatus {
    guard(|| {
        let st = unsafe { stream_ref(stream) }?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = StokesStreamSummary {
            s: st.s,
            depth: st.depth,
            bernoulli: st.bernoulli,
            kappa: st.kappa,
            froude: st.froude,
        };
        Ok(())
    })
}

/// Positive root of the dispersion function.
///
/// # Safety
/// `stream` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_tau_star(stream: *const StokesStream, out: *mut f64) -> StokesStatus {
    guard(|| {
        let st = unsafe { stream_ref(stream) }?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = tau_star(st)?.tau_star;
        Ok(())
    })
}

/// λ₂, μ₂ and the related integrals at the bifurcation point.
///
/// # Safety
/// `stream` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_second_order(stream: *const StokesStream, out: *mut StokesSecondOrder) -> StokesStatus {
    guard(|| {
        let st = unsafe { stream_ref(stream) }?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let pipe = second_order(st)?;
        let r = pipe.result;
        *out = StokesSecondOrder {
            tau_star: pipe.dispersion.tau_star,
            lambda0: pipe.dispersion.lambda0,
            lambda2: r.lambda2,
            big_lambda2: r.big_lambda2,
            mu2: r.mu2,
            i1: r.i1,
            i2: r.i2,
            relation_residual: r.relation_residual,
            y_form_residual: r.y_form_residual,
        };
        Ok(())
    })
}

/// # Safety
/// `out` must be null or writable.
unsafe fn scalar(out: *mut f64, f: impl FnOnce() -> Result<f64, Error>) -> StokesStatus {
    guard(|| {
        // SAFETY: forwarded from the caller's contract.
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = f()?;
        Ok(())
    })
}

/// Critical frequency where the irrotational coefficient `f` changes sign.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_tau0(out: *mut f64) -> StokesStatus {
    unsafe { scalar(out, irrotational::tau0_root) }
}

/// Froude threshold at which μ₂ changes sign on irrotational flow.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_froude_threshold(out: *mut f64) -> StokesStatus {
    unsafe { scalar(out, irrotational::froude_threshold) }
}

/// Closed-form λ₂ for irrotational flow at unit-depth frequency `tau`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_lambda2_irrotational(tau: f64, out: *mut f64) -> StokesStatus {
    unsafe { scalar(out, || irrotational::lambda2_irrotational(tau)) }
}

/// Closed-form μ₂ for irrotational flow at unit-depth frequency `tau`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stokes_mu2_irrotational(tau: f64, out: *mut f64) -> StokesStatus {
    unsafe { scalar(out, || irrotational::mu2_irrotational(tau)) }
}
