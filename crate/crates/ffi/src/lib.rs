//! C ABI for the `wfti` library.
//!
//! Objects cross the boundary as opaque handles created by `*_new` (or by
//! an operation writing to an out-pointer) and released with the matching
//! `*_free`. Every function returns a [`WftiStatus`]; on failure a message
//! is available from [`wfti_last_error`] on the same thread. Panics are
//! caught and reported as [`WftiStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wfti::fixtures::Fixture;
use wfti::stft::StftMatrix;
use wfti::{Complex64, Error, Pathway, SampledSignal, TruncationPair, UniformGrid, Window, WindowKind, WindowSpec};

/// Result of every call. Codes 0 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WftiStatus {
    Ok = 0,
    Io = 1,
    InvalidArgument = 2,
    Numeric = 3,
    DegenerateAnchor = 4,
    UnsupportedMedia = 5,
    NullPointer = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WftiWindowKind {
    Gaussian = 0,
    Hann = 1,
    Triangular = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WftiPathway {
    Kernel = 0,
    Multiplier = 1,
    Modulation = 2,
    DoubleIntegral = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WftiFixture {
    Gaussian = 0,
    Bump = 1,
    Chirp = 2,
    Zero = 3,
    Noise = 4,
}

/// A window function with its anchor point.
pub struct WftiWindow(Window);

/// Complex samples on a uniform grid.
pub struct WftiSignal(SampledSignal);

/// Samples of the windowed Fourier transform, time-major.
pub struct WftiStft(StftMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WftiStatus {
    match e {
        Error::DegenerateAnchor { .. } => WftiStatus::DegenerateAnchor,
        Error::UnsupportedMedia(_) => WftiStatus::UnsupportedMedia,
        Error::NonFinite(_) | Error::LengthMismatch { .. } | Error::Extrapolation { .. } => WftiStatus::Numeric,
        Error::Io(_) => WftiStatus::Io,
        _ => WftiStatus::InvalidArgument,
    }
}

struct Failure(WftiStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(WftiStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, recording any error or panic for [`wfti_last_error`].
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WftiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WftiStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            WftiStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message describing the last failed call on this thread, or null. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn wfti_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn wfti_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a catalogue window. `sigma` is the Gaussian standard deviation
/// or the support half-width of Hann and triangular windows; `x0` is the
/// anchor point.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wfti_window_new(
    kind: WftiWindowKind,
    sigma: f64,
    x0: f64,
    out: *mut *mut WftiWindow,
) -> WftiStatus {
    guard(|| {
        let kind = match kind {
            WftiWindowKind::Gaussian => WindowKind::Gaussian,
            WftiWindowKind::Hann => WindowKind::Hann,
            WftiWindowKind::Triangular => WindowKind::Triangular,
        };
        let w = wfti::make_window(&WindowSpec::new(kind, sigma, x0))?;
        write_out(out, WftiWindow(w))
    })
}

/// # Safety
/// `window` must be null or a handle from [`wfti_window_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wfti_window_free(window: *mut WftiWindow) {
    if !window.is_null() {
        drop(Box::from_raw(window));
    }
}

/// `g(x0)`, the value the reconstruction is normalised by.
///
/// # Safety
/// `window` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_window_anchor_value(window: *const WftiWindow, re: *mut f64, im: *mut f64) -> WftiStatus {
    guard(|| {
        let w = deref(window, "window")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let v = w.0.g_at_anchor();
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

fn grid(start: f64, end: f64, len: usize) -> Result<UniformGrid, Failure> {
    Ok(UniformGrid::new(start, end, len)?)
}

/// Creates a signal from `len` samples on the uniform grid `[start, end]`.
/// `im` may be null for a real signal.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` readable doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_signal_new(
    start: f64,
    end: f64,
    len: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut WftiSignal,
) -> WftiStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let g = grid(start, end, len)?;
        let re = std::slice::from_raw_parts(re, len);
        let values: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        write_out(out, WftiSignal(SampledSignal::new(g, values)?))
    })
}

/// Samples a built-in test signal on `[start, end]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_fixture_sample(
    fixture: WftiFixture,
    start: f64,
    end: f64,
    len: usize,
    seed: u64,
    out: *mut *mut WftiSignal,
) -> WftiStatus {
    guard(|| {
        let fx = match fixture {
            WftiFixture::Gaussian => Fixture::Gaussian,
            WftiFixture::Bump => Fixture::Bump,
            WftiFixture::Chirp => Fixture::Chirp,
            WftiFixture::Zero => Fixture::Zero,
            WftiFixture::Noise => Fixture::Noise,
        };
        write_out(out, WftiSignal(fx.sample(&grid(start, end, len)?, seed)))
    })
}

/// # Safety
/// `signal` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wfti_signal_free(signal: *mut WftiSignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

/// Grid of a signal.
///
/// # Safety
/// `signal` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_signal_grid(
    signal: *const WftiSignal,
    start: *mut f64,
    end: *mut f64,
    len: *mut usize,
) -> WftiStatus {
    guard(|| {
        let s = deref(signal, "signal")?;
        if start.is_null() || end.is_null() || len.is_null() {
            return Err(null("start/end/len"));
        }
        *start = s.0.grid().start();
        *end = s.0.grid().end();
        *len = s.0.grid().len();
        Ok(())
    })
}

unsafe fn copy_complex(values: &[Complex64], re: *mut f64, im: *mut f64, capacity: usize) -> Result<(), Failure> {
    if re.is_null() || im.is_null() {
        return Err(null("re/im"));
    }
    if capacity < values.len() {
        return Err(Failure(
            WftiStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", values.len()),
        ));
    }
    let re = std::slice::from_raw_parts_mut(re, values.len());
    let im = std::slice::from_raw_parts_mut(im, values.len());
    for (k, v) in values.iter().enumerate() {
        re[k] = v.re;
        im[k] = v.im;
    }
    Ok(())
}

/// Copies the samples into `re` and `im`, each of `capacity` doubles.
///
/// # Safety
/// `signal` must be a live handle; `re` and `im` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn wfti_signal_values(
    signal: *const WftiSignal,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> WftiStatus {
    guard(|| copy_complex(deref(signal, "signal")?.0.values(), re, im, capacity))
}

/// Relative L2 distance `||a - b|| / ||b||` (absolute when `b = 0`).
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_relative_l2(a: *const WftiSignal, b: *const WftiSignal, out: *mut f64) -> WftiStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = wfti::relative_l2(&a.0, &b.0)?;
        Ok(())
    })
}

/// Truncated inversion `T_{A1,A2} f` through the chosen pathway. With
/// `normalize` the factor `2pi conj(g(x0))` is divided out so the result
/// approximates `f`. `tail_estimate` (nullable) receives the a-priori sup
/// error bound, or NaN when none is available.
///
/// # Safety
/// `signal` and `window` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_invert(
    signal: *const WftiSignal,
    window: *const WftiWindow,
    a1: f64,
    a2: f64,
    pathway: WftiPathway,
    normalize: bool,
    out: *mut *mut WftiSignal,
    tail_estimate: *mut f64,
) -> WftiStatus {
    guard(|| {
        let (f, g) = (deref(signal, "signal")?, deref(window, "window")?);
        let pathway = match pathway {
            WftiPathway::Kernel => Pathway::Kernel,
            WftiPathway::Multiplier => Pathway::Multiplier,
            WftiPathway::Modulation => Pathway::Modulation,
            WftiPathway::DoubleIntegral => Pathway::DoubleIntegral,
        };
        let mut rec = wfti::invert(&f.0, &g.0, TruncationPair::new(a1, a2)?, pathway)?;
        if normalize {
            rec = rec.normalize(&g.0)?;
        }
        if !tail_estimate.is_null() {
            *tail_estimate = rec.diagnostics.tail_estimate.unwrap_or(f64::NAN);
        }
        write_out(out, WftiSignal(rec.signal))
    })
}

/// Normalised reconstruction at the full grid band.
///
/// # Safety
/// `signal` and `window` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_filter_bank_reconstruct(
    signal: *const WftiSignal,
    window: *const WftiWindow,
    out: *mut *mut WftiSignal,
) -> WftiStatus {
    guard(|| {
        let (f, g) = (deref(signal, "signal")?, deref(window, "window")?);
        let rec = wfti::filter_bank_reconstruct(&f.0, &g.0)?;
        write_out(out, WftiSignal(rec.signal))
    })
}

/// Samples `F_g f` on `t_len` times in `[t_start, t_end]` and `w_len`
/// frequencies in `[w_start, w_end]`.
///
/// # Safety
/// `signal` and `window` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_stft_new(
    signal: *const WftiSignal,
    window: *const WftiWindow,
    t_start: f64,
    t_end: f64,
    t_len: usize,
    w_start: f64,
    w_end: f64,
    w_len: usize,
    out: *mut *mut WftiStft,
) -> WftiStatus {
    guard(|| {
        let (f, g) = (deref(signal, "signal")?, deref(window, "window")?);
        let (tg, wg) = (grid(t_start, t_end, t_len)?, grid(w_start, w_end, w_len)?);
        write_out(out, WftiStft(wfti::forward_stft(&f.0, &g.0, &tg, &wg)))
    })
}

/// # Safety
/// `stft` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wfti_stft_free(stft: *mut WftiStft) {
    if !stft.is_null() {
        drop(Box::from_raw(stft));
    }
}

/// Number of time and frequency samples.
///
/// # Safety
/// `stft` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_stft_shape(stft: *const WftiStft, t_len: *mut usize, w_len: *mut usize) -> WftiStatus {
    guard(|| {
        let s = deref(stft, "stft")?;
        if t_len.is_null() || w_len.is_null() {
            return Err(null("t_len/w_len"));
        }
        *t_len = s.0.time_grid().len();
        *w_len = s.0.freq_grid().len();
        Ok(())
    })
}

/// Copies the matrix, time-major, into `re` and `im`.
///
/// # Safety
/// `stft` must be a live handle; `re` and `im` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn wfti_stft_values(stft: *const WftiStft, re: *mut f64, im: *mut f64, capacity: usize) -> WftiStatus {
    guard(|| copy_complex(deref(stft, "stft")?.0.values(), re, im, capacity))
}

/// Classical double-integral inversion of an STFT matrix; the result lives
/// on the matrix time grid and is normalised.
///
/// # Safety
/// `stft` and `window` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wfti_stft_invert(
    stft: *const WftiStft,
    window: *const WftiWindow,
    out: *mut *mut WftiSignal,
) -> WftiStatus {
    guard(|| {
        let (s, g) = (deref(stft, "stft")?, deref(window, "window")?);
        let rec = wfti::invert_double_integral(&s.0, &g.0)?;
        write_out(out, WftiSignal(rec.signal))
    })
}
