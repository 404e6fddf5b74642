//! C ABI for the `sftlp` denoiser.
//!
//! Images and solver results cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible entry
//! point returns an [`SftlpStatus`]; on failure the message is available from
//! [`sftlp_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sftlp::metrics::evaluate;
use sftlp::solver::denoise_with_reference;
use sftlp::{
    add_salt_pepper_noise, read_pgm, write_pgm, CgmConfig, DenoiseResult, Error, Image, Mode,
    NoiseSpec, Norm, SolverConfig, TransformKind,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftlpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Format = 4,
    Shape = 5,
    NonFinite = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftlpMode {
    Mca = 0,
    SingleComponent = 1,
    NoMask = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftlpTransform {
    Sft = 0,
    Haar = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftlpNorm {
    Lp = 0,
    L1 = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SftlpComponent {
    Recovered = 0,
    Cartoon = 1,
    Texture = 2,
}

/// Solver parameters. Start from [`sftlp_config_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SftlpConfig {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub gamma: f64,
    pub tol: f64,
    pub max_iters: u32,
    /// An `SftlpMode` value.
    pub mode: u32,
    /// An `SftlpTransform` value.
    pub transform: u32,
    /// An `SftlpNorm` value.
    pub norm: u32,
}

/// `psnr` is `+inf` for identical images.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SftlpMetrics {
    pub psnr: f64,
    pub ssim: f64,
    pub gmsd: f64,
}

/// Opaque image handle.
pub struct SftlpImage(Image);

/// Opaque solver output handle.
pub struct SftlpResult(DenoiseResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> SftlpStatus {
    match err {
        Error::MissingFile(_) | Error::Io { .. } => SftlpStatus::Io,
        Error::MalformedHeader(_)
        | Error::UnsupportedMaxval(_)
        | Error::TruncatedPayload { .. }
        | Error::MalformedPixels(_) => SftlpStatus::Format,
        Error::ShapeMismatch { .. }
        | Error::DegenerateDimensions { .. }
        | Error::OddDimensions { .. }
        | Error::BufferLength { .. } => SftlpStatus::Shape,
        Error::NonFinite(_) | Error::CgmNonFinite { .. } | Error::SolverNonFinite { .. } => {
            SftlpStatus::NonFinite
        }
        Error::InvalidParameter { .. } => SftlpStatus::InvalidArgument,
    }
}

struct Failure(SftlpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SftlpStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SftlpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SftlpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SftlpStatus::Panic
        }
    }
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            SftlpStatus::InvalidArgument,
            "path is not valid UTF-8".into(),
        )
    })
}

unsafe fn image_arg<'a>(p: *const SftlpImage, what: &str) -> Result<&'a Image, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn emit_image(out: *mut *mut SftlpImage, image: Image) {
    *out = Box::into_raw(Box::new(SftlpImage(image)));
}

fn bad_enum(field: &str, v: u32) -> Failure {
    Failure(
        SftlpStatus::InvalidArgument,
        format!("{field} = {v} is not a known value"),
    )
}

fn config_from(c: &SftlpConfig) -> Result<SolverConfig, Failure> {
    let mode = match c.mode {
        0 => Mode::Mca,
        1 => Mode::SingleComponent,
        2 => Mode::NoMask,
        v => return Err(bad_enum("mode", v)),
    };
    let transform = match c.transform {
        0 => TransformKind::Sft,
        1 => TransformKind::Haar,
        v => return Err(bad_enum("transform", v)),
    };
    let norm = match c.norm {
        0 => Norm::Lp,
        1 => Norm::L1,
        v => return Err(bad_enum("norm", v)),
    };
    Ok(SolverConfig {
        alpha0: c.alpha0,
        alpha1: c.alpha1,
        alpha2: c.alpha2,
        lambda0: c.lambda0,
        lambda1: c.lambda1,
        lambda2: c.lambda2,
        p0: c.p0,
        p1: c.p1,
        p2: c.p2,
        gamma: c.gamma,
        tol: c.tol,
        max_iters: c.max_iters as usize,
        mode,
        transform,
        norm,
        cgm: CgmConfig::default(),
        ..SolverConfig::default()
    })
}

#[no_mangle]
pub extern "C" fn sftlp_config_default() -> SftlpConfig {
    let d = SolverConfig::default();
    SftlpConfig {
        alpha0: d.alpha0,
        alpha1: d.alpha1,
        alpha2: d.alpha2,
        lambda0: d.lambda0,
        lambda1: d.lambda1,
        lambda2: d.lambda2,
        p0: d.p0,
        p1: d.p1,
        p2: d.p2,
        gamma: d.gamma,
        tol: d.tol,
        max_iters: d.max_iters as u32,
        mode: SftlpMode::Mca as u32,
        transform: SftlpTransform::Sft as u32,
        norm: SftlpNorm::Lp as u32,
    }
}

/// Length in bytes of the last error message on this thread, excluding the
/// terminating NUL; 0 when there is none.
#[no_mangle]
pub extern "C" fn sftlp_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |s| s.as_bytes().len()))
}

/// Copies the last error message (NUL-terminated, truncated to fit) into
/// `buf` and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sftlp_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |s| s.as_bytes());
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds an image from `rows * cols` row-major doubles.
///
/// # Safety
/// `data` must point to `rows * cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut SftlpImage,
) -> SftlpStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| Failure(SftlpStatus::InvalidArgument, "dimensions overflow".into()))?;
        let pixels = std::slice::from_raw_parts(data, n).to_vec();
        emit_image(out, Image::new(rows, cols, pixels)?);
        Ok(())
    })
}

/// # Safety
/// `image` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_free(image: *mut SftlpImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// # Safety
/// `image` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_rows(image: *const SftlpImage) -> usize {
    image.as_ref().map_or(0, |h| h.0.rows())
}

/// # Safety
/// `image` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_cols(image: *const SftlpImage) -> usize {
    image.as_ref().map_or(0, |h| h.0.cols())
}

/// Copies the pixels in row-major order into `buf`, which holds `len` doubles.
///
/// # Safety
/// `image` must be a live handle and `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_copy_pixels(
    image: *const SftlpImage,
    buf: *mut f64,
    len: usize,
) -> SftlpStatus {
    guard(|| {
        let img = image_arg(image, "image")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < img.len() {
            return Err(Failure(
                SftlpStatus::BufferTooSmall,
                format!("buffer holds {len} values, image has {}", img.len()),
            ));
        }
        ptr::copy_nonoverlapping(img.pixels().as_ptr(), buf, img.len());
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_read_pgm(
    path: *const c_char,
    out: *mut *mut SftlpImage,
) -> SftlpStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        emit_image(out, read_pgm(path)?);
        Ok(())
    })
}

/// Writes an 8-bit binary PGM; values are rounded and clamped to `[0, 255]`.
///
/// # Safety
/// `image` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sftlp_image_write_pgm(
    image: *const SftlpImage,
    path: *const c_char,
) -> SftlpStatus {
    guard(|| {
        let img = image_arg(image, "image")?;
        write_pgm(img, path_arg(path)?)?;
        Ok(())
    })
}

/// # Safety
/// `image` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sftlp_add_noise(
    image: *const SftlpImage,
    level: f64,
    salt_fraction: f64,
    seed: u64,
    out: *mut *mut SftlpImage,
) -> SftlpStatus {
    guard(|| {
        let img = image_arg(image, "image")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = NoiseSpec::new(level, salt_fraction, seed)?;
        emit_image(out, add_salt_pepper_noise(img, &spec)?);
        Ok(())
    })
}

/// Runs the solver. `reference` may be null; when given, the trace records
/// PSNR per iteration.
///
/// # Safety
/// `observed` and a non-null `reference` must be live handles; `config` must
/// point to a valid config; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sftlp_denoise(
    observed: *const SftlpImage,
    config: *const SftlpConfig,
    reference: *const SftlpImage,
    out: *mut *mut SftlpResult,
) -> SftlpStatus {
    guard(|| {
        let obs = image_arg(observed, "observed")?;
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let reference = reference.as_ref().map(|h| &h.0);
        let result = denoise_with_reference(obs, &config_from(cfg)?, reference)?;
        *out = Box::into_raw(Box::new(SftlpResult(result)));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sftlp_result_free(result: *mut SftlpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sftlp_result_iterations(result: *const SftlpResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.iterations())
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sftlp_result_converged(result: *const SftlpResult) -> bool {
    result.as_ref().is_some_and(|r| r.0.converged)
}

/// Copies one output image (an `SftlpComponent` value) into a new handle.
///
/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sftlp_result_image(
    result: *const SftlpResult,
    which: u32,
    out: *mut *mut SftlpImage,
) -> SftlpStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let img = match which {
            w if w == SftlpComponent::Recovered as u32 => &r.recovered,
            w if w == SftlpComponent::Cartoon as u32 => &r.cartoon,
            w if w == SftlpComponent::Texture as u32 => &r.texture,
            v => return Err(bad_enum("which", v)),
        };
        emit_image(out, img.clone());
        Ok(())
    })
}

/// Copies the per-iteration relative change and PSNR into two arrays of
/// `len` doubles each. PSNR entries are NaN without a reference and `+inf`
/// for an exact match. Either array may be null.
///
/// # Safety
/// `result` must be a live handle; non-null arrays must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sftlp_result_copy_trace(
    result: *const SftlpResult,
    rel_change: *mut f64,
    psnr: *mut f64,
    len: usize,
) -> SftlpStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.0;
        if len < r.trace.len() {
            return Err(Failure(
                SftlpStatus::BufferTooSmall,
                format!("buffer holds {len} rows, trace has {}", r.trace.len()),
            ));
        }
        for (i, rec) in r.trace.iter().enumerate() {
            if !rel_change.is_null() {
                *rel_change.add(i) = rec.rel_change;
            }
            if !psnr.is_null() {
                *psnr.add(i) = rec.psnr.map_or(f64::NAN, |p| p.as_f64());
            }
        }
        Ok(())
    })
}

/// # Safety
/// Both images must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sftlp_evaluate(
    reference: *const SftlpImage,
    test: *const SftlpImage,
    out: *mut SftlpMetrics,
) -> SftlpStatus {
    guard(|| {
        let x = image_arg(reference, "reference")?;
        let y = image_arg(test, "test")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let rep = evaluate(x, y)?;
        *out = SftlpMetrics {
            psnr: rep.psnr.as_f64(),
            ssim: rep.ssim,
            gmsd: rep.gmsd,
        };
        Ok(())
    })
}
