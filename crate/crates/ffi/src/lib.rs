//! C ABI over `unifft`.
//!
//! Conventions:
//! - every fallible call returns a `UnifftStatus`; on failure a message is
//!   stored per thread and readable through `unifft_last_error`;
//! - plans and operator grids are opaque heap handles, released with the
//!   matching `*_destroy` function (passing NULL is a no-op);
//! - arrays are row-major; spectral arrays hold `UnifftComplex` values over
//!   the half spectrum (last axis `n/2 + 1`);
//! - vector fields are stored component-major, components ordered (x, y[, z])
//!   where x is the last array axis;
//! - a NULL backend string selects the default backend, NULL lengths select
//!   2π on every axis.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use unifft::decomp::{are_parameters_bad, DecompKind};
use unifft::operators::OperatorGrid;
use unifft::{available_backends, Complex64, Error, FftPlan, GridSpec, SpectralField};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnifftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BackendUnavailable = 3,
    InvalidGrid = 4,
    ShapeMismatch = 5,
    BadParameters = 6,
    Panic = 7,
    Internal = 8,
}

/// Decomposition kind accepted by `unifft_are_parameters_bad`.
pub const UNIFFT_KIND_SLAB: c_int = 0;
pub const UNIFFT_KIND_PENCIL: c_int = 1;

/// A complex number, laid out as `{ re, im }`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UnifftComplex {
    pub re: f64,
    pub im: f64,
}

const _: () = assert!(std::mem::size_of::<UnifftComplex>() == std::mem::size_of::<Complex64>());
const _: () = assert!(std::mem::align_of::<UnifftComplex>() == std::mem::align_of::<Complex64>());

/// Sequential transform plan for one grid and backend.
pub struct UnifftPlan {
    plan: FftPlan,
    backend: CString,
}

/// Pseudo-spectral operators (wavenumbers, gradient, divergence,
/// projection) bound to one grid.
pub struct UnifftOperators {
    ops: OperatorGrid,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(UnifftStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match err.root_cause() {
            Error::BackendUnavailable(_) => UnifftStatus::BackendUnavailable,
            Error::InvalidGrid(_) => UnifftStatus::InvalidGrid,
            Error::ShapeError { .. } | Error::LayoutMismatch(_) => UnifftStatus::ShapeMismatch,
            Error::BadParameters(_) => UnifftStatus::BadParameters,
            _ => UnifftStatus::Internal,
        };
        Failure(status, err.to_string())
    }
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UnifftStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            UnifftStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            UnifftStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(UnifftStatus::NullPointer, format!("`{what}` is NULL"))
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn slice_mut<'a, T>(ptr: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

unsafe fn complex<'a>(
    ptr: *const UnifftComplex,
    len: usize,
    what: &str,
) -> Result<&'a [Complex64], Failure> {
    slice(ptr.cast::<Complex64>(), len, what)
}

unsafe fn complex_mut<'a>(
    ptr: *mut UnifftComplex,
    len: usize,
    what: &str,
) -> Result<&'a mut [Complex64], Failure> {
    slice_mut(ptr.cast::<Complex64>(), len, what)
}

unsafe fn backend_name(backend: *const c_char) -> Result<String, Failure> {
    if backend.is_null() {
        return Ok("default".to_string());
    }
    CStr::from_ptr(backend)
        .to_str()
        .map(str::to_string)
        .map_err(|_| {
            Failure(
                UnifftStatus::InvalidArgument,
                "backend name is not UTF-8".to_string(),
            )
        })
}

unsafe fn grid(ndim: usize, dims: *const usize, lengths: *const f64) -> Result<GridSpec, Failure> {
    let dims = slice(dims, ndim, "dims")?;
    let grid = if lengths.is_null() {
        GridSpec::periodic(dims)?
    } else {
        GridSpec::new(dims, slice(lengths, ndim, "lengths")?)?
    };
    Ok(grid)
}

fn expect_len(what: &str, got: usize, expected: usize) -> Result<(), Failure> {
    if got == expected {
        Ok(())
    } else {
        Err(Failure(
            UnifftStatus::ShapeMismatch,
            format!("`{what}` has {got} elements, expected {expected}"),
        ))
    }
}

fn backend_names() -> &'static [CString] {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    NAMES.get_or_init(|| {
        available_backends()
            .into_iter()
            .map(|b| CString::new(b).unwrap())
            .collect()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn unifft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn unifft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Number of available backends.
#[no_mangle]
pub extern "C" fn unifft_backend_count() -> usize {
    backend_names().len()
}

/// Name of backend `index` in preference order, or NULL if out of range.
#[no_mangle]
pub extern "C" fn unifft_backend_name(index: usize) -> *const c_char {
    backend_names()
        .get(index)
        .map_or(std::ptr::null(), |n| n.as_ptr())
}

/// Returns true when `size` processes cannot decompose the global `dims`
/// with the given kind (`UNIFFT_KIND_SLAB` or `UNIFFT_KIND_PENCIL`). NULL
/// `dims` or an unknown kind also return true.
///
/// # Safety
/// `dims` must be NULL or point to `ndim` readable values.
#[no_mangle]
pub unsafe extern "C" fn unifft_are_parameters_bad(
    kind: c_int,
    ndim: usize,
    dims: *const usize,
    size: usize,
) -> bool {
    let kind = match kind {
        UNIFFT_KIND_SLAB => DecompKind::Slab,
        UNIFFT_KIND_PENCIL => DecompKind::Pencil,
        _ => return true,
    };
    match slice(dims, ndim, "dims") {
        Ok(dims) => are_parameters_bad(kind, dims, size),
        Err(_) => true,
    }
}

/// Creates a plan. On success `*out` receives a handle to release with
/// `unifft_plan_destroy`.
///
/// # Safety
/// `backend` must be NULL or a NUL-terminated string; `dims` must point to
/// `ndim` values and `lengths` to `ndim` values or be NULL; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_create(
    backend: *const c_char,
    ndim: usize,
    dims: *const usize,
    lengths: *const f64,
    out: *mut *mut UnifftPlan,
) -> UnifftStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let plan = FftPlan::create(&backend_name(backend)?, &grid(ndim, dims, lengths)?)?;
        let backend = CString::new(plan.backend_id()).unwrap();
        *out = Box::into_raw(Box::new(UnifftPlan { plan, backend }));
        Ok(())
    })
}

/// Releases a plan. NULL is ignored.
///
/// # Safety
/// `plan` must be NULL or a handle from `unifft_plan_create` not yet destroyed.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_destroy(plan: *mut UnifftPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Resolved backend id of the plan (valid while the plan lives).
///
/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_backend(plan: *const UnifftPlan) -> *const c_char {
    plan.as_ref()
        .map_or(std::ptr::null(), |p| p.backend.as_ptr())
}

/// Number of dimensions of the plan's grid (0 for NULL).
///
/// # Safety
/// `plan` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_ndim(plan: *const UnifftPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.plan.grid().ndim())
}

/// Writes the physical shape (`ndim` values) into `shape`.
///
/// # Safety
/// `plan` must be a live handle and `shape` must hold `ndim` values.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_shape_x(
    plan: *const UnifftPlan,
    shape: *mut usize,
) -> UnifftStatus {
    guard(|| {
        let plan = &plan.as_ref().ok_or_else(|| null("plan"))?.plan;
        slice_mut(shape, plan.shape_x().len(), "shape")?.copy_from_slice(plan.shape_x());
        Ok(())
    })
}

/// Writes the half-spectrum shape (`ndim` values) into `shape`.
///
/// # Safety
/// `plan` must be a live handle and `shape` must hold `ndim` values.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_shape_k(
    plan: *const UnifftPlan,
    shape: *mut usize,
) -> UnifftStatus {
    guard(|| {
        let plan = &plan.as_ref().ok_or_else(|| null("plan"))?.plan;
        slice_mut(shape, plan.shape_k().len(), "shape")?.copy_from_slice(plan.shape_k());
        Ok(())
    })
}

/// Forward transform: `output[k] = (1/N) sum_x input[x] e^{-i k.x}`.
/// `input_len` must equal the physical size and `output_len` the spectral size.
///
/// # Safety
/// `plan` must be a live handle; the buffers must hold the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_fft(
    plan: *const UnifftPlan,
    input: *const f64,
    input_len: usize,
    output: *mut UnifftComplex,
    output_len: usize,
) -> UnifftStatus {
    guard(|| {
        let plan = &plan.as_ref().ok_or_else(|| null("plan"))?.plan;
        plan.fft_raw(
            slice(input, input_len, "input")?,
            complex_mut(output, output_len, "output")?,
        )?;
        Ok(())
    })
}

/// Inverse transform (unnormalized synthesis over the Hermitian completion).
///
/// # Safety
/// `plan` must be a live handle; the buffers must hold the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn unifft_plan_ifft(
    plan: *const UnifftPlan,
    input: *const UnifftComplex,
    input_len: usize,
    output: *mut f64,
    output_len: usize,
) -> UnifftStatus {
    guard(|| {
        let plan = &plan.as_ref().ok_or_else(|| null("plan"))?.plan;
        plan.ifft_raw(
            complex(input, input_len, "input")?,
            slice_mut(output, output_len, "output")?,
        )?;
        Ok(())
    })
}

/// Creates operators on a sequential plan. On success `*out` receives a
/// handle to release with `unifft_operators_destroy`.
///
/// # Safety
/// Same requirements as `unifft_plan_create`.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_create(
    backend: *const c_char,
    ndim: usize,
    dims: *const usize,
    lengths: *const f64,
    out: *mut *mut UnifftOperators,
) -> UnifftStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let ops = OperatorGrid::sequential(&backend_name(backend)?, &grid(ndim, dims, lengths)?)?;
        *out = Box::into_raw(Box::new(UnifftOperators { ops }));
        Ok(())
    })
}

/// Releases operators. NULL is ignored.
///
/// # Safety
/// `ops` must be NULL or a handle from `unifft_operators_create` not yet destroyed.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_destroy(ops: *mut UnifftOperators) {
    if !ops.is_null() {
        drop(Box::from_raw(ops));
    }
}

/// Number of spectral values per component (0 for NULL).
///
/// # Safety
/// `ops` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_len_k(ops: *const UnifftOperators) -> usize {
    ops.as_ref().map_or(0, |o| o.ops.shape_k().iter().product())
}

/// Copies the wavenumber of `component` (0 = x) at every spectral point.
///
/// # Safety
/// `ops` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_wavenumbers(
    ops: *const UnifftOperators,
    component: usize,
    out: *mut f64,
    len: usize,
) -> UnifftStatus {
    guard(|| {
        let ops = &ops.as_ref().ok_or_else(|| null("ops"))?.ops;
        if component >= ops.ndim() {
            return Err(Failure(
                UnifftStatus::InvalidArgument,
                format!(
                    "component {component} out of range for {} dimensions",
                    ops.ndim()
                ),
            ));
        }
        let k = ops.component_k(component);
        expect_len("out", len, k.len())?;
        slice_mut(out, len, "out")?.copy_from_slice(k);
        Ok(())
    })
}

fn spectral(ops: &OperatorGrid, data: &[Complex64]) -> Result<SpectralField, Failure> {
    Ok(SpectralField::new(ops.grid().clone(), data.to_vec())?)
}

fn components(ops: &OperatorGrid, data: &[Complex64]) -> Result<Vec<SpectralField>, Failure> {
    let n = len_k(ops);
    expect_len("vector", data.len(), n * ops.ndim())?;
    data.chunks(n).map(|c| spectral(ops, c)).collect()
}

fn len_k(ops: &OperatorGrid) -> usize {
    ops.shape_k().iter().product()
}

/// Spectral gradient: `out` receives `ndim` components of `len_k` values.
///
/// # Safety
/// `ops` must be a live handle; the buffers must hold the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_grad(
    ops: *const UnifftOperators,
    u_fft: *const UnifftComplex,
    len: usize,
    out: *mut UnifftComplex,
    out_len: usize,
) -> UnifftStatus {
    guard(|| {
        let ops = &ops.as_ref().ok_or_else(|| null("ops"))?.ops;
        expect_len("out", out_len, len * ops.ndim())?;
        let grad = ops.gradfft_from_fft(&spectral(ops, complex(u_fft, len, "u_fft")?)?)?;
        let out = complex_mut(out, out_len, "out")?;
        for (dst, comp) in out.chunks_mut(len).zip(&grad) {
            dst.copy_from_slice(comp.data());
        }
        Ok(())
    })
}

/// Spectral divergence of a component-major vector field.
///
/// # Safety
/// `ops` must be a live handle; the buffers must hold the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_div(
    ops: *const UnifftOperators,
    v_fft: *const UnifftComplex,
    len: usize,
    out: *mut UnifftComplex,
    out_len: usize,
) -> UnifftStatus {
    guard(|| {
        let ops = &ops.as_ref().ok_or_else(|| null("ops"))?.ops;
        let div = ops.divfft_from_vecfft(&components(ops, complex(v_fft, len, "v_fft")?)?)?;
        expect_len("out", out_len, div.data().len())?;
        complex_mut(out, out_len, "out")?.copy_from_slice(div.data());
        Ok(())
    })
}

/// Projects a component-major vector field onto its divergence-free part,
/// overwriting the input. The zero mode is left untouched.
///
/// # Safety
/// `ops` must be a live handle and `v_fft` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn unifft_operators_proj_inplace(
    ops: *const UnifftOperators,
    v_fft: *mut UnifftComplex,
    len: usize,
) -> UnifftStatus {
    guard(|| {
        let ops = &ops.as_ref().ok_or_else(|| null("ops"))?.ops;
        let data = complex_mut(v_fft, len, "v_fft")?;
        let mut fields = components(ops, data)?;
        ops.proj_inplace(&mut fields)?;
        for (dst, comp) in data.chunks_mut(len_k(ops)).zip(&fields) {
            dst.copy_from_slice(comp.data());
        }
        Ok(())
    })
}
