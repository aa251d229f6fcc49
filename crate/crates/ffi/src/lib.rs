//! C ABI over the `multiport` library.
//!
//! Objects cross the boundary as opaque handles (`MpMatrix`, `MpFactorization`,
//! `MpNetlist`) created by `mp_*` constructors and released with the matching
//! `*_free`. Complex data travels as interleaved `re, im` doubles. Every fallible call
//! returns an `MpStatus`; the message for the most recent failure on the calling
//! thread is available from `mp_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multiport::decompose::{decompose, reconstruct, Factorization};
use multiport::interferometer::{
    netlist_from_factorization, render_schematic, simulate, transfer_matrix, Netlist, SchematicFormat,
};
use multiport::numerics::{random_unitary, unitarity_deviation, ComplexMatrix, ComplexVector};
use multiport::observables::{analyzer_unitary, parse_observables, particle_dim, predict_ports, RowOrdering};
use multiport::states::{preparation_unitary, NamedState};
use multiport::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotUnitary = 4,
    NotNormalized = 5,
    ParseError = 6,
    BufferTooSmall = 7,
    NumericError = 8,
    Panic = 9,
}

pub struct MpMatrix {
    inner: ComplexMatrix,
}

pub struct MpFactorization {
    inner: Factorization,
}

pub struct MpNetlist {
    inner: Netlist,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(MpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimMismatch(_) | Error::ShapeMismatch(..) | Error::NotSquare { .. } | Error::BadLength { .. } => {
                MpStatus::DimensionMismatch
            }
            Error::NotUnitary(_) => MpStatus::NotUnitary,
            Error::NotNormalized(_) => MpStatus::NotNormalized,
            Error::Parse(_) => MpStatus::ParseError,
            Error::UnknownState(_)
            | Error::UnknownGate(_)
            | Error::BadIndex(_)
            | Error::BadAxes { .. }
            | Error::BadLabels(_)
            | Error::PortOutOfRange { .. }
            | Error::EmptyDimension
            | Error::NonFinite
            | Error::BadTransmission(_) => MpStatus::InvalidArgument,
            _ => MpStatus::NumericError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MpStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MpStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(MpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn complex_arg(data: *const f64, len: usize, what: &str) -> Result<Vec<Complex64>, Failure> {
    if data.is_null() {
        return Err(null(what));
    }
    let raw = std::slice::from_raw_parts(data, 2 * len);
    Ok(raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

unsafe fn write_complex(out: *mut f64, capacity: usize, values: &[Complex64]) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if capacity < values.len() {
        return Err(Failure(
            MpStatus::BufferTooSmall,
            format!("need room for {} complex values, got {capacity}", values.len()),
        ));
    }
    let dst = std::slice::from_raw_parts_mut(out, 2 * values.len());
    for (pair, z) in dst.chunks_exact_mut(2).zip(values) {
        pair[0] = z.re;
        pair[1] = z.im;
    }
    Ok(())
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output string"));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null(what))
}

/// Copy of the last error message on this thread, or NULL if the last call succeeded.
/// Release with `mp_string_free`.
#[no_mangle]
pub extern "C" fn mp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `rows x cols` matrix from `2 * rows * cols` interleaved doubles in row-major order.
///
/// # Safety
/// `data` must point to `2 * rows * cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut MpMatrix,
) -> MpStatus {
    guard(|| {
        let entries = complex_arg(data, rows * cols, "data")?;
        put(
            out,
            MpMatrix {
                inner: ComplexMatrix::new(rows, cols, entries)?,
            },
        )
    })
}

/// # Safety
/// `m` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_free(m: *mut MpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_rows(m: *const MpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.rows())
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_cols(m: *const MpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.cols())
}

/// Entry at 0-based `(row, col)`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_get(
    m: *const MpMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> MpStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        if re.is_null() || im.is_null() {
            return Err(null("output"));
        }
        if row >= m.inner.rows() || col >= m.inner.cols() {
            return Err(Failure(
                MpStatus::InvalidArgument,
                format!("entry ({row}, {col}) out of range"),
            ));
        }
        let z = m.inner[(row, col)];
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Copies all entries, row-major and interleaved, into `out` (room for `capacity` complex values).
///
/// # Safety
/// `m` must be a live handle; `out` must hold `2 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_entries(m: *const MpMatrix, out: *mut f64, capacity: usize) -> MpStatus {
    guard(|| write_complex(out, capacity, handle(m, "matrix")?.inner.entries()))
}

/// Parses `{"rows", "cols", "entries": [[re, im], ...]}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_from_json(json: *const c_char, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner: ComplexMatrix =
            serde_json::from_str(text).map_err(|e| Failure(MpStatus::ParseError, e.to_string()))?;
        put(out, MpMatrix { inner })
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_to_json(m: *const MpMatrix, out: *mut *mut c_char) -> MpStatus {
    guard(|| {
        put_string(
            out,
            serde_json::to_string(&handle(m, "matrix")?.inner).expect("serializable"),
        )
    })
}

/// Haar-distributed `n x n` unitary, reproducible from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_random_unitary(n: usize, seed: u64, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        if n == 0 {
            return Err(Error::EmptyDimension.into());
        }
        put(
            out,
            MpMatrix {
                inner: random_unitary(n, seed),
            },
        )
    })
}

/// `max |M·M† − I|`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_unitarity_deviation(m: *const MpMatrix, out: *mut f64) -> MpStatus {
    guard(|| {
        let d = unitarity_deviation(&handle(m, "matrix")?.inner)?;
        if out.is_null() {
            return Err(null("output"));
        }
        *out = d;
        Ok(())
    })
}

/// Unitary taking the 0-based `port` basis vector to the `dim`-entry interleaved `state`.
///
/// # Safety
/// `state` must hold `2 * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_preparation_unitary(
    state: *const f64,
    dim: usize,
    port: usize,
    out: *mut *mut MpMatrix,
) -> MpStatus {
    guard(|| {
        let psi = ComplexVector::new(complex_arg(state, dim, "state")?)?;
        put(
            out,
            MpMatrix {
                inner: preparation_unitary(&psi, port)?,
            },
        )
    })
}

/// # Safety
/// `u` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_decompose(u: *const MpMatrix, out: *mut *mut MpFactorization) -> MpStatus {
    guard(|| {
        put(
            out,
            MpFactorization {
                inner: decompose(&handle(u, "matrix")?.inner)?,
            },
        )
    })
}

/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_factorization_free(f: *mut MpFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_factorization_factor_count(f: *const MpFactorization) -> usize {
    f.as_ref().map_or(0, |f| f.inner.factors.len())
}

/// # Safety
/// `f` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mp_factorization_to_json(f: *const MpFactorization, out: *mut *mut c_char) -> MpStatus {
    guard(|| {
        put_string(
            out,
            serde_json::to_string(&handle(f, "factorization")?.inner).expect("serializable"),
        )
    })
}

/// Multiplies the factors back into the unitary.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_reconstruct(f: *const MpFactorization, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        put(
            out,
            MpMatrix {
                inner: reconstruct(&handle(f, "factorization")?.inner),
            },
        )
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_from_factorization(
    f: *const MpFactorization,
    out: *mut *mut MpNetlist,
) -> MpStatus {
    guard(|| {
        put(
            out,
            MpNetlist {
                inner: netlist_from_factorization(&handle(f, "factorization")?.inner)?,
            },
        )
    })
}

/// # Safety
/// `n` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_free(n: *mut MpNetlist) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// # Safety
/// `n` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_dim(n: *const MpNetlist) -> usize {
    n.as_ref().map_or(0, |n| n.inner.dim())
}

/// # Safety
/// `n` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_element_count(n: *const MpNetlist) -> usize {
    n.as_ref().map_or(0, |n| n.inner.elements().len())
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_from_json(json: *const c_char, out: *mut *mut MpNetlist) -> MpStatus {
    guard(|| {
        let inner = Netlist::from_json(str_arg(json, "json")?)?;
        put(out, MpNetlist { inner })
    })
}

/// # Safety
/// `n` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_to_json(n: *const MpNetlist, out: *mut *mut c_char) -> MpStatus {
    guard(|| put_string(out, handle(n, "netlist")?.inner.to_json()))
}

/// Text schematic when `svg` is 0, SVG otherwise.
///
/// # Safety
/// `n` must be a live handle; `out` must be writable. Free the result with `mp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_schematic(n: *const MpNetlist, svg: c_int, out: *mut *mut c_char) -> MpStatus {
    guard(|| {
        let format = if svg == 0 {
            SchematicFormat::Text
        } else {
            SchematicFormat::Svg
        };
        put_string(out, render_schematic(&handle(n, "netlist")?.inner, format))
    })
}

/// # Safety
/// `n` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_netlist_transfer_matrix(n: *const MpNetlist, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        put(
            out,
            MpMatrix {
                inner: transfer_matrix(&handle(n, "netlist")?.inner),
            },
        )
    })
}

/// Propagates `dim` interleaved input amplitudes through the netlist into `output`.
///
/// # Safety
/// `input` and `output` must each hold `2 * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_simulate(n: *const MpNetlist, input: *const f64, dim: usize, output: *mut f64) -> MpStatus {
    guard(|| {
        let nl = handle(n, "netlist")?;
        let v = ComplexVector::new(complex_arg(input, dim, "input")?)?;
        let out = simulate(&nl.inner, &v)?;
        write_complex(output, dim, out.entries())
    })
}

/// Writes the amplitudes of a named state and its dimension. With `out` NULL or too
/// small, only `dim` is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `name` must be a nul-terminated string; `dim` must be writable; `out` must be NULL
/// or hold `2 * capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_named_state(
    name: *const c_char,
    out: *mut f64,
    capacity: usize,
    dim: *mut usize,
) -> MpStatus {
    guard(|| {
        let state: NamedState = str_arg(name, "name")?.parse()?;
        let v = state.vector();
        if dim.is_null() {
            return Err(null("dim"));
        }
        *dim = v.dim();
        if out.is_null() {
            return Err(Failure(MpStatus::BufferTooSmall, "no output buffer".into()));
        }
        write_complex(out, capacity, v.entries())
    })
}

/// Port probabilities for `state` behind the analyzer of `observables`
/// (per-particle specs separated by `|`). `forward` selects forward row order.
///
/// # Safety
/// `state` must hold `2 * dim` doubles; `observables` must be a nul-terminated string;
/// `probabilities` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn mp_predict(
    state: *const f64,
    dim: usize,
    observables: *const c_char,
    forward: c_int,
    probabilities: *mut f64,
    capacity: usize,
) -> MpStatus {
    guard(|| {
        let psi = ComplexVector::new(complex_arg(state, dim, "state")?)?;
        let text = str_arg(observables, "observables")?;
        let d = particle_dim(dim, text.split('|').count())?;
        let parts = parse_observables(text, d)?;
        let ordering = if forward == 0 {
            RowOrdering::ReversedLex
        } else {
            RowOrdering::ForwardLex
        };
        let dist = predict_ports(&analyzer_unitary(&parts, ordering)?, &psi)?;
        if probabilities.is_null() {
            return Err(null("probabilities"));
        }
        if capacity < dist.len() {
            return Err(Failure(
                MpStatus::BufferTooSmall,
                format!("need {} probabilities", dist.len()),
            ));
        }
        std::slice::from_raw_parts_mut(probabilities, dist.len()).copy_from_slice(&dist.probabilities);
        Ok(())
    })
}
