//! C ABI for `qsep`.
//!
//! Every fallible function returns a [`QsepStatus`]; on failure the message is
//! available from [`qsep_last_error_message`] on the same thread. Handles are
//! opaque, owned by the caller, and released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use qsep::operator::{min_eigenvalue, BlochVector, DenseOperator};
use qsep::repr::{
    minimize_wcan, pauli_coefficients, wcan_continuous, wcan_discrete, CoefficientTable,
    DiscreteTable,
};
use qsep::separability::{
    certify, ppt_min_eigenvalue, witness_ghz, witness_werner, CertificateVerdict, WitnessVerdict,
};
use qsep::states::{bound_cat, bound_duer, bound_general, build_state, Rational, StateSpec};
use qsep::{Complex64, Error, Frame, FrameKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsepStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NonSpanningFrame = 5,
    InsufficientQuadrature = 6,
    NotAFrameVertex = 7,
    CertificateInvalid = 8,
    Io = 9,
    Parse = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsepFrameKind {
    Cardinal6 = 0,
    Tetrahedron = 1,
    Octahedron = 2,
    Cube = 3,
    Icosahedron = 4,
    Dodecahedron = 5,
}

pub struct QsepOperator(DenseOperator);

pub struct QsepFrame(Frame);

pub struct QsepTable(DiscreteTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QsepStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => QsepStatus::Domain,
            Error::DimensionMismatch { .. } => QsepStatus::DimensionMismatch,
            Error::NotHermitian(_) => QsepStatus::NotHermitian,
            Error::NonSpanningFrame { .. } => QsepStatus::NonSpanningFrame,
            Error::InsufficientQuadrature { .. } => QsepStatus::InsufficientQuadrature,
            Error::NotAFrameVertex { .. } => QsepStatus::NotAFrameVertex,
            Error::CertificateInvalid { .. } => QsepStatus::CertificateInvalid,
            Error::Io { .. } => QsepStatus::Io,
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => QsepStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn null(what: &str) -> Failure {
    Failure(QsepStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> QsepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsepStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QsepStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn vectors_from(xyz: *const f64, count: usize) -> FfiResult<Vec<BlochVector>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if xyz.is_null() {
        return Err(null("xyz"));
    }
    Ok(slice::from_raw_parts(xyz, 3 * count)
        .chunks(3)
        .map(|c| BlochVector::new(c[0], c[1], c[2]))
        .collect())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qsep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a state from a JSON spec such as `{"family":"eps_ghz","epsilon":0.2}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_state_from_json(
    json: *const c_char,
    out: *mut *mut QsepOperator,
) -> QsepStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let s = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(QsepStatus::Parse, e.to_string()))?;
        let rho = build_state(&StateSpec::from_json_str(s)?)?;
        put(out, Box::into_raw(Box::new(QsepOperator(rho))), "out")
    })
}

/// Builds an operator from row-major real and imaginary parts of a
/// `dim x dim` matrix; `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must hold `dim * dim` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_operator_from_parts(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QsepOperator,
) -> QsepStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let len = dim
            .checked_mul(dim)
            .ok_or_else(|| Failure(QsepStatus::Domain, "dim overflows".into()))?;
        let re = slice::from_raw_parts(re, len);
        let im = if im.is_null() {
            None
        } else {
            Some(slice::from_raw_parts(im, len))
        };
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| Complex64::new(re[r * dim + c], im.map_or(0.0, |i| i[r * dim + c])))
                    .collect()
            })
            .collect();
        let m = DenseOperator::from_rows(&rows)?;
        put(out, Box::into_raw(Box::new(QsepOperator(m))), "out")
    })
}

/// # Safety
/// `op` must come from this library and not be used afterwards; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn qsep_operator_free(op: *mut QsepOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Number of qubits, or 0 for null.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsep_operator_qubits(op: *const QsepOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.qubits())
}

/// Matrix dimension `2^N`, or 0 for null.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsep_operator_dim(op: *const QsepOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.dim())
}

/// # Safety
/// `op` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_operator_entry(
    op: *const QsepOperator,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> QsepStatus {
    guard(|| {
        let o = &get(op, "op")?.0;
        if row >= o.dim() || col >= o.dim() {
            return Err(Failure(
                QsepStatus::Domain,
                format!("entry ({row}, {col}) out of range"),
            ));
        }
        let z = o.get(row, col);
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

/// # Safety
/// `op` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_operator_min_eigenvalue(
    op: *const QsepOperator,
    out: *mut f64,
) -> QsepStatus {
    guard(|| put(out, min_eigenvalue(&get(op, "op")?.0)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_frame_new(
    kind: QsepFrameKind,
    out: *mut *mut QsepFrame,
) -> QsepStatus {
    guard(|| {
        let frame = match kind {
            QsepFrameKind::Cardinal6 => Frame::cardinal6(),
            QsepFrameKind::Tetrahedron => Frame::polyhedron(FrameKind::Tetrahedron)?,
            QsepFrameKind::Octahedron => Frame::polyhedron(FrameKind::Octahedron)?,
            QsepFrameKind::Cube => Frame::polyhedron(FrameKind::Cube)?,
            QsepFrameKind::Icosahedron => Frame::polyhedron(FrameKind::Icosahedron)?,
            QsepFrameKind::Dodecahedron => Frame::polyhedron(FrameKind::Dodecahedron)?,
        };
        put(out, Box::into_raw(Box::new(QsepFrame(frame))), "out")
    })
}

/// Frame from `count` unit vectors packed as `x, y, z` triples.
///
/// # Safety
/// `xyz` must hold `3 * count` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_frame_from_vectors(
    xyz: *const f64,
    count: usize,
    out: *mut *mut QsepFrame,
) -> QsepStatus {
    guard(|| {
        let frame = qsep::frames::dual_frame(&vectors_from(xyz, count)?)?;
        put(out, Box::into_raw(Box::new(QsepFrame(frame))), "out")
    })
}

/// # Safety
/// `frame` must come from this library and not be used afterwards; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn qsep_frame_free(frame: *mut QsepFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Number of vertices, or 0 for null.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsep_frame_len(frame: *const QsepFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.len())
}

/// # Safety
/// `frame` must be a live handle; `xyz` must have room for 3 values.
#[no_mangle]
pub unsafe extern "C" fn qsep_frame_vector(
    frame: *const QsepFrame,
    index: usize,
    xyz: *mut f64,
) -> QsepStatus {
    guard(|| {
        let f = &get(frame, "frame")?.0;
        let v = f
            .vectors()
            .get(index)
            .ok_or_else(|| Failure(QsepStatus::Domain, format!("vertex {index} out of range")))?;
        if xyz.is_null() {
            return Err(null("xyz"));
        }
        slice::from_raw_parts_mut(xyz, 3).copy_from_slice(&v.to_array());
        Ok(())
    })
}

/// Canonical discrete table of `op` over one frame per qubit.
///
/// # Safety
/// `op` must be live, `frames` must hold `count` live frame handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_wcan_discrete(
    op: *const QsepOperator,
    frames: *const *const QsepFrame,
    count: usize,
    out: *mut *mut QsepTable,
) -> QsepStatus {
    guard(|| {
        let rho = &get(op, "op")?.0;
        if frames.is_null() {
            return Err(null("frames"));
        }
        let frames = slice::from_raw_parts(frames, count)
            .iter()
            .map(|&f| get(f, "frame").map(|f| f.0.clone()))
            .collect::<FfiResult<Vec<_>>>()?;
        let table = wcan_discrete(rho, &frames)?;
        put(out, Box::into_raw(Box::new(QsepTable(table))), "out")
    })
}

/// # Safety
/// `table` must come from this library and not be used afterwards; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn qsep_table_free(table: *mut QsepTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of entries, or 0 for null.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsep_table_len(table: *const QsepTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// Copies the weights, row-major with qubit 0's index most significant.
///
/// # Safety
/// `table` must be live and `out` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qsep_table_weights(
    table: *const QsepTable,
    out: *mut f64,
    len: usize,
) -> QsepStatus {
    guard(|| {
        let w = get(table, "table")?.0.weights();
        if len != w.len() {
            return Err(Failure(
                QsepStatus::DimensionMismatch,
                format!("buffer holds {len} values, table has {}", w.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        slice::from_raw_parts_mut(out, len).copy_from_slice(w);
        Ok(())
    })
}

/// Certifies `op` with `table`: `separable` is set to 1 when every weight is
/// nonnegative.
///
/// # Safety
/// Handles must be live; `separable` and `min_weight` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_certify_table(
    op: *const QsepOperator,
    table: *const QsepTable,
    separable: *mut i32,
    min_weight: *mut f64,
) -> QsepStatus {
    guard(|| {
        let t = CoefficientTable::Discrete(get(table, "table")?.0.clone());
        let cert = certify(&get(op, "op")?.0, &t)?;
        put(
            separable,
            (cert.verdict == CertificateVerdict::Separable) as i32,
            "separable",
        )?;
        put(min_weight, cert.min_coefficient, "min_weight")
    })
}

/// Canonical continuous weight at one Bloch vector per qubit (`x, y, z` triples).
///
/// # Safety
/// `op` live, `xyz` holds `3 * count` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_wcan_continuous(
    op: *const QsepOperator,
    xyz: *const f64,
    count: usize,
    out: *mut f64,
) -> QsepStatus {
    guard(|| {
        let c = pauli_coefficients(&get(op, "op")?.0)?;
        put(out, wcan_continuous(&c, &vectors_from(xyz, count)?)?, "out")
    })
}

/// Minimum of the canonical continuous weight; the minimizer is written to
/// `argmin_xyz` (3 values per qubit) when it is non-null.
///
/// # Safety
/// `op` live, `value` writable, `argmin_xyz` null or room for `3 N` values.
#[no_mangle]
pub unsafe extern "C" fn qsep_minimize_wcan(
    op: *const QsepOperator,
    grid_per_sphere: usize,
    refine_iters: usize,
    value: *mut f64,
    argmin_xyz: *mut f64,
) -> QsepStatus {
    guard(|| {
        let c = pauli_coefficients(&get(op, "op")?.0)?;
        let m = minimize_wcan(&c, grid_per_sphere, refine_iters)?;
        put(value, m.value, "value")?;
        if !argmin_xyz.is_null() {
            let out = slice::from_raw_parts_mut(argmin_xyz, 3 * m.vectors.len());
            for (chunk, v) in out.chunks_mut(3).zip(&m.vectors) {
                chunk.copy_from_slice(&v.to_array());
            }
        }
        Ok(())
    })
}

unsafe fn put_rational(r: Rational, num: *mut u64, den: *mut u64) -> FfiResult<()> {
    put(num, r.num, "num")?;
    put(den, r.den, "den")
}

/// `num/den = 1/(1 + 2^(2N-1))`.
///
/// # Safety
/// `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_bound_general(n: usize, num: *mut u64, den: *mut u64) -> QsepStatus {
    guard(|| put_rational(bound_general(n)?, num, den))
}

/// eps-cat threshold from the canonical representation, `N >= 2`.
///
/// # Safety
/// `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_bound_cat(n: usize, num: *mut u64, den: *mut u64) -> QsepStatus {
    guard(|| put_rational(bound_cat(n)?, num, den))
}

/// Exact eps-cat threshold `1/(1 + 2^(N-1))`, `N >= 2`.
///
/// # Safety
/// `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_bound_duer(n: usize, num: *mut u64, den: *mut u64) -> QsepStatus {
    guard(|| put_rational(bound_duer(n)?, num, den))
}

/// Two-qubit correlation witness; `nonseparable` is set to 1 when the value
/// exceeds 1.
///
/// # Safety
/// `op` live; `value` and `nonseparable` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_witness_werner(
    op: *const QsepOperator,
    value: *mut f64,
    nonseparable: *mut i32,
) -> QsepStatus {
    guard(|| {
        let r = witness_werner(&pauli_coefficients(&get(op, "op")?.0)?)?;
        put(value, r.value, "value")?;
        put(
            nonseparable,
            (r.verdict == WitnessVerdict::Nonseparable) as i32,
            "nonseparable",
        )
    })
}

/// Three-qubit GHZ correlation witness.
///
/// # Safety
/// `op` live; `value` and `nonseparable` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_witness_ghz(
    op: *const QsepOperator,
    value: *mut f64,
    nonseparable: *mut i32,
) -> QsepStatus {
    guard(|| {
        let r = witness_ghz(&pauli_coefficients(&get(op, "op")?.0)?)?;
        put(value, r.value, "value")?;
        put(
            nonseparable,
            (r.verdict == WitnessVerdict::Nonseparable) as i32,
            "nonseparable",
        )
    })
}

/// Smallest eigenvalue of the two-qubit partial transpose on `side`.
///
/// # Safety
/// `op` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qsep_ppt_min_eigenvalue(
    op: *const QsepOperator,
    side: usize,
    out: *mut f64,
) -> QsepStatus {
    guard(|| put(out, ppt_min_eigenvalue(&get(op, "op")?.0, side)?, "out"))
}
