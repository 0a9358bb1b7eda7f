//! C ABI over `swallowtail-core`.
//!
//! Matrices are opaque handles owned by the caller and released with
//! [`st_matrix_free`]. Strings returned through out-parameters are
//! heap-allocated and released with [`st_string_free`]. Every fallible call
//! returns an [`StStatus`]; on failure [`st_last_error`] describes the most
//! recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use swallowtail::analysis::{classify, FormulaSet};
use swallowtail::cli::plain_matrix_to_json;
use swallowtail::exact::rational::{parse_rational, to_fraction_string};
use swallowtail::exact::{PolyMatrix, Rational};
use swallowtail::formulas::{FormulaBundle, FormulaKind};
use swallowtail::verify::{verify_matrix_det, verify_monic_det, VerifyMode};
use swallowtail::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegreeTooSmall = 3,
    LeadingCoefficientZero = 4,
    VerificationFailed = 5,
    ParseError = 6,
    OutOfRange = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StFormula {
    Sylvester = 0,
    Bezout = 1,
    SwallowtailFull = 2,
    SwallowtailMinimal = 3,
    SwallowtailMonic = 4,
}

impl From<StFormula> for FormulaKind {
    fn from(f: StFormula) -> Self {
        match f {
            StFormula::Sylvester => FormulaKind::Sylvester,
            StFormula::Bezout => FormulaKind::Bezout,
            StFormula::SwallowtailFull => FormulaKind::SwallowtailFull,
            StFormula::SwallowtailMinimal => FormulaKind::SwallowtailMinimal,
            StFormula::SwallowtailMonic => FormulaKind::SwallowtailMonic,
        }
    }
}

/// Opaque formula matrix.
pub struct StMatrix {
    kind: FormulaKind,
    n: usize,
    matrix: PolyMatrix,
}

/// Rank data of a polynomial specialized into the Bezout and minimal
/// swallowtail matrices.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StClassification {
    pub n: usize,
    pub bezout_rank: usize,
    pub bezout_nullity: usize,
    pub swallowtail_nullity: usize,
    pub distinct_roots_detected: usize,
    pub multiplicity_excess: usize,
    pub multi_double_pair: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> StStatus {
    match e {
        Error::DegreeTooSmall { .. } => StStatus::DegreeTooSmall,
        Error::LeadingCoefficientZero => StStatus::LeadingCoefficientZero,
        Error::VerificationFailed(_) => StStatus::VerificationFailed,
        Error::Parse(_) => StStatus::ParseError,
        Error::InvalidProfile(_) | Error::ZeroPolynomial => StStatus::InvalidArgument,
        _ => StStatus::Internal,
    }
}

fn fail(status: StStatus, msg: &str) -> StStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping library errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), StStatus>) -> StStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(StStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> StStatus {
    fail(status_of(&e), &e.to_string())
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), StStatus> {
    let c = CString::new(s).map_err(|_| fail(StStatus::Internal, "string contains NUL"))?;
    // SAFETY: caller checked `out` for null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), StStatus> {
    if p.is_null() {
        Err(fail(StStatus::NullPointer, &format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds formula `kind` for degree `n`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn st_formula_build(kind: StFormula, n: usize, out: *mut *mut StMatrix) -> StStatus {
    guard(|| {
        non_null(out, "out")?;
        let b = FormulaBundle::build(kind.into(), n).map_err(lib_err)?;
        let h = Box::new(StMatrix {
            kind: b.kind,
            n: b.n,
            matrix: b.matrix,
        });
        *out = Box::into_raw(h);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`st_formula_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_matrix_free(m: *mut StMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count; 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_matrix_rows(m: *const StMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.matrix.rows())
}

/// Column count; 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_matrix_cols(m: *const StMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.matrix.cols())
}

/// Entry `(row, col)` as text, e.g. `a1*a3 - 16*a0*a4`.
///
/// # Safety
/// `m` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn st_matrix_entry(m: *const StMatrix, row: usize, col: usize, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        non_null(m, "matrix")?;
        non_null(out, "out")?;
        let m = &*m;
        if row >= m.matrix.rows() || col >= m.matrix.cols() {
            return Err(fail(
                StStatus::OutOfRange,
                &format!("({row}, {col}) outside {}x{}", m.matrix.rows(), m.matrix.cols()),
            ));
        }
        out_string(m.matrix.get(row, col).to_string(), out)
    })
}

/// The matrix as JSON, in the same format as the command line tool.
///
/// # Safety
/// `m` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn st_matrix_to_json(m: *const StMatrix, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        non_null(m, "matrix")?;
        non_null(out, "out")?;
        let m = &*m;
        let text = plain_matrix_to_json(&m.matrix, Some(m.kind)).map_err(lib_err)?;
        out_string(text, out)
    })
}

/// Checks `det M = c * a0^e * D_n`. `samples == 0` selects the symbolic
/// check, otherwise `samples` seeded random points are used. For the monic
/// formula `e` is reported as 0. `c` is written as a `p/q` string.
///
/// # Safety
/// `m` must be a live handle; `c_out` and `e_out` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn st_matrix_verify(
    m: *const StMatrix,
    samples: usize,
    seed: u64,
    c_out: *mut *mut c_char,
    e_out: *mut u32,
) -> StStatus {
    guard(|| {
        non_null(m, "matrix")?;
        non_null(c_out, "c_out")?;
        non_null(e_out, "e_out")?;
        let m = &*m;
        let mode = if samples == 0 {
            VerifyMode::Symbolic
        } else {
            VerifyMode::Sampled { count: samples, seed }
        };
        let (c, e) = if m.kind == FormulaKind::SwallowtailMonic {
            (verify_monic_det(&m.matrix, m.n, mode).map_err(lib_err)?, 0)
        } else {
            let r = verify_matrix_det(&m.matrix, m.n, mode).map_err(lib_err)?;
            (r.c, r.a0_exponent)
        };
        out_string(to_fraction_string(&c), c_out)?;
        *e_out = e;
        Ok(())
    })
}

/// Classifies `a0 x^n + a1 x^(n-1) y + .. + an y^n` given as `len = n + 1`
/// rational strings (`"3"`, `"-2/5"`), leading coefficient first.
///
/// # Safety
/// `coeffs` must point to `len` valid NUL-terminated strings; `out` must
/// be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn st_classify(coeffs: *const *const c_char, len: usize, out: *mut StClassification) -> StStatus {
    guard(|| {
        non_null(coeffs, "coeffs")?;
        non_null(out, "out")?;
        let mut parsed: Vec<Rational> = Vec::with_capacity(len);
        for i in 0..len {
            let p = *coeffs.add(i);
            non_null(p, "coefficient")?;
            let s = CStr::from_ptr(p)
                .to_str()
                .map_err(|_| fail(StStatus::ParseError, "coefficient is not UTF-8"))?;
            parsed.push(parse_rational(s.trim()).map_err(lib_err)?);
        }
        if len < 4 {
            return Err(lib_err(Error::DegreeTooSmall {
                min: 3,
                got: len.saturating_sub(1),
            }));
        }
        let set = FormulaSet::new(len - 1).map_err(lib_err)?;
        let c = classify(&parsed, &set).map_err(lib_err)?;
        *out = StClassification {
            n: c.n,
            bezout_rank: c.bezout_rank,
            bezout_nullity: c.bezout_nullity,
            swallowtail_nullity: c.swallowtail_nullity,
            distinct_roots_detected: c.distinct_roots_detected,
            multiplicity_excess: c.multiplicity_excess,
            multi_double_pair: c.multi_double_pair,
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"",
    };
    V.as_ptr()
}
