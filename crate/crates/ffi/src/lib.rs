//! C interface to `ndwu-core`.
//!
//! Behaviors are passed around as opaque `NdwuBehavior` handles created by
//! the `ndwu_behavior_*` constructors and released with
//! `ndwu_behavior_free`. Every fallible function returns an `NdwuStatus`;
//! results are written through out-pointers only on success. The message of
//! the last failure on the calling thread is available from
//! `ndwu_last_error_message`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ndwu_core::boxes::{aqc_behavior_with, named_box, noisy_family, FamilyPoint, JointOrder};
use ndwu_core::criteria::{self, npa_tlm};
use ndwu_core::ndwu::{c_interval, uncertainty, OutcomeDistribution};
use ndwu_core::{Behavior, Error, SideReport};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NdwuStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Probabilities are negative, above one, non-finite or not normalized.
    InvalidBehavior = 3,
    Signaling = 4,
    /// Malformed JSON or non-UTF-8 input.
    ParseError = 5,
    OutsideFamily = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

/// Opaque behavior handle.
pub struct NdwuBehavior {
    inner: Behavior,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NdwuSideReport {
    pub max_lhs: f64,
    pub min_rhs: f64,
    pub satisfied: bool,
    pub skipped_states: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NdwuCriterionReport {
    /// Alice's measurements in the states prepared by Bob.
    pub side_a: NdwuSideReport,
    /// Bob's measurements in the states prepared by Alice.
    pub side_b: NdwuSideReport,
    pub overall: bool,
}

impl From<SideReport> for NdwuSideReport {
    fn from(s: SideReport) -> Self {
        NdwuSideReport {
            max_lhs: s.max_lhs,
            min_rhs: s.min_rhs,
            satisfied: s.satisfied,
            skipped_states: s.skipped_states,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> NdwuStatus {
    match e {
        Error::SignalingDetected { .. } => NdwuStatus::Signaling,
        Error::WrongLength { .. }
        | Error::NonFinite { .. }
        | Error::NegativeProbability { .. }
        | Error::ProbabilityAboveOne { .. }
        | Error::NotNormalized { .. }
        | Error::InvalidDistribution(_) => NdwuStatus::InvalidBehavior,
        Error::Json(_) | Error::Malformed(_) => NdwuStatus::ParseError,
        Error::InvalidFamilyPoint { .. } => NdwuStatus::OutsideFamily,
        _ => NdwuStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard<F>(f: F) -> NdwuStatus
where
    F: FnOnce() -> Result<(), NdwuStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NdwuStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            NdwuStatus::Internal
        }
    }
}

fn fail(e: Error) -> NdwuStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn null() -> NdwuStatus {
    set_error("null pointer argument".into());
    NdwuStatus::NullPointer
}

unsafe fn behavior_ref<'a>(b: *const NdwuBehavior) -> Result<&'a Behavior, NdwuStatus> {
    b.as_ref().map(|h| &h.inner).ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), NdwuStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle(out: *mut *mut NdwuBehavior, inner: Behavior) -> Result<(), NdwuStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(NdwuBehavior { inner })));
    Ok(())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, NdwuStatus> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        NdwuStatus::ParseError
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ndwu_status_message(status: NdwuStatus) -> *const c_char {
    let s: &'static CStr = match status {
        NdwuStatus::Ok => c"ok",
        NdwuStatus::NullPointer => c"null pointer argument",
        NdwuStatus::InvalidArgument => c"invalid argument",
        NdwuStatus::InvalidBehavior => c"invalid behavior",
        NdwuStatus::Signaling => c"signaling behavior",
        NdwuStatus::ParseError => c"parse error",
        NdwuStatus::OutsideFamily => c"point outside the family simplex",
        NdwuStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ndwu_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Validates 16 probabilities in `[ν][μ][a][b]` order.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_new(
    p: *const f64,
    len: usize,
    tol: f64,
    out: *mut *mut NdwuBehavior,
) -> NdwuStatus {
    guard(|| {
        if p.is_null() {
            return Err(null());
        }
        let raw = slice::from_raw_parts(p, len);
        let b = Behavior::validate(raw, tol).map_err(fail)?;
        write_handle(out, b)
    })
}

/// Parses a behavior JSON document. `tol` applies when the document has none.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_from_json(
    json: *const c_char,
    tol: f64,
    out: *mut *mut NdwuBehavior,
) -> NdwuStatus {
    guard(|| {
        let text = str_arg(json)?;
        let b = Behavior::from_json_str(text, tol).map_err(fail)?;
        write_handle(out, b)
    })
}

/// Member `αPR + βPR′ + τL + (1−α−β−τ)I/4` of the noisy family.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_noisy_family(
    alpha: f64,
    beta: f64,
    tau: f64,
    out: *mut *mut NdwuBehavior,
) -> NdwuStatus {
    guard(|| {
        let b = FamilyPoint::new(alpha, beta, tau)
            .and_then(noisy_family)
            .map_err(fail)?;
        write_handle(out, b)
    })
}

/// The almost-quantum behavior; `swapped` exchanges the two
/// off-diagonal joint probabilities.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_aqc(swapped: bool, out: *mut *mut NdwuBehavior) -> NdwuStatus {
    guard(|| {
        let order = if swapped {
            JointOrder::Swapped
        } else {
            JointOrder::AsListed
        };
        write_handle(out, aqc_behavior_with(order))
    })
}

/// Named box: `pr`, `pr-prime`, `anti-pr`, `uniform`, `aqc`, `nlTSL` or
/// `localTSLV` with bits in place of the letters.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_named(name: *const c_char, out: *mut *mut NdwuBehavior) -> NdwuStatus {
    guard(|| {
        let b = named_box(str_arg(name)?).map_err(fail)?;
        write_handle(out, b)
    })
}

#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_free(b: *mut NdwuBehavior) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Copies the 16 probabilities into `out`.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_probabilities(b: *const NdwuBehavior, out: *mut f64) -> NdwuStatus {
    guard(|| {
        let raw = behavior_ref(b)?.to_raw();
        if out.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(raw.as_ptr(), out, raw.len());
        Ok(())
    })
}

/// Serializes to JSON. Release the string with `ndwu_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_to_json(b: *const NdwuBehavior, out: *mut *mut c_char) -> NdwuStatus {
    guard(|| {
        let text = behavior_ref(b)?.to_json_string();
        let c = CString::new(text).map_err(|_| NdwuStatus::Internal)?;
        write_out(out, c.into_raw())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ndwu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ndwu_behavior_chsh(b: *const NdwuBehavior, out: *mut f64) -> NdwuStatus {
    guard(|| write_out(out, behavior_ref(b)?.chsh()))
}

#[no_mangle]
pub unsafe extern "C" fn ndwu_criterion(b: *const NdwuBehavior, out: *mut NdwuCriterionReport) -> NdwuStatus {
    guard(|| {
        let r = ndwu_core::criterion(behavior_ref(b)?);
        write_out(
            out,
            NdwuCriterionReport {
                side_a: r.side_a.into(),
                side_b: r.side_b.into(),
                overall: r.overall,
            },
        )
    })
}

/// Level-1 arcsine condition.
#[no_mangle]
pub unsafe extern "C" fn ndwu_npa_tlm(b: *const NdwuBehavior, out: *mut bool) -> NdwuStatus {
    guard(|| write_out(out, npa_tlm(behavior_ref(b)?)))
}

/// Closed-form criterion on the noisy family.
#[no_mangle]
pub unsafe extern "C" fn ndwu_family_boundary(alpha: f64, beta: f64, tau: f64, out: *mut bool) -> NdwuStatus {
    guard(|| {
        let p = FamilyPoint::new(alpha, beta, tau).map_err(fail)?;
        write_out(out, criteria::ndwu_family_boundary(p))
    })
}

/// `√(1 − Σ p²)` of a probability vector.
#[no_mangle]
pub unsafe extern "C" fn ndwu_uncertainty(p: *const f64, len: usize, tol: f64, out: *mut f64) -> NdwuStatus {
    guard(|| {
        if p.is_null() {
            return Err(null());
        }
        let dist = OutcomeDistribution::new(slice::from_raw_parts(p, len).to_vec(), tol).map_err(fail)?;
        write_out(out, uncertainty(&dist))
    })
}

/// Interval of overlaps compatible with two expectations in `[−1, 1]`.
#[no_mangle]
pub unsafe extern "C" fn ndwu_c_interval(e0: f64, e1: f64, lo: *mut f64, hi: *mut f64) -> NdwuStatus {
    guard(|| {
        if !(-1.0..=1.0).contains(&e0) || !(-1.0..=1.0).contains(&e1) {
            set_error(format!("expectations ({e0}, {e1}) outside [-1, 1]"));
            return Err(NdwuStatus::InvalidArgument);
        }
        if lo.is_null() || hi.is_null() {
            return Err(null());
        }
        let iv = c_interval(e0, e1);
        lo.write(iv.lo);
        hi.write(iv.hi);
        Ok(())
    })
}
