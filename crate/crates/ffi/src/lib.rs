//! C ABI for heegner-lab.
//!
//! Every fallible function returns an [`HlStatus`]; on failure the message of
//! the last error on the calling thread is available from
//! [`hl_last_error_message`]. Objects are handed out as opaque pointers and
//! must be released with the matching `*_free` function. Strings returned
//! through `char **` out-parameters are released with [`hl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heegner_lab::disc_form::{FiniteQuadraticForm, DEFAULT_BUDGET};
use heegner_lab::hperp::{disc_group_omega1, perp_gram, PolarizationData};
use heegner_lab::moduli::{disc_kperp, normality, NormalityStatus};
use heegner_lab::reflection::{classify_reflection, GaloisLabel, SymbolicPerpVector};
use heegner_lab::report::{analyze_report, enumerate_report, Envelope};
use heegner_lab::Error;

/// Result codes. `HL_STATUS_VALIDATION` and `HL_STATUS_BUDGET_EXCEEDED`
/// match the CLI exit codes 2 and 3.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    BudgetExceeded = 3,
    Parse = 4,
    Unsupported = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlNormality {
    NormalStable = 0,
    Normal = 1,
    NotNormal = 2,
    Undecided = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlLabel {
    Id = 0,
    S = 1,
    MinusS = 2,
    MinusId = 3,
    Nontrivial = 4,
}

/// Invariants of a reflection vector β = a·m + b·k + c·ℓ.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HlReflectionClass {
    pub beta_sq: i64,
    pub div: i64,
    /// β_* in Z/2d × Z/2t
    pub beta_star: [u64; 2],
    pub label: i32,
}

/// Opaque polarization (t, d, γ, c).
pub struct HlPolarization(PolarizationData);

/// Opaque finite quadratic form.
pub struct HlDiscForm(FiniteQuadraticForm);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HlStatus {
    match e {
        Error::BudgetExceeded { .. } => HlStatus::BudgetExceeded,
        Error::Parse(_) => HlStatus::Parse,
        Error::Unsupported(_) | Error::Overflow(_) => HlStatus::Unsupported,
        _ => HlStatus::Validation,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (HlStatus, String)>) -> HlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HlStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (HlStatus, String) {
    (status_of(&e), format!("[{}] {e}", e.tag()))
}

fn null() -> (HlStatus, String) {
    (HlStatus::NullPointer, "null pointer argument".into())
}

fn opt_c(c: i64) -> Option<u64> {
    u64::try_from(c).ok()
}

fn budget_or_default(budget: u64) -> u64 {
    if budget == 0 {
        DEFAULT_BUDGET
    } else {
        budget
    }
}

fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (HlStatus, String)> {
    let c = CString::new(s).map_err(|_| (HlStatus::Unsupported, "interior NUL".to_string()))?;
    // SAFETY: caller guarantees `out` is valid for writes; checked non-null by callers.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validates (t, d, γ, c); pass `c < 0` to let the library choose c.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_polarization_new(
    t: u64,
    d: u64,
    gamma: u64,
    c: i64,
    out: *mut *mut HlPolarization,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let pol = PolarizationData::new(t, d, gamma, opt_c(c)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HlPolarization(pol)));
        Ok(())
    })
}

/// # Safety
/// `pol` must be NULL or a handle from [`hl_polarization_new`].
#[no_mangle]
pub unsafe extern "C" fn hl_polarization_free(pol: *mut HlPolarization) {
    if !pol.is_null() {
        drop(Box::from_raw(pol));
    }
}

/// Writes c and b = (d + t c²)/γ².
///
/// # Safety
/// `pol` must be a live handle and the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_polarization_params(
    pol: *const HlPolarization,
    c_out: *mut u64,
    b_out: *mut u64,
    omega_out: *mut u64,
) -> HlStatus {
    guard(|| {
        let pol = pol.as_ref().ok_or_else(null)?;
        if c_out.is_null() || b_out.is_null() || omega_out.is_null() {
            return Err(null());
        }
        *c_out = pol.0.c;
        *b_out = pol.0.b;
        *omega_out = pol.0.omega();
        Ok(())
    })
}

/// A_{h⊥}: the split presentation (k̄₁, k̄₂) when ω = 1, else the Smith one.
///
/// # Safety
/// `pol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_perp_disc_form(
    pol: *const HlPolarization,
    out: *mut *mut HlDiscForm,
) -> HlStatus {
    guard(|| {
        let pol = pol.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let form = if pol.0.omega() == 1 {
            disc_group_omega1(&pol.0).map_err(lib_err)?.form().clone()
        } else {
            perp_gram(&pol.0, 0)
                .and_then(|p| p.disc_form())
                .map_err(lib_err)?
                .form()
                .clone()
        };
        *out = Box::into_raw(Box::new(HlDiscForm(form)));
        Ok(())
    })
}

/// # Safety
/// `form` must be NULL or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hl_disc_form_free(form: *mut HlDiscForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Number of generators, or 0 for NULL.
///
/// # Safety
/// `form` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_disc_form_rank(form: *const HlDiscForm) -> usize {
    form.as_ref().map_or(0, |f| f.0.rank())
}

/// |A|, or 0 for NULL.
///
/// # Safety
/// `form` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_disc_form_cardinality(form: *const HlDiscForm) -> u64 {
    form.as_ref().map_or(0, |f| f.0.cardinality())
}

/// Order of generator `i`.
///
/// # Safety
/// `form` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_disc_form_order(
    form: *const HlDiscForm,
    i: usize,
    out: *mut u64,
) -> HlStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let orders = f.0.orders();
        *out = *orders
            .get(i)
            .ok_or((HlStatus::Validation, format!("generator {i} out of range")))?;
        Ok(())
    })
}

/// The form as JSON: {"orders", "q_gen", "pairing"}.
///
/// # Safety
/// `form` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_disc_form_json(
    form: *const HlDiscForm,
    out: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let s = serde_json::to_string(&f.0).map_err(|e| (HlStatus::Unsupported, e.to_string()))?;
        write_string(out, s)
    })
}

/// Normality verdict for (t, d, γ, c); `c < 0` lets the library choose c and
/// `budget = 0` selects the default.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_normality(
    t: u64,
    d: u64,
    gamma: u64,
    c: i64,
    budget: u64,
    out: *mut HlNormality,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let v = normality(t, d, gamma, opt_c(c), budget_or_default(budget)).map_err(lib_err)?;
        *out = match v.status {
            NormalityStatus::NormalStable => HlNormality::NormalStable,
            NormalityStatus::Normal => HlNormality::Normal,
            NormalityStatus::NotNormal => HlNormality::NotNormal,
            NormalityStatus::Undecided => HlNormality::Undecided,
        };
        Ok(())
    })
}

/// Classifies β = a·m + b·k + c·ℓ with m² = `msq` for γ = 1.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_classify(
    t: u64,
    d: u64,
    a: i64,
    msq: i64,
    b: i64,
    c: i64,
    out: *mut HlReflectionClass,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let beta = SymbolicPerpVector::new(a, msq, b, c).map_err(lib_err)?;
        let cls = classify_reflection(t, d, &beta).map_err(lib_err)?;
        let label = match cls.galois_label {
            GaloisLabel::Id => HlLabel::Id,
            GaloisLabel::S => HlLabel::S,
            GaloisLabel::MinusS => HlLabel::MinusS,
            GaloisLabel::MinusId => HlLabel::MinusId,
            GaloisLabel::Nontrivial => HlLabel::Nontrivial,
        };
        *out = HlReflectionClass {
            beta_sq: cls.beta_sq,
            div: cls.div,
            beta_star: [cls.beta_star.coords[0], cls.beta_star.coords[1]],
            label: label as i32,
        };
        Ok(())
    })
}

/// disc(⟨h, β⟩⊥) = −4dβ²/div(β)² for fourfolds (t = 1, γ = 1).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_disc_kperp(
    d: u64,
    a: i64,
    msq: i64,
    b: i64,
    c: i64,
    out: *mut u64,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let beta = SymbolicPerpVector::new(a, msq, b, c).map_err(lib_err)?;
        *out = disc_kperp(d, &beta).map_err(lib_err)?;
        Ok(())
    })
}

/// The `enumerate` report as JSON.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_enumerate_json(
    m: u64,
    d: u64,
    budget: u64,
    out: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let r = enumerate_report(m, d, budget_or_default(budget)).map_err(lib_err)?;
        write_string(out, Envelope::new("enumerate", r).to_json())
    })
}

/// The `analyze` report as JSON; `c < 0` lets the library choose c.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hl_analyze_json(
    m: u64,
    d: u64,
    gamma: u64,
    c: i64,
    budget: u64,
    out: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let r =
            analyze_report(m, d, gamma, opt_c(c), budget_or_default(budget)).map_err(lib_err)?;
        write_string(out, Envelope::new("analyze", r).to_json())
    })
}

/// Copies the message of the last error into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be NULL or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hl_last_error_copy(buf: *mut c_char, len: usize) -> usize {
    let msg = hl_last_error_message();
    if msg.is_null() {
        return 0;
    }
    let bytes = CStr::from_ptr(msg).to_bytes();
    if !buf.is_null() && len > 0 {
        let n = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
        *buf.add(n) = 0;
    }
    bytes.len()
}
