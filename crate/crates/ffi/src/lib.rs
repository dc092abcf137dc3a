//! C ABI for the bpslab library.
//!
//! Conventions: handles are opaque pointers created and destroyed by this
//! library; every fallible call returns a [`BpsStatus`] and writes results
//! through out-pointers only on `BPS_STATUS_OK`; the most recent failure
//! message is readable via [`bps_last_error_message`]. All functions are
//! safe to call from multiple threads as long as each handle is used by one
//! thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bpslab::{
    delta, l2_norm_delta, lambda_q, omega_witness, tau_summatory, tong_constant, DeltaEvaluator,
    Error, MemoryBudget, MultiplicativeSpec,
};

/// Status codes, aligned with the CLI exit-code contract.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpsStatus {
    Ok = 0,
    Internal = 1,
    InvalidInput = 2,
    ResourceLimit = 3,
    NumericFailure = 4,
}

/// Opaque handle to a validated multiplicative-function description.
pub struct BpsSpec {
    inner: MultiplicativeSpec,
}

/// Opaque handle to a divisor-summatory evaluator with an optional cache.
pub struct BpsDeltaEvaluator {
    inner: DeltaEvaluator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn remember_error(msg: &str) {
    let stored = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = stored);
}

fn status_of(err: &Error) -> BpsStatus {
    match err.exit_code() {
        2 => BpsStatus::InvalidInput,
        3 => BpsStatus::ResourceLimit,
        4 => BpsStatus::NumericFailure,
        _ => BpsStatus::Internal,
    }
}

fn fail(err: Error) -> BpsStatus {
    remember_error(&err.to_string());
    status_of(&err)
}

fn guarded(f: impl FnOnce() -> BpsStatus) -> BpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            remember_error("internal panic");
            BpsStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BpsStatus> {
    if ptr.is_null() {
        remember_error("null string pointer");
        return Err(BpsStatus::InvalidInput);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        remember_error("string is not valid UTF-8");
        BpsStatus::InvalidInput
    })
}

macro_rules! out_ref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_mut() } {
            Some(r) => r,
            None => {
                remember_error("null output pointer");
                return BpsStatus::InvalidInput;
            }
        }
    };
}

macro_rules! handle_ref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                remember_error("null handle");
                return BpsStatus::InvalidInput;
            }
        }
    };
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create a spec from a preset name: "parity", "example1", "example2",
/// "one", or "qperiodic:`<q>`".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_preset(name: *const c_char, out: *mut *mut BpsSpec) -> BpsStatus {
    guarded(|| {
        let out = out_ref!(out);
        let name = match read_str(name) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match MultiplicativeSpec::preset(name) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BpsSpec { inner }));
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Create a spec from its JSON description, e.g.
/// `{"exceptional":[{"p":3,"values":[[2,0],[-15,0],[0,0]]}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_from_json(
    json: *const c_char,
    out: *mut *mut BpsSpec,
) -> BpsStatus {
    guarded(|| {
        let out = out_ref!(out);
        let json = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match MultiplicativeSpec::from_json(json) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BpsSpec { inner }));
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Destroy a spec handle. Passing NULL is a no-op.
///
/// # Safety
/// `spec` must be NULL or a pointer earlier returned by a constructor, not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_free(spec: *mut BpsSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// The period m = prod p^a.
///
/// # Safety
/// `spec` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_period(spec: *const BpsSpec, out: *mut u64) -> BpsStatus {
    guarded(|| {
        let spec = handle_ref!(spec);
        let out = out_ref!(out);
        *out = spec.inner.period();
        BpsStatus::Ok
    })
}

/// f(n), split into real and imaginary parts. Requires n >= 1.
///
/// # Safety
/// `spec` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_evaluate(
    spec: *const BpsSpec,
    n: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BpsStatus {
    guarded(|| {
        let spec = handle_ref!(spec);
        let out_re = out_ref!(out_re);
        let out_im = out_ref!(out_im);
        if n < 1 {
            remember_error("evaluate requires n >= 1");
            return BpsStatus::InvalidInput;
        }
        let v = spec.inner.evaluate(n);
        *out_re = v.re;
        *out_im = v.im;
        BpsStatus::Ok
    })
}

/// The Euler factor sum_k f(q^k)/q^k at s = 1 for a prime q.
///
/// # Safety
/// `spec` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_euler_factor(
    spec: *const BpsSpec,
    q: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BpsStatus {
    guarded(|| {
        let spec = handle_ref!(spec);
        let out_re = out_ref!(out_re);
        let out_im = out_ref!(out_im);
        match spec.inner.euler_factor(q) {
            Ok(v) => {
                *out_re = v.re;
                *out_im = v.im;
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Whether some Euler factor at a prime dividing the period vanishes within
/// `tolerance` (the bounded-partial-sums criterion).
///
/// # Safety
/// `spec` must be a live handle; `out_holds` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_condition_i(
    spec: *const BpsSpec,
    tolerance: f64,
    out_holds: *mut bool,
) -> BpsStatus {
    guarded(|| {
        let spec = handle_ref!(spec);
        let out = out_ref!(out_holds);
        if tolerance.is_nan() || tolerance <= 0.0 {
            remember_error("tolerance must be positive");
            return BpsStatus::InvalidInput;
        }
        *out = spec.inner.check_conditions(tolerance).condition_i_holds;
        BpsStatus::Ok
    })
}

/// Sum of f over one period via phi(m) times the Euler-factor product.
///
/// # Safety
/// `spec` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_spec_period_sum(
    spec: *const BpsSpec,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BpsStatus {
    guarded(|| {
        let spec = handle_ref!(spec);
        let out_re = out_ref!(out_re);
        let out_im = out_ref!(out_im);
        let v = spec.inner.period_sum_formula();
        *out_re = v.re;
        *out_im = v.im;
        BpsStatus::Ok
    })
}

/// Exact D(x) = sum_{n<=x} tau(n) by the hyperbola formula.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bps_tau_summatory(x: f64, out: *mut u64) -> BpsStatus {
    guarded(|| {
        let out = out_ref!(out);
        match tau_summatory(x) {
            Ok(v) => {
                *out = v;
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Delta(x) = D(x) - x log x - (2 gamma - 1) x, for x >= 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bps_delta(x: f64, out: *mut f64) -> BpsStatus {
    guarded(|| {
        let out = out_ref!(out);
        match delta(x) {
            Ok(v) => {
                *out = v;
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The factor q^(3/2) - 2 q^(3/4) - 1; total, so no status code.
#[no_mangle]
pub extern "C" fn bps_lambda(q: f64) -> f64 {
    lambda_q(q)
}

/// Mean-square constant of Delta: series estimate up to n_max, the
/// zeta-identity reference value, and the truncation bracket.
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_tong(
    n_max: u64,
    budget_gib: f64,
    out_series: *mut f64,
    out_zeta: *mut f64,
    out_bracket: *mut f64,
) -> BpsStatus {
    guarded(|| {
        let out_series = out_ref!(out_series);
        let out_zeta = out_ref!(out_zeta);
        let out_bracket = out_ref!(out_bracket);
        match tong_constant(n_max, &MemoryBudget::from_gib(budget_gib)) {
            Ok(t) => {
                *out_series = t.a_series;
                *out_zeta = t.a_zeta;
                *out_bracket = t.tail_bracket;
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Create an evaluator caching D(k) for k <= cache_limit (pass 0 for no
/// cache) under the given memory budget in GiB.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bps_evaluator_new(
    cache_limit: u64,
    budget_gib: f64,
    out: *mut *mut BpsDeltaEvaluator,
) -> BpsStatus {
    guarded(|| {
        let out = out_ref!(out);
        let built = if cache_limit >= 1 {
            DeltaEvaluator::with_cache(cache_limit, &MemoryBudget::from_gib(budget_gib))
        } else {
            Ok(DeltaEvaluator::new())
        };
        match built {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BpsDeltaEvaluator { inner }));
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Destroy an evaluator handle. Passing NULL is a no-op.
///
/// # Safety
/// `evaluator` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bps_evaluator_free(evaluator: *mut BpsDeltaEvaluator) {
    if !evaluator.is_null() {
        drop(Box::from_raw(evaluator));
    }
}

/// Exact L2[1, X] norm of Delta(x/n); requires X > n >= 1.
///
/// # Safety
/// `evaluator` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_l2_norm_delta(
    evaluator: *const BpsDeltaEvaluator,
    n: u64,
    x_end: f64,
    out: *mut f64,
) -> BpsStatus {
    guarded(|| {
        let ev = handle_ref!(evaluator);
        let out = out_ref!(out);
        match l2_norm_delta(n, x_end, &ev.inner) {
            Ok(v) => {
                *out = v;
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// n <= x coprime to m with maximal divisor count; writes the witness, its
/// tau, and the ratio against exp(log 2 * log x / log log x) (NaN for x < 30).
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bps_omega_witness(
    m: u64,
    x: u64,
    out_n: *mut u64,
    out_tau: *mut u64,
    out_ratio: *mut f64,
) -> BpsStatus {
    guarded(|| {
        let out_n = out_ref!(out_n);
        let out_tau = out_ref!(out_tau);
        let out_ratio = out_ref!(out_ratio);
        match omega_witness(m, x) {
            Ok(w) => {
                *out_n = w.n;
                *out_tau = w.tau;
                *out_ratio = w.ratio;
                BpsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
