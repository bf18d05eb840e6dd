//! C ABI over `gmhd-core`.
//!
//! Every fallible function returns a [`GmhdStatus`]; on failure the message
//! is available from [`gmhd_last_error`] on the same thread. Objects are
//! opaque handles created by `*_new`/`*_derive`/`*_run` functions and
//! released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gmhd_core::besov::plane_wave_besov_exact;
use gmhd_core::construction::{derive_params, InflationParams};
use gmhd_core::experiment::{run_single, run_verify, ExperimentConfig, RunReport};
use gmhd_core::plane_wave::b1_closed_form;
use gmhd_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmhdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Grid = 3,
    GridTooSmall = 4,
    MalformedField = 5,
    Precondition = 6,
    Domain = 7,
    Infeasible = 8,
    Unsupported = 9,
    Inconsistent = 10,
    BlowUp = 11,
    Config = 12,
    Io = 13,
    Panic = 14,
}

impl From<&Error> for GmhdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Grid(_) => Self::Grid,
            Error::GridTooSmall { .. } => Self::GridTooSmall,
            Error::MalformedField(_) => Self::MalformedField,
            Error::Precondition(_) => Self::Precondition,
            Error::Domain(_) => Self::Domain,
            Error::Infeasible { .. } => Self::Infeasible,
            Error::Unsupported(_) => Self::Unsupported,
            Error::Inconsistent(_) => Self::Inconsistent,
            Error::BlowUp { .. } => Self::BlowUp,
            Error::Config(_) => Self::Config,
            Error::Io(_) => Self::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (GmhdStatus, String)>) -> GmhdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GmhdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            GmhdStatus::Panic
        }
    }
}

fn core(e: Error) -> (GmhdStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (GmhdStatus, String) {
    (GmhdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (GmhdStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (GmhdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn parse_config(text: &str) -> Result<ExperimentConfig, (GmhdStatus, String)> {
    let cfg: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| (GmhdStatus::Config, format!("config JSON: {e}")))?;
    cfg.validate().map_err(core)?;
    Ok(cfg)
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gmhd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gmhd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opaque construction parameters.
pub struct GmhdParams(InflationParams);

/// Plain copy of the parameter values.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GmhdParamValues {
    pub alpha1: f64,
    pub alpha2: f64,
    pub epsilon: f64,
    pub r: u32,
    pub beta1: f64,
    pub beta2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub gamma: f64,
    pub zeta: f64,
    /// `K`, saturated to the `int64_t` range.
    pub k_base: i64,
    pub t_final: f64,
    pub delta: f64,
    pub predicted_exponent: f64,
}

/// Derives the default feasible parameters. Pass NaN for `theta1` to use
/// the default choice.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gmhd_params_derive(
    alpha1: f64,
    alpha2: f64,
    epsilon: f64,
    r: u32,
    theta1: f64,
    out: *mut *mut GmhdParams,
) -> GmhdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let theta = (!theta1.is_nan()).then_some(theta1);
        let p = derive_params(alpha1, alpha2, epsilon, r, theta).map_err(core)?;
        *out = Box::into_raw(Box::new(GmhdParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`gmhd_params_derive`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmhd_params_free(p: *mut GmhdParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gmhd_params_values(p: *const GmhdParams, out: *mut GmhdParamValues) -> GmhdStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            return Err(null("params or out"));
        }
        let q = &(*p).0;
        *out = GmhdParamValues {
            alpha1: q.alpha1,
            alpha2: q.alpha2,
            epsilon: q.epsilon,
            r: q.r,
            beta1: q.beta1,
            beta2: q.beta2,
            theta1: q.theta1,
            theta2: q.theta2,
            gamma: q.gamma,
            zeta: q.zeta_exp,
            k_base: i64::try_from(q.k_base).unwrap_or(i64::MAX),
            t_final: q.t_final,
            delta: q.delta,
            predicted_exponent: q.predicted_exponent(),
        };
        Ok(())
    })
}

/// Closed-form `‖b₁₀(t)‖` in `Ḃ^{-s}_{∞,∞}` (caloric power α₂).
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gmhd_b10_besov(p: *const GmhdParams, t: f64, s: f64, out: *mut f64) -> GmhdStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            return Err(null("params or out"));
        }
        let q = &(*p).0;
        if !(s > 0.0) {
            return Err((GmhdStatus::InvalidArgument, format!("Besov index must be positive, got {s}")));
        }
        let parts = b1_closed_form(q, t).map_err(core)?;
        let amp: f64 = parts.b10.waves.iter().map(|w| w.coefficient.abs() * w.amplitude_norm()).sum();
        *out = amp * plane_wave_besov_exact(1.0, s, q.alpha2);
        Ok(())
    })
}

/// `p^p e^{-p} κ^{-s}` with `p = s/(2α)`; NaN outside `κ, s, α > 0`.
#[no_mangle]
pub extern "C" fn gmhd_plane_wave_besov(kappa: f64, s: f64, alpha: f64) -> f64 {
    if kappa > 0.0 && s > 0.0 && alpha > 0.0 {
        plane_wave_besov_exact(kappa, s, alpha)
    } else {
        f64::NAN
    }
}

/// Opaque result of one run.
pub struct GmhdReport {
    report: RunReport,
    json: CString,
}

/// Runs one experiment described by a JSON config (same keys as the CLI
/// config file; missing keys take their defaults).
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gmhd_run(config_json: *const c_char, out: *mut *mut GmhdReport) -> GmhdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = parse_config(read_str(config_json, "config_json")?)?;
        let report = run_single(&cfg).map_err(core)?;
        let json = serde_json::to_string(&report).map_err(|e| (GmhdStatus::Io, e.to_string()))?;
        let json = CString::new(json).map_err(|e| (GmhdStatus::Io, e.to_string()))?;
        *out = Box::into_raw(Box::new(GmhdReport { report, json }));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from [`gmhd_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmhd_report_free(r: *mut GmhdReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Full report as JSON, owned by the handle.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmhd_report_json(r: *const GmhdReport) -> *const c_char {
    if r.is_null() {
        return ptr::null();
    }
    (*r).json.as_ptr()
}

/// Number of tracked Besov indices.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmhd_report_index_count(r: *const GmhdReport) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).report.indices.len()
}

/// `s`, `‖b(0)‖`, `‖b(T)‖` and their ratio for index `i`.
///
/// # Safety
/// `r` must be a live handle; each output pointer must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn gmhd_report_index(
    r: *const GmhdReport,
    i: usize,
    s: *mut f64,
    b_initial: *mut f64,
    b_final: *mut f64,
    inflation_factor: *mut f64,
) -> GmhdStatus {
    guard(|| {
        if r.is_null() {
            return Err(null("report"));
        }
        let rep = &(*r).report;
        let ix = rep.indices.get(i).ok_or_else(|| {
            (GmhdStatus::InvalidArgument, format!("index {i} out of range (have {})", rep.indices.len()))
        })?;
        for (p, v) in [(s, ix.s), (b_initial, ix.b_initial.value), (b_final, ix.b_final.value), (inflation_factor, ix.inflation_factor)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Runs the verification suite; `passed` receives 1 if every check
/// passed. When some check fails, [`gmhd_last_error`] holds the failing
/// check names, one per line.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `passed` valid.
#[no_mangle]
pub unsafe extern "C" fn gmhd_verify(config_json: *const c_char, passed: *mut i32) -> GmhdStatus {
    guard(|| {
        if passed.is_null() {
            return Err(null("passed"));
        }
        let cfg = parse_config(read_str(config_json, "config_json")?)?;
        let rep = run_verify(&cfg);
        *passed = i32::from(rep.passed);
        if !rep.passed {
            let names: Vec<&str> = rep.failing().iter().map(|c| c.name.as_str()).collect();
            set_error(names.join("\n"));
        }
        Ok(())
    })
}
