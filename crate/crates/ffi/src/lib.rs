//! C ABI over `spectra-core`.
//!
//! Conventions:
//! * every function returns a [`SpectraStatus`]; results go through out-pointers;
//! * on failure the message is available from [`spectra_last_error_message`]
//!   on the same thread until the next call;
//! * handles are opaque and released with their `*_free` function;
//! * strings handed out by the library are released with [`spectra_string_free`].
//!
//! Panics never cross the boundary; they surface as `SPECTRA_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectra_core::covers::cover_deficit;
use spectra_core::harness::verify_component;
use spectra_core::hnfilt::{w_catalog, WSpectrum};
use spectra_core::polygons::dominates;
use spectra_core::spectra::{estimate_component, estimate_spectrum, merge_runs, EstimateConfig, RunRecord};
use spectra_core::strata::{ComponentId, QStratum};
use spectra_core::Permutation;

/// Result code of every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectraStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownComponent = 4,
    InvalidArgument = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Pooled or single estimation run.
pub struct SpectraRun(RunRecord);

/// Harder-Narasimhan spectrum of a component.
pub struct SpectraWSpectrum(WSpectrum);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SpectraStatus, String);

impl Failure {
    fn new(status: SpectraStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpectraStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpectraStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            SpectraStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(SpectraStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(SpectraStatus::InvalidUtf8, e))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(SpectraStatus::NullPointer, "null output pointer"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(SpectraStatus::NullPointer, "null handle"))
}

fn component(s: &str) -> Result<ComponentId, Failure> {
    s.parse().map_err(|e| Failure::new(SpectraStatus::Parse, e))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure::new(SpectraStatus::InvalidArgument, e))
}

fn spectra_failure(e: spectra_core::spectra::SpectraError) -> Failure {
    use spectra_core::spectra::SpectraError as E;
    let status = match &e {
        E::Catalog(_) => SpectraStatus::UnknownComponent,
        E::InvalidConfig(_) | E::MixedConfig(_) => SpectraStatus::InvalidArgument,
        _ => SpectraStatus::Numerical,
    };
    Failure::new(status, e)
}

unsafe fn copy_out(values: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(SpectraStatus::NullPointer, "null output buffer"));
    }
    if len < values.len() {
        return Err(Failure::new(SpectraStatus::BufferTooSmall, format!("need {} slots", values.len())));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Message of the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn spectra_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn spectra_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn spectra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Estimates a catalogued component such as `"H(4)^hyp"`.
#[no_mangle]
pub unsafe extern "C" fn spectra_estimate(
    stratum: *const c_char,
    steps: u64,
    seed: u64,
    batches: u32,
    out: *mut *mut SpectraRun,
) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        let id = component(read_str(stratum)?)?;
        let rec = estimate_component(&id, &EstimateConfig::new(steps, seed, batches as usize)).map_err(spectra_failure)?;
        *out = Box::into_raw(Box::new(SpectraRun(rec)));
        Ok(())
    })
}

/// Estimates for an explicit permutation such as `"A B C D / D C B A"`.
#[no_mangle]
pub unsafe extern "C" fn spectra_estimate_permutation(
    permutation: *const c_char,
    steps: u64,
    seed: u64,
    batches: u32,
    out: *mut *mut SpectraRun,
) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        let perm: Permutation = read_str(permutation)?.parse().map_err(|e| Failure::new(SpectraStatus::Parse, e))?;
        let rec = estimate_spectrum(&perm, &EstimateConfig::new(steps, seed, batches as usize)).map_err(spectra_failure)?;
        *out = Box::into_raw(Box::new(SpectraRun(rec)));
        Ok(())
    })
}

/// Pools `count` runs of the same permutation into a new handle.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_merge(
    runs: *const *const SpectraRun,
    count: usize,
    out: *mut *mut SpectraRun,
) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        if runs.is_null() {
            return Err(Failure::new(SpectraStatus::NullPointer, "null run array"));
        }
        let records = std::slice::from_raw_parts(runs, count)
            .iter()
            .map(|&r| handle(r).map(|r| r.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let merged = merge_runs(&records).map_err(spectra_failure)?;
        *out = Box::into_raw(Box::new(SpectraRun(merged)));
        Ok(())
    })
}

/// Number of exponents `g` in the run.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_genus(run: *const SpectraRun, out: *mut usize) -> SpectraStatus {
    guard(|| {
        *out_ref(out)? = handle(run)?.0.estimates.len();
        Ok(())
    })
}

/// Copies `λ_1, ..., λ_g` into `out`, which must hold `len >= g` doubles.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_estimates(run: *const SpectraRun, out: *mut f64, len: usize) -> SpectraStatus {
    guard(|| copy_out(&handle(run)?.0.estimates.values, out, len))
}

/// Copies the standard errors of `λ_1, ..., λ_g` into `out`.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_stderr(run: *const SpectraRun, out: *mut f64, len: usize) -> SpectraStatus {
    guard(|| copy_out(&handle(run)?.0.stderr, out, len))
}

/// Sum of the exponents and its standard error.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_sum(run: *const SpectraRun, sum: *mut f64, stderr: *mut f64) -> SpectraStatus {
    guard(|| {
        let r = &handle(run)?.0;
        *out_ref(sum)? = r.sum;
        *out_ref(stderr)? = r.sum_stderr;
        Ok(())
    })
}

/// Run document as JSON; release with [`spectra_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spectra_run_to_json(run: *const SpectraRun, out: *mut *mut c_char) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = into_c_string(handle(run)?.0.to_json())?;
        Ok(())
    })
}

/// Reads a run document written by [`spectra_run_to_json`] or the CLI.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_from_json(json: *const c_char, out: *mut *mut SpectraRun) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        let rec = RunRecord::from_json(read_str(json)?).map_err(|e| Failure::new(SpectraStatus::Parse, e))?;
        *out = Box::into_raw(Box::new(SpectraRun(rec)));
        Ok(())
    })
}

/// Releases a run handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn spectra_run_free(run: *mut SpectraRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Harder-Narasimhan spectrum of a catalogued component.
#[no_mangle]
pub unsafe extern "C" fn spectra_wspec(stratum: *const c_char, out: *mut *mut SpectraWSpectrum) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        let id = component(read_str(stratum)?)?;
        let w = w_catalog(&id).map_err(|e| Failure::new(SpectraStatus::UnknownComponent, e))?;
        *out = Box::into_raw(Box::new(SpectraWSpectrum(w)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn spectra_wspec_len(w: *const SpectraWSpectrum, out: *mut usize) -> SpectraStatus {
    guard(|| {
        *out_ref(out)? = handle(w)?.0.len();
        Ok(())
    })
}

/// Entry `index` (0-based) as `numerator / denominator`; `exact` is false
/// when the entry is only an upper bound.
#[no_mangle]
pub unsafe extern "C" fn spectra_wspec_entry(
    w: *const SpectraWSpectrum,
    index: usize,
    numerator: *mut i64,
    denominator: *mut i64,
    exact: *mut bool,
) -> SpectraStatus {
    guard(|| {
        let w = &handle(w)?.0;
        let e = w
            .entries
            .get(index)
            .ok_or_else(|| Failure::new(SpectraStatus::InvalidArgument, format!("index {index} out of range")))?;
        *out_ref(numerator)? = *e.value.numer();
        *out_ref(denominator)? = *e.value.denom();
        *out_ref(exact)? = e.is_exact();
        Ok(())
    })
}

/// Text form such as `"(1, 3/5, 1/5)"`; release with [`spectra_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spectra_wspec_to_string(w: *const SpectraWSpectrum, out: *mut *mut c_char) -> SpectraStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = into_c_string(handle(w)?.0.to_string())?;
        Ok(())
    })
}

/// Releases a spectrum handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn spectra_wspec_free(w: *mut SpectraWSpectrum) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// `L^- - L^+` for a quadratic stratum such as `"Q(1,2,-1,-1,-1)"`.
#[no_mangle]
pub unsafe extern "C" fn spectra_cover_deficit(
    q: *const c_char,
    numerator: *mut i64,
    denominator: *mut i64,
) -> SpectraStatus {
    guard(|| {
        let q: QStratum = read_str(q)?.parse().map_err(|e| Failure::new(SpectraStatus::Parse, e))?;
        let d = cover_deficit(&q);
        *out_ref(numerator)? = *d.numer();
        *out_ref(denominator)? = *d.denom();
        Ok(())
    })
}

/// Whether `lambda` dominates `mu` (both of length `len`) with slack `tol`.
#[no_mangle]
pub unsafe extern "C" fn spectra_dominates(
    lambda: *const f64,
    mu: *const f64,
    len: usize,
    tol: f64,
    out: *mut bool,
) -> SpectraStatus {
    guard(|| {
        if lambda.is_null() || mu.is_null() {
            return Err(Failure::new(SpectraStatus::NullPointer, "null vector"));
        }
        let (l, m) = (std::slice::from_raw_parts(lambda, len), std::slice::from_raw_parts(mu, len));
        let d = dominates(l, m, tol).map_err(|e| Failure::new(SpectraStatus::InvalidArgument, e))?;
        *out_ref(out)? = d.holds();
        Ok(())
    })
}

/// Runs the dominance check for one component over `count` seeds. `holds`
/// receives whether the verdict is positive; `json`, when not null, receives
/// the verdict document (release with [`spectra_string_free`]).
#[no_mangle]
pub unsafe extern "C" fn spectra_verify(
    stratum: *const c_char,
    steps: u64,
    seeds: *const u64,
    count: usize,
    batches: u32,
    holds: *mut bool,
    json: *mut *mut c_char,
) -> SpectraStatus {
    guard(|| {
        let id = component(read_str(stratum)?)?;
        if seeds.is_null() {
            return Err(Failure::new(SpectraStatus::NullPointer, "null seed array"));
        }
        let seeds = std::slice::from_raw_parts(seeds, count);
        let v = verify_component(&id, steps, seeds, batches as usize)
            .map_err(|e| Failure::new(SpectraStatus::InvalidArgument, e))?;
        *out_ref(holds)? = v.status.holds();
        if !json.is_null() {
            *json = into_c_string(serde_json::to_string_pretty(&v).expect("verdict serializes"))?;
        }
        Ok(())
    })
}
