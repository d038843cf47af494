//! C interface to `hstrn`.
//!
//! Every function returns an [`HstrnStatus`]; on failure a description is
//! available from [`hstrn_last_error_message`] on the same thread. Outputs
//! go through caller-provided pointers and are only written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hstrn::channels::{loo_to_sr, shadowing_preset, AlphaMuParams, LooParams, SrParams};
use hstrn::mc::{simulate, SimMode, SimPlan};
use hstrn::metrics::{esmc, pnsmc, sopm, MetricControl, MetricResult, Path, SecrecyConfig};
use hstrn::orderstats::{LinkPair, Topology};
use hstrn::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HstrnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Domain = 3,
    Truncation = 4,
    Resource = 5,
    NonConvergence = 6,
    Unsupported = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HstrnMethod {
    ClosedForm = 0,
    Quadrature = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HstrnSimMode {
    PaperIndependent = 0,
    SharedUplink = 1,
}

/// Shadowed-Rician first hop, linear units.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HstrnSrParams {
    pub p_s: f64,
    pub m_s: f64,
    pub xi_s: f64,
    pub rho_s: f64,
}

/// α-μ second hop, linear SNR.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HstrnHopParams {
    pub alpha: f64,
    pub mu: f64,
    pub rho: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HstrnConfigParams {
    pub sr: HstrnSrParams,
    pub user: HstrnHopParams,
    pub eve: HstrnHopParams,
    pub n: u32,
    pub p: u32,
    pub q: u32,
    /// Target secrecy rate, bits/s/Hz.
    pub phi_c: f64,
    /// Starting series truncation; 0 keeps the default of 20.
    pub terms: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HstrnMetric {
    pub value: f64,
    pub raw_value: f64,
    pub terms_used: u64,
    pub tail_estimate: f64,
    pub fallbacks: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HstrnSimResult {
    pub sopm: f64,
    pub esmc: f64,
    pub pnsmc: f64,
    pub se_sopm: f64,
    pub se_esmc: f64,
    pub se_pnsmc: f64,
    pub n_trials: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HstrnShadowing {
    pub p_s: f64,
    pub m_s: f64,
    pub xi_s: f64,
}

/// Opaque validated configuration.
pub struct HstrnConfig {
    cfg: SecrecyConfig,
    control: MetricControl,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HstrnStatus {
    match e {
        Error::Domain(_) | Error::NoRoot(_) | Error::OutOfBounds { .. } => HstrnStatus::Domain,
        Error::InvalidParameter(_) => HstrnStatus::InvalidParam,
        Error::Truncation { .. } => HstrnStatus::Truncation,
        Error::Resource { .. } => HstrnStatus::Resource,
        Error::NonConvergence(_) | Error::PoleCollision(_) => HstrnStatus::NonConvergence,
        Error::Unsupported(_) => HstrnStatus::Unsupported,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), HstrnStatus>>(f: F) -> HstrnStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HstrnStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            HstrnStatus::Panic
        }
    }
}

fn lib<T>(r: hstrn::Result<T>) -> Result<T, HstrnStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), HstrnStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        Err(HstrnStatus::NullPointer)
    } else {
        Ok(())
    }
}

fn build_config(p: &HstrnConfigParams) -> hstrn::Result<HstrnConfig> {
    let sr = SrParams::new(p.sr.p_s, p.sr.m_s, p.sr.xi_s, p.sr.rho_s)?;
    let cfg = SecrecyConfig {
        user_link: LinkPair::user(sr, AlphaMuParams::new(p.user.alpha, p.user.mu, p.user.rho)?),
        eve_link: LinkPair::eavesdropper(sr, AlphaMuParams::new(p.eve.alpha, p.eve.mu, p.eve.rho)?),
        topo: Topology::new(p.n, p.p, p.q)?,
        phi_c: p.phi_c,
    };
    cfg.validate()?;
    let mut control = MetricControl::default();
    if p.terms > 0 {
        control.series = control.series.with_terms(p.terms as usize);
    }
    Ok(HstrnConfig { cfg, control })
}

/// Validates `params` and stores a new handle in `*out`. Release it with
/// [`hstrn_config_free`].
///
/// # Safety
/// `params` must point to a valid `HstrnConfigParams`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_config_new(params: *const HstrnConfigParams, out: *mut *mut HstrnConfig) -> HstrnStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(out, "out")?;
        // SAFETY: both checked non-null; validity is the caller's contract
        let cfg = lib(build_config(unsafe { &*params }))?;
        unsafe { *out = Box::into_raw(Box::new(cfg)) };
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from [`hstrn_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hstrn_config_free(cfg: *mut HstrnConfig) {
    if !cfg.is_null() {
        // SAFETY: caller passes a pointer obtained from Box::into_raw
        drop(unsafe { Box::from_raw(cfg) });
    }
}

fn path_of(m: HstrnMethod) -> Path {
    match m {
        HstrnMethod::ClosedForm => Path::ClosedForm,
        HstrnMethod::Quadrature => Path::Quadrature,
    }
}

fn write_metric(r: MetricResult, out: *mut HstrnMetric) {
    let m = HstrnMetric {
        value: r.value,
        raw_value: r.raw_value,
        terms_used: r.terms_used as u64,
        tail_estimate: r.tail_estimate,
        fallbacks: r.fallbacks as u64,
    };
    // SAFETY: checked non-null by the caller of this helper
    unsafe { *out = m };
}

type MetricFn = fn(&SecrecyConfig, &MetricControl, Path) -> hstrn::Result<MetricResult>;

unsafe fn metric_call(f: MetricFn, cfg: *const HstrnConfig, method: HstrnMethod, out: *mut HstrnMetric) -> HstrnStatus {
    guard(|| {
        non_null(cfg, "cfg")?;
        non_null(out, "out")?;
        // SAFETY: non-null handle from hstrn_config_new
        let h = unsafe { &*cfg };
        write_metric(lib(f(&h.cfg, &h.control, path_of(method)))?, out);
        Ok(())
    })
}

/// Secrecy outage probability.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_sopm(cfg: *const HstrnConfig, method: HstrnMethod, out: *mut HstrnMetric) -> HstrnStatus {
    unsafe { metric_call(sopm, cfg, method, out) }
}

/// Ergodic secrecy multicast capacity, bits/s/Hz, unclamped.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_esmc(cfg: *const HstrnConfig, method: HstrnMethod, out: *mut HstrnMetric) -> HstrnStatus {
    unsafe { metric_call(esmc, cfg, method, out) }
}

/// Probability of non-zero secrecy multicast capacity.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_pnsmc(cfg: *const HstrnConfig, method: HstrnMethod, out: *mut HstrnMetric) -> HstrnStatus {
    unsafe { metric_call(pnsmc, cfg, method, out) }
}

/// Monte-Carlo estimate of all three metrics.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_simulate(
    cfg: *const HstrnConfig,
    n_trials: u64,
    seed: u64,
    mode: HstrnSimMode,
    workers: u32,
    out: *mut HstrnSimResult,
) -> HstrnStatus {
    guard(|| {
        non_null(cfg, "cfg")?;
        non_null(out, "out")?;
        // SAFETY: non-null handle from hstrn_config_new
        let h = unsafe { &*cfg };
        let mode = match mode {
            HstrnSimMode::PaperIndependent => SimMode::PaperIndependent,
            HstrnSimMode::SharedUplink => SimMode::SharedUplink,
        };
        let e = lib(simulate(&SimPlan { cfg: h.cfg, n_trials, seed, mode, workers: workers as usize }))?;
        let r = HstrnSimResult {
            sopm: e.sopm,
            esmc: e.esmc,
            pnsmc: e.pnsmc,
            se_sopm: e.se_sopm,
            se_esmc: e.se_esmc,
            se_pnsmc: e.se_pnsmc,
            n_trials: e.n_trials,
        };
        unsafe { *out = r };
        Ok(())
    })
}

/// Loo `(μ, d0)` to Shadowed-Rician; `P_s` is copied through.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_loo_to_sr(mu_loo: f64, d0: f64, p_s: f64, out: *mut HstrnShadowing) -> HstrnStatus {
    guard(|| {
        non_null(out, "out")?;
        let s = lib(loo_to_sr(LooParams { mu_loo, d0 }, p_s))?;
        unsafe { *out = HstrnShadowing { p_s: s.p_s, m_s: s.m_s, xi_s: s.xi_s } };
        Ok(())
    })
}

/// Shadowing case 1..=4.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hstrn_shadowing_preset(case_index: u32, out: *mut HstrnShadowing) -> HstrnStatus {
    guard(|| {
        non_null(out, "out")?;
        let case = u8::try_from(case_index).unwrap_or(0);
        let s = lib(shadowing_preset(case))?;
        unsafe { *out = HstrnShadowing { p_s: s.p_s, m_s: s.m_s, xi_s: s.xi_s } };
        Ok(())
    })
}

/// Message for the last failing call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hstrn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn hstrn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
