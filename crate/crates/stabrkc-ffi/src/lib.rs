//! C ABI for the stabrkc integrators.
//!
//! Problems are opaque handles created by the `stabrkc_problem_*`
//! constructors and released with `stabrkc_problem_free`. All fallible
//! calls return a `StabrkcStatus`; outputs are written through caller
//! buffers sized by `stabrkc_problem_dim`.

use std::ffi::c_char;
use std::ptr;

use stabrkc::adaptive::{integrate_adaptive, AdaptiveConfig, EstimatorVariant};
use stabrkc::chebyshev::DEFAULT_ETA;
use stabrkc::methods::{integrate_fixed, FixedRunOptions, Method};
use stabrkc::problems;
use stabrkc::stability;
use stabrkc::{Error, SplitOde};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabrkcStatus {
    Ok = 0,
    /// A parameter was rejected (stage count, grid size, tolerance, ...).
    InvalidArgument = 1,
    /// A stage or state became non-finite (instability at this step size).
    NonFinite = 2,
    /// The adaptive controller gave up (step underflow or repeated failures).
    StepFailure = 3,
    Io = 4,
    NullPointer = 5,
}

fn status_of(err: &Error) -> StabrkcStatus {
    match err {
        Error::InvalidStageCount { .. }
        | Error::InvalidParameter(_)
        | Error::MissingReference(_) => StabrkcStatus::InvalidArgument,
        Error::NonFiniteState { .. } => StabrkcStatus::NonFinite,
        Error::StepSizeUnderflow { .. } | Error::TooManyFailures { .. } => StabrkcStatus::StepFailure,
        Error::Io(_) => StabrkcStatus::Io,
    }
}

/// Opaque problem handle wrapping a split right-hand side.
pub struct StabrkcProblem {
    inner: SplitOde,
}

/// Run counters (accepted/rejected steps, f_D and f_A evaluations).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct StabrkcStats {
    pub n_accept: u64,
    pub n_reject: u64,
    pub nfd: u64,
    pub nfa: u64,
}

/// Library version as a NUL-terminated static string.
#[no_mangle]
pub extern "C" fn stabrkc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn boxed(ode: SplitOde, out: *mut *mut StabrkcProblem) -> StabrkcStatus {
    if out.is_null() {
        return StabrkcStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(StabrkcProblem { inner: ode })) };
    StabrkcStatus::Ok
}

fn build_problem(
    out: *mut *mut StabrkcProblem,
    build: impl FnOnce() -> stabrkc::Result<SplitOde>,
) -> StabrkcStatus {
    match build() {
        Ok(ode) => boxed(ode, out),
        Err(e) => status_of(&e),
    }
}

/// 1-D periodic advection-diffusion problem (w_t + A w_x = D w_xx).
#[no_mangle]
pub extern "C" fn stabrkc_problem_ad1d(
    n: usize,
    a: f64,
    d: f64,
    out: *mut *mut StabrkcProblem,
) -> StabrkcStatus {
    build_problem(out, || problems::advection_diffusion_1d(n, a, d))
}

/// 2-D damped wave benchmark (Gaussian diffusion bump and boundary
/// sources, zero-flux boundary).
#[no_mangle]
pub extern "C" fn stabrkc_problem_wave2d(
    n: usize,
    b: f64,
    a1: f64,
    a2: f64,
    out: *mut *mut StabrkcProblem,
) -> StabrkcStatus {
    build_problem(out, || problems::example1_wave(n, b, a1, a2))
}

/// 2-D periodic reaction-advection-diffusion (Brusselator) problem.
#[no_mangle]
pub extern "C" fn stabrkc_problem_brusselator2d(
    n: usize,
    a: f64,
    d: f64,
    analytic_rho_a: bool,
    out: *mut *mut StabrkcProblem,
) -> StabrkcStatus {
    build_problem(out, || problems::brusselator_2d(n, a, d, analytic_rho_a))
}

/// 1-D periodic viscous Burgers problem.
#[no_mangle]
pub extern "C" fn stabrkc_problem_burgers1d(
    n: usize,
    a: f64,
    d: f64,
    analytic_rho_a: bool,
    out: *mut *mut StabrkcProblem,
) -> StabrkcStatus {
    build_problem(out, || problems::burgers_1d(n, a, d, analytic_rho_a))
}

/// 2-D periodic coupled Burgers problem.
#[no_mangle]
pub extern "C" fn stabrkc_problem_burgers2d(
    n: usize,
    a: f64,
    d: f64,
    analytic_rho_a: bool,
    out: *mut *mut StabrkcProblem,
) -> StabrkcStatus {
    build_problem(out, || problems::burgers_2d(n, a, d, analytic_rho_a))
}

/// Override the integration horizon (constructors install the benchmark
/// defaults).
#[no_mangle]
pub extern "C" fn stabrkc_problem_set_t_end(
    problem: *mut StabrkcProblem,
    t_end: f64,
) -> StabrkcStatus {
    if problem.is_null() {
        return StabrkcStatus::NullPointer;
    }
    if !(t_end.is_finite()) {
        return StabrkcStatus::InvalidArgument;
    }
    unsafe { (*problem).inner.t_end = t_end };
    StabrkcStatus::Ok
}

/// State dimension of a problem (0 for a null handle).
#[no_mangle]
pub extern "C" fn stabrkc_problem_dim(problem: *const StabrkcProblem) -> usize {
    if problem.is_null() {
        return 0;
    }
    unsafe { (*problem).inner.dim }
}

/// Copy the initial state into `out_y` (length = dim).
#[no_mangle]
pub extern "C" fn stabrkc_problem_initial_state(
    problem: *const StabrkcProblem,
    out_y: *mut f64,
) -> StabrkcStatus {
    if problem.is_null() || out_y.is_null() {
        return StabrkcStatus::NullPointer;
    }
    let ode = unsafe { &(*problem).inner };
    unsafe { ptr::copy_nonoverlapping(ode.y0.as_ptr(), out_y, ode.dim) };
    StabrkcStatus::Ok
}

#[no_mangle]
pub extern "C" fn stabrkc_problem_free(problem: *mut StabrkcProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

fn write_run(
    y: Vec<f64>,
    stats: stabrkc::StepStats,
    out_y: *mut f64,
    out_stats: *mut StabrkcStats,
) -> StabrkcStatus {
    unsafe {
        ptr::copy_nonoverlapping(y.as_ptr(), out_y, y.len());
        if !out_stats.is_null() {
            *out_stats = StabrkcStats {
                n_accept: stats.n_accept,
                n_reject: stats.n_reject,
                nfd: stats.nfd,
                nfa: stats.nfa,
            };
        }
    }
    StabrkcStatus::Ok
}

/// Adaptive integration to the problem's t_end. `variant` selects the
/// error estimator (1 or 2); `out_y` must hold dim values.
#[no_mangle]
pub extern "C" fn stabrkc_integrate_adaptive(
    problem: *const StabrkcProblem,
    tol: f64,
    variant: u32,
    out_y: *mut f64,
    out_stats: *mut StabrkcStats,
) -> StabrkcStatus {
    if problem.is_null() || out_y.is_null() {
        return StabrkcStatus::NullPointer;
    }
    let est = match variant {
        1 => EstimatorVariant::Variant1,
        2 => EstimatorVariant::Variant2,
        _ => return StabrkcStatus::InvalidArgument,
    };
    let ode = unsafe { &(*problem).inner };
    match integrate_adaptive(ode, &AdaptiveConfig::new(tol, est)) {
        Ok(result) => write_run(result.y, result.stats, out_y, out_stats),
        Err(e) => status_of(&e),
    }
}

/// Fixed-step partitioned integration with explicit stage counts.
#[no_mangle]
pub extern "C" fn stabrkc_integrate_fixed_nprkc(
    problem: *const StabrkcProblem,
    h: f64,
    s: usize,
    m: usize,
    out_y: *mut f64,
    out_stats: *mut StabrkcStats,
) -> StabrkcStatus {
    if problem.is_null() || out_y.is_null() {
        return StabrkcStatus::NullPointer;
    }
    let ode = unsafe { &(*problem).inner };
    match integrate_fixed(ode, &Method::Nprkc { s, m }, h, &FixedRunOptions::default()) {
        Ok((y, stats)) => write_run(y, stats, out_y, out_stats),
        Err(e) => status_of(&e),
    }
}

/// Maximum of |R| over the certified rectangle
/// [-0.65 s^2, 0] x [-2.15 m, 2.15 m]; pass eta <= 0 for the default 2/13.
#[no_mangle]
pub extern "C" fn stabrkc_certify_rectangle(
    s: usize,
    m: usize,
    eta: f64,
    out_max: *mut f64,
) -> StabrkcStatus {
    if out_max.is_null() {
        return StabrkcStatus::NullPointer;
    }
    let eta = if eta > 0.0 { eta } else { DEFAULT_ETA };
    match stability::certify_rectangle(s, m, eta, 2, 2) {
        Ok(v) => {
            unsafe { *out_max = v };
            StabrkcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Largest beta with |R_s| <= 1 on [-beta, 0].
#[no_mangle]
pub extern "C" fn stabrkc_real_axis_extent(s: usize, eta: f64, out_beta: *mut f64) -> StabrkcStatus {
    if out_beta.is_null() {
        return StabrkcStatus::NullPointer;
    }
    match stability::real_axis_extent(s, eta) {
        Ok(v) => {
            unsafe { *out_beta = v };
            StabrkcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Evaluate the partitioned stability function R(p, q) for stage counts
/// (s, m); the real and imaginary parts are written separately.
#[no_mangle]
pub extern "C" fn stabrkc_eval_r_nprkc(
    p: f64,
    q: f64,
    s: usize,
    m: usize,
    eta: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> StabrkcStatus {
    if out_re.is_null() || out_im.is_null() {
        return StabrkcStatus::NullPointer;
    }
    match stability::eval_r_ddot(p, q, s, m, eta) {
        Ok(z) => {
            unsafe {
                *out_re = z.re;
                *out_im = z.im;
            }
            StabrkcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
