//! Exercises the C ABI surface the way a foreign binding would: opaque
//! handles, status codes, caller-owned buffers, and the generated header.

use std::ffi::CStr;
use std::ptr;

use stabrkc_ffi::*;

#[test]
fn version_is_readable() {
    let v = unsafe { CStr::from_ptr(stabrkc_version()) }.to_str().unwrap();
    assert!(v.split('.').count() >= 2);
}

#[test]
fn problem_lifecycle_and_dim() {
    let mut p: *mut StabrkcProblem = ptr::null_mut();
    let st = stabrkc_problem_ad1d(64, 0.1, 1.0, &mut p);
    assert_eq!(st, StabrkcStatus::Ok);
    assert_eq!(stabrkc_problem_dim(p), 64);

    let mut y0 = vec![0.0f64; 64];
    assert_eq!(stabrkc_problem_initial_state(p, y0.as_mut_ptr()), StabrkcStatus::Ok);
    assert!(y0.iter().any(|x| x.abs() > 0.5)); // sin profile

    stabrkc_problem_free(p);
    stabrkc_problem_free(ptr::null_mut()); // must be a no-op
}

#[test]
fn invalid_grid_is_rejected() {
    let mut p: *mut StabrkcProblem = ptr::null_mut();
    assert_eq!(stabrkc_problem_ad1d(2, 0.1, 1.0, &mut p), StabrkcStatus::InvalidArgument);
    assert!(p.is_null());
}

#[test]
fn null_pointers_are_reported() {
    assert_eq!(stabrkc_problem_ad1d(16, 0.1, 1.0, ptr::null_mut()), StabrkcStatus::NullPointer);
    assert_eq!(stabrkc_problem_dim(ptr::null()), 0);
    let mut out = 0.0f64;
    assert_eq!(stabrkc_real_axis_extent(5, 2.0 / 13.0, ptr::null_mut()), StabrkcStatus::NullPointer);
    assert_eq!(stabrkc_real_axis_extent(5, 2.0 / 13.0, &mut out), StabrkcStatus::Ok);
    assert!(out > 16.25);
}

#[test]
fn adaptive_run_matches_native_api() {
    let mut p: *mut StabrkcProblem = ptr::null_mut();
    assert_eq!(stabrkc_problem_ad1d(64, 0.1, 1.0, &mut p), StabrkcStatus::Ok);
    assert_eq!(stabrkc_problem_set_t_end(p, 0.05), StabrkcStatus::Ok);

    let mut y = vec![0.0f64; 64];
    let mut stats = StabrkcStats::default();
    let st = stabrkc_integrate_adaptive(p, 1e-4, 2, y.as_mut_ptr(), &mut stats);
    assert_eq!(st, StabrkcStatus::Ok);
    assert!(stats.n_accept > 0);
    assert!(y.iter().all(|x| x.is_finite()));
    stabrkc_problem_free(p);

    // same run through the native API must agree bit for bit
    let mut ode = stabrkc::problems::advection_diffusion_1d(64, 0.1, 1.0).unwrap();
    ode.t_end = 0.05;
    let cfg = stabrkc::adaptive::AdaptiveConfig::new(1e-4, stabrkc::adaptive::EstimatorVariant::Variant2);
    let native = stabrkc::adaptive::integrate_adaptive(&ode, &cfg).unwrap();
    assert_eq!(native.y, y);
    assert_eq!(native.stats.n_accept, stats.n_accept);
    assert_eq!(native.stats.nfd, stats.nfd);
    assert_eq!(native.stats.nfa, stats.nfa);
}

#[test]
fn bad_variant_is_invalid_argument() {
    let mut p: *mut StabrkcProblem = ptr::null_mut();
    assert_eq!(stabrkc_problem_ad1d(16, 0.1, 1.0, &mut p), StabrkcStatus::Ok);
    let mut y = vec![0.0f64; 16];
    assert_eq!(
        stabrkc_integrate_adaptive(p, 1e-4, 3, y.as_mut_ptr(), ptr::null_mut()),
        StabrkcStatus::InvalidArgument
    );
    stabrkc_problem_free(p);
}

#[test]
fn fixed_step_instability_surfaces_as_nonfinite() {
    // the wave benchmark with m = 1 at h = 1/30 sits far outside the
    // imaginary-axis coverage; a long enough horizon drives the unstable
    // modes into overflow and the step aborts
    let mut p: *mut StabrkcProblem = ptr::null_mut();
    assert_eq!(stabrkc_problem_wave2d(24, 0.0, 0.05, 15.0, &mut p), StabrkcStatus::Ok);
    assert_eq!(stabrkc_problem_set_t_end(p, 10.0), StabrkcStatus::Ok);
    let dim = stabrkc_problem_dim(p);
    let mut y = vec![0.0f64; dim];
    let st = stabrkc_integrate_fixed_nprkc(p, 1.0 / 30.0, 22, 1, y.as_mut_ptr(), ptr::null_mut());
    assert_eq!(st, StabrkcStatus::NonFinite);

    // with m sized for the advection radius the same step works
    let st = stabrkc_integrate_fixed_nprkc(p, 1.0 / 30.0, 22, 4, y.as_mut_ptr(), ptr::null_mut());
    assert_eq!(st, StabrkcStatus::Ok);
    assert!(y.iter().all(|x| x.is_finite()));
    stabrkc_problem_free(p);
}

#[test]
fn certified_rectangle_through_abi() {
    let mut max = 0.0f64;
    assert_eq!(stabrkc_certify_rectangle(15, 2, 0.0, &mut max), StabrkcStatus::Ok);
    assert!(max <= 1.0 + 1e-12, "max = {max}");

    let mut re = 0.0f64;
    let mut im = 0.0f64;
    assert_eq!(stabrkc_eval_r_nprkc(0.0, 0.0, 15, 2, 2.0 / 13.0, &mut re, &mut im), StabrkcStatus::Ok);
    assert_eq!((re, im), (1.0, 0.0));
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/stabrkc.h");
    let text = std::fs::read_to_string(&header).expect("cbindgen header generated at build time");
    for symbol in [
        "stabrkc_version",
        "stabrkc_problem_ad1d",
        "stabrkc_problem_wave2d",
        "stabrkc_problem_free",
        "stabrkc_integrate_adaptive",
        "stabrkc_integrate_fixed_nprkc",
        "stabrkc_certify_rectangle",
        "stabrkc_real_axis_extent",
        "typedef struct StabrkcProblem StabrkcProblem",
    ] {
        assert!(text.contains(symbol), "header missing `{symbol}`");
    }
}
