//! Benchmark orchestration: stability-region exports, adaptive benchmark
//! tables, and fixed-step convergence studies, with deterministic CSV/JSON
//! rendering (shortest round-trip float formatting; wall-clock time is the
//! one intentionally nondeterministic column, kept last).

pub mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use crate::adaptive::{integrate_adaptive, rms_norm, AdaptiveConfig, EstimatorVariant};
use crate::chebyshev::DEFAULT_ETA;
use crate::error::{Error, Result};
use crate::methods::{arkc_eta_schedule, integrate_fixed, FixedRunOptions, Method};
use crate::problems::ProblemSpec;
use crate::reference::{load_or_compute, reference_key, DEFAULT_H_REF};
use crate::stability::{default_scan_samples, scan_region, RegionEvaluator, StabilityGrid};

/// Paper parameter bindings for the benchmark examples.
pub fn example_spec(id: &str) -> Result<ProblemSpec> {
    let spec = match id {
        "ex1" => {
            let mut s = ProblemSpec::new("wave2d", 100);
            s.b = 0.0;
            s.a1 = 0.05;
            s.a2 = 15.0;
            s.t_end = 0.75;
            s
        }
        "ex2a" | "ex2b" | "ex2c" => {
            let mut s = ProblemSpec::new("ad1d", 200);
            (s.a, s.d) = match id {
                "ex2a" => (0.1, 1.0),
                "ex2b" => (5.0, 1.0),
                _ => (5.0, 0.2),
            };
            s.t_end = 0.1;
            s
        }
        "ex3a" | "ex3b" => {
            let mut s = ProblemSpec::new("brusselator2d", 200);
            s.d = 0.04;
            s.a = if id == "ex3a" { 0.02 } else { 2.0 };
            s.t_end = 1.0;
            s
        }
        "ex4" => {
            let mut s = ProblemSpec::new("burgers1d", 100);
            s.a = 10.0;
            s.d = 0.5;
            s.t_end = 0.5;
            s
        }
        "ex5" => {
            let mut s = ProblemSpec::new("burgers2d", 100);
            s.a = 4.0;
            s.d = 0.2;
            s.t_end = 0.5;
            s
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown example `{other}` (expected ex1, ex2a, ex2b, ex2c, ex3a, ex3b, ex4, ex5)"
            )))
        }
    };
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// One benchmark table cell.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BenchRecord {
    pub tol: f64,
    pub method: String,
    pub err_rms: f64,
    pub err_max: f64,
    pub n_accept: u64,
    pub n_reject: u64,
    pub nfd: u64,
    pub nfa: u64,
    pub nf_total: u64,
    pub wall_ms: f64,
}

#[derive(Debug, serde::Serialize)]
pub struct BenchOutput {
    pub schema: u32,
    pub example: String,
    pub seed: u64,
    pub records: Vec<BenchRecord>,
}

pub struct BenchArgs {
    pub example: String,
    pub tols: Vec<f64>,
    pub methods: Vec<String>,
    pub format: OutputFormat,
    pub seed: u64,
    pub no_compute_ref: bool,
    pub cache_dir: Option<PathBuf>,
    pub ref_h: Option<f64>,
    pub n_override: Option<usize>,
}

fn bench_variant(method: &str) -> Result<EstimatorVariant> {
    match method {
        "nprkc1" => Ok(EstimatorVariant::Variant1),
        "nprkc2" => Ok(EstimatorVariant::Variant2),
        other => Err(Error::InvalidParameter(format!(
            "bench method `{other}` not supported: the adaptive driver implements nprkc1 and nprkc2"
        ))),
    }
}

/// Default reference step: fine desk-scale step, shrunk further when the
/// problem's spectral radius would leave the explicit pair's stability
/// region.
pub fn default_ref_h(ode: &crate::ode::SplitOde) -> f64 {
    let rho = ode.rho_d(&ode.y0) + ode.rho_a(&ode.y0);
    DEFAULT_H_REF.min(2.8 / rho.max(1.0))
}

/// Run the (tol x method) table for one example and render it.
pub fn cmd_bench(args: &BenchArgs) -> Result<String> {
    if args.tols.is_empty() {
        return Err(Error::InvalidParameter("empty tolerance list".into()));
    }
    if args.methods.is_empty() {
        return Err(Error::InvalidParameter("empty method list".into()));
    }
    let mut spec = example_spec(&args.example)?;
    if let Some(n) = args.n_override {
        spec.n = n;
    }
    let ode = spec.build()?;
    let h_ref = args.ref_h.unwrap_or_else(|| default_ref_h(&ode));
    let params = format!("A{}_D{}_B{}_A1{}_A2{}", spec.a, spec.d, spec.b, spec.a1, spec.a2);
    let key = reference_key(&spec.id, &params, spec.n, spec.t_end, h_ref);
    let y_ref = load_or_compute(&ode, &key, h_ref, args.cache_dir.as_deref(), args.no_compute_ref)?;

    let mut records = Vec::new();
    for &tol in &args.tols {
        for method in &args.methods {
            let variant = bench_variant(method)?;
            let cfg = AdaptiveConfig::new(tol, variant);
            let start = Instant::now();
            let result = integrate_adaptive(&ode, &cfg)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            audit_counters(&result, variant)?;
            let diff: Vec<f64> = result.y.iter().zip(&y_ref).map(|(a, b)| a - b).collect();
            records.push(BenchRecord {
                tol,
                method: method.clone(),
                err_rms: rms_norm(&diff),
                err_max: crate::adaptive::max_norm(&diff),
                n_accept: result.stats.n_accept,
                n_reject: result.stats.n_reject,
                nfd: result.stats.nfd,
                nfa: result.stats.nfa,
                nf_total: result.stats.nfd + result.stats.nfa,
                wall_ms,
            });
        }
    }

    match args.format {
        OutputFormat::Csv => {
            let mut out = String::from(
                "tol,method,err_rms,err_max,n_accept,n_reject,nfd,nfa,nf_total,wall_ms\n",
            );
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.tol,
                    r.method,
                    r.err_rms,
                    r.err_max,
                    r.n_accept,
                    r.n_reject,
                    r.nfd,
                    r.nfa,
                    r.nf_total,
                    r.wall_ms
                ));
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let out = BenchOutput {
                schema: 1,
                example: args.example.clone(),
                seed: args.seed,
                records,
            };
            Ok(serde_json::to_string_pretty(&out).expect("bench output serializes") + "\n")
        }
    }
}

/// Exact per-step accounting: nfd = sum over attempts of (s + 1 for the
/// variant-1 estimator surcharge), nfa = sum of 4m.
fn audit_counters(result: &crate::adaptive::AdaptiveResult, variant: EstimatorVariant) -> Result<()> {
    let surcharge = matches!(variant, EstimatorVariant::Variant1) as u64;
    let nfd: u64 = result.trace.iter().map(|r| r.s as u64 + surcharge).sum();
    let nfa: u64 = result.trace.iter().map(|r| 4 * r.m as u64).sum();
    if nfd != result.stats.nfd || nfa != result.stats.nfa {
        return Err(Error::InvalidParameter(format!(
            "counter audit failed: recorded ({}, {}) vs trace formula ({}, {})",
            result.stats.nfd, result.stats.nfa, nfd, nfa
        )));
    }
    Ok(())
}

pub struct RegionArgs {
    pub method: String,
    pub s: usize,
    pub m: usize,
    pub eta: Option<f64>,
    pub r: f64,
    pub alpha3: f64,
    pub p_range: Option<(f64, f64)>,
    pub q_range: Option<(f64, f64)>,
    pub np: Option<usize>,
    pub nq: Option<usize>,
}

/// Scan a stability region and write the `p,q,absR` grid.
pub fn cmd_region(args: &RegionArgs, out: &mut dyn std::io::Write) -> Result<StabilityGrid> {
    let eta = args.eta.unwrap_or_else(|| match args.method.as_str() {
        "arkc" => arkc_eta_schedule(args.s),
        _ => DEFAULT_ETA,
    });
    let evaluator = match args.method.as_str() {
        "rkc" => RegionEvaluator::Rkc { s: args.s, eta },
        "prkc" => RegionEvaluator::Prkc { s: args.s, eta, r: args.r, alpha3: args.alpha3 },
        "arkc" => RegionEvaluator::Arkc { s: args.s, eta },
        "nprkc" => RegionEvaluator::Nprkc { s: args.s, m: args.m, eta },
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown region method `{other}` (expected rkc, prkc, arkc, nprkc)"
            )))
        }
    };
    let span = 0.65 * (args.s * args.s) as f64;
    let p_range = args.p_range.unwrap_or((-1.1 * span, 0.05 * span));
    let q_half = (2.15 * args.m as f64 + 2.0).max(4.0);
    let q_range = args.q_range.unwrap_or((-q_half, q_half));
    let np = args.np.unwrap_or_else(|| default_scan_samples(p_range.1 - p_range.0));
    let nq = args.nq.unwrap_or_else(|| default_scan_samples(q_range.1 - q_range.0));
    let grid = scan_region(&evaluator, p_range, q_range, np, nq)?;
    grid.write_csv(&mut *out)?;
    Ok(grid)
}

pub struct ConvergenceArgs {
    pub method: String,
    pub problem: ProblemSpec,
    pub h_ladder: Vec<f64>,
    pub s: Option<usize>,
    pub m: Option<usize>,
    pub eta: Option<f64>,
    pub ref_h: Option<f64>,
}

#[derive(Debug, serde::Serialize)]
struct ConvergencePoint {
    h: f64,
    err: Option<f64>,
    failed: bool,
}

#[derive(Debug, serde::Serialize)]
struct ConvergenceOutput {
    schema: u32,
    method: String,
    problem: ProblemSpec,
    points: Vec<ConvergencePoint>,
    slope: f64,
}

fn fixed_method(id: &str, h: f64, ode: &crate::ode::SplitOde, s: Option<usize>, m: Option<usize>) -> Result<Method> {
    let rho_d = ode.rho_d(&ode.y0);
    let rho_a = ode.rho_a(&ode.y0);
    let auto = crate::adaptive::select_s_m(h, rho_d, rho_a);
    let auto_combined = crate::adaptive::select_s_m(h, rho_d + rho_a, 0.0).0;
    Ok(match id {
        "rkc" => Method::Rkc { s: s.unwrap_or(auto_combined) },
        "prkc" => Method::Prkc { s: s.unwrap_or(auto.0) },
        "arkc" => Method::Arkc { s: s.unwrap_or(auto.0) },
        "nprkc" => Method::Nprkc { s: s.unwrap_or(auto.0), m: m.unwrap_or(auto.1) },
        // the third-order 4-stage method (m = 1 limit of the 4m family)
        "rk3" => Method::Rk4m { m: 1 },
        "prkc-rk3" => Method::PrkcRk3,
        "midpoint" => Method::Midpoint,
        "rk4m" => Method::Rk4m { m: m.unwrap_or(1) },
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown fixed-step method `{other}` (expected rkc, prkc, arkc, nprkc, rk3, prkc-rk3, midpoint, rk4m)"
            )))
        }
    })
}

/// Fixed-step global-error study against the reference solution; reports
/// per-h errors and the fitted log-log slope. Unstable runs are reported
/// and excluded from the fit.
pub fn cmd_convergence(args: &ConvergenceArgs) -> Result<String> {
    if args.h_ladder.len() < 2 {
        return Err(Error::InvalidParameter(
            "h ladder needs at least two entries to fit a slope".into(),
        ));
    }
    let ode = args.problem.build()?;
    let h_ref = args.ref_h.unwrap_or_else(|| default_ref_h(&ode));
    let y_ref = crate::reference::reference_solve(&ode, h_ref)?;

    let opts = FixedRunOptions { eta: args.eta, ..FixedRunOptions::default() };
    let mut points = Vec::new();
    let mut fit: Vec<(f64, f64)> = Vec::new();
    for &h in &args.h_ladder {
        let method = fixed_method(&args.method, h, &ode, args.s, args.m)?;
        match integrate_fixed(&ode, &method, h, &opts) {
            Ok((y, _)) => {
                let diff: Vec<f64> = y.iter().zip(&y_ref).map(|(a, b)| a - b).collect();
                let err = rms_norm(&diff);
                if err > 0.0 && err.is_finite() {
                    fit.push((h.ln(), err.ln()));
                }
                points.push(ConvergencePoint { h, err: Some(err), failed: false });
            }
            Err(Error::NonFiniteState { .. }) => {
                points.push(ConvergencePoint { h, err: None, failed: true });
            }
            Err(e) => return Err(e),
        }
    }
    if fit.len() < 2 {
        return Err(Error::InvalidParameter(
            "fewer than two stable runs; cannot fit a slope".into(),
        ));
    }
    let n = fit.len() as f64;
    let sx: f64 = fit.iter().map(|(x, _)| x).sum();
    let sy: f64 = fit.iter().map(|(_, y)| y).sum();
    let sxx: f64 = fit.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = fit.iter().map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    let out = ConvergenceOutput {
        schema: 1,
        method: args.method.clone(),
        problem: args.problem.clone(),
        points,
        slope,
    };
    Ok(serde_json::to_string_pretty(&out).expect("convergence output serializes") + "\n")
}

pub struct IntegrateArgs {
    pub problem: ProblemSpec,
    pub method: String,
    pub tol: f64,
    pub h: Option<f64>,
    pub s: Option<usize>,
    pub m: Option<usize>,
    pub eta: Option<f64>,
    pub h_init: Option<f64>,
    pub out: Option<PathBuf>,
    pub trace_out: Option<PathBuf>,
}

#[derive(Debug, serde::Serialize)]
struct IntegrateOutput {
    schema: u32,
    method: String,
    dim: usize,
    t_end: f64,
    n_accept: u64,
    n_reject: u64,
    nfd: u64,
    nfa: u64,
    y_rms: f64,
    y_max: f64,
}

/// Integrate one problem (adaptive with nprkc1/nprkc2, or fixed-step with
/// --h and any method id) and write the final state / step trace.
pub fn cmd_integrate(args: &IntegrateArgs) -> Result<String> {
    let ode = args.problem.build()?;
    let (y, stats, trace) = if let Some(h) = args.h {
        let method = fixed_method(&args.method, h, &ode, args.s, args.m)?;
        let opts = FixedRunOptions { eta: args.eta, ..FixedRunOptions::default() };
        let (y, stats) = integrate_fixed(&ode, &method, h, &opts)?;
        (y, stats, Vec::new())
    } else {
        let variant = bench_variant(&args.method)?;
        let mut cfg = AdaptiveConfig::new(args.tol, variant);
        cfg.h_init = args.h_init;
        if let Some(eta) = args.eta {
            cfg.eta = eta;
        }
        let result = integrate_adaptive(&ode, &cfg)?;
        audit_counters(&result, variant)?;
        (result.y, result.stats, result.trace)
    };

    if let Some(path) = &args.out {
        let mut text = String::new();
        for v in &y {
            text.push_str(&format!("{v}\n"));
        }
        std::fs::write(path, text)?;
    }
    if let Some(path) = &args.trace_out {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "t,h,s,m,err,accepted")?;
        for r in &trace {
            writeln!(f, "{},{},{},{},{},{}", r.t, r.h, r.s, r.m, r.err, r.accepted)?;
        }
    }

    let out = IntegrateOutput {
        schema: 1,
        method: args.method.clone(),
        dim: ode.dim,
        t_end: ode.t_end,
        n_accept: stats.n_accept,
        n_reject: stats.n_reject,
        nfd: stats.nfd,
        nfa: stats.nfa,
        y_rms: rms_norm(&y),
        y_max: crate::adaptive::max_norm(&y),
    };
    Ok(serde_json::to_string_pretty(&out).expect("integrate output serializes") + "\n")
}
