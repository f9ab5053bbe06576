//! CLI front end. Every long flag can also come from a `key=value` config
//! file (--config) or a STABRKC_* environment variable; precedence is
//! flag > environment > file > default.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stabrkc::harness::config::Layers;
use stabrkc::harness::{
    cmd_bench, cmd_convergence, cmd_integrate, cmd_region, BenchArgs, ConvergenceArgs,
    IntegrateArgs, OutputFormat, RegionArgs,
};
use stabrkc::problems::ProblemSpec;

#[derive(Parser)]
#[command(name = "stabrkc", version, about = "Partitioned Runge-Kutta-Chebyshev integrators: stability scans, benchmarks, convergence studies")]
struct Cli {
    /// key=value config file mirroring the long flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample |R(p, q)| on a grid and write a p,q,absR CSV
    Region {
        /// rkc | prkc | arkc | nprkc
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        alpha3: Option<f64>,
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        p_max: Option<f64>,
        #[arg(long)]
        q_min: Option<f64>,
        #[arg(long)]
        q_max: Option<f64>,
        #[arg(long)]
        np: Option<usize>,
        #[arg(long)]
        nq: Option<usize>,
        /// output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adaptive benchmark table over tolerances and methods
    Bench {
        /// ex1 | ex2a | ex2b | ex2c | ex3a | ex3b | ex4 | ex5
        #[arg(long)]
        example: Option<String>,
        /// comma-separated tolerances, e.g. 1e-2,1e-5
        #[arg(long)]
        tol: Option<String>,
        /// comma-separated adaptive methods (nprkc1, nprkc2)
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        format: Option<OutputFormat>,
        #[arg(long)]
        seed: Option<u64>,
        /// fail instead of computing a missing reference solution
        #[arg(long)]
        no_compute_ref: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// reference step override
        #[arg(long)]
        ref_h: Option<f64>,
        /// grid override for desk-scale runs
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed-step global-error slopes against the reference solution
    Convergence {
        /// rkc | prkc | arkc | nprkc | rk3 | prkc-rk3 | midpoint | rk4m
        #[arg(long)]
        method: Option<String>,
        /// ad1d | wave2d | brusselator2d | burgers1d | burgers2d
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        /// comma-separated step sizes
        #[arg(long)]
        h_ladder: Option<String>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        ref_h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate one problem (adaptive, or fixed-step with --h)
    Integrate {
        /// nprkc1 | nprkc2 (adaptive) or any fixed-step id with --h
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        a1: Option<f64>,
        #[arg(long)]
        a2: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// fixed step size (switches to fixed-step mode)
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        h_init: Option<f64>,
        /// use the analytic rho_A bound instead of power iteration
        #[arg(long)]
        analytic_rho_a: bool,
        /// final state output path (one value per line)
        #[arg(long)]
        out: Option<PathBuf>,
        /// per-step trace CSV path
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn run() -> stabrkc::Result<()> {
    let cli = Cli::parse();
    let layers = Layers::from_file(cli.config.as_deref())?;

    match cli.command {
        Command::Region { method, s, m, eta, r, alpha3, p_min, p_max, q_min, q_max, np, nq, out } => {
            let args = RegionArgs {
                method: layers.get(method, "method", "nprkc".into())?,
                s: layers.get(s, "s", 10)?,
                m: layers.get(m, "m", 1)?,
                eta: layers.get_opt(eta, "eta")?,
                r: layers.get(r, "r", 1.0)?,
                alpha3: layers.get(alpha3, "alpha3", 0.0)?,
                p_range: match (layers.get_opt(p_min, "p-min")?, layers.get_opt(p_max, "p-max")?) {
                    (Some(lo), Some(hi)) => Some((lo, hi)),
                    _ => None,
                },
                q_range: match (layers.get_opt(q_min, "q-min")?, layers.get_opt(q_max, "q-max")?) {
                    (Some(lo), Some(hi)) => Some((lo, hi)),
                    _ => None,
                },
                np: layers.get_opt(np, "np")?,
                nq: layers.get_opt(nq, "nq")?,
            };
            match layers.get_opt(out, "out")? {
                Some(path) => {
                    let mut f = std::fs::File::create(path)?;
                    cmd_region(&args, &mut f)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    cmd_region(&args, &mut lock)?;
                }
            }
        }
        Command::Bench { example, tol, method, format, seed, no_compute_ref, cache_dir, ref_h, n, out } => {
            let methods = {
                let list: Vec<String> = layers.get_list(method, "method")?;
                if list.is_empty() {
                    vec!["nprkc1".to_string(), "nprkc2".to_string()]
                } else {
                    list
                }
            };
            let args = BenchArgs {
                example: layers.get(example, "example", "ex2a".into())?,
                tols: layers.get_list(tol, "tol")?,
                methods,
                format: layers.get(format, "format", OutputFormat::Csv)?,
                seed: layers.get(seed, "seed", 0)?,
                no_compute_ref,
                cache_dir: layers.get_opt(cache_dir, "cache-dir")?,
                ref_h: layers.get_opt(ref_h, "ref-h")?,
                n_override: layers.get_opt(n, "n")?,
            };
            let rendered = cmd_bench(&args)?;
            write_or_print(layers.get_opt(out, "out")?, &rendered)?;
        }
        Command::Convergence { method, problem, n, a, d, t_end, h_ladder, s, m, eta, ref_h, out } => {
            let mut spec = ProblemSpec::new(
                &layers.get(problem, "problem", "ad1d".into())?,
                layers.get(n, "n", 32)?,
            );
            spec.a = layers.get(a, "a", 1.0)?;
            spec.d = layers.get(d, "d", 1.0)?;
            spec.t_end = layers.get(t_end, "t-end", 0.1)?;
            let args = ConvergenceArgs {
                method: layers.get(method, "method", "nprkc".into())?,
                problem: spec,
                h_ladder: layers.get_list(h_ladder, "h-ladder")?,
                s: layers.get_opt(s, "s")?,
                m: layers.get_opt(m, "m")?,
                eta: layers.get_opt(eta, "eta")?,
                ref_h: layers.get_opt(ref_h, "ref-h")?,
            };
            let rendered = cmd_convergence(&args)?;
            write_or_print(layers.get_opt(out, "out")?, &rendered)?;
        }
        Command::Integrate { method, problem, n, a, d, b, a1, a2, t_end, tol, h, s, m, eta, h_init, analytic_rho_a, out, trace } => {
            let id = layers.get(problem, "problem", "ad1d".into())?;
            let mut spec = ProblemSpec::new(&id, layers.get(n, "n", 200)?);
            spec.a = layers.get(a, "a", 0.1)?;
            spec.d = layers.get(d, "d", 1.0)?;
            spec.b = layers.get(b, "b", 0.0)?;
            spec.a1 = layers.get(a1, "a1", 0.05)?;
            spec.a2 = layers.get(a2, "a2", 15.0)?;
            spec.t_end = layers.get(t_end, "t-end", default_t_end(&id))?;
            spec.analytic_rho_a = analytic_rho_a;
            let args = IntegrateArgs {
                problem: spec,
                method: layers.get(method, "method", "nprkc2".into())?,
                tol: layers.get(tol, "tol", 1e-4)?,
                h: layers.get_opt(h, "h")?,
                s: layers.get_opt(s, "s")?,
                m: layers.get_opt(m, "m")?,
                eta: layers.get_opt(eta, "eta")?,
                h_init: layers.get_opt(h_init, "h-init")?,
                out: layers.get_opt(out, "out")?,
                trace_out: layers.get_opt(trace, "trace")?,
            };
            let rendered = cmd_integrate(&args)?;
            print!("{rendered}");
        }
    }
    Ok(())
}

fn default_t_end(id: &str) -> f64 {
    match id {
        "wave2d" => 0.75,
        "brusselator2d" => 1.0,
        "burgers1d" | "burgers2d" => 0.5,
        _ => 0.1,
    }
}

fn write_or_print(out: Option<PathBuf>, rendered: &str) -> stabrkc::Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
