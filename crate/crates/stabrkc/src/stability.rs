//! Stability functions of the RKC-family methods, region scanning, and
//! numerical certification of the rectangle-coverage theorem.
//!
//! Every evaluator computes R as `1 + b (T(x) - T(omega0))`, which is the
//! same expression as `a + b T(x)` but returns exactly 1.0 at the origin
//! and keeps the q-factorization of the partitioned function exact.

use std::io::Write;

use num_complex::Complex64;

use crate::chebyshev::{cheb_t_complex, cheb_u_complex, rkc_coeffs, ChebCoeffs};
use crate::error::{Error, Result};

/// Tolerance above 1.0 absorbed by the certification checks; the bound is
/// an analytic equality at parts of the boundary, so roundoff must not
/// flip the verdict.
pub const CERTIFY_TOL: f64 = 1e-12;

fn r_stage(coeffs: &ChebCoeffs, j: usize, z: Complex64) -> Complex64 {
    let x = Complex64::new(coeffs.omega0, 0.0) + coeffs.omega1 * z;
    1.0 + coeffs.b[j] * (cheb_t_complex(j, x) - coeffs.t_w0[j])
}

/// Stability function R_s of the s-stage RKC method at a complex point.
pub fn eval_r_s(z: Complex64, s: usize, eta: f64) -> Result<Complex64> {
    let coeffs = rkc_coeffs(s, eta)?;
    Ok(r_stage(&coeffs, s, z))
}

/// Stability function of the PRKC method on the split test equation
/// y' = (p/h) y + i (q/h) y. `alphas` must be consistent with c_{s-1} of
/// this (s, eta) family.
///
/// R_{s-1} here is the stage amplification within the s-stage family
/// (same omega0, omega1), not the (s-1)-stage method's own function; the
/// two differ and only the former matches the stepper.
pub fn eval_r_tilde(p: f64, q: f64, s: usize, eta: f64, alphas: &[f64; 8]) -> Result<Complex64> {
    let coeffs = rkc_coeffs(s, eta)?;
    let rs = r_stage(&coeffs, s, Complex64::new(p, 0.0));
    let rsm1 = r_stage(&coeffs, s - 1, Complex64::new(p, 0.0));
    let iq = Complex64::new(0.0, q);
    let iq2 = iq * iq;
    let iq3 = iq2 * iq;
    let [a0, a1, a2, a3, a4, a5, a6, a7] = *alphas;
    let g1 = 1.0 + (a0 + a7) * iq + a0 * a7 * iq2;
    let g2 = a6 * iq + (a0 * a6 + a3 * a7) * iq2 + a0 * a3 * a7 * iq3;
    let g3 = (a4 + a5) * iq + (a0 * a5 + (a1 + a2) * a7) * iq2 + a0 * a2 * a7 * iq3;
    Ok(rs * g1 + rsm1 * g2 + g3)
}

/// Stability function of the ARKC method on the split test equation.
pub fn eval_r_hat(p: f64, q: f64, s: usize, eta: f64) -> Result<Complex64> {
    let coeffs = rkc_coeffs(s, eta)?;
    let rs = r_stage(&coeffs, s, Complex64::new(p, 0.0));
    let w1 = coeffs.omega1;
    let x = Complex64::new(coeffs.omega0 + w1 * p, 0.0);
    let u_ratio = cheb_u_complex(s - 1, x) / cheb_u_complex(s - 1, Complex64::new(coeffs.omega0, 0.0));
    let iq = Complex64::new(0.0, q);
    let bracket = 0.5 * w1 + (1.0 - 0.5 * w1) * u_ratio;
    Ok(rs + bracket * (1.0 + 0.5 * w1 * p) * (iq + 0.5 * iq * iq))
}

/// The pure-q factor of the NPRKC stability function:
/// (1 + iq/2m)^m (1 + iq/2m + (iq)^2/4m^2 + (iq)^3/24m^3)^m.
pub fn m_factor(q: f64, m: usize) -> Complex64 {
    let mf = m as f64;
    let iq = Complex64::new(0.0, q);
    let euler = 1.0 + iq / (2.0 * mf);
    let block = 1.0 + iq / (2.0 * mf) + iq * iq / (4.0 * mf * mf) + iq * iq * iq / (24.0 * mf * mf * mf);
    euler.powu(m as u32) * block.powu(m as u32)
}

/// Stability function of the NPRKC method: m_factor(q) * R_s(p).
pub fn eval_r_ddot(p: f64, q: f64, s: usize, m: usize, eta: f64) -> Result<Complex64> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let coeffs = rkc_coeffs(s, eta)?;
    let rs = r_stage(&coeffs, s, Complex64::new(p, 0.0));
    Ok(m_factor(q, m) * rs)
}

/// Which stability function a region scan samples. For RKC the scan point
/// is the full complex number p + iq; for the partitioned methods (p, q)
/// are the two real parameters of the split test equation.
#[derive(Debug, Clone)]
pub enum RegionEvaluator {
    Rkc { s: usize, eta: f64 },
    Prkc { s: usize, eta: f64, r: f64, alpha3: f64 },
    Arkc { s: usize, eta: f64 },
    Nprkc { s: usize, m: usize, eta: f64 },
}

impl RegionEvaluator {
    pub fn eval(&self, p: f64, q: f64) -> Result<Complex64> {
        match *self {
            RegionEvaluator::Rkc { s, eta } => eval_r_s(Complex64::new(p, q), s, eta),
            RegionEvaluator::Prkc { s, eta, r, alpha3 } => {
                let coeffs = rkc_coeffs(s, eta)?;
                let alphas = crate::chebyshev::prkc_alphas(r, alpha3, coeffs.c[s - 1])?;
                eval_r_tilde(p, q, s, eta, &alphas)
            }
            RegionEvaluator::Arkc { s, eta } => eval_r_hat(p, q, s, eta),
            RegionEvaluator::Nprkc { s, m, eta } => eval_r_ddot(p, q, s, m, eta),
        }
    }
}

/// Rectangular sample grid of |R| magnitudes, row-major with p varying on
/// the outer index.
#[derive(Debug, Clone)]
pub struct StabilityGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub np: usize,
    pub nq: usize,
    pub values: Vec<f64>,
}

impl StabilityGrid {
    pub fn p_at(&self, i: usize) -> f64 {
        self.p_min + (self.p_max - self.p_min) * i as f64 / (self.np - 1) as f64
    }

    pub fn q_at(&self, j: usize) -> f64 {
        self.q_min + (self.q_max - self.q_min) * j as f64 / (self.nq - 1) as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nq + j]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Write the grid as `p,q,absR` rows (row-major, shortest round-trip
    /// float formatting so identical runs are byte-identical).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p,q,absR")?;
        for i in 0..self.np {
            for j in 0..self.nq {
                writeln!(out, "{},{},{}", self.p_at(i), self.q_at(j), self.value(i, j))?;
            }
        }
        Ok(())
    }
}

/// Sample |R| on a uniform (p, q) grid. `np` and `nq` are sample counts
/// (>= 2); ranges must be properly ordered and non-degenerate.
pub fn scan_region(
    evaluator: &RegionEvaluator,
    p_range: (f64, f64),
    q_range: (f64, f64),
    np: usize,
    nq: usize,
) -> Result<StabilityGrid> {
    let (p_min, p_max) = p_range;
    let (q_min, q_max) = q_range;
    if !(p_min < p_max) || !(q_min < q_max) {
        return Err(Error::InvalidParameter(format!(
            "scan ranges must be nonempty and ordered, got p [{p_min}, {p_max}], q [{q_min}, {q_max}]"
        )));
    }
    if np < 2 || nq < 2 {
        return Err(Error::InvalidParameter("np and nq must be >= 2".into()));
    }
    let mut values = Vec::with_capacity(np * nq);
    for i in 0..np {
        let p = p_min + (p_max - p_min) * i as f64 / (np - 1) as f64;
        for j in 0..nq {
            let q = q_min + (q_max - q_min) * j as f64 / (nq - 1) as f64;
            values.push(evaluator.eval(p, q)?.norm());
        }
    }
    Ok(StabilityGrid { p_min, p_max, q_min, q_max, np, nq, values })
}

/// Default sample count for a scan axis: 4 samples per unit length, at
/// least 100.
pub fn default_scan_samples(len: f64) -> usize {
    ((4.0 * len).ceil() as usize).max(100)
}

/// Maximum of |R_ddot| over a grid covering the rectangle
/// S(s, m) = [-0.65 s^2, 0] x [-2.15 m, 2.15 m].
///
/// |R_ddot| factorizes as |R_s(p)| * |m_factor(q)|, so the grid maximum is
/// the product of the two axis maxima; `np`/`nq` are raised to at least
/// 10 samples per s units in p and 10 samples per unit in q.
/// Certification passes when the result is <= 1 + [`CERTIFY_TOL`].
pub fn certify_rectangle(s: usize, m: usize, eta: f64, np: usize, nq: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let p_len = 0.65 * (s * s) as f64;
    let q_half = 2.15 * m as f64;
    let np = np.max((10.0 * p_len / s as f64).ceil() as usize + 1);
    let nq = nq.max((10.0 * 2.0 * q_half).ceil() as usize + 1);

    let coeffs = rkc_coeffs(s, eta)?;
    let mut max_r: f64 = 0.0;
    for i in 0..np {
        let p = -p_len + p_len * i as f64 / (np - 1) as f64;
        max_r = max_r.max(r_stage(&coeffs, s, Complex64::new(p, 0.0)).norm());
    }
    let mut max_f: f64 = 0.0;
    for j in 0..nq {
        let q = -q_half + 2.0 * q_half * j as f64 / (nq - 1) as f64;
        max_f = max_f.max(m_factor(q, m).norm());
    }
    Ok(max_r * max_f)
}

/// Largest beta such that |R_s(p)| <= 1 (up to [`CERTIFY_TOL`]) on
/// [-beta, 0]: leftward scan for the first exceedance, then bisection.
pub fn real_axis_extent(s: usize, eta: f64) -> Result<f64> {
    let coeffs = rkc_coeffs(s, eta)?;
    let absr = |p: f64| r_stage(&coeffs, s, Complex64::new(p, 0.0)).norm();
    let limit = 1.0 + CERTIFY_TOL;

    let reach = 3.0 * (s * s) as f64 + 3.0;
    let n = 60_000;
    let mut bad = None;
    for k in 1..=n {
        let p = -reach * k as f64 / n as f64;
        if absr(p) > limit {
            bad = Some(p);
            break;
        }
    }
    let first_bad = bad.ok_or_else(|| {
        Error::InvalidParameter(format!("no stability boundary found for s = {s} within [{:-}, 0]", reach))
    })?;
    let mut lo = first_bad + reach / n as f64; // still stable
    let mut hi = first_bad;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if absr(mid) > limit {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(-lo)
}
