//! One-step integrators: RKC, PRKC, ARKC, NPRKC, and the pure-RK methods
//! they degenerate into, plus a fixed-step driver.
//!
//! All steppers are pure functions of (rhs, state, step, coefficients);
//! evaluation counters are accumulated into a caller-owned [`StepStats`].
//! A non-finite value at any stage aborts the step with the stage index,
//! so instability-driven overflow stays distinguishable from ordinary
//! estimator rejections.

use crate::chebyshev::{prkc_alphas, ChebCoeffs};
use crate::error::{Error, Result};
use crate::ode::{SplitOde, StepStats};

/// Internal quantities of an NPRKC step consumed by the error estimators:
/// K_0 (state after the f_A prefix), K_{s1} and K_s from the RKC block,
/// F_D(K_0), and the first two f_A stage evaluations of each suffix block.
#[derive(Debug, Clone)]
pub struct NprkcStages {
    pub k0: Vec<f64>,
    pub k_s1: Vec<f64>,
    pub k_s: Vec<f64>,
    pub f_d_k0: Vec<f64>,
    pub f_a_pre: Vec<Vec<f64>>,
    pub f_a_mid: Vec<Vec<f64>>,
}

/// Result of one step. `stages` is populated only by [`nprkc_step`]; the
/// other methods feed no embedded estimator and retain nothing.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub y_next: Vec<f64>,
    pub stages: Option<NprkcStages>,
}

fn ensure_finite(v: &[f64], stage: usize) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteState { stage })
    }
}

fn check_step_size(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("step size must be positive and finite, got {h}")))
    }
}

/// Classic s-stage RKC step on a single right-hand side.
///
/// On the scalar linear problem f(y) = lambda*y the output equals
/// R_s(lambda*h) * y_n with R_s the shifted-Chebyshev stability function.
/// Increments `nfd` by s.
pub fn rkc_step<F>(
    f: F,
    y_n: &[f64],
    h: f64,
    coeffs: &ChebCoeffs,
    stats: &mut StepStats,
) -> Result<StepOutput>
where
    F: Fn(&[f64], &mut [f64]),
{
    check_step_size(h)?;
    let dim = y_n.len();
    let s = coeffs.s;

    let mut f_k0 = vec![0.0; dim];
    f(y_n, &mut f_k0);
    stats.nfd += 1;

    // K_1 = K_0 + u~_1 h F_0
    let a1 = coeffs.u_tilde[1] * h;
    let mut k_prev2 = y_n.to_vec();
    let mut k_prev: Vec<f64> = (0..dim).map(|i| y_n[i] + a1 * f_k0[i]).collect();
    ensure_finite(&k_prev, 1)?;

    let mut f_prev = vec![0.0; dim];
    let mut k_next = vec![0.0; dim];
    for j in 2..=s {
        f(&k_prev, &mut f_prev);
        stats.nfd += 1;
        let (uj, vj) = (coeffs.u[j], coeffs.v[j]);
        let (aj, bj) = (coeffs.u_tilde[j] * h, coeffs.gamma_tilde[j] * h);
        // K_0 + u (K_{j-1} - K_0) + v (K_{j-2} - K_0) form: identical to
        // the three-weight combination but exact on a quiescent field
        for i in 0..dim {
            k_next[i] = y_n[i] + uj * (k_prev[i] - y_n[i]) + vj * (k_prev2[i] - y_n[i])
                + aj * f_prev[i]
                + bj * f_k0[i];
        }
        ensure_finite(&k_next, j)?;
        std::mem::swap(&mut k_prev2, &mut k_prev);
        std::mem::swap(&mut k_prev, &mut k_next);
    }

    Ok(StepOutput { y_next: k_prev, stages: None })
}

/// s+2-stage PRKC step. `alphas` must come from [`prkc_alphas`] with
/// c_{s-1} taken from `coeffs.c`. Increments `nfd` by s and `nfa` by 4.
pub fn prkc_step(
    ode: &SplitOde,
    y_n: &[f64],
    h: f64,
    coeffs: &ChebCoeffs,
    alphas: &[f64; 8],
    stats: &mut StepStats,
) -> Result<StepOutput> {
    check_step_size(h)?;
    let dim = y_n.len();
    let s = coeffs.s;

    let mut f_a_km1 = vec![0.0; dim];
    ode.f_a(y_n, &mut f_a_km1);
    stats.nfa += 1;

    // K_0 = K_{-1} + alpha_0 h f_A(K_{-1})
    let a0h = alphas[0] * h;
    let k0: Vec<f64> = (0..dim).map(|i| y_n[i] + a0h * f_a_km1[i]).collect();
    ensure_finite(&k0, 1)?;

    let mut f_d_k0 = vec![0.0; dim];
    ode.f_d(&k0, &mut f_d_k0);
    stats.nfd += 1;

    let a1c = coeffs.u_tilde[1] * h;
    let mut k_prev2 = k0.clone();
    let mut k_prev: Vec<f64> = (0..dim).map(|i| k0[i] + a1c * f_d_k0[i]).collect();
    ensure_finite(&k_prev, 2)?;

    let mut f_prev = vec![0.0; dim];
    let mut k_next = vec![0.0; dim];
    for j in 2..s {
        ode.f_d(&k_prev, &mut f_prev);
        stats.nfd += 1;
        let (uj, vj) = (coeffs.u[j], coeffs.v[j]);
        let (aj, bj) = (coeffs.u_tilde[j] * h, coeffs.gamma_tilde[j] * h);
        for i in 0..dim {
            k_next[i] = k0[i] + uj * (k_prev[i] - k0[i]) + vj * (k_prev2[i] - k0[i])
                + aj * f_prev[i]
                + bj * f_d_k0[i];
        }
        ensure_finite(&k_next, j + 1)?;
        std::mem::swap(&mut k_prev2, &mut k_prev);
        std::mem::swap(&mut k_prev, &mut k_next);
    }

    // shared RKC line at j = s; K_s and K_{s+1} differ only in f_A weights
    ode.f_d(&k_prev, &mut f_prev);
    stats.nfd += 1;
    let (us, vs) = (coeffs.u[s], coeffs.v[s]);
    let (as_, bs) = (coeffs.u_tilde[s] * h, coeffs.gamma_tilde[s] * h);
    let base: Vec<f64> = (0..dim)
        .map(|i| {
            k0[i] + us * (k_prev[i] - k0[i]) + vs * (k_prev2[i] - k0[i])
                + as_ * f_prev[i]
                + bs * f_d_k0[i]
        })
        .collect();

    let mut f_a_k0 = vec![0.0; dim];
    ode.f_a(&k0, &mut f_a_k0);
    stats.nfa += 1;
    let mut f_a_ksm1 = vec![0.0; dim];
    ode.f_a(&k_prev, &mut f_a_ksm1);
    stats.nfa += 1;

    let (w1, w2, w3) = (alphas[1] * h, alphas[2] * h, alphas[3] * h);
    let k_s: Vec<f64> = (0..dim)
        .map(|i| base[i] + w1 * f_a_km1[i] + w2 * f_a_k0[i] + w3 * f_a_ksm1[i])
        .collect();
    ensure_finite(&k_s, s + 1)?;

    let mut f_a_ks = vec![0.0; dim];
    ode.f_a(&k_s, &mut f_a_ks);
    stats.nfa += 1;

    let (w4, w5, w6, w7) = (alphas[4] * h, alphas[5] * h, alphas[6] * h, alphas[7] * h);
    let y_next: Vec<f64> = (0..dim)
        .map(|i| base[i] + w4 * f_a_km1[i] + w5 * f_a_k0[i] + w6 * f_a_ksm1[i] + w7 * f_a_ks[i])
        .collect();
    ensure_finite(&y_next, s + 2)?;

    Ok(StepOutput { y_next, stages: None })
}

/// Convenience: PRKC finishing weights for a coefficient set.
pub fn prkc_alphas_for(coeffs: &ChebCoeffs, r: f64, alpha3: f64) -> Result<[f64; 8]> {
    prkc_alphas(r, alpha3, coeffs.c[coeffs.s - 1])
}

/// s-stage ARKC step. Expects `coeffs` built with the ARKC damping
/// schedule (see [`arkc_eta_schedule`]). Increments `nfd` by s+2 and
/// `nfa` by 3.
pub fn arkc_step(
    ode: &SplitOde,
    y_n: &[f64],
    h: f64,
    coeffs: &ChebCoeffs,
    stats: &mut StepStats,
) -> Result<StepOutput> {
    check_step_size(h)?;
    let dim = y_n.len();
    let s = coeffs.s;
    let w1 = coeffs.omega1;
    let alpha_hat = (1.0 - 0.5 * w1) * coeffs.b[1] * s as f64 * w1;

    let mut f_d_yn = vec![0.0; dim];
    ode.f_d(y_n, &mut f_d_yn);
    stats.nfd += 1;
    let mut f_a_yn = vec![0.0; dim];
    ode.f_a(y_n, &mut f_a_yn);
    stats.nfa += 1;

    // G probes the coupling between the two parts around y_n
    let c1 = 0.5 * w1 * h;
    let inner: Vec<f64> = (0..dim).map(|i| y_n[i] + c1 * f_d_yn[i]).collect();
    let mut f_a_inner = vec![0.0; dim];
    ode.f_a(&inner, &mut f_a_inner);
    stats.nfa += 1;

    let big: Vec<f64> = (0..dim)
        .map(|i| y_n[i] + 0.5 * h * f_a_inner[i] + 0.5 * h * f_d_yn[i])
        .collect();
    let mut f_a_big = vec![0.0; dim];
    ode.f_a(&big, &mut f_a_big);
    stats.nfa += 1;

    let c2 = 0.5 * (w1 - 1.0) * h;
    let arg2: Vec<f64> = (0..dim).map(|i| y_n[i] + c2 * f_a_yn[i]).collect();
    let mut f_d_arg2 = vec![0.0; dim];
    ode.f_d(&arg2, &mut f_d_arg2);
    stats.nfd += 1;

    // grouping the f_D difference keeps G exactly zero when f_A vanishes
    let g: Vec<f64> = (0..dim)
        .map(|i| h * (f_a_big[i] + (f_d_arg2[i] - f_d_yn[i])))
        .collect();
    ensure_finite(&g, 1)?;

    let k0: Vec<f64> = (0..dim).map(|i| y_n[i] + 0.5 * w1 * g[i]).collect();
    let mut f_d_k0 = vec![0.0; dim];
    ode.f_d(&k0, &mut f_d_k0);
    stats.nfd += 1;

    let a1c = coeffs.u_tilde[1] * h;
    let mut k_prev2 = k0.clone();
    let mut k_prev: Vec<f64> = (0..dim)
        .map(|i| k0[i] + a1c * f_d_yn[i] + alpha_hat * g[i])
        .collect();
    ensure_finite(&k_prev, 2)?;

    let mut f_prev = vec![0.0; dim];
    let mut k_next = vec![0.0; dim];
    for j in 2..=s {
        ode.f_d(&k_prev, &mut f_prev);
        stats.nfd += 1;
        let (uj, vj) = (coeffs.u[j], coeffs.v[j]);
        let (aj, bj) = (coeffs.u_tilde[j] * h, coeffs.gamma_tilde[j] * h);
        for i in 0..dim {
            k_next[i] = k0[i] + uj * (k_prev[i] - k0[i]) + vj * (k_prev2[i] - k0[i])
                + aj * (f_prev[i] + (f_d_yn[i] - f_d_k0[i]))
                + bj * f_d_yn[i];
        }
        ensure_finite(&k_next, j + 1)?;
        std::mem::swap(&mut k_prev2, &mut k_prev);
        std::mem::swap(&mut k_prev, &mut k_next);
    }

    Ok(StepOutput { y_next: k_prev, stages: None })
}

/// Piecewise-linear ARKC damping through the anchors (5, 4), (15, 9),
/// (50, 13.5), clamped outside [5, 50].
pub fn arkc_eta_schedule(s: usize) -> f64 {
    let s = s as f64;
    if s <= 5.0 {
        4.0
    } else if s <= 15.0 {
        4.0 + (s - 5.0) * 0.5
    } else if s <= 50.0 {
        9.0 + (s - 15.0) * (13.5 - 9.0) / 35.0
    } else {
        13.5
    }
}

/// NPRKC step: m forward-Euler f_A prefix stages, the s-stage RKC block on
/// f_D, then m three-stage f_A suffix blocks. Increments `nfd` by s and
/// `nfa` by 4m, and retains the stages the error estimators consume.
pub fn nprkc_step(
    ode: &SplitOde,
    y_n: &[f64],
    h: f64,
    coeffs: &ChebCoeffs,
    m: usize,
    stats: &mut StepStats,
) -> Result<StepOutput> {
    check_step_size(h)?;
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let dim = y_n.len();
    let s = coeffs.s;
    let mf = m as f64;
    let mut stage = 0usize;

    let mut khat = y_n.to_vec();
    let mut f_a_buf = vec![0.0; dim];
    let pre = h / (2.0 * mf);
    for _ in 1..=m {
        ode.f_a(&khat, &mut f_a_buf);
        stats.nfa += 1;
        for i in 0..dim {
            khat[i] += pre * f_a_buf[i];
        }
        stage += 1;
        ensure_finite(&khat, stage)?;
    }

    let k0 = khat;
    let mut f_d_k0 = vec![0.0; dim];
    ode.f_d(&k0, &mut f_d_k0);
    stats.nfd += 1;

    let s1 = 4 * s / 5;
    let a1c = coeffs.u_tilde[1] * h;
    let mut k_prev2 = k0.clone();
    let mut k_prev: Vec<f64> = (0..dim).map(|i| k0[i] + a1c * f_d_k0[i]).collect();
    stage += 1;
    ensure_finite(&k_prev, stage)?;
    let mut k_s1 = if s1 == 1 { k_prev.clone() } else { Vec::new() };

    let mut f_prev = vec![0.0; dim];
    let mut k_next = vec![0.0; dim];
    for j in 2..=s {
        ode.f_d(&k_prev, &mut f_prev);
        stats.nfd += 1;
        let (uj, vj) = (coeffs.u[j], coeffs.v[j]);
        let (aj, bj) = (coeffs.u_tilde[j] * h, coeffs.gamma_tilde[j] * h);
        for i in 0..dim {
            k_next[i] = k0[i] + uj * (k_prev[i] - k0[i]) + vj * (k_prev2[i] - k0[i])
                + aj * f_prev[i]
                + bj * f_d_k0[i];
        }
        stage += 1;
        ensure_finite(&k_next, stage)?;
        std::mem::swap(&mut k_prev2, &mut k_prev);
        std::mem::swap(&mut k_prev, &mut k_next);
        if j == s1 {
            k_s1 = k_prev.clone();
        }
    }
    let k_s = k_prev;

    let mut kc = k_s.clone();
    let mut f_a_pre = Vec::with_capacity(m);
    let mut f_a_mid = Vec::with_capacity(m);
    let (c_a, c_b, c_c) = (h / (6.0 * mf), 2.0 * h / mf, 1.5 * h / mf);
    let mut ka = vec![0.0; dim];
    let mut kb = vec![0.0; dim];
    let mut f_tmp = vec![0.0; dim];
    for _ in 1..=m {
        let mut fa0 = vec![0.0; dim];
        ode.f_a(&kc, &mut fa0);
        stats.nfa += 1;
        for i in 0..dim {
            ka[i] = kc[i] + c_a * fa0[i];
        }
        let mut fa1 = vec![0.0; dim];
        ode.f_a(&ka, &mut fa1);
        stats.nfa += 1;
        for i in 0..dim {
            kb[i] = kc[i] - c_a * fa1[i];
        }
        ode.f_a(&kb, &mut f_tmp);
        stats.nfa += 1;
        for i in 0..dim {
            kc[i] += c_b * fa0[i] - c_c * f_tmp[i];
        }
        stage += 3;
        ensure_finite(&kc, stage)?;
        f_a_pre.push(fa0);
        f_a_mid.push(fa1);
    }

    Ok(StepOutput {
        y_next: kc,
        stages: Some(NprkcStages { k0, k_s1, k_s, f_d_k0, f_a_pre, f_a_mid }),
    })
}

/// The 4m-stage RK method the NPRKC scheme degenerates into when f_D = 0.
/// For m = 1 this is the explicit 4-stage third-order method.
pub fn rk4m_step<F>(f: F, y_n: &[f64], h: f64, m: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    check_step_size(h)?;
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let dim = y_n.len();
    let mf = m as f64;
    let mut stage = 0usize;

    let mut k = y_n.to_vec();
    let mut f_buf = vec![0.0; dim];
    let pre = h / (2.0 * mf);
    for _ in 1..=m {
        f(&k, &mut f_buf);
        for i in 0..dim {
            k[i] += pre * f_buf[i];
        }
        stage += 1;
        ensure_finite(&k, stage)?;
    }

    let (c_a, c_b, c_c) = (h / (6.0 * mf), 2.0 * h / mf, 1.5 * h / mf);
    let mut ka = vec![0.0; dim];
    let mut kb = vec![0.0; dim];
    let mut fa0 = vec![0.0; dim];
    let mut fa1 = vec![0.0; dim];
    let mut f_tmp = vec![0.0; dim];
    for _ in 1..=m {
        f(&k, &mut fa0);
        for i in 0..dim {
            ka[i] = k[i] + c_a * fa0[i];
        }
        f(&ka, &mut fa1);
        for i in 0..dim {
            kb[i] = k[i] - c_a * fa1[i];
        }
        f(&kb, &mut f_tmp);
        for i in 0..dim {
            k[i] += c_b * fa0[i] - c_c * f_tmp[i];
        }
        stage += 3;
        ensure_finite(&k, stage)?;
    }
    Ok(k)
}

/// The 3-stage third-order RK method the PRKC scheme degenerates into when
/// f_D = 0, parameterized by the same finishing weights.
pub fn rk3_prkc_step<F>(f: F, y_n: &[f64], h: f64, alphas: &[f64; 8]) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    check_step_size(h)?;
    let dim = y_n.len();
    let mut f1 = vec![0.0; dim];
    f(y_n, &mut f1);
    let h2: Vec<f64> = (0..dim).map(|i| y_n[i] + alphas[0] * h * f1[i]).collect();
    let mut f2 = vec![0.0; dim];
    f(&h2, &mut f2);
    let (w31, w32) = ((alphas[0] + alphas[1]) * h, (alphas[2] + alphas[3]) * h);
    let h3: Vec<f64> = (0..dim).map(|i| y_n[i] + w31 * f1[i] + w32 * f2[i]).collect();
    let mut f3 = vec![0.0; dim];
    f(&h3, &mut f3);
    let (w1, w2, w3) = ((alphas[0] + alphas[4]) * h, (alphas[5] + alphas[6]) * h, alphas[7] * h);
    let y_next: Vec<f64> = (0..dim)
        .map(|i| y_n[i] + w1 * f1[i] + w2 * f2[i] + w3 * f3[i])
        .collect();
    ensure_finite(&y_next, 3)?;
    Ok(y_next)
}

/// The 2-stage midpoint method the ARKC scheme degenerates into when f_D = 0.
pub fn midpoint_step<F>(f: F, y_n: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    check_step_size(h)?;
    let dim = y_n.len();
    let mut f1 = vec![0.0; dim];
    f(y_n, &mut f1);
    let h2: Vec<f64> = (0..dim).map(|i| y_n[i] + 0.5 * h * f1[i]).collect();
    let mut f2 = vec![0.0; dim];
    f(&h2, &mut f2);
    let y_next: Vec<f64> = (0..dim).map(|i| y_n[i] + h * f2[i]).collect();
    ensure_finite(&y_next, 2)?;
    Ok(y_next)
}

/// Method selector for fixed-step runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rkc { s: usize },
    Prkc { s: usize },
    Arkc { s: usize },
    Nprkc { s: usize, m: usize },
    /// 3-stage third-order method of the PRKC family (f_D = 0 limit).
    PrkcRk3,
    /// 2-stage midpoint method (ARKC f_D = 0 limit).
    Midpoint,
    /// 4m-stage method (NPRKC f_D = 0 limit); third order for m = 1.
    Rk4m { m: usize },
}

/// Knobs for fixed-step runs; `eta = None` selects the per-method default
/// (2/13 for RKC/PRKC/NPRKC, the anchor schedule for ARKC).
#[derive(Debug, Clone, Copy)]
pub struct FixedRunOptions {
    pub eta: Option<f64>,
    pub r: f64,
    pub alpha3: f64,
}

impl Default for FixedRunOptions {
    fn default() -> Self {
        FixedRunOptions { eta: None, r: 1.0, alpha3: 0.0 }
    }
}

fn method_eta(method: &Method, opts: &FixedRunOptions) -> f64 {
    if let Some(eta) = opts.eta {
        return eta;
    }
    match method {
        Method::Arkc { s } => arkc_eta_schedule(*s),
        _ => crate::chebyshev::DEFAULT_ETA,
    }
}

/// Integrate `ode` from t0 to t_end with constant step `h` (final step
/// truncated to land on t_end). The pure-RK methods and RKC integrate the
/// combined right-hand side f_D + f_A.
pub fn integrate_fixed(
    ode: &SplitOde,
    method: &Method,
    h: f64,
    opts: &FixedRunOptions,
) -> Result<(Vec<f64>, StepStats)> {
    check_step_size(h)?;
    let mut stats = StepStats::new();
    let mut y = ode.y0.clone();
    let mut t = ode.t0;
    let span = ode.t_end - ode.t0;
    if span <= 0.0 {
        return Err(Error::InvalidParameter("t_end must exceed t0".into()));
    }
    let eta = method_eta(method, opts);

    let combined = |yv: &[f64], out: &mut [f64]| {
        let mut buf = vec![0.0; yv.len()];
        ode.f_d(yv, out);
        ode.f_a(yv, &mut buf);
        for i in 0..out.len() {
            out[i] += buf[i];
        }
    };

    while t < ode.t_end - 1e-14 * span {
        let hs = h.min(ode.t_end - t);
        match method {
            Method::Rkc { s } => {
                let coeffs = crate::chebyshev::rkc_coeffs(*s, eta)?;
                let out = rkc_step(combined, &y, hs, &coeffs, &mut stats)?;
                stats.nfa += *s as u64; // combined evaluations touched f_A too
                y = out.y_next;
            }
            Method::Prkc { s } => {
                let coeffs = crate::chebyshev::rkc_coeffs(*s, eta)?;
                let alphas = prkc_alphas_for(&coeffs, opts.r, opts.alpha3)?;
                y = prkc_step(ode, &y, hs, &coeffs, &alphas, &mut stats)?.y_next;
            }
            Method::Arkc { s } => {
                let coeffs = crate::chebyshev::rkc_coeffs(*s, eta)?;
                y = arkc_step(ode, &y, hs, &coeffs, &mut stats)?.y_next;
            }
            Method::Nprkc { s, m } => {
                let coeffs = crate::chebyshev::rkc_coeffs(*s, eta)?;
                y = nprkc_step(ode, &y, hs, &coeffs, *m, &mut stats)?.y_next;
            }
            Method::PrkcRk3 => {
                let alphas = prkc_alphas(opts.r, opts.alpha3, 1.0)?;
                y = rk3_prkc_step(combined, &y, hs, &alphas)?;
                stats.nfd += 3;
                stats.nfa += 3;
            }
            Method::Midpoint => {
                y = midpoint_step(combined, &y, hs)?;
                stats.nfd += 2;
                stats.nfa += 2;
            }
            Method::Rk4m { m } => {
                y = rk4m_step(combined, &y, hs, *m)?;
                stats.nfd += 4 * *m as u64;
                stats.nfa += 4 * *m as u64;
            }
        }
        stats.n_accept += 1;
        t += hs;
    }
    Ok((y, stats))
}
