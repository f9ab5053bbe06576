//! Chebyshev polynomial evaluation and closed-form coefficient generation
//! for the RKC family.
//!
//! All polynomial evaluation goes through the forward three-term recurrence,
//! which stays stable and overflow-free for arguments slightly above 1 and
//! degrees up to [`MAX_STAGES`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the stage count. The recurrence coefficients stay finite well
/// beyond this, but nothing in the benchmark suite needs more stages.
pub const MAX_STAGES: usize = 512;

/// Which Chebyshev family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebKind {
    /// T_j: T_0 = 1, T_1 = x, T_j = 2x T_{j-1} - T_{j-2}
    First,
    /// U_j: U_0 = 1, U_1 = 2x, U_j = 2x U_{j-1} - U_{j-2}
    Second,
}

/// Evaluate T_j(x) or U_j(x) by the three-term recurrence.
///
/// Total function: any real `x` is accepted, including |x| > 1 where the
/// stabilized methods operate.
pub fn cheb_eval(kind: ChebKind, j: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = match kind {
        ChebKind::First => (1.0, x),
        ChebKind::Second => (1.0, 2.0 * x),
    };
    if j == 0 {
        return prev;
    }
    for _ in 2..=j {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// T_j at a complex argument, used by the stability evaluators where the
/// scan point is a full complex number.
pub fn cheb_t_complex(j: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = z;
    if j == 0 {
        return prev;
    }
    for _ in 2..=j {
        (prev, cur) = (cur, 2.0 * z * cur - prev);
    }
    cur
}

/// U_j at a complex argument.
pub fn cheb_u_complex(j: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = 2.0 * z;
    if j == 0 {
        return prev;
    }
    for _ in 2..=j {
        (prev, cur) = (cur, 2.0 * z * cur - prev);
    }
    cur
}

/// (T_j, T_j', T_j'') at `x` via the differentiated recurrences.
pub fn cheb_derivs(j: usize, x: f64) -> (f64, f64, f64) {
    let (mut t_prev, mut t_cur) = (1.0, x);
    let (mut d_prev, mut d_cur) = (0.0, 1.0);
    let (mut dd_prev, mut dd_cur) = (0.0, 0.0);
    if j == 0 {
        return (t_prev, d_prev, dd_prev);
    }
    for _ in 2..=j {
        let t_next = 2.0 * x * t_cur - t_prev;
        let d_next = 2.0 * t_cur + 2.0 * x * d_cur - d_prev;
        let dd_next = 4.0 * d_cur + 2.0 * x * dd_cur - dd_prev;
        (t_prev, t_cur) = (t_cur, t_next);
        (d_prev, d_cur) = (d_cur, d_next);
        (dd_prev, dd_cur) = (dd_cur, dd_next);
    }
    (t_cur, d_cur, dd_cur)
}

/// Recurrence coefficients of the s-stage RKC method for damping `eta`.
///
/// Index convention follows the recurrences: `b[0..=s]`, `u_tilde[1..=s]`,
/// `u[2..=s]`, `v[2..=s]`, `gamma_tilde[2..=s]`, `c[0..=s]`; unused low
/// entries are zero. `t_w0[j]` and `td_w0[j]` keep T_j(omega0) and
/// T_j'(omega0) around for the stability evaluators and the embedded
/// error estimator.
#[derive(Debug, Clone)]
pub struct ChebCoeffs {
    pub s: usize,
    pub eta: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub b: Vec<f64>,
    pub u_tilde: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub gamma_tilde: Vec<f64>,
    pub c: Vec<f64>,
    pub t_w0: Vec<f64>,
    pub td_w0: Vec<f64>,
}

impl ChebCoeffs {
    fn build(s: usize, eta: f64) -> Result<Self> {
        if !(2..=MAX_STAGES).contains(&s) {
            return Err(Error::InvalidStageCount { s });
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "damping eta must be finite and nonnegative, got {eta}"
            )));
        }
        let omega0 = 1.0 + eta / (s * s) as f64;
        let mut t_w0 = vec![0.0; s + 1];
        let mut td_w0 = vec![0.0; s + 1];
        let mut tdd_w0 = vec![0.0; s + 1];
        for j in 0..=s {
            let (t, d, dd) = cheb_derivs(j, omega0);
            t_w0[j] = t;
            td_w0[j] = d;
            tdd_w0[j] = dd;
        }
        let omega1 = td_w0[s] / tdd_w0[s];

        let mut b = vec![0.0; s + 1];
        for j in 2..=s {
            b[j] = tdd_w0[j] / (td_w0[j] * td_w0[j]);
        }
        b[0] = b[2];
        b[1] = b[2];

        let mut u_tilde = vec![0.0; s + 1];
        let mut u = vec![0.0; s + 1];
        let mut v = vec![0.0; s + 1];
        let mut gamma_tilde = vec![0.0; s + 1];
        u_tilde[1] = omega1 * b[1];
        for j in 2..=s {
            u_tilde[j] = 2.0 * omega1 * b[j] / b[j - 1];
            u[j] = 2.0 * omega0 * b[j] / b[j - 1];
            v[j] = -b[j] / b[j - 2];
            gamma_tilde[j] = -(1.0 - b[j - 1] * t_w0[j - 1]) * u_tilde[j];
        }

        let mut c = vec![0.0; s + 1];
        c[1] = u_tilde[1];
        for j in 2..=s {
            c[j] = u[j] * c[j - 1] + v[j] * c[j - 2] + u_tilde[j] + gamma_tilde[j];
        }

        let coeffs = ChebCoeffs {
            s,
            eta,
            omega0,
            omega1,
            b,
            u_tilde,
            u,
            v,
            gamma_tilde,
            c,
            t_w0,
            td_w0,
        };
        for (name, arr) in [
            ("b", &coeffs.b),
            ("u_tilde", &coeffs.u_tilde),
            ("u", &coeffs.u),
            ("v", &coeffs.v),
            ("gamma_tilde", &coeffs.gamma_tilde),
            ("c", &coeffs.c),
        ] {
            if arr.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite {name} coefficient for s = {s}, eta = {eta}"
                )));
            }
        }
        Ok(coeffs)
    }
}

type CoeffCache = Mutex<HashMap<(usize, u64), Arc<ChebCoeffs>>>;

fn cache() -> &'static CoeffCache {
    static CACHE: OnceLock<CoeffCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All RKC recurrence coefficients for `(s, eta)`.
///
/// Results are cached immutably: adaptive runs re-request the same stage
/// count many times and the build cost is O(s^2).
pub fn rkc_coeffs(s: usize, eta: f64) -> Result<Arc<ChebCoeffs>> {
    let key = (s, eta.to_bits());
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(ChebCoeffs::build(s, eta)?);
    cache().lock().unwrap().insert(key, built.clone());
    Ok(built)
}

/// Default damping for RKC, PRKC and NPRKC.
pub const DEFAULT_ETA: f64 = 2.0 / 13.0;

/// The eight finishing weights of the PRKC method for free parameters
/// `(r, alpha3)` and the stage abscissa `c_{s-1}`.
pub fn prkc_alphas(r: f64, alpha3: f64, c_s_minus_1: f64) -> Result<[f64; 8]> {
    if r == 0.0 || r == 0.5 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "PRKC parameter r must avoid 0 and 1/2, got {r}"
        )));
    }
    if c_s_minus_1 == 0.0 || !c_s_minus_1.is_finite() {
        return Err(Error::InvalidParameter(
            "PRKC abscissa c_{s-1} must be nonzero".into(),
        ));
    }
    if !alpha3.is_finite() {
        return Err(Error::InvalidParameter("alpha3 must be finite".into()));
    }
    let c = c_s_minus_1;
    let denom = 6.0 * r * (2.0 * r - 1.0);
    Ok([
        0.5,
        -0.5 + r * (3.0 - 4.0 * r),
        2.0 * r * (2.0 * r - 1.0) - alpha3,
        alpha3,
        (1.0 - 3.0 * r) / (6.0 * r),
        (1.0 + 3.0 * r * (1.0 - 2.0 * r) + 4.0 * c * r * (3.0 * r - 2.0)) / (c * denom),
        (3.0 * r * (2.0 * r - 1.0) - 1.0) / (c * denom),
        1.0 / denom,
    ])
}
