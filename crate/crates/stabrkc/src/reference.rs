//! High-accuracy fixed-step reference integrator: the classic embedded
//! 5(4) explicit pair, driven at 5th order with a small constant step.
//! Reference states are cached to disk keyed by the run configuration so
//! benchmark sweeps do not recompute them.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ode::SplitOde;

/// Stage coefficients of the 5(4) pair. `B5` propagates (row seven of A);
/// `B4` is the embedded fourth-order companion kept for completeness.
pub struct ReferenceConfig {
    pub h_ref: f64,
}

impl ReferenceConfig {
    pub fn new(h_ref: f64) -> Result<Self> {
        if !(h_ref > 0.0 && h_ref.is_finite()) {
            return Err(Error::InvalidParameter("h_ref must be positive".into()));
        }
        Ok(ReferenceConfig { h_ref })
    }
}

/// Desk-scale default step: fine enough that halving it moves the
/// benchmark references by less than 1e-10 relative.
pub const DEFAULT_H_REF: f64 = 6.103515625e-5; // 2^-14

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

pub const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

pub const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn pair_step<F>(f: &F, y: &[f64], h: f64, k: &mut [Vec<f64>; 6], scratch: &mut Vec<f64>) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let dim = y.len();
    f(y, &mut k[0]);
    for stage in 1..6 {
        scratch.clear();
        scratch.extend((0..dim).map(|i| {
            let mut acc = y[i];
            for (j, kj) in k.iter().enumerate().take(stage) {
                acc += h * A[stage - 1][j] * kj[i];
            }
            acc
        }));
        f(scratch, &mut k[stage]);
    }
    (0..dim)
        .map(|i| {
            let mut acc = y[i];
            for (j, kj) in k.iter().enumerate() {
                acc += h * B5[j] * kj[i];
            }
            acc
        })
        .collect()
}

/// Fixed-step 5th-order propagation of f_D + f_A from t0 to t_end, with
/// the final step truncated to land on t_end. A non-finite state aborts
/// with the failing step index, which signals that `h_ref` is too large
/// for the problem's stiffness.
pub fn reference_solve(ode: &SplitOde, h_ref: f64) -> Result<Vec<f64>> {
    let cfg = ReferenceConfig::new(h_ref)?;
    let dim = ode.dim;
    let f = |y: &[f64], out: &mut [f64]| {
        ode.f_d(y, out);
        let mut buf = vec![0.0; y.len()];
        ode.f_a(y, &mut buf);
        for i in 0..out.len() {
            out[i] += buf[i];
        }
    };

    let span = ode.t_end - ode.t0;
    if !(span > 0.0) {
        return Err(Error::InvalidParameter("t_end must exceed t0".into()));
    }
    let mut y = ode.y0.clone();
    let mut t = ode.t0;
    let mut k: [Vec<f64>; 6] = std::array::from_fn(|_| vec![0.0; dim]);
    let mut scratch = Vec::with_capacity(dim);
    let mut step_index = 0usize;
    while t < ode.t_end - 1e-14 * span {
        let hs = cfg.h_ref.min(ode.t_end - t);
        y = pair_step(&f, &y, hs, &mut k, &mut scratch);
        step_index += 1;
        if !y.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFiniteState { stage: step_index });
        }
        t += hs;
    }
    Ok(y)
}

/// Cache key for a reference state.
pub fn reference_key(problem_id: &str, params: &str, n: usize, t_end: f64, h_ref: f64) -> String {
    format!("{problem_id}_N{n}_T{t_end}_h{h_ref:e}_{params}").replace(['/', ' '], "_")
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("ref_{key}.csv"))
}

/// Load a cached reference state, or compute and cache it. With
/// `no_compute` set, a cache miss is an error instead of a solve.
pub fn load_or_compute(
    ode: &SplitOde,
    key: &str,
    h_ref: f64,
    cache_dir: Option<&Path>,
    no_compute: bool,
) -> Result<Vec<f64>> {
    if let Some(dir) = cache_dir {
        let path = cache_path(dir, key);
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            let mut vals = Vec::with_capacity(ode.dim);
            for line in text.lines() {
                vals.push(line.parse::<f64>().map_err(|e| {
                    Error::InvalidParameter(format!("corrupt reference cache {path:?}: {e}"))
                })?);
            }
            if vals.len() != ode.dim {
                return Err(Error::InvalidParameter(format!(
                    "reference cache {path:?} has {} values, expected {}",
                    vals.len(),
                    ode.dim
                )));
            }
            return Ok(vals);
        }
    }
    if no_compute {
        return Err(Error::MissingReference(key.to_string()));
    }
    let y = reference_solve(ode, h_ref)?;
    if let Some(dir) = cache_dir {
        fs::create_dir_all(dir)?;
        let mut text = String::new();
        for v in &y {
            text.push_str(&format!("{v}\n"));
        }
        fs::write(cache_path(dir, key), text)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn plain_ode(
        f: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
        y0: Vec<f64>,
        t_end: f64,
    ) -> SplitOde {
        let dim = y0.len();
        SplitOde::new(
            dim,
            0.0,
            t_end,
            y0,
            Box::new(f),
            Box::new(|_, out| out.fill(0.0)),
            Box::new(|_| 1.0),
            Box::new(|_| 0.0),
        )
    }

    #[test]
    fn exponential_decay_to_machine_level() {
        let ode = plain_ode(|y, out| out[0] = -y[0], vec![1.0], 1.0);
        let y = reference_solve(&ode, 2.0f64.powi(-10)).unwrap();
        assert_relative_eq!(y[0], (-1.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn zero_field_identity() {
        let ode = plain_ode(|_, out| out.fill(0.0), vec![2.0, -3.0], 1.0);
        assert_eq!(reference_solve(&ode, 0.25).unwrap(), vec![2.0, -3.0]);
    }

    #[test]
    fn order_five_slope() {
        // harmonic oscillator over one unit, exact (cos 1, -sin 1): large
        // enough error constant to stay clear of the rounding floor
        let mut pts = Vec::new();
        for k in 2..=6 {
            let h = 0.5f64.powi(k);
            let ode = plain_ode(
                |y, out| {
                    out[0] = y[1];
                    out[1] = -y[0];
                },
                vec![1.0, 0.0],
                1.0,
            );
            let y = reference_solve(&ode, h).unwrap();
            let err = ((y[0] - 1.0f64.cos()).powi(2) + (y[1] + 1.0f64.sin()).powi(2)).sqrt();
            pts.push((h.ln(), err.ln()));
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|(x, _)| x).sum();
        let sy: f64 = pts.iter().map(|(_, y)| y).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((4.6..=5.4).contains(&slope), "slope {slope}");
    }

    #[test]
    fn cache_round_trip_and_no_compute() {
        let dir = tempfile::tempdir().unwrap();
        let ode = plain_ode(|y, out| out[0] = -y[0], vec![1.0], 0.5);
        let key = reference_key("decay", "l1", 1, 0.5, 0.01);
        let first = load_or_compute(&ode, &key, 0.01, Some(dir.path()), false).unwrap();
        let second = load_or_compute(&ode, &key, 0.01, Some(dir.path()), true).unwrap();
        assert_eq!(first, second);

        let missing = reference_key("decay", "other", 1, 0.5, 0.02);
        assert!(matches!(
            load_or_compute(&ode, &missing, 0.02, Some(dir.path()), true),
            Err(Error::MissingReference(_))
        ));
    }

    #[test]
    fn unstable_step_reports_index() {
        // stiff decay far outside the pair's stability region
        let ode = plain_ode(|y, out| out[0] = -1e6 * y[0], vec![1.0], 1.0);
        assert!(matches!(
            reference_solve(&ode, 0.01),
            Err(Error::NonFiniteState { .. })
        ));
    }
}
