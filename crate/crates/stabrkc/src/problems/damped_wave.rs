//! 2-D damped wave equation B w_t + w_tt = A1 w_xx + A2 w_yy
//! + D1 w_txx + D2 w_tyy + S(x, y), written as a first-order system in
//! (w, w_t) and semi-discretized with central differences.
//!
//! The splitting keeps only the (stiff) D-terms in f_D; the wave operator,
//! damping and source all ride in f_A.

use num_complex::Complex64;

use crate::error::Result;
use crate::ode::{RadiusMode, SplitOde};

use super::{check_n, Boundary, Grid};

/// Second difference along one axis of an n x n field, divided by h^2.
/// `axis` 0 differentiates the first (row) index.
fn second_diff(u: &[f64], n: usize, axis: usize, boundary: Boundary, inv_h2: f64, out: &mut [f64]) {
    let at = |i: usize, j: usize| u[i * n + j];
    for i in 0..n {
        for j in 0..n {
            let (lo, hi) = match axis {
                0 => {
                    let lo = if i > 0 {
                        at(i - 1, j)
                    } else if boundary == Boundary::Periodic {
                        at(n - 1, j)
                    } else {
                        at(0, j) // mirrored ghost
                    };
                    let hi = if i + 1 < n {
                        at(i + 1, j)
                    } else if boundary == Boundary::Periodic {
                        at(0, j)
                    } else {
                        at(n - 1, j)
                    };
                    (lo, hi)
                }
                _ => {
                    let lo = if j > 0 {
                        at(i, j - 1)
                    } else if boundary == Boundary::Periodic {
                        at(i, n - 1)
                    } else {
                        at(i, 0)
                    };
                    let hi = if j + 1 < n {
                        at(i, j + 1)
                    } else if boundary == Boundary::Periodic {
                        at(i, 0)
                    } else {
                        at(i, n - 1)
                    };
                    (lo, hi)
                }
            };
            out[i * n + j] = inv_h2 * (lo - 2.0 * at(i, j) + hi);
        }
    }
}

/// Build the first-order damped-wave system of dimension 2 N^2 with state
/// (w, w_t), coefficient field `d_field` applied to both D-terms and
/// source `s_field`. Radius providers implement the bounds
/// rho_A <= 2 N sqrt(A1 + A2) and rho_D <= 8 N^2 Q + B, Q = max D on the
/// grid.
pub fn damped_wave_2d(
    n: usize,
    b: f64,
    a1: f64,
    a2: f64,
    d_field: impl Fn(f64, f64) -> f64,
    s_field: impl Fn(f64, f64) -> f64,
    boundary: Boundary,
) -> Result<SplitOde> {
    check_n(n)?;
    let grid = Grid::new(2, n, boundary)?;
    let nn = n * n;
    let mut d_vals = vec![0.0; nn];
    let mut s_vals = vec![0.0; nn];
    for i in 0..n {
        for j in 0..n {
            d_vals[i * n + j] = d_field(grid.coord(i), grid.coord(j));
            s_vals[i * n + j] = s_field(grid.coord(i), grid.coord(j));
        }
    }
    let q_max = d_vals.iter().fold(0.0f64, |acc, x| acc.max(*x));
    let inv_h2 = (n * n) as f64;

    let d_for_fd = d_vals;
    let f_d = move |state: &[f64], out: &mut [f64]| {
        let (wt, out_split) = (&state[nn..], &mut out[..]);
        let mut lap = vec![0.0; nn];
        let mut lap2 = vec![0.0; nn];
        second_diff(wt, n, 0, boundary, inv_h2, &mut lap);
        second_diff(wt, n, 1, boundary, inv_h2, &mut lap2);
        for k in 0..nn {
            out_split[k] = 0.0;
            out_split[nn + k] = d_for_fd[k] * (lap[k] + lap2[k]);
        }
    };

    let f_a = move |state: &[f64], out: &mut [f64]| {
        let w = &state[..nn];
        let wt = &state[nn..];
        let mut lx = vec![0.0; nn];
        let mut ly = vec![0.0; nn];
        second_diff(w, n, 0, boundary, inv_h2, &mut lx);
        second_diff(w, n, 1, boundary, inv_h2, &mut ly);
        for k in 0..nn {
            out[k] = wt[k];
            out[nn + k] = -b * wt[k] + a1 * lx[k] + a2 * ly[k] + s_vals[k];
        }
    };

    let rho_d = 8.0 * (n * n) as f64 * q_max + b;
    let rho_a = 2.0 * n as f64 * (a1 + a2).sqrt();
    Ok(SplitOde::new(
        2 * nn,
        0.0,
        0.75,
        vec![0.0; 2 * nn],
        Box::new(f_d),
        Box::new(f_a),
        Box::new(move |_| rho_d),
        Box::new(move |_| rho_a),
    )
    .with_radius_mode(RadiusMode::Analytic))
}

/// The benchmark configuration: zero-flux boundary, zero initial data,
/// Gaussian diffusion bump at (1/4, 1/4) and two Gaussian sources on the
/// top edge.
pub fn example1_wave(n: usize, b: f64, a1: f64, a2: f64) -> Result<SplitOde> {
    let d_field = |x: f64, y: f64| 0.1 * (-100.0 * ((x - 0.25).powi(2) + (y - 0.25).powi(2))).exp();
    let s_field = |x: f64, y: f64| {
        100.0 * (-500.0 * ((x - 0.75).powi(2) + (y - 1.0).powi(2))).exp()
            + 100.0 * (-500.0 * ((x - 0.25).powi(2) + (y - 1.0).powi(2))).exp()
    };
    damped_wave_2d(n, b, a1, a2, d_field, s_field, Boundary::ZeroFlux)
}

/// Eigenvalues of the constant-coefficient periodic system: for each mode
/// pair (j1, j2) the two roots of
/// lambda^2 + (alpha_D + B) lambda + alpha_A = 0 with
/// alpha_X = (4 X1 / h^2) sin^2(j1 pi h) + (4 X2 / h^2) sin^2(j2 pi h).
pub fn wave_eigenvalues(n: usize, b: f64, a1: f64, a2: f64, d1: f64, d2: f64) -> Vec<Complex64> {
    let hx = 1.0 / n as f64;
    let mut out = Vec::with_capacity(2 * n * n);
    for j1 in 1..=n {
        for j2 in 1..=n {
            let s1 = (j1 as f64 * std::f64::consts::PI * hx).sin().powi(2);
            let s2 = (j2 as f64 * std::f64::consts::PI * hx).sin().powi(2);
            let alpha_a = 4.0 / (hx * hx) * (a1 * s1 + a2 * s2);
            let alpha_d = 4.0 / (hx * hx) * (d1 * s1 + d2 * s2);
            let half_tr = 0.5 * (alpha_d + b);
            let disc = Complex64::new(half_tr * half_tr - alpha_a, 0.0).sqrt();
            out.push(-half_tr + disc);
            out.push(-half_tr - disc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{integrate_fixed, FixedRunOptions, Method};
    use approx::assert_relative_eq;

    #[test]
    fn quiescent_without_source() {
        let ode = damped_wave_2d(8, 0.0, 0.05, 15.0, |_, _| 0.1, |_, _| 0.0, Boundary::ZeroFlux).unwrap();
        let mut ode = ode;
        ode.t_end = 0.05;
        let (y, _) = integrate_fixed(&ode, &Method::Nprkc { s: 8, m: 2 }, 0.01, &FixedRunOptions::default()).unwrap();
        assert!(y.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn example1_radius_bounds() {
        let ode = example1_wave(100, 0.0, 0.05, 15.0).unwrap();
        assert_relative_eq!(ode.rho_a(&ode.y0), 2.0 * 100.0 * 15.05f64.sqrt(), max_relative = 1e-14);
        // Q = max D over the cell centers is slightly under the analytic
        // peak 0.1 attained between nodes
        let rho_d = ode.rho_d(&ode.y0);
        assert!(rho_d <= 8.0 * 100.0 * 100.0 * 0.1 + 1e-9);
        assert!(rho_d >= 0.9 * 8.0 * 100.0 * 100.0 * 0.1);
    }

    #[test]
    fn zero_flux_preserves_wt_mean_under_f_d() {
        let ode = damped_wave_2d(12, 0.0, 1.0, 2.0, |_, _| 0.3, |_, _| 0.0, Boundary::ZeroFlux).unwrap();
        let nn = 144;
        let mut state = vec![0.0; 2 * nn];
        for k in 0..2 * nn {
            state[k] = ((k * 37 % 101) as f64 / 101.0) - 0.5;
        }
        let mut out = vec![0.0; 2 * nn];
        ode.f_d(&state, &mut out);
        let mean: f64 = out[nn..].iter().sum::<f64>() / nn as f64;
        assert!(mean.abs() <= 1e-12);
        assert!(out[..nn].iter().all(|x| *x == 0.0));
    }

    #[test]
    fn undamped_eigenvalues_purely_imaginary() {
        for z in wave_eigenvalues(6, 0.0, 0.05, 15.0, 0.0, 0.0) {
            assert!(z.re.abs() <= 1e-10, "{z}");
        }
    }

    #[test]
    fn eigenvalues_satisfy_vieta() {
        let (n, b, a1, a2, d1, d2) = (6, 0.4, 0.05, 15.0, 0.1, 0.07);
        let eig = wave_eigenvalues(n, b, a1, a2, d1, d2);
        let hx = 1.0 / n as f64;
        let mut idx = 0;
        for j1 in 1..=n {
            for j2 in 1..=n {
                let s1 = (j1 as f64 * std::f64::consts::PI * hx).sin().powi(2);
                let s2 = (j2 as f64 * std::f64::consts::PI * hx).sin().powi(2);
                let alpha_a = 4.0 / (hx * hx) * (a1 * s1 + a2 * s2);
                let alpha_d = 4.0 / (hx * hx) * (d1 * s1 + d2 * s2);
                let (l1, l2) = (eig[idx], eig[idx + 1]);
                idx += 2;
                assert_relative_eq!((l1 * l2).re, alpha_a, max_relative = 1e-12);
                assert!((l1 * l2).im.abs() <= 1e-9 * alpha_a.max(1.0));
                assert_relative_eq!((l1 + l2).re, -(alpha_d + b), max_relative = 1e-12);
            }
        }
    }
}
