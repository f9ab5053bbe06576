//! Viscous Burgers equations with periodic boundary, in one and two space
//! dimensions, with the advection kept in non-conservative central form
//! A w w_x (matching the PDE as written, not a flux discretization).

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::Result;
use crate::ode::{RadiusMode, SplitOde};

use super::{check_n, power_iteration_radius};

/// w_t = D w_xx + A w w_x on N periodic nodes, w_0 = 1 + cos(2 pi x).
pub fn burgers_1d(n: usize, a: f64, d: f64, analytic_rho_a: bool) -> Result<SplitOde> {
    check_n(n)?;
    let hx = 1.0 / n as f64;
    let y0: Vec<f64> = (0..n).map(|j| 1.0 + (2.0 * PI * (j + 1) as f64 * hx).cos()).collect();

    let diff = d / (hx * hx);
    let f_d = move |w: &[f64], out: &mut [f64]| {
        let n = w.len();
        for j in 0..n {
            out[j] = diff * (w[(j + n - 1) % n] - 2.0 * w[j] + w[(j + 1) % n]);
        }
    };

    let inv_2h = 0.5 * n as f64;
    let f_a: Arc<crate::ode::RhsFn> = Arc::new(move |w: &[f64], out: &mut [f64]| {
        let n = w.len();
        for j in 0..n {
            out[j] = a * w[j] * inv_2h * (w[(j + 1) % n] - w[(j + n - 1) % n]);
        }
    });

    let rho_d = 4.0 * d.abs() * (n * n) as f64;
    let f_a_ode = f_a.clone();
    let rho_a: Box<crate::ode::RadiusFn> = if analytic_rho_a {
        Box::new(move |w: &[f64]| {
            let wmax = w.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            a.abs() * wmax * n as f64 * 1.5
        })
    } else {
        Box::new(move |w: &[f64]| power_iteration_radius(|v, out| f_a(v, out), w, 12, 0x5eed))
    };

    Ok(SplitOde::new(
        n,
        0.0,
        0.5,
        y0,
        Box::new(f_d),
        Box::new(move |y, out| f_a_ode(y, out)),
        Box::new(move |_| rho_d),
        rho_a,
    )
    .with_radius_mode(if analytic_rho_a { RadiusMode::Analytic } else { RadiusMode::Estimated }))
}

/// Coupled 2-D Burgers system of dimension 2 N^2 with state (w, wh):
/// w_t  = D lap w  + A (w w_x + wh w_y)
/// wh_t = D lap wh + A (w wh_x + wh wh_y)
pub fn burgers_2d(n: usize, a: f64, d: f64, analytic_rho_a: bool) -> Result<SplitOde> {
    check_n(n)?;
    let hx = 1.0 / n as f64;
    let nn = n * n;
    let mut y0 = vec![0.0; 2 * nn];
    for i in 0..n {
        let x = (i + 1) as f64 * hx;
        for j in 0..n {
            let y = (j + 1) as f64 * hx;
            y0[i * n + j] = 1.0 + (2.0 * PI * x).cos() * (2.0 * PI * y).cos();
            y0[nn + i * n + j] = 1.0 + (2.0 * PI * x).sin() * (2.0 * PI * y).sin();
        }
    }

    let inv_h2 = d * (n * n) as f64;
    let f_d = move |state: &[f64], out: &mut [f64]| {
        for (u, o) in [(&state[..nn], 0usize), (&state[nn..], nn)] {
            for i in 0..n {
                let im = (i + n - 1) % n;
                let ip = (i + 1) % n;
                for j in 0..n {
                    let jm = (j + n - 1) % n;
                    let jp = (j + 1) % n;
                    out[o + i * n + j] = inv_h2
                        * (u[im * n + j] + u[ip * n + j] + u[i * n + jm] + u[i * n + jp]
                            - 4.0 * u[i * n + j]);
                }
            }
        }
    };

    let inv_2h = 0.5 * n as f64;
    let f_a: Arc<crate::ode::RhsFn> = Arc::new(move |state: &[f64], out: &mut [f64]| {
        let w = &state[..nn];
        let wh = &state[nn..];
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            for j in 0..n {
                let jm = (j + n - 1) % n;
                let jp = (j + 1) % n;
                let k = i * n + j;
                let w_x = inv_2h * (w[ip * n + j] - w[im * n + j]);
                let w_y = inv_2h * (w[i * n + jp] - w[i * n + jm]);
                let wh_x = inv_2h * (wh[ip * n + j] - wh[im * n + j]);
                let wh_y = inv_2h * (wh[i * n + jp] - wh[i * n + jm]);
                out[k] = a * (w[k] * w_x + wh[k] * w_y);
                out[nn + k] = a * (w[k] * wh_x + wh[k] * wh_y);
            }
        }
    });

    let rho_d = 8.0 * d.abs() * (n * n) as f64;
    let f_a_ode = f_a.clone();
    let rho_a: Box<crate::ode::RadiusFn> = if analytic_rho_a {
        Box::new(move |state: &[f64]| {
            let wmax = state.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            2.0 * a.abs() * wmax * n as f64 * 1.5
        })
    } else {
        Box::new(move |state: &[f64]| power_iteration_radius(|v, out| f_a(v, out), state, 12, 0x5eed))
    };

    Ok(SplitOde::new(
        2 * nn,
        0.0,
        0.5,
        y0,
        Box::new(f_d),
        Box::new(move |y, out| f_a_ode(y, out)),
        Box::new(move |_| rho_d),
        rho_a,
    )
    .with_radius_mode(if analytic_rho_a { RadiusMode::Analytic } else { RadiusMode::Estimated }))
}
