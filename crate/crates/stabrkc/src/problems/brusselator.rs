//! 2-D two-species reaction-advection-diffusion system with periodic
//! boundary (the Brusselator reaction with skewed advection):
//! w_t  = D (w_xx + w_yy)  + A (-0.5 w_x + w_y)  + w^2 wh - 2 w + 1.3
//! wh_t = D (wh_xx + wh_yy) + A (0.4 wh_x + 0.7 wh_y) + w - w^2 wh

use std::sync::Arc;

use crate::error::Result;
use crate::ode::{RadiusMode, SplitOde};

use super::{check_n, power_iteration_radius};

fn periodic_lap(u: &[f64], n: usize, inv_h2: f64, out: &mut [f64]) {
    for i in 0..n {
        let im = (i + n - 1) % n;
        let ip = (i + 1) % n;
        for j in 0..n {
            let jm = (j + n - 1) % n;
            let jp = (j + 1) % n;
            out[i * n + j] = inv_h2
                * (u[im * n + j] + u[ip * n + j] + u[i * n + jm] + u[i * n + jp]
                    - 4.0 * u[i * n + j]);
        }
    }
}

fn periodic_dx(u: &[f64], n: usize, inv_2h: f64, out: &mut [f64]) {
    for i in 0..n {
        let im = (i + n - 1) % n;
        let ip = (i + 1) % n;
        for j in 0..n {
            out[i * n + j] = inv_2h * (u[ip * n + j] - u[im * n + j]);
        }
    }
}

fn periodic_dy(u: &[f64], n: usize, inv_2h: f64, out: &mut [f64]) {
    for i in 0..n {
        for j in 0..n {
            let jm = (j + n - 1) % n;
            let jp = (j + 1) % n;
            out[i * n + j] = inv_2h * (u[i * n + jp] - u[i * n + jm]);
        }
    }
}

/// Two-species state of dimension 2 N^2 laid out as (w, wh); f_D carries
/// the diffusion of both species, f_A the advection plus reaction. With
/// `analytic_rho_a` the coarse sup-norm bound replaces power iteration.
pub fn brusselator_2d(n: usize, a: f64, d: f64, analytic_rho_a: bool) -> Result<SplitOde> {
    check_n(n)?;
    let hx = 1.0 / n as f64;
    let nn = n * n;
    let mut y0 = vec![0.0; 2 * nn];
    for i in 0..n {
        let x = (i + 1) as f64 * hx;
        for j in 0..n {
            let y = (j + 1) as f64 * hx;
            y0[i * n + j] = 22.0 * y * (1.0 - y).max(0.0).powf(1.5);
            y0[nn + i * n + j] = 22.0 * x * (1.0 - x).max(0.0).powf(1.5);
        }
    }

    let inv_h2 = (n * n) as f64;
    let f_d = move |state: &[f64], out: &mut [f64]| {
        periodic_lap(&state[..nn], n, inv_h2, &mut out[..nn]);
        periodic_lap(&state[nn..], n, inv_h2, &mut out[nn..]);
        for x in out.iter_mut() {
            *x *= d;
        }
    };

    let inv_2h = 0.5 * n as f64;
    let f_a: Arc<crate::ode::RhsFn> = Arc::new(move |state: &[f64], out: &mut [f64]| {
        let w = &state[..nn];
        let wh = &state[nn..];
        let mut dx = vec![0.0; nn];
        let mut dy = vec![0.0; nn];
        periodic_dx(w, n, inv_2h, &mut dx);
        periodic_dy(w, n, inv_2h, &mut dy);
        for k in 0..nn {
            let reaction = w[k] * w[k] * wh[k] - 2.0 * w[k] + 1.3;
            out[k] = a * (-0.5 * dx[k] + dy[k]) + reaction;
        }
        periodic_dx(wh, n, inv_2h, &mut dx);
        periodic_dy(wh, n, inv_2h, &mut dy);
        for k in 0..nn {
            let reaction = w[k] - w[k] * w[k] * wh[k];
            out[nn + k] = a * (0.4 * dx[k] + 0.7 * dy[k]) + reaction;
        }
    });

    let rho_d = 8.0 * d.abs() * (n * n) as f64;
    let f_a_ode = f_a.clone();
    let rho_a: Box<crate::ode::RadiusFn> = if analytic_rho_a {
        // advection row bound plus reaction-Jacobian row sums
        Box::new(move |state: &[f64]| {
            let w = &state[..nn];
            let wh = &state[nn..];
            let mut reaction = 0.0f64;
            for k in 0..nn {
                let r1 = (2.0 * w[k] * wh[k] - 2.0).abs() + w[k] * w[k];
                let r2 = (1.0 - 2.0 * w[k] * wh[k]).abs() + w[k] * w[k];
                reaction = reaction.max(r1.max(r2));
            }
            a.abs() * n as f64 * 1.5 + reaction
        })
    } else {
        Box::new(move |state: &[f64]| power_iteration_radius(|v, out| f_a(v, out), state, 12, 0x5eed))
    };

    Ok(SplitOde::new(
        2 * nn,
        0.0,
        1.0,
        y0,
        Box::new(f_d),
        Box::new(move |y, out| f_a_ode(y, out)),
        Box::new(move |_| rho_d),
        rho_a,
    )
    .with_radius_mode(if analytic_rho_a { RadiusMode::Analytic } else { RadiusMode::Estimated }))
}
