//! 1-D linear advection-diffusion with periodic boundary:
//! w_t + A w_x = D w_xx, discretized by second-order central differences.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::ode::{RadiusMode, SplitOde};

use super::check_n;

/// Semi-discretized advection-diffusion problem on N periodic nodes with
/// w_0(x) = sin(2 pi x). f_D is the diffusion stencil, f_A the advection
/// stencil; the radius providers return the exact bounds 4|D|N^2 and |A|N.
pub fn advection_diffusion_1d(n: usize, a: f64, d: f64) -> Result<SplitOde> {
    check_n(n)?;
    let hx = 1.0 / n as f64;
    let y0: Vec<f64> = (0..n).map(|j| (2.0 * PI * (j + 1) as f64 * hx).sin()).collect();

    let diff = d / (hx * hx);
    let adv = a / (2.0 * hx);
    let f_d = move |w: &[f64], out: &mut [f64]| {
        let n = w.len();
        for j in 0..n {
            let wm = w[(j + n - 1) % n];
            let wp = w[(j + 1) % n];
            out[j] = diff * (wm - 2.0 * w[j] + wp);
        }
    };
    let f_a = move |w: &[f64], out: &mut [f64]| {
        let n = w.len();
        for j in 0..n {
            let wm = w[(j + n - 1) % n];
            let wp = w[(j + 1) % n];
            out[j] = adv * (wm - wp);
        }
    };

    let rho_d = 4.0 * d.abs() * (n * n) as f64;
    let rho_a = a.abs() * n as f64;
    Ok(SplitOde::new(
        n,
        0.0,
        0.1,
        y0,
        Box::new(f_d),
        Box::new(f_a),
        Box::new(move |_| rho_d),
        Box::new(move |_| rho_a),
    )
    .with_radius_mode(RadiusMode::Analytic))
}

/// Eigenvalues of the semi-discrete operator:
/// lambda_k = (2D/h^2)(cos(2 k pi h) - 1) - i (A/h) sin(2 k pi h), k = 1..N.
pub fn ad_eigenvalues(n: usize, a: f64, d: f64) -> Vec<Complex64> {
    let hx = 1.0 / n as f64;
    (1..=n)
        .map(|k| {
            let th = 2.0 * k as f64 * PI * hx;
            Complex64::new(2.0 * d / (hx * hx) * (th.cos() - 1.0), -(a / hx) * th.sin())
        })
        .collect()
}
