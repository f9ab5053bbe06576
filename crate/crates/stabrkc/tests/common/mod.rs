//! Shared helpers for the integration suites: independent oracles and
//! small utilities kept deliberately separate from the library code paths
//! they check.

use num_complex::Complex64;
use stabrkc::SplitOde;

/// Exact solution of the semi-discrete periodic advection-diffusion system
/// at time `t`, by plain O(N^2) discrete Fourier diagonalization of the
/// circulant operator. Independent of the integrators and of the
/// eigenvalue helper in the library.
pub fn exact_ad1d(n: usize, a: f64, d: f64, t: f64, w0: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    let hx = 1.0 / nf;
    let tau = 2.0 * std::f64::consts::PI / nf;
    // forward DFT
    let mut what = vec![Complex64::new(0.0, 0.0); n];
    for (k, wk) in what.iter_mut().enumerate() {
        for (j, &w) in w0.iter().enumerate() {
            *wk += w * Complex64::new(0.0, -tau * (k * j) as f64).exp();
        }
    }
    // propagate each mode: the stencil applied to e^{i tau k j} gives
    // 2D/h^2 (cos(tau k) - 1) - i (A/h) sin(tau k)
    for (k, wk) in what.iter_mut().enumerate() {
        let th = tau * k as f64;
        let lambda = Complex64::new(
            2.0 * d / (hx * hx) * (th.cos() - 1.0),
            -(a / hx) * th.sin(),
        );
        *wk *= (lambda * t).exp();
    }
    // inverse DFT, real part
    (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, wk) in what.iter().enumerate() {
                acc += wk * Complex64::new(0.0, tau * (k * j) as f64).exp();
            }
            acc.re / nf
        })
        .collect()
}

/// Least-squares slope of y against x.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

pub fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (s / a.len() as f64).sqrt()
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        num = num.max((x - y).abs());
        den = den.max(x.abs().max(y.abs()));
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// The scalar split test equation y' = (p/h) y + i (q/h) y realized as a
/// 2-dimensional real system (complex multiplication as rotation), so the
/// real-vector steppers can be compared against the complex stability
/// functions: starting from (1, 0), one step of size `h` lands on
/// (Re R, Im R).
pub fn rotation_split_ode(p: f64, q: f64, h: f64) -> SplitOde {
    let lam_d = p / h;
    let lam_a = q / h;
    SplitOde::new(
        2,
        0.0,
        h,
        vec![1.0, 0.0],
        Box::new(move |y, out| {
            out[0] = lam_d * y[0];
            out[1] = lam_d * y[1];
        }),
        Box::new(move |y, out| {
            out[0] = -lam_a * y[1];
            out[1] = lam_a * y[0];
        }),
        Box::new(move |_| lam_d.abs()),
        Box::new(move |_| lam_a.abs()),
    )
}

/// Exact solution of a dense linear system y' = M y at time t via scaling
/// and squaring with a Taylor core (test-only oracle; dimensions <= 16).
pub fn expm_apply(m: &[Vec<f64>], y0: &[f64], t: f64) -> Vec<f64> {
    let dim = y0.len();
    let norm: f64 = m
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = ((norm * t.abs()).log2().ceil().max(0.0)) as u32 + 4;
    let scale = t / 2.0f64.powi(squarings as i32);

    // Taylor series of exp(scale * M)
    let mut e = vec![vec![0.0; dim]; dim];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut term = e.clone();
    for order in 1..=20 {
        let mut next = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for l in 0..dim {
                let c = term[i][l] * scale / order as f64;
                if c != 0.0 {
                    for j in 0..dim {
                        next[i][j] += c * m[l][j];
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                e[i][j] += next[i][j];
            }
        }
        term = next;
    }
    // repeated squaring
    for _ in 0..squarings {
        let mut sq = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for l in 0..dim {
                let c = e[i][l];
                if c != 0.0 {
                    for j in 0..dim {
                        sq[i][j] += c * e[l][j];
                    }
                }
            }
        }
        e = sq;
    }
    (0..dim)
        .map(|i| (0..dim).map(|j| e[i][j] * y0[j]).sum())
        .collect()
}
