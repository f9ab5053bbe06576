//! Jacobian-free spectral-radius estimation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Estimate the dominant singular magnitude of df/dy at `y` by power
/// iteration on finite-difference directional derivatives, inflated by a
/// 1.05 safety factor. Deterministic for a fixed seed; returns 0 when the
/// field is locally zero (one re-seed is attempted first).
pub fn power_iteration_radius<F>(f: F, y: &[f64], iters: usize, seed: u64) -> f64
where
    F: Fn(&[f64], &mut [f64]),
{
    let iters = iters.max(5);
    let dim = y.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = l2(&v);
        if norm > 0.0 {
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
        v
    };

    let mut base = vec![0.0; dim];
    f(y, &mut base);
    let y_norm = l2(y);
    let eps = f64::EPSILON.sqrt() * (1.0 + y_norm);

    let mut v = draw(&mut rng);
    let mut perturbed = vec![0.0; dim];
    let mut fv = vec![0.0; dim];
    let mut ratios = Vec::with_capacity(iters);
    let mut reseeded = false;
    while ratios.len() < iters {
        for i in 0..dim {
            perturbed[i] = y[i] + eps * v[i];
        }
        f(&perturbed, &mut fv);
        for i in 0..dim {
            fv[i] = (fv[i] - base[i]) / eps;
        }
        let norm = l2(&fv);
        if norm <= 1e-300 || !norm.is_finite() {
            if reseeded {
                return 0.0;
            }
            reseeded = true;
            v = draw(&mut rng);
            continue;
        }
        for i in 0..dim {
            v[i] = fv[i] / norm;
        }
        ratios.push(norm);
    }
    // complex dominant pairs make the per-iteration ratio oscillate; the
    // max over the trailing half tracks the upper envelope
    let tail = &ratios[ratios.len() / 2..];
    1.05 * tail.iter().fold(0.0f64, |acc, x| acc.max(*x))
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
