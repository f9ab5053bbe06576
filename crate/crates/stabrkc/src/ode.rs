//! Split right-hand side and evaluation accounting.

/// Autonomous right-hand-side evaluator: writes f(y) into `out`.
pub type RhsFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// Spectral-radius provider for a Jacobian, evaluated at the current state.
pub type RadiusFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// How the spectral-radius providers behave, which drives how often the
/// adaptive loop refreshes them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMode {
    /// Cheap analytic bound; refreshed every accepted step.
    Analytic,
    /// Power-iteration estimate; refreshed every 25 accepted steps.
    Estimated,
}

/// An ODE y' = f_D(y) + f_A(y) with a moderately stiff part `f_D` and a
/// non-stiff part `f_A`, plus spectral-radius providers for both Jacobians.
///
/// Non-autonomous problems are wrapped by state augmentation before they
/// reach this type.
pub struct SplitOde {
    pub dim: usize,
    pub t0: f64,
    pub t_end: f64,
    pub y0: Vec<f64>,
    pub radius_mode: RadiusMode,
    f_d: Box<RhsFn>,
    f_a: Box<RhsFn>,
    rho_d: Box<RadiusFn>,
    rho_a: Box<RadiusFn>,
}

impl SplitOde {
    pub fn new(
        dim: usize,
        t0: f64,
        t_end: f64,
        y0: Vec<f64>,
        f_d: Box<RhsFn>,
        f_a: Box<RhsFn>,
        rho_d: Box<RadiusFn>,
        rho_a: Box<RadiusFn>,
    ) -> Self {
        assert_eq!(y0.len(), dim, "initial state length must equal dim");
        SplitOde {
            dim,
            t0,
            t_end,
            y0,
            radius_mode: RadiusMode::Analytic,
            f_d,
            f_a,
            rho_d,
            rho_a,
        }
    }

    pub fn with_radius_mode(mut self, mode: RadiusMode) -> Self {
        self.radius_mode = mode;
        self
    }

    #[inline]
    pub fn f_d(&self, y: &[f64], out: &mut [f64]) {
        (self.f_d)(y, out)
    }

    #[inline]
    pub fn f_a(&self, y: &[f64], out: &mut [f64]) {
        (self.f_a)(y, out)
    }

    pub fn rho_d(&self, y: &[f64]) -> f64 {
        (self.rho_d)(y)
    }

    pub fn rho_a(&self, y: &[f64]) -> f64 {
        (self.rho_a)(y)
    }
}

/// Step and evaluation counters, matching the per-step complexity table:
/// RKC (s, s), PRKC (s, 4), ARKC (s+2, 3), NPRKC (s, 4m), plus one extra
/// f_D evaluation per step when the first error estimator is active.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub n_accept: u64,
    pub n_reject: u64,
    pub nfd: u64,
    pub nfa: u64,
}

impl StepStats {
    pub fn new() -> Self {
        Self::default()
    }
}
