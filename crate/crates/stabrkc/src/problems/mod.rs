//! Second-order central-difference semi-discretizations of the benchmark
//! PDEs, with analytic spectral-radius bounds where available and a
//! power-iteration fallback for the nonlinear advection terms.
//!
//! Grid conventions: periodic problems place nodes at x_j = j / N
//! (j = 1..N); zero-flux problems use cell centers x_j = (j - 1/2) / N
//! with mirrored ghost cells, which keeps the Neumann condition second
//! order. Both keep N points per axis and spacing 1/N.

mod advection_diffusion;
mod brusselator;
mod burgers;
mod damped_wave;
mod spectral;

pub use advection_diffusion::{ad_eigenvalues, advection_diffusion_1d};
pub use brusselator::brusselator_2d;
pub use burgers::{burgers_1d, burgers_2d};
pub use damped_wave::{damped_wave_2d, example1_wave, wave_eigenvalues};
pub use spectral::power_iteration_radius;

use crate::error::{Error, Result};
use crate::ode::SplitOde;

/// Boundary handling of a discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    ZeroFlux,
}

/// Uniform grid with N points per axis and spacing 1/N.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub dims: usize,
    pub n: usize,
    pub h_x: f64,
    pub boundary: Boundary,
}

impl Grid {
    pub fn new(dims: usize, n: usize, boundary: Boundary) -> Result<Self> {
        if !(dims == 1 || dims == 2) {
            return Err(Error::InvalidParameter("grid dims must be 1 or 2".into()));
        }
        check_n(n)?;
        Ok(Grid { dims, n, h_x: 1.0 / n as f64, boundary })
    }

    /// Coordinate of point `j` (0-based storage index) along one axis.
    pub fn coord(&self, j: usize) -> f64 {
        match self.boundary {
            Boundary::Periodic => (j + 1) as f64 * self.h_x,
            Boundary::ZeroFlux => (j as f64 + 0.5) * self.h_x,
        }
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("grid needs N >= 3, got {n}")));
    }
    Ok(())
}

/// Problem selection by string id with the parameter slots the CLI and the
/// benchmark bindings share. Fields that do not apply to a given id are
/// ignored by `build`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProblemSpec {
    pub id: String,
    pub n: usize,
    pub a: f64,
    pub d: f64,
    pub b: f64,
    pub a1: f64,
    pub a2: f64,
    /// Use the coarse analytic rho_A bound for the nonlinear problems
    /// instead of power iteration.
    pub analytic_rho_a: bool,
    pub t_end: f64,
}

impl ProblemSpec {
    pub fn new(id: &str, n: usize) -> Self {
        ProblemSpec {
            id: id.to_string(),
            n,
            a: 0.0,
            d: 1.0,
            b: 0.0,
            a1: 0.05,
            a2: 15.0,
            analytic_rho_a: false,
            t_end: 0.1,
        }
    }

    pub fn build(&self) -> Result<SplitOde> {
        let mut ode = match self.id.as_str() {
            "ad1d" => advection_diffusion_1d(self.n, self.a, self.d)?,
            "wave2d" => example1_wave(self.n, self.b, self.a1, self.a2)?,
            "brusselator2d" => brusselator_2d(self.n, self.a, self.d, self.analytic_rho_a)?,
            "burgers1d" => burgers_1d(self.n, self.a, self.d, self.analytic_rho_a)?,
            "burgers2d" => burgers_2d(self.n, self.a, self.d, self.analytic_rho_a)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown problem id `{other}` (expected ad1d, wave2d, brusselator2d, burgers1d, burgers2d)"
                )))
            }
        };
        ode.t_end = self.t_end;
        Ok(ode)
    }
}
