//! Stabilized explicit Runge-Kutta-Chebyshev integrators for ODE systems
//! split into a moderately stiff part f_D and a non-stiff part f_A, as
//! they arise from method-of-lines PDE semi-discretization.
//!
//! The crate provides
//! - the classic RKC method plus three partitioned variants (PRKC, ARKC,
//!   and the s/m-flexible partitioned scheme NPRKC) with exact stability
//!   function evaluators for each,
//! - stability-region scanning and numerical certification of the NPRKC
//!   rectangle-coverage bound |R| <= 1 on [-0.65 s^2, 0] x [-2.15 m, 2.15 m],
//! - embedded error estimation and adaptive step control for NPRKC with
//!   automatic (s, m) selection from spectral-radius estimates,
//! - central-difference discretizations of five benchmark PDEs
//!   (advection-diffusion, damped wave, reaction-advection-diffusion, and
//!   Burgers in 1-D/2-D), and
//! - a fixed-step high-order reference integrator and a CLI harness
//!   (`region`, `bench`, `convergence`, `integrate`) emitting CSV/JSON.

pub mod adaptive;
pub mod chebyshev;
pub mod error;
pub mod harness;
pub mod methods;
pub mod ode;
pub mod problems;
pub mod reference;
pub mod stability;

pub use error::{Error, Result};
pub use ode::{RadiusMode, SplitOde, StepStats};
