//! Core kernels for a chemotaxis simulation laboratory.
//!
//! The model is the Cauchy problem
//!
//! ```text
//! rho_t = div grad rho^m  +/-  div(rho grad(U * rho)) + a rho^eta - b rho^alpha INT rho^beta dx
//! ```
//!
//! on R^n (n >= 3) with the Newtonian kernel U(x) = |x|^(2-n)/(2-n), truncated
//! to either a periodic box (spectral Poisson solve) or a radial ball
//! (enclosed-mass field). The crate provides:
//!
//! * [`hypothesis`] — every closed-form quantity of the boundedness theory:
//!   the Sobolev exponent l = 2n/(n-2), the (H1)/(H2) thresholds on
//!   alpha+beta, the critical test exponent p-bar, the Lambda ratios, the
//!   Gagliardo–Nirenberg interpolation exponents, the dissipation coefficient
//!   c1, and the Moser iteration tables;
//! * [`potential`] — the interaction field U * rho and its gradient on both
//!   geometries, honoring div grad (U * rho) = n alpha_n rho;
//! * [`dynamics`] — adaptive explicit (radial) / IMEX (box) time integration
//!   with blow-up detection;
//! * [`diagnostics`] — norm functionals, integral-identity residuals, verdict
//!   classification against the theory, and parameter-sweep atlases.
//!
//! The crate is `no_std` (alloc required); all float math goes through libm.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod dynamics;
pub(crate) mod fft;
pub mod geometry;
pub mod hypothesis;
pub(crate) mod math;
pub mod params;
pub mod potential;
pub mod rng;

pub use diagnostics::{classify, lp_norm, Consistency, IdentityResidual, SweepAtlas};
pub use dynamics::{run, RunOutcome, SolverConfig, Verdict};
pub use geometry::{BoxGrid, Field, Geometry, RadialMesh};
pub use hypothesis::{check_hypothesis, HypothesisReport};
pub use params::{ModelParams, Sign};
