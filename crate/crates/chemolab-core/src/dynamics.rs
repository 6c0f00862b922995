//! Time integration of
//! rho_t = lap rho^m +/- div(rho grad c) + a rho^eta - b rho^alpha S(rho)
//! with S(rho) = INT rho^beta dx, adaptive explicit stepping on the radial
//! mesh, IMEX stepping on the periodic box, and blow-up detection.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{Field, Geometry};
use crate::math;
use crate::params::ModelParams;
use crate::potential::{face_gradient_radial, interaction_field_box};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Explicit Euler on the radial mesh (the default for sweeps).
    ExplicitRadial,
    /// Euler with the stiff linear part of the diffusion treated implicitly,
    /// on the periodic box.
    SemiImplicitBox,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::ExplicitRadial => "explicit_radial",
            Scheme::SemiImplicitBox => "semi_implicit_box",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub t_end: f64,
    pub dt_init: f64,
    /// Floor for the adaptive step; a step pinned here raises a flag.
    pub dt_min: f64,
    /// Safety factor in (0, 1] multiplying the stability bounds.
    pub cfl_safety: f64,
    /// Regularization of the diffusion flux: (rho+eps)^m - eps^m.
    pub eps: f64,
    /// Crossing this max-norm is blow-up evidence.
    pub blowup_linf_threshold: f64,
    pub scheme: Scheme,
    /// Sampling cadence for the norm series, in time units.
    pub cadence: f64,
    /// Exponents of the L^p norms recorded per sample.
    pub p_list: Vec<f64>,
    /// When set, each sample also records the functionals entering the
    /// L^p differential identity at this exponent.
    pub identity_p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigError {
    NonPositive { field: &'static str, value: f64 },
    DtMinNotBelowDtInit { dt_min: f64, dt_init: f64 },
    CflOutOfRange { value: f64 },
    NegativeEps { value: f64 },
    ThresholdNotAboveInitial { threshold: f64, initial_linf: f64 },
    SchemeGeometryMismatch { scheme: &'static str },
    InvalidNormExponent { value: f64 },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::NonPositive { field, value } => {
                write!(f, "NonPositive: solver.{field} = {value} must be > 0")
            }
            ConfigError::DtMinNotBelowDtInit { dt_min, dt_init } => {
                write!(f, "DtMinNotBelowDtInit: dt_min = {dt_min} must be < dt_init = {dt_init}")
            }
            ConfigError::CflOutOfRange { value } => {
                write!(f, "CflOutOfRange: cfl_safety = {value} must lie in (0, 1]")
            }
            ConfigError::NegativeEps { value } => {
                write!(f, "NegativeEps: eps = {value} must be >= 0")
            }
            ConfigError::ThresholdNotAboveInitial {
                threshold,
                initial_linf,
            } => write!(
                f,
                "ThresholdNotAboveInitial: blowup_linf_threshold = {threshold} must exceed the initial max-norm {initial_linf}"
            ),
            ConfigError::SchemeGeometryMismatch { scheme } => {
                write!(f, "SchemeGeometryMismatch: scheme {scheme} does not match the field geometry")
            }
            ConfigError::InvalidNormExponent { value } => {
                write!(f, "InvalidNormExponent: p = {value} must be >= 1")
            }
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, value) in [
            ("t_end", self.t_end),
            ("dt_init", self.dt_init),
            ("dt_min", self.dt_min),
            ("cadence", self.cadence),
            ("blowup_linf_threshold", self.blowup_linf_threshold),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(ConfigError::NonPositive { field, value });
            }
        }
        if self.dt_min >= self.dt_init {
            return Err(ConfigError::DtMinNotBelowDtInit {
                dt_min: self.dt_min,
                dt_init: self.dt_init,
            });
        }
        if self.cfl_safety.is_nan() || self.cfl_safety <= 0.0 || self.cfl_safety > 1.0 {
            return Err(ConfigError::CflOutOfRange {
                value: self.cfl_safety,
            });
        }
        if self.eps.is_nan() || self.eps < 0.0 {
            return Err(ConfigError::NegativeEps { value: self.eps });
        }
        for &p in self.p_list.iter().chain(self.identity_p.iter()) {
            if !p.is_finite() || p < 1.0 {
                return Err(ConfigError::InvalidNormExponent { value: p });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicsError {
    /// NaN or infinity appeared in the state; treated as blow-up evidence.
    NonFiniteState,
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::NonFiniteState => f.write_str("NonFiniteState"),
        }
    }
}

/// The interaction gradient the advection consumes: at mesh faces on the
/// radial mesh, cell-centered per axis on the box.
#[derive(Debug, Clone)]
pub enum InteractionGradient {
    RadialFaces(Vec<f64>),
    BoxCentered([Vec<f64>; 3]),
}

impl InteractionGradient {
    pub fn max_abs(&self) -> f64 {
        match self {
            InteractionGradient::RadialFaces(g) => {
                g.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
            }
            InteractionGradient::BoxCentered(axes) => axes
                .iter()
                .flat_map(|a| a.iter())
                .fold(0.0f64, |acc, &v| acc.max(v.abs())),
        }
    }
}

/// Gradient of the field driving the advection: the neutralized enclosed-mass
/// field radially (zero flux at r_max), the spectral solve on the box.
pub fn interaction_gradient(rho: &Field) -> InteractionGradient {
    match &rho.geometry {
        Geometry::Radial(_) => {
            InteractionGradient::RadialFaces(face_gradient_radial(rho, true).expect("radial"))
        }
        Geometry::Box(_) => {
            let solved = interaction_field_box(rho).expect("box");
            InteractionGradient::BoxCentered(solved.grad)
        }
    }
}

/// Pointwise source a rho^eta - b rho^alpha S with S = INT rho^beta dx
/// evaluated once per call with the geometry's quadrature weights.
pub fn reaction_term(rho: &Field, p: &ModelParams) -> Vec<f64> {
    let s = rho.integrate_pow(p.beta);
    rho.values
        .iter()
        .map(|&v| p.a * math::powf(v, p.eta) - p.b * math::powf(v, p.alpha) * s)
        .collect()
}

#[inline]
fn regularized_power(v: f64, m: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        math::powf(v, m)
    } else {
        math::powf(v + eps, m) - math::powf(eps, m)
    }
}

/// Discrete Laplacian of the regularized power (rho+eps)^m - eps^m:
/// conservative flux form (1/r^(n-1)) d_r (r^(n-1) d_r .) radially, the
/// 7-point stencil on the box. Zero flux at r_max.
pub fn diffusion_term(rho: &Field, m: f64, eps: f64) -> Vec<f64> {
    match &rho.geometry {
        Geometry::Radial(mesh) => {
            let n = mesh.cells;
            let phi: Vec<f64> = rho
                .values
                .iter()
                .map(|&v| regularized_power(v, m, eps))
                .collect();
            let mut out = vec![0.0; n];
            // face fluxes j = 1..n-1; boundary faces carry no flux
            let mut prev_flow = 0.0; // S_j * F_j at the inner face of cell i
            for i in 0..n {
                let next_flow = if i + 1 < n {
                    let grad = (phi[i + 1] - phi[i]) / mesh.spacing;
                    mesh.face_area(i + 1) * grad
                } else {
                    0.0
                };
                out[i] = (next_flow - prev_flow) / mesh.weight(i);
                prev_flow = next_flow;
            }
            out
        }
        Geometry::Box(grid) => {
            let npts = grid.points_per_axis;
            let phi: Vec<f64> = rho
                .values
                .iter()
                .map(|&v| regularized_power(v, m, eps))
                .collect();
            let inv_h2 = 1.0 / (grid.spacing * grid.spacing);
            let mut out = vec![0.0; phi.len()];
            for iz in 0..npts {
                let zm = (iz + npts - 1) % npts;
                let zp = (iz + 1) % npts;
                for iy in 0..npts {
                    let ym = (iy + npts - 1) % npts;
                    let yp = (iy + 1) % npts;
                    for ix in 0..npts {
                        let xm = (ix + npts - 1) % npts;
                        let xp = (ix + 1) % npts;
                        let c = phi[grid.idx(ix, iy, iz)];
                        let sum = phi[grid.idx(xm, iy, iz)]
                            + phi[grid.idx(xp, iy, iz)]
                            + phi[grid.idx(ix, ym, iz)]
                            + phi[grid.idx(ix, yp, iz)]
                            + phi[grid.idx(ix, iy, zm)]
                            + phi[grid.idx(ix, iy, zp)];
                        out[grid.idx(ix, iy, iz)] = (sum - 6.0 * c) * inv_h2;
                    }
                }
            }
            out
        }
    }
}

/// +/- div(rho grad c) in conservative flux form with face densities upwinded
/// against the actual transport velocity v = -sign * grad c. Attractive keeps
/// the plus sign (inward drift), repulsive the minus.
pub fn advection_term(
    rho: &Field,
    grad_c: &InteractionGradient,
    sign: crate::params::Sign,
) -> Vec<f64> {
    let sgn = sign.factor();
    match (&rho.geometry, grad_c) {
        (Geometry::Radial(mesh), InteractionGradient::RadialFaces(g)) => {
            let n = mesh.cells;
            assert_eq!(g.len(), n + 1);
            let mut out = vec![0.0; n];
            // mass flux v * rho_upwind through each interior face
            let mut prev_flow = 0.0;
            for i in 0..n {
                let next_flow = if i + 1 < n {
                    let v = -sgn * g[i + 1];
                    let upwind = if v > 0.0 { rho.values[i] } else { rho.values[i + 1] };
                    mesh.face_area(i + 1) * v * upwind
                } else {
                    0.0 // zero flux at r_max
                };
                // rho_t = -div(rho v)
                out[i] = -(next_flow - prev_flow) / mesh.weight(i);
                prev_flow = next_flow;
            }
            out
        }
        (Geometry::Box(grid), InteractionGradient::BoxCentered(axes)) => {
            let npts = grid.points_per_axis;
            let inv_h = 1.0 / grid.spacing;
            let mut out = vec![0.0; rho.values.len()];
            let shift = |i: usize, d: isize| -> usize {
                (i as isize + d).rem_euclid(npts as isize) as usize
            };
            for (axis, g) in axes.iter().enumerate() {
                for iz in 0..npts {
                    for iy in 0..npts {
                        for ix in 0..npts {
                            let here = grid.idx(ix, iy, iz);
                            // face between this cell and its +1 neighbor
                            let neigh = match axis {
                                0 => grid.idx(shift(ix, 1), iy, iz),
                                1 => grid.idx(ix, shift(iy, 1), iz),
                                _ => grid.idx(ix, iy, shift(iz, 1)),
                            };
                            let v_face = -sgn * 0.5 * (g[here] + g[neigh]);
                            let upwind = if v_face > 0.0 {
                                rho.values[here]
                            } else {
                                rho.values[neigh]
                            };
                            let flux = v_face * upwind;
                            out[here] -= flux * inv_h;
                            out[neigh] += flux * inv_h;
                        }
                    }
                }
            }
            out
        }
        _ => panic!("gradient layout does not match the field geometry"),
    }
}

fn diffusion_stiffness(rho: &Field, m: f64, eps: f64) -> f64 {
    // Lipschitz bound of the regularized flux: max over cells of
    // m (rho+eps)^(m-1); the extremizing cell is rho_max for m >= 1 and
    // rho_min for m < 1 (fast diffusion is stiffest near vacuum).
    let reference = if m >= 1.0 {
        rho.values.iter().fold(0.0f64, |acc, &v| acc.max(v))
    } else {
        rho.values.iter().fold(f64::INFINITY, |acc, &v| acc.min(v))
    };
    m * math::powf(reference + eps, m - 1.0)
}

fn spacing_of(rho: &Field) -> f64 {
    match &rho.geometry {
        Geometry::Radial(mesh) => mesh.spacing,
        Geometry::Box(grid) => grid.spacing,
    }
}

fn adapt_dt_inner(rho: &Field, grad_linf: f64, p: &ModelParams, cfg: &SolverConfig) -> f64 {
    let spacing = spacing_of(rho);
    let n = rho.geometry.dimension() as f64;
    let rho_max = rho.linf();
    let eps = cfg.eps;

    let d_max = diffusion_stiffness(rho, p.m, eps);
    let diffusion_bound = if d_max > 0.0 {
        spacing * spacing / (2.0 * n * d_max)
    } else {
        f64::INFINITY
    };
    let advection_bound = if grad_linf > 0.0 {
        spacing / grad_linf
    } else {
        f64::INFINITY
    };
    let s = rho.integrate_pow(p.beta);
    let reaction_rate = p.a * p.eta * math::powf(rho_max + eps, p.eta - 1.0)
        + p.b * (p.alpha + p.beta) * math::powf(rho_max + eps, p.alpha - 1.0) * s
        + 1e-30;
    let reaction_bound = 1.0 / reaction_rate;

    let dt = cfg.cfl_safety * diffusion_bound.min(advection_bound).min(reaction_bound);
    dt.max(cfg.dt_min)
}

/// Stability-limited step size: cfl_safety times the smallest of the explicit
/// diffusion bound spacing^2/(2n D), the advection bound spacing/||grad c||,
/// and the reaction bound; never below dt_min (hitting the floor flags the
/// step as pinned).
pub fn adapt_dt(rho: &Field, p: &ModelParams, cfg: &SolverConfig) -> f64 {
    let grad = interaction_gradient(rho);
    adapt_dt_inner(rho, grad.max_abs(), p, cfg)
}

pub struct StepResult {
    pub field: Field,
    /// Quadrature mass removed by clipping negative undershoots to zero.
    pub clipped_mass: f64,
}

fn assemble_and_clip(
    rho: &Field,
    dt: f64,
    diffusion: &[f64],
    advection: &[f64],
    reaction: &[f64],
) -> Result<StepResult, DynamicsError> {
    let mut values = Vec::with_capacity(rho.values.len());
    let mut clipped = 0.0;
    for i in 0..rho.values.len() {
        let mut v = rho.values[i] + dt * (diffusion[i] + advection[i] + reaction[i]);
        if !v.is_finite() {
            return Err(DynamicsError::NonFiniteState);
        }
        if v < 0.0 {
            clipped += rho.geometry.weight(i) * (-v);
            v = 0.0;
        }
        values.push(v);
    }
    Ok(StepResult {
        field: Field {
            geometry: rho.geometry.clone(),
            values,
        },
        clipped_mass: clipped,
    })
}

fn step_with_gradient(
    rho: &Field,
    grad: &InteractionGradient,
    p: &ModelParams,
    cfg: &SolverConfig,
    dt: f64,
) -> Result<StepResult, DynamicsError> {
    let reaction = reaction_term(rho, p);
    let advection = advection_term(rho, grad, p.sign);
    match cfg.scheme {
        Scheme::ExplicitRadial => {
            let diffusion = diffusion_term(rho, p.m, cfg.eps);
            assemble_and_clip(rho, dt, &diffusion, &advection, &reaction)
        }
        Scheme::SemiImplicitBox => {
            let grid = match &rho.geometry {
                Geometry::Box(g) => g.clone(),
                Geometry::Radial(_) => unreachable!("validated at run start"),
            };
            // Split the diffusion into a stiff linear part D_ref lap rho
            // (implicit, solved spectrally against the 7-point symbol) and
            // the explicit remainder lap(phi - D_ref rho).
            let d_ref = diffusion_stiffness(rho, p.m, cfg.eps);
            let mut shifted = rho.clone();
            for (s, &v) in shifted.values.iter_mut().zip(rho.values.iter()) {
                // phi(v) - d_ref v, fed through the same stencil
                *s = regularized_power(v, p.m, cfg.eps) - d_ref * v;
            }
            // reuse the box stencil via a linear pass: lap of the shifted values
            let remainder = {
                let tmp = Field {
                    geometry: rho.geometry.clone(),
                    values: shifted.values,
                };
                diffusion_linear_box(&tmp)
            };
            let mut staged = Vec::with_capacity(rho.values.len());
            for i in 0..rho.values.len() {
                let v = rho.values[i] + dt * (remainder[i] + advection[i] + reaction[i]);
                if !v.is_finite() {
                    return Err(DynamicsError::NonFiniteState);
                }
                staged.push(v);
            }
            let solved = implicit_diffusion_solve_box(&grid, &staged, dt * d_ref);
            let mut clipped = 0.0;
            let mut values = Vec::with_capacity(solved.len());
            for (i, v) in solved.into_iter().enumerate() {
                if !v.is_finite() {
                    return Err(DynamicsError::NonFiniteState);
                }
                let v = if v < 0.0 {
                    clipped += rho.geometry.weight(i) * (-v);
                    0.0
                } else {
                    v
                };
                values.push(v);
            }
            Ok(StepResult {
                field: Field {
                    geometry: rho.geometry.clone(),
                    values,
                },
                clipped_mass: clipped,
            })
        }
    }
}

/// Plain 7-point Laplacian of a box field (no regularization), used for the
/// explicit remainder of the IMEX split.
fn diffusion_linear_box(field: &Field) -> Vec<f64> {
    diffusion_term(field, 1.0, 0.0)
}

/// Solve (I - tau lap_h) u = rhs on the periodic box, where lap_h is the
/// 7-point stencil, by dividing by its Fourier symbol.
fn implicit_diffusion_solve_box(
    grid: &crate::geometry::BoxGrid,
    rhs: &[f64],
    tau: f64,
) -> Vec<f64> {
    use crate::fft::{fft3_inplace, mode_index, Complex};
    let n = grid.points_per_axis;
    let mut hat = vec![Complex::ZERO; rhs.len()];
    for (slot, &v) in hat.iter_mut().zip(rhs.iter()) {
        slot.re = v;
    }
    fft3_inplace(&mut hat, n, false);
    let h = grid.spacing;
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let mut sym = 0.0;
                for i in [ix, iy, iz] {
                    let theta = math::PI * mode_index(i, n) as f64 / n as f64;
                    let s = math::sin(theta);
                    sym += 4.0 * s * s / (h * h);
                }
                let denom = 1.0 + tau * sym;
                let idx = (iz * n + iy) * n + ix;
                hat[idx].re /= denom;
                hat[idx].im /= denom;
            }
        }
    }
    fft3_inplace(&mut hat, n, true);
    hat.iter().map(|c| c.re).collect()
}

/// One time step: explicit Euler update of all three terms (radial) or the
/// IMEX variant (box), with negative undershoots clipped to zero and the
/// clipped mass reported.
pub fn step(
    rho: &Field,
    p: &ModelParams,
    cfg: &SolverConfig,
    dt: f64,
) -> Result<StepResult, DynamicsError> {
    let grad = interaction_gradient(rho);
    step_with_gradient(rho, &grad, p, cfg, dt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    BlowUp,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::BlowUp => "blow_up",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Functionals entering the L^p differential identity, recorded per sample
/// when the solver is configured with an identity exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityFunctionals {
    /// INT rho^p
    pub int_pow_p: f64,
    /// INT |grad rho^((m+p-1)/2)|^2
    pub grad_power_sq: f64,
    /// INT rho^(p+alpha-1)
    pub int_pow_p_alpha: f64,
    /// INT rho^(p+eta-1)
    pub int_pow_p_eta: f64,
    /// INT rho^(p+1)
    pub int_pow_p_plus_1: f64,
}

/// One record of the norm series.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSample {
    pub t: f64,
    /// Step size in use when the sample was taken.
    pub dt: f64,
    pub mass: f64,
    pub linf: f64,
    /// L^p norms for the configured p-list, in order.
    pub lp: Vec<f64>,
    /// Neutralizing background mass / domain measure at this instant.
    pub rho_bar: f64,
    pub int_rho_eta: f64,
    pub int_rho_alpha: f64,
    pub int_rho_beta: f64,
    pub identity: Option<IdentityFunctionals>,
}

/// Quadrature of |grad rho^s|^2 with s = (m+p-1)/2, face-centered gradients.
fn grad_power_squared(rho: &Field, s: f64) -> f64 {
    match &rho.geometry {
        Geometry::Radial(mesh) => {
            let psi: Vec<f64> = rho.values.iter().map(|&v| math::powf(v, s)).collect();
            let mut acc = 0.0;
            for j in 1..mesh.cells {
                let g = (psi[j] - psi[j - 1]) / mesh.spacing;
                acc += mesh.face_area(j) * mesh.spacing * g * g;
            }
            acc
        }
        Geometry::Box(grid) => {
            let npts = grid.points_per_axis;
            let psi: Vec<f64> = rho.values.iter().map(|&v| math::powf(v, s)).collect();
            let inv_2h = 1.0 / (2.0 * grid.spacing);
            let vol = grid.cell_volume();
            let mut acc = 0.0;
            for iz in 0..npts {
                let zm = (iz + npts - 1) % npts;
                let zp = (iz + 1) % npts;
                for iy in 0..npts {
                    let ym = (iy + npts - 1) % npts;
                    let yp = (iy + 1) % npts;
                    for ix in 0..npts {
                        let xm = (ix + npts - 1) % npts;
                        let xp = (ix + 1) % npts;
                        let gx = (psi[grid.idx(xp, iy, iz)] - psi[grid.idx(xm, iy, iz)]) * inv_2h;
                        let gy = (psi[grid.idx(ix, yp, iz)] - psi[grid.idx(ix, ym, iz)]) * inv_2h;
                        let gz = (psi[grid.idx(ix, iy, zp)] - psi[grid.idx(ix, iy, zm)]) * inv_2h;
                        acc += vol * (gx * gx + gy * gy + gz * gz);
                    }
                }
            }
            acc
        }
    }
}

fn take_sample(rho: &Field, t: f64, dt: f64, p: &ModelParams, cfg: &SolverConfig) -> NormSample {
    let lp = cfg
        .p_list
        .iter()
        .map(|&pe| math::powf(rho.integrate_pow(pe), 1.0 / pe))
        .collect();
    let identity = cfg.identity_p.map(|pe| IdentityFunctionals {
        int_pow_p: rho.integrate_pow(pe),
        grad_power_sq: grad_power_squared(rho, (p.m + pe - 1.0) / 2.0),
        int_pow_p_alpha: rho.integrate_pow(pe + p.alpha - 1.0),
        int_pow_p_eta: rho.integrate_pow(pe + p.eta - 1.0),
        int_pow_p_plus_1: rho.integrate_pow(pe + 1.0),
    });
    let mass = rho.total_mass();
    let measure: f64 = (0..rho.geometry.cell_count())
        .map(|i| rho.geometry.weight(i))
        .sum();
    NormSample {
        t,
        dt,
        mass,
        linf: rho.linf(),
        lp,
        rho_bar: mass / measure,
        int_rho_eta: rho.integrate_pow(p.eta),
        int_rho_alpha: rho.integrate_pow(p.alpha),
        int_rho_beta: rho.integrate_pow(p.beta),
        identity,
    }
}

/// Result of one run: the verdict, the sampled norm series and the final state.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub params: ModelParams,
    pub verdict: Verdict,
    pub t_final: f64,
    pub step_count: u64,
    pub norm_series: Vec<NormSample>,
    pub final_field: Field,
    /// Total quadrature mass removed by nonnegativity clipping.
    pub clipped_mass: f64,
    /// Steps whose adaptive dt was pinned at dt_min.
    pub dt_pinned_steps: u64,
    /// Peak max-norm over the whole run.
    pub max_linf: f64,
    /// Mean density of the initial data over the truncated domain (the
    /// neutralizing background the interaction solve removes).
    pub rho_bar_initial: f64,
    /// Diffusion regularization in effect.
    pub eps: f64,
}

fn support_radius(rho: &Field, floor: f64) -> f64 {
    match &rho.geometry {
        Geometry::Radial(mesh) => {
            let mut radius = 0.0;
            for i in 0..mesh.cells {
                if rho.values[i] > floor {
                    radius = mesh.center(i);
                }
            }
            radius
        }
        Geometry::Box(_) => 0.0,
    }
}

/// Advance rho0 to t_end or until a blow-up trigger fires.
///
/// blow_up: the max-norm exceeds the configured threshold, the state goes
/// non-finite, or dt stays pinned at dt_min for 100 consecutive steps while
/// the max-norm keeps rising. bounded: t_end reached with the max-norm below
/// threshold throughout and a non-increasing tail over the last 10% of the
/// run. Everything else is inconclusive, including source-free runs whose
/// initially compact support grows to 0.9 r_max (the truncation is no longer
/// trustworthy there).
pub fn run(rho0: Field, p: &ModelParams, cfg: &SolverConfig) -> Result<RunOutcome, ConfigError> {
    cfg.validate()?;
    let initial_linf = rho0.linf();
    if cfg.blowup_linf_threshold <= initial_linf {
        return Err(ConfigError::ThresholdNotAboveInitial {
            threshold: cfg.blowup_linf_threshold,
            initial_linf,
        });
    }
    match (&rho0.geometry, cfg.scheme) {
        (Geometry::Radial(_), Scheme::ExplicitRadial) => {}
        (Geometry::Box(_), Scheme::SemiImplicitBox) => {}
        _ => {
            return Err(ConfigError::SchemeGeometryMismatch {
                scheme: cfg.scheme.as_str(),
            })
        }
    }

    let rho_bar_initial = rho0.mean_density();
    let support_floor = 1e-10 * initial_linf.max(1e-290);
    let initial_support = support_radius(&rho0, support_floor);

    let mut rho = rho0;
    let mut t = 0.0;
    let mut steps: u64 = 0;
    let mut clipped = 0.0;
    let mut pinned_total: u64 = 0;
    let mut pinned_run: u64 = 0;
    let mut pin_start_linf = initial_linf;
    let mut max_linf = initial_linf;
    let mut prev_dt = cfg.dt_init;
    let mut series = Vec::new();
    series.push(take_sample(&rho, t, cfg.dt_init, p, cfg));
    let mut next_sample = cfg.cadence;
    let mut verdict: Option<Verdict> = None;

    while t < cfg.t_end {
        let grad = interaction_gradient(&rho);
        let mut dt = adapt_dt_inner(&rho, grad.max_abs(), p, cfg);
        let pinned = dt <= cfg.dt_min;
        dt = dt.min(2.0 * prev_dt).min(cfg.t_end - t);
        if !pinned {
            dt = dt.max(cfg.dt_min);
        }

        match step_with_gradient(&rho, &grad, p, cfg, dt) {
            Ok(result) => {
                rho = result.field;
                clipped += result.clipped_mass;
            }
            Err(DynamicsError::NonFiniteState) => {
                verdict = Some(Verdict::BlowUp);
                break;
            }
        }
        t += dt;
        steps += 1;
        prev_dt = dt;

        let linf = rho.linf();
        max_linf = max_linf.max(linf);

        if pinned {
            if pinned_run == 0 {
                pin_start_linf = linf;
            }
            pinned_run += 1;
            pinned_total += 1;
        } else {
            pinned_run = 0;
        }

        if t >= next_sample || t >= cfg.t_end {
            series.push(take_sample(&rho, t, dt, p, cfg));
            while next_sample <= t {
                next_sample += cfg.cadence;
            }
        }

        if t < cfg.t_end {
            if linf > cfg.blowup_linf_threshold {
                verdict = Some(Verdict::BlowUp);
                break;
            }
            if pinned_run >= 100 && linf > pin_start_linf {
                verdict = Some(Verdict::BlowUp);
                break;
            }
        }
    }

    let verdict = verdict.unwrap_or_else(|| {
        // bounded: below threshold throughout and non-increasing tail
        if max_linf > cfg.blowup_linf_threshold {
            return Verdict::Inconclusive;
        }
        let tail_start = cfg.t_end * 0.9;
        let tail: Vec<f64> = series
            .iter()
            .filter(|s| s.t >= tail_start)
            .map(|s| s.linf)
            .collect();
        for w in tail.windows(2) {
            if w[1] > w[0] * (1.0 + 1e-9) {
                return Verdict::Inconclusive;
            }
        }
        // distrust source-free runs whose compact support hit the boundary
        if p.a == 0.0 {
            if let Geometry::Radial(mesh) = &rho.geometry {
                let floor = 1e-10 * max_linf.max(1e-290);
                let final_support = support_radius(&rho, floor);
                let limit = 0.9 * mesh.r_max;
                if initial_support < limit && final_support >= limit {
                    return Verdict::Inconclusive;
                }
            }
        }
        Verdict::Bounded
    });

    if verdict == Verdict::BlowUp {
        // terminal state recorded even between cadence points
        if series.last().map(|s| s.t) != Some(t) {
            series.push(take_sample(&rho, t, prev_dt, p, cfg));
        }
    }

    Ok(RunOutcome {
        params: *p,
        verdict,
        t_final: t,
        step_count: steps,
        norm_series: series,
        final_field: rho,
        clipped_mass: clipped,
        dt_pinned_steps: pinned_total,
        max_linf,
        rho_bar_initial,
        eps: cfg.eps,
    })
}
