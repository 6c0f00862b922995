//! The Newtonian interaction field c = U * rho and its gradient.
//!
//! On the periodic box the field solves the discrete Poisson problem
//! lap c = n alpha_n (rho - mean rho) spectrally (the mean must be removed
//! for periodic solvability, equivalent to a uniform neutralizing
//! background); on the radial mesh the gradient is the enclosed-mass field
//! d_r c = M(r) / r^(n-1), exact far-field by construction.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fft::{fft3_inplace, mode_index, Complex};
use crate::geometry::{BoxGrid, Field, Geometry, RadialMesh};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialError {
    DimensionTooLow { n: u32 },
    /// U(x) = |x|^(2-n)/(2-n) is singular at the origin.
    SingularityAtOrigin,
    /// The spectral solver requires the box geometry.
    GeometryMismatch { expected: &'static str },
}

impl fmt::Display for PotentialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialError::DimensionTooLow { n } => {
                write!(f, "DimensionTooLow: n = {n}, but n >= 3 is required")
            }
            PotentialError::SingularityAtOrigin => {
                write!(f, "SingularityAtOrigin: |x| must be positive")
            }
            PotentialError::GeometryMismatch { expected } => {
                write!(f, "GeometryMismatch: operation requires the {expected} geometry")
            }
        }
    }
}

/// Volume alpha_n = pi^(n/2) / Gamma(n/2 + 1) of the n-dimensional unit ball.
pub fn unit_ball_volume(n: u32) -> Result<f64, PotentialError> {
    if n < 3 {
        return Err(PotentialError::DimensionTooLow { n });
    }
    Ok(math::powf(math::PI, n as f64 / 2.0) / math::gamma_half_plus_one(n))
}

/// Kernel value U(x) = |x|^(2-n) / (2-n); negative for every x != 0.
pub fn potential_value(x_norm: f64, n: u32) -> Result<f64, PotentialError> {
    if n < 3 {
        return Err(PotentialError::DimensionTooLow { n });
    }
    if x_norm == 0.0 {
        return Err(PotentialError::SingularityAtOrigin);
    }
    let exponent = 2.0 - n as f64;
    Ok(math::powf(x_norm, exponent) / exponent)
}

/// Interaction field on the periodic box: the zero-mean potential and its
/// spectral gradient, one component per axis, all cell-centered.
#[derive(Debug, Clone)]
pub struct BoxInteraction {
    pub potential: Vec<f64>,
    pub grad: [Vec<f64>; 3],
    /// Box mean of rho, removed from the source (recorded for audit).
    pub rho_mean: f64,
}

/// Solve lap c = n alpha_n (rho - mean rho) on the periodic box with zero
/// mean, inverting the exact spectral symbol -|k|^2, and return c with its
/// spectral gradient. The Nyquist mode is dropped from the gradient (its
/// first derivative has no consistent sign on a real grid).
pub fn interaction_field_box(rho: &Field) -> Result<BoxInteraction, PotentialError> {
    let grid = match &rho.geometry {
        Geometry::Box(g) => g,
        Geometry::Radial(_) => {
            return Err(PotentialError::GeometryMismatch { expected: "box" })
        }
    };
    let n = grid.points_per_axis;
    let total = grid.cell_count();
    let alpha_n = unit_ball_volume(grid.n)?;
    let source_scale = grid.n as f64 * alpha_n;

    let mut hat = vec![Complex::ZERO; total];
    for (slot, &v) in hat.iter_mut().zip(rho.values.iter()) {
        slot.re = v;
    }
    fft3_inplace(&mut hat, n, false);

    let k_unit = math::PI / grid.extent; // 2 pi / (2 extent)
    let mut pot_hat = vec![Complex::ZERO; total];
    for iz in 0..n {
        let kz = mode_index(iz, n) as f64 * k_unit;
        for iy in 0..n {
            let ky = mode_index(iy, n) as f64 * k_unit;
            for ix in 0..n {
                let kx = mode_index(ix, n) as f64 * k_unit;
                let k2 = kx * kx + ky * ky + kz * kz;
                let idx = (iz * n + iy) * n + ix;
                if k2 > 0.0 {
                    let s = -source_scale / k2;
                    pot_hat[idx] = Complex::new(hat[idx].re * s, hat[idx].im * s);
                }
                // k = 0: zero-mean potential, mean source removed.
            }
        }
    }

    let mut grad = [vec![0.0; total], vec![0.0; total], vec![0.0; total]];
    for (axis, grad_axis) in grad.iter_mut().enumerate() {
        let mut g_hat = vec![Complex::ZERO; total];
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let idx = (iz * n + iy) * n + ix;
                    let (i_axis, n_axis) = match axis {
                        0 => (ix, n),
                        1 => (iy, n),
                        _ => (iz, n),
                    };
                    let mode = mode_index(i_axis, n_axis);
                    if 2 * (i_axis) == n_axis {
                        continue; // Nyquist: derivative multiplier 0
                    }
                    let k = mode as f64 * k_unit;
                    let c = pot_hat[idx];
                    // i k * c
                    g_hat[idx] = Complex::new(-k * c.im, k * c.re);
                }
            }
        }
        fft3_inplace(&mut g_hat, n, true);
        for (out, v) in grad_axis.iter_mut().zip(g_hat.iter()) {
            *out = v.re;
        }
    }

    let mut potential = vec![0.0; total];
    fft3_inplace(&mut pot_hat, n, true);
    for (out, v) in potential.iter_mut().zip(pot_hat.iter()) {
        *out = v.re;
    }

    Ok(BoxInteraction {
        potential,
        grad,
        rho_mean: rho.mean_density(),
    })
}

/// Apply the solver's discrete Laplacian (the spectral symbol -|k|^2) to a
/// cell-centered box scalar. Used to verify the Poisson residual.
pub fn spectral_laplacian_box(grid: &BoxGrid, values: &[f64]) -> Vec<f64> {
    let n = grid.points_per_axis;
    let total = grid.cell_count();
    assert_eq!(values.len(), total);
    let mut hat = vec![Complex::ZERO; total];
    for (slot, &v) in hat.iter_mut().zip(values.iter()) {
        slot.re = v;
    }
    fft3_inplace(&mut hat, n, false);
    let k_unit = math::PI / grid.extent;
    for iz in 0..n {
        let kz = mode_index(iz, n) as f64 * k_unit;
        for iy in 0..n {
            let ky = mode_index(iy, n) as f64 * k_unit;
            for ix in 0..n {
                let kx = mode_index(ix, n) as f64 * k_unit;
                let k2 = kx * kx + ky * ky + kz * kz;
                let idx = (iz * n + iy) * n + ix;
                hat[idx].re *= -k2;
                hat[idx].im *= -k2;
            }
        }
    }
    fft3_inplace(&mut hat, n, true);
    hat.iter().map(|c| c.re).collect()
}

/// Cumulative mass inside radius r on the mesh: whole shells below the
/// containing cell plus its pro-rated partial shell (exact for piecewise-
/// constant densities).
fn enclosed_mass_at(mesh: &RadialMesh, values: &[f64], r: f64) -> f64 {
    let alpha_n = unit_ball_volume(mesh.n).expect("validated");
    let cell = ((r / mesh.spacing) as usize).min(mesh.cells - 1);
    let mut mass = 0.0;
    for (i, &v) in values.iter().enumerate().take(cell) {
        mass += mesh.weight(i) * v;
    }
    let inner = mesh.face(cell);
    mass += values[cell] * alpha_n * (math::powi(r, mesh.n) - math::powi(inner, mesh.n));
    mass
}

/// Radial gradient of the interaction field at cell centers:
/// d_r c(r_i) = M(r_i) / r_i^(n-1) with M the cumulative mass. Nonnegative
/// whenever rho >= 0. The attractive dynamics applies the field as given;
/// the repulsive case negates it at the dynamics layer.
pub fn interaction_gradient_radial(rho: &Field) -> Result<Vec<f64>, PotentialError> {
    let mesh = match &rho.geometry {
        Geometry::Radial(m) => m,
        Geometry::Box(_) => {
            return Err(PotentialError::GeometryMismatch { expected: "radial" })
        }
    };
    let mut out = Vec::with_capacity(mesh.cells);
    for i in 0..mesh.cells {
        let r = mesh.center(i);
        let mass = enclosed_mass_at(mesh, &rho.values, r);
        out.push(mass / math::powi(r, mesh.n - 1));
    }
    Ok(out)
}

/// Enclosed-mass gradient at the mesh faces (length cells+1, zero at both the
/// origin and, when `neutralize` is set, at r_max).
///
/// With `neutralize` the source is rho - mean rho, the same uniform
/// neutralizing background the box solver applies; the resulting flux
/// vanishes identically at the outer boundary, which is what the zero-flux
/// evolution needs, and it is the field the dynamics layer uses.
pub fn face_gradient_radial(rho: &Field, neutralize: bool) -> Result<Vec<f64>, PotentialError> {
    let mesh = match &rho.geometry {
        Geometry::Radial(m) => m,
        Geometry::Box(_) => {
            return Err(PotentialError::GeometryMismatch { expected: "radial" })
        }
    };
    // discrete mean over the quadrature measure, so a uniform field has an
    // identically vanishing neutralized source up to one rounding
    let background = if neutralize {
        let weight_sum: f64 = mesh.weights().iter().sum();
        rho.total_mass() / weight_sum
    } else {
        0.0
    };
    let mut out = Vec::with_capacity(mesh.cells + 1);
    out.push(0.0);
    let mut mass = 0.0;
    for i in 0..mesh.cells {
        mass += mesh.weight(i) * (rho.values[i] - background);
        let r = mesh.face(i + 1);
        out.push(mass / math::powi(r, mesh.n - 1));
    }
    Ok(out)
}
