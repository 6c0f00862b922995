//! Discretizations of the truncated domain: a periodic n-box (n = 3 only)
//! and a radial mesh on a ball (any n >= 3), plus the density field type and
//! the initial-data families.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::potential::unit_ball_volume;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryError {
    /// Box grids must have a power-of-two number of points per axis, >= 8.
    UnsupportedGrid { points_per_axis: usize },
    /// Only n = 3 is supported on the box grid.
    UnsupportedBoxDimension { n: u32 },
    /// Radial meshes need at least 16 cells.
    TooFewCells { cells: usize },
    DimensionTooLow { n: u32 },
    InvalidExtent { value: f64 },
    /// Density fields must be nonnegative and finite.
    NegativeDensity { index: usize, value: f64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::UnsupportedGrid { points_per_axis } => write!(
                f,
                "UnsupportedGrid: points_per_axis = {points_per_axis} must be a power of two >= 8"
            ),
            GeometryError::UnsupportedBoxDimension { n } => {
                write!(f, "UnsupportedBoxDimension: box grid supports n = 3, got n = {n}")
            }
            GeometryError::TooFewCells { cells } => {
                write!(f, "TooFewCells: cells = {cells} must be >= 16")
            }
            GeometryError::DimensionTooLow { n } => {
                write!(f, "DimensionTooLow: n = {n}, but n >= 3 is required")
            }
            GeometryError::InvalidExtent { value } => {
                write!(f, "InvalidExtent: {value} must be positive and finite")
            }
            GeometryError::NegativeDensity { index, value } => {
                write!(f, "NegativeDensity: values[{index}] = {value}")
            }
        }
    }
}

/// Periodic box [-extent, extent)^3 with a cell-centered uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid {
    pub n: u32,
    pub extent: f64,
    pub points_per_axis: usize,
    pub spacing: f64,
}

impl BoxGrid {
    pub fn new(extent: f64, points_per_axis: usize) -> Result<BoxGrid, GeometryError> {
        if !extent.is_finite() || extent <= 0.0 {
            return Err(GeometryError::InvalidExtent { value: extent });
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(GeometryError::UnsupportedGrid { points_per_axis });
        }
        Ok(BoxGrid {
            n: 3,
            extent,
            points_per_axis,
            spacing: 2.0 * extent / points_per_axis as f64,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.points_per_axis * self.points_per_axis * self.points_per_axis
    }

    /// Cell-centered coordinate of index i along one axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -self.extent + (i as f64 + 0.5) * self.spacing
    }

    /// Row-major index, x fastest.
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.points_per_axis + iy) * self.points_per_axis + ix
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing * self.spacing * self.spacing
    }

    pub fn box_volume(&self) -> f64 {
        self.cell_volume() * self.cell_count() as f64
    }
}

/// Radial mesh on the ball of radius r_max in R^n, cell-centered so every
/// center radius is positive. The weight of cell i is the exact shell volume
/// alpha_n (r_{i+1}^n - r_i^n), which equals n alpha_n r^(n-1) dr at the
/// per-cell power-mean radius; the weights sum to the ball volume exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMesh {
    pub n: u32,
    pub r_max: f64,
    pub cells: usize,
    pub spacing: f64,
    centers: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialMesh {
    pub fn new(n: u32, r_max: f64, cells: usize) -> Result<RadialMesh, GeometryError> {
        if n < 3 {
            return Err(GeometryError::DimensionTooLow { n });
        }
        if !r_max.is_finite() || r_max <= 0.0 {
            return Err(GeometryError::InvalidExtent { value: r_max });
        }
        if cells < 16 {
            return Err(GeometryError::TooFewCells { cells });
        }
        let spacing = r_max / cells as f64;
        let alpha_n = unit_ball_volume(n).expect("n >= 3 checked above");
        let mut centers = Vec::with_capacity(cells);
        let mut weights = Vec::with_capacity(cells);
        for i in 0..cells {
            let inner = i as f64 * spacing;
            let outer = (i as f64 + 1.0) * spacing;
            centers.push(inner + 0.5 * spacing);
            weights.push(alpha_n * (math::powi(outer, n) - math::powi(inner, n)));
        }
        Ok(RadialMesh {
            n,
            r_max,
            cells,
            spacing,
            centers,
            weights,
        })
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.centers[i]
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Exact shell volume of cell i.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Face radius i (i = 0..=cells), face 0 at the origin.
    #[inline]
    pub fn face(&self, i: usize) -> f64 {
        i as f64 * self.spacing
    }

    /// Surface area n alpha_n r^(n-1) of the sphere through face i.
    pub fn face_area(&self, i: usize) -> f64 {
        let alpha_n = unit_ball_volume(self.n).expect("validated");
        self.n as f64 * alpha_n * math::powi(self.face(i), self.n - 1)
    }

    pub fn ball_volume(&self) -> f64 {
        let alpha_n = unit_ball_volume(self.n).expect("validated");
        alpha_n * math::powi(self.r_max, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Box(BoxGrid),
    Radial(RadialMesh),
}

impl Geometry {
    pub fn cell_count(&self) -> usize {
        match self {
            Geometry::Box(g) => g.cell_count(),
            Geometry::Radial(m) => m.cells,
        }
    }

    /// Quadrature weight of cell i.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        match self {
            Geometry::Box(g) => g.cell_volume(),
            Geometry::Radial(m) => m.weight(i),
        }
    }

    /// Total measure of the truncated domain.
    pub fn domain_volume(&self) -> f64 {
        match self {
            Geometry::Box(g) => g.box_volume(),
            Geometry::Radial(m) => m.ball_volume(),
        }
    }

    pub fn dimension(&self) -> u32 {
        match self {
            Geometry::Box(g) => g.n,
            Geometry::Radial(m) => m.n,
        }
    }
}

/// A discretized nonnegative density on one of the two geometries.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub geometry: Geometry,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(geometry: Geometry) -> Field {
        let len = geometry.cell_count();
        Field {
            geometry,
            values: vec![0.0; len],
        }
    }

    /// Validating constructor: values must be nonnegative and finite.
    pub fn new(geometry: Geometry, values: Vec<f64>) -> Result<Field, GeometryError> {
        assert_eq!(values.len(), geometry.cell_count());
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(GeometryError::NegativeDensity { index, value });
            }
        }
        Ok(Field { geometry, values })
    }

    /// Quadrature of f(rho) over the domain.
    pub fn integrate_map(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| self.geometry.weight(i) * f(v))
            .sum()
    }

    /// Quadrature of rho^p.
    pub fn integrate_pow(&self, p: f64) -> f64 {
        if p == 1.0 {
            self.total_mass()
        } else {
            self.integrate_map(|v| math::powf(v, p))
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| self.geometry.weight(i) * v)
            .sum()
    }

    /// Max-norm of the field.
    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
    }

    /// Mean density over the truncated domain, total mass / volume.
    pub fn mean_density(&self) -> f64 {
        self.total_mass() / self.geometry.domain_volume()
    }
}

/// Initial-data families for runs and sweeps. The profile is sampled at cell
/// centers and rescaled so the discrete quadrature mass equals `mass` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Gaussian,
    UniformBall,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::UniformBall => "uniform_ball",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub family: Family,
    pub mass: f64,
    /// Gaussian width sigma, or ball radius.
    pub width: f64,
    /// Center (box geometry only; the radial mesh is centered at the origin).
    pub center: [f64; 3],
}

impl InitialData {
    pub fn build(&self, geometry: &Geometry) -> Field {
        let profile = |r2: f64| -> f64 {
            match self.family {
                Family::Gaussian => math::exp(-r2 / (2.0 * self.width * self.width)),
                Family::UniformBall => {
                    if r2 <= self.width * self.width {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
        };
        let mut field = Field::zeros(geometry.clone());
        match geometry {
            Geometry::Box(g) => {
                let npts = g.points_per_axis;
                for iz in 0..npts {
                    let z = g.coord(iz) - self.center[2];
                    for iy in 0..npts {
                        let y = g.coord(iy) - self.center[1];
                        for ix in 0..npts {
                            let x = g.coord(ix) - self.center[0];
                            field.values[g.idx(ix, iy, iz)] = profile(x * x + y * y + z * z);
                        }
                    }
                }
            }
            Geometry::Radial(m) => {
                for i in 0..m.cells {
                    let r = m.center(i);
                    field.values[i] = profile(r * r);
                }
            }
        }
        if self.mass <= 0.0 {
            for v in field.values.iter_mut() {
                *v = 0.0;
            }
            return field;
        }
        let raw_mass = field.total_mass();
        if raw_mass > 0.0 {
            let scale = self.mass / raw_mass;
            for v in field.values.iter_mut() {
                *v *= scale;
            }
        }
        field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_grid_validation() {
        assert!(BoxGrid::new(4.0, 64).is_ok());
        assert!(matches!(
            BoxGrid::new(4.0, 48),
            Err(GeometryError::UnsupportedGrid { .. })
        ));
        assert!(matches!(
            BoxGrid::new(4.0, 4),
            Err(GeometryError::UnsupportedGrid { .. })
        ));
        assert!(BoxGrid::new(-1.0, 64).is_err());
    }

    #[test]
    fn radial_weights_sum_to_ball_volume() {
        for &(n, cells) in &[(3u32, 16usize), (3, 97), (4, 33), (6, 16)] {
            let mesh = RadialMesh::new(n, 2.5, cells).unwrap();
            let total: f64 = mesh.weights().iter().sum();
            let ball = mesh.ball_volume();
            assert!(
                ((total - ball) / ball).abs() < 1e-10,
                "n={n} cells={cells}: {total} vs {ball}"
            );
            assert!(mesh.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn radial_centers_positive() {
        let mesh = RadialMesh::new(3, 1.0, 16).unwrap();
        assert!(mesh.centers().iter().all(|&r| r > 0.0));
        assert_eq!(mesh.face(0), 0.0);
        assert_eq!(mesh.face_area(0), 0.0);
    }

    #[test]
    fn field_rejects_negative_values() {
        let mesh = RadialMesh::new(3, 1.0, 16).unwrap();
        let geom = Geometry::Radial(mesh);
        let mut vals = vec![0.0; geom.cell_count()];
        vals[3] = -1.0;
        assert!(matches!(
            Field::new(geom, vals),
            Err(GeometryError::NegativeDensity { index: 3, .. })
        ));
    }

    #[test]
    fn initial_data_mass_is_exact() {
        let mesh = RadialMesh::new(3, 4.0, 128).unwrap();
        let geom = Geometry::Radial(mesh);
        for family in [Family::Gaussian, Family::UniformBall] {
            let data = InitialData {
                family,
                mass: 2.5,
                width: 0.7,
                center: [0.0; 3],
            };
            let field = data.build(&geom);
            assert!((field.total_mass() - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_ball_covering_domain_is_uniform() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let data = InitialData {
            family: Family::UniformBall,
            mass: 1.0,
            width: 2.0,
            center: [0.0; 3],
        };
        let field = data.build(&geom);
        let expected = 1.0 / geom.domain_volume();
        for &v in &field.values {
            assert!((v - expected).abs() < 1e-12 * expected.max(1.0));
        }
    }
}
