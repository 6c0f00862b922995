//! Independent checks of the interaction-field solvers: the discrete Poisson
//! residual on random smooth box data and the radial field against the
//! closed-form Gaussian profile.

use chemolab_core::geometry::{BoxGrid, Family, Field, Geometry, InitialData, RadialMesh};
use chemolab_core::potential::{
    interaction_field_box, interaction_gradient_radial, spectral_laplacian_box, unit_ball_volume,
};
use chemolab_core::rng::SplitMix64;

fn random_smooth_box(grid: &BoxGrid, rng: &mut SplitMix64, modes: usize) -> Field {
    let npts = grid.points_per_axis;
    let mut values = vec![1.0; grid.cell_count()];
    for _ in 0..modes {
        let kx = rng.below(4) as f64 * std::f64::consts::PI / grid.extent;
        let ky = rng.below(4) as f64 * std::f64::consts::PI / grid.extent;
        let kz = rng.below(4) as f64 * std::f64::consts::PI / grid.extent;
        let amp = rng.range(0.02, 0.15);
        let phase = rng.range(0.0, 2.0 * std::f64::consts::PI);
        for iz in 0..npts {
            for iy in 0..npts {
                for ix in 0..npts {
                    values[grid.idx(ix, iy, iz)] += amp
                        * (kx * grid.coord(ix) + ky * grid.coord(iy) + kz * grid.coord(iz)
                            + phase)
                            .cos();
                }
            }
        }
    }
    Field::new(Geometry::Box(grid.clone()), values).unwrap()
}

#[test]
fn poisson_residual_on_random_smooth_fields() {
    let grid = BoxGrid::new(2.0, 32).unwrap();
    let mut rng = SplitMix64::new(0xb0b0);
    let scale = 3.0 * unit_ball_volume(3).unwrap();
    for _ in 0..3 {
        let rho = random_smooth_box(&grid, &mut rng, 5);
        let out = interaction_field_box(&rho).unwrap();
        let lap = spectral_laplacian_box(&grid, &out.potential);
        let mean = out.rho_mean;
        let linf = rho.linf();
        let mut worst = 0.0f64;
        for (i, &l) in lap.iter().enumerate() {
            worst = worst.max((l - scale * (rho.values[i] - mean)).abs());
        }
        assert!(worst <= 1e-10 * scale * linf, "residual {worst}");
    }
}

#[test]
fn radial_field_matches_gaussian_closed_form() {
    // For the isotropic Gaussian in R^3 the enclosed mass is
    // M(r) = mass [erf(u) - 2 u exp(-u^2)/sqrt(pi)], u = r/(sigma sqrt(2)),
    // so d_r c = M(r)/r^2 has a closed form to test against quadrature.
    let sigma = 0.5;
    let mass = 2.0;
    let mesh = RadialMesh::new(3, 4.0, 512).unwrap();
    let geom = Geometry::Radial(mesh.clone());
    let data = InitialData {
        family: Family::Gaussian,
        mass,
        width: sigma,
        center: [0.0; 3],
    };
    let rho = data.build(&geom);
    let grad = interaction_gradient_radial(&rho).unwrap();
    for i in (8..mesh.cells).step_by(16) {
        let r = mesh.center(i);
        let u = r / (sigma * std::f64::consts::SQRT_2);
        let enclosed =
            mass * (libm::erf(u) - 2.0 * u * (-u * u).exp() / std::f64::consts::PI.sqrt());
        let expected = enclosed / (r * r);
        let got = grad[i];
        assert!(
            ((got - expected) / expected.abs().max(1e-12)).abs() < 2e-3,
            "r = {r}: {got} vs {expected}"
        );
    }
}

#[test]
fn raw_and_neutralized_fields_agree_for_compact_data_off_support() {
    // Inside the bulk of a compact blob in a large ball the background term
    // is a small correction: (M - rho_bar V(r))/r^2 vs M/r^2.
    let mesh = RadialMesh::new(3, 10.0, 256).unwrap();
    let geom = Geometry::Radial(mesh.clone());
    let data = InitialData {
        family: Family::Gaussian,
        mass: 1.0,
        width: 0.4,
        center: [0.0; 3],
    };
    let rho = data.build(&geom);
    let raw = chemolab_core::potential::face_gradient_radial(&rho, false).unwrap();
    let neutral = chemolab_core::potential::face_gradient_radial(&rho, true).unwrap();
    // at r ~ 3 sigma the blob is fully enclosed and r << r_max
    let j = (1.2 / mesh.spacing) as usize;
    let rel = ((raw[j] - neutral[j]) / raw[j]).abs();
    assert!(rel < 0.01, "background correction {rel}");
}
