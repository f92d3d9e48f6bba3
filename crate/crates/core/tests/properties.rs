//! Property tests for the invariants of each module.

use std::f64::consts::PI;

use bartnik_core::constructions::{
    collar_bend, conformal_solve, schwarzschild_band, BoundaryMode, CollarSpec, DEFAULT_EPSILON_N,
};
use bartnik_core::geometry::{curvature_report, scalar_curvature_band, scalar_curvature_fd};
use bartnik_core::masses::{adm_mass_from_tail, brown_york_mass, hawking_mass, hyperbolic_mass_aspect};
use bartnik_core::quasi_spherical::{qs_euclidean_solve, qs_hyperbolic_solve, Background, QsProblem};
use bartnik_core::{BandMetric, BartnikData, Dimension, RoundBartnikData, SampledFn};
use proptest::prelude::*;

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn sup_diff(a: &SampledFn, b: &SampledFn) -> f64 {
    a.values().iter().zip(b.values()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauss_identity_on_analytic_bands(n in 3usize..=7, m in -0.3f64..0.3, kappa in 0.3f64..2.0) {
        let s = BandMetric::schwarzschild(dim(n), m, 1.0, 3.0, 81).unwrap();
        let h = BandMetric::hyperbolic(dim(n), kappa, 0.2, 2.0, 81).unwrap();
        prop_assert!(curvature_report(&s).unwrap().max_gauss_residual() < 1e-8);
        prop_assert!(curvature_report(&h).unwrap().max_gauss_residual() < 1e-8);
    }

    #[test]
    fn hawking_mass_of_schwarzschild_spheres(m in 0.0f64..1.0, r in 3.0f64..10.0) {
        let h = 2.0 * (1.0 - 2.0 * m / r).sqrt() / r;
        let d = BartnikData::Round(RoundBartnikData::sphere(r, h).unwrap());
        prop_assert!((hawking_mass(&d).unwrap() - m).abs() < 1e-12);
    }

    #[test]
    fn brown_york_sign_flips_at_euclidean_curvature(r in 0.2f64..5.0, dh in 1e-6f64..1.0) {
        let by = |h: f64| brown_york_mass(&BartnikData::Round(RoundBartnikData::sphere(r, h).unwrap())).unwrap();
        prop_assert!(by(2.0 / r + dh) < 0.0);
        prop_assert!(by(2.0 / r - dh * 1.0f64.min(1.0 / r)) > 0.0);
        prop_assert!(by(2.0 / r).abs() < 1e-14 * r);
    }

    #[test]
    fn adm_mass_dominates_nonpositive_hawking_mass(r0 in 0.5f64..2.0, u0 in 0.3f64..1.0) {
        let p = QsProblem::new(dim(3), Background::Euclidean, r0, 100.0 * r0, u0);
        let g = qs_euclidean_solve(&p).unwrap();
        let boundary = RoundBartnikData::sphere(r0, 2.0 / (u0 * r0)).unwrap();
        let mh = hawking_mass(&BartnikData::Round(boundary)).unwrap();
        prop_assert!(mh <= 0.0);
        prop_assert!(adm_mass_from_tail(&g).unwrap().mass >= mh - 1e-8);
    }

    #[test]
    fn qs_lapse_keeps_its_side_of_one(n in 3usize..=7, u0 in 0.1f64..2.0) {
        prop_assume!((u0 - 1.0).abs() > 1e-3);
        let rho2 = 1.0f64.asinh();
        let p = QsProblem::new(dim(n), Background::Hyperbolic { kappa: 1.0 }, rho2, 10.0, u0);
        let g = qs_hyperbolic_solve(&p).unwrap();
        let side = (u0 - 1.0).signum();
        for &t in g.grid() {
            prop_assert!(g.lapse_deficit(t).unwrap() * side > 0.0);
        }
        let flat = qs_euclidean_solve(&QsProblem::new(dim(n), Background::Euclidean, 1.0, 20.0, u0)).unwrap();
        for &t in flat.grid() {
            prop_assert!(flat.lapse_deficit(t).unwrap() * side >= 0.0);
        }
    }

    #[test]
    fn mass_aspect_sign_follows_initial_lapse(n in 3usize..=5, u0 in 0.1f64..1.8) {
        prop_assume!((u0 - 1.0).abs() > 0.05);
        let rho2 = 1.0f64.asinh();
        let p = QsProblem::new(dim(n), Background::Hyperbolic { kappa: 1.0 }, rho2, 20.0, u0);
        let trace = hyperbolic_mass_aspect(&qs_hyperbolic_solve(&p).unwrap()).unwrap().trace;
        prop_assert_eq!(trace < 0.0, u0 < 1.0);
    }

    #[test]
    fn schwarzschild_band_matches_mass_formula(r1 in 0.8f64..1.5, dr in 0.5f64..2.0, m1 in -0.2f64..0.2, dm in 1e-3f64..0.2) {
        let n = dim(3);
        let r2 = r1 + dr;
        let m2 = (m1 + dm).min(0.45 * r2);
        let h = |m: f64, r: f64| 2.0 / r * (1.0 - 2.0 * m / r).sqrt();
        let out = schwarzschild_band(n, 4.0 * PI * r1 * r1, h(m1, r1), 4.0 * PI * r2 * r2, h(m2, r2), 401);
        prop_assume!(out.is_ok());
        let out = out.unwrap();
        let b = out.feasible().unwrap();
        prop_assert!(b.formula_residual < 1e-8);
        prop_assert!(b.min_scalar >= -1e-10);
        prop_assert!((b.radii.0 - r1).abs() < 1e-14 && (b.radii.1 - r2).abs() < 1e-14);
        prop_assert_eq!(b.band.lower_radius(), b.radii.0);
        prop_assert_eq!(b.band.upper_radius(), b.radii.1);
        prop_assert!((b.band.lower_mean_curvature().unwrap() - h(m1, r1)).abs() < 1e-8);
        prop_assert!((b.band.upper_mean_curvature().unwrap() - h(m2, r2)).abs() < 1e-8);
    }

    #[test]
    fn collar_hits_target(drop in 0.05f64..0.9, depth in 0.02f64..0.2, extra in 0.0f64..1.0) {
        let g = BandMetric::schwarzschild(dim(3), 0.1, 1.0, 2.0, 201).unwrap();
        let h1 = g.upper_mean_curvature().unwrap();
        let target = h1 * (1.0 - drop);
        let spec = CollarSpec { margin: extra, ..CollarSpec::new(depth) };
        let out = collar_bend(&g, target, &spec).unwrap();
        prop_assert!((out.band.upper_mean_curvature().unwrap() - target).abs() < 1e-8);
        prop_assert!(out.min_collar_scalar >= extra && out.min_collar_scalar > 0.0);
        prop_assert_eq!(out.band.upper_radius(), g.upper_radius());
    }

    #[test]
    fn conformal_maximum_principle(m in 0.0f64..0.3, amp in 0.0f64..4e-3, c in 1.2f64..2.8) {
        let g = BandMetric::schwarzschild(dim(3), m, 1.0, 3.0, 101).unwrap();
        let grid = g.grid().to_vec();
        let h: Vec<f64> = grid.iter().map(|&t| -amp * (-(t - c) * (t - c) * 4.0).exp()).collect();
        let s = conformal_solve(&g, &SampledFn::new(grid, h).unwrap(), BoundaryMode::Compact, DEFAULT_EPSILON_N).unwrap();
        prop_assert!(s.factor.values().iter().all(|&v| v >= 1.0));
        // ∂v/∂ν ≤ 0 for the outward normal on both ends.
        prop_assert!(s.upper_mean_curvature <= g.upper_mean_curvature().unwrap() + 1e-14);
        prop_assert!(s.lower_mean_curvature >= g.lower_mean_curvature().unwrap() - 1e-14);
        prop_assert_eq!(s.deformed.lower_radius(), g.lower_radius());
        prop_assert_eq!(s.deformed.upper_radius(), g.upper_radius());
    }
}

#[test]
fn fixed_point_lapse() {
    for n in 3..=7 {
        let flat = qs_euclidean_solve(&QsProblem::new(dim(n), Background::Euclidean, 1.0, 10.0, 1.0)).unwrap();
        let hyp = qs_hyperbolic_solve(&QsProblem::new(dim(n), Background::Hyperbolic { kappa: 1.0 }, 0.5, 5.0, 1.0)).unwrap();
        for g in [flat, hyp] {
            assert!(g.lapse().values().iter().all(|&u| u == 1.0));
        }
    }
}

#[test]
fn finite_difference_oracle_converges() {
    let g = BandMetric::schwarzschild(dim(4), 0.3, 1.0, 2.0, 41).unwrap();
    let closed = scalar_curvature_band(&g).unwrap();
    let coarse = sup_diff(&closed, &scalar_curvature_fd(&g, 0.01).unwrap());
    let fine = sup_diff(&closed, &scalar_curvature_fd(&g, 0.005).unwrap());
    // Richardson makes the central stencils fourth order; the edge stencils
    // are at least second order.
    assert!(fine < coarse / 3.5, "{coarse:e} -> {fine:e}");
}
