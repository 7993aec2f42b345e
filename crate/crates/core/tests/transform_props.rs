//! Property tests for the transform layer and the Sobolev norms.

mod common;

use common::{random_field, rel_l2, rng, unit_basis};
use proptest::prelude::*;
use std::sync::Arc;

use kmiter::problems::{
    elliptic_solution_at, elliptic_solution_dt_at, hyperbolic_ivp, parabolic_forward,
    CauchyDataElliptic,
};
use kmiter::sobolev::{hs_norm, spacetime_l2_norm, spacetime_sup_norm, TimeGrid};
use kmiter::spectral::{
    build_basis, forward_transform, inverse_transform, parseval_factor, RectDomain, SpectralField,
};

fn coeff_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Grid -> spectral -> grid is the identity on the retained span.
    #[test]
    fn transforms_mutually_inverse(coeffs in coeff_vec(36)) {
        let basis = unit_basis(17, 6, 1.0);
        let field = SpectralField::from_coeffs(&basis, coeffs).unwrap();
        let grid = inverse_transform(&field);
        let back = forward_transform(&grid, &basis).unwrap();
        for (a, b) in back.coeffs().iter().zip(field.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        // And the other composition, through the grid values.
        let grid2 = inverse_transform(&back);
        for (a, b) in grid2.values().iter().zip(grid.values()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    /// Quadrature L2 norm of a band-limited grid equals the coefficient
    /// norm times the fixed eigenfunction-normalization factor
    /// sqrt(lx ly)/2.
    #[test]
    fn parseval_identity(coeffs in coeff_vec(25)) {
        let domain = RectDomain::new(1.25, 0.75, 33, 29).unwrap();
        let basis = build_basis(domain, 5, 1.0).unwrap();
        let field = SpectralField::from_coeffs(&basis, coeffs).unwrap();
        let grid = inverse_transform(&field);
        let lhs = grid.l2_norm();
        let rhs = parseval_factor(basis.domain()) * field.l2_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1e-30));
    }

    /// f(A) then g(A) equals (f*g)(A).
    #[test]
    fn functional_calculus_composes(coeffs in coeff_vec(36)) {
        let basis = unit_basis(17, 6, 1.0);
        let field = SpectralField::from_coeffs(&basis, coeffs).unwrap();
        let f = |l: f64| (-0.1 * l).exp();
        let g = |l: f64| 1.0 / (1.0 + l * l);
        let chained = field.apply(f).unwrap().apply(g).unwrap();
        let fused = field.apply(|l| f(l) * g(l)).unwrap();
        for (a, b) in chained.coeffs().iter().zip(fused.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-30));
        }
    }

    /// H^s norms grow with s, scale absolutely homogeneously, and satisfy
    /// the triangle inequality.
    #[test]
    fn hs_norm_scale_properties(
        coeffs_a in coeff_vec(16),
        coeffs_b in coeff_vec(16),
        s1 in -2.0..2.0f64,
        s2 in -2.0..2.0f64,
        c in -3.0..3.0f64,
    ) {
        let basis = unit_basis(9, 4, 1.0);
        let a = SpectralField::from_coeffs(&basis, coeffs_a).unwrap();
        let b = SpectralField::from_coeffs(&basis, coeffs_b).unwrap();

        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(hs_norm(&a, lo.into()) <= hs_norm(&a, hi.into()) * (1.0 + 1e-12));

        let scaled = hs_norm(&a.scale(c), s1.into());
        prop_assert!((scaled - c.abs() * hs_norm(&a, s1.into())).abs() <= 1e-12 * scaled.max(1.0));

        let sum = hs_norm(&a.add(&b).unwrap(), s1.into());
        prop_assert!(sum <= (hs_norm(&a, s1.into()) + hs_norm(&b, s1.into())) * (1.0 + 1e-12));
    }
}

/// The solution-class norms of the three problems, composed from the
/// spectral pieces, are finite on forward-solver trajectories.
#[test]
fn solution_class_norms_finite() {
    let basis = unit_basis(17, 4, 2.0);
    let mut r = rng(11);
    let f = random_field(&basis, &mut r);
    let g = random_field(&basis, &mut r);
    let t_end = 0.625;
    let tgrid = TimeGrid::new(t_end, 101).unwrap();

    // Elliptic class: l2-in-time of ||u||_1 and ||u'||_0.
    let data = CauchyDataElliptic::new(f.clone(), g.clone()).unwrap();
    let u: Vec<SpectralField> = tgrid
        .nodes()
        .iter()
        .map(|&t| elliptic_solution_at(&data, t).unwrap())
        .collect();
    let du: Vec<SpectralField> = tgrid
        .nodes()
        .iter()
        .map(|&t| elliptic_solution_dt_at(&data, t).unwrap())
        .collect();
    let ve = (spacetime_l2_norm(&u, 1.0.into(), &tgrid).unwrap().powi(2)
        + spacetime_l2_norm(&du, 0.0.into(), &tgrid).unwrap().powi(2))
    .sqrt();
    assert!(ve.is_finite() && ve > 0.0);

    // Hyperbolic class: sup-in-time of (||u||_1^2 + ||u'||_0^2)^(1/2).
    let mut vh: f64 = 0.0;
    for &t in tgrid.nodes() {
        let (v, dv) = hyperbolic_ivp(&f, &g, t, false);
        let e = (hs_norm(&v, 1.0.into()).powi(2) + hs_norm(&dv, 0.0.into()).powi(2)).sqrt();
        vh = vh.max(e);
    }
    assert!(vh.is_finite() && vh > 0.0);
    let sup0 = spacetime_sup_norm(
        &tgrid
            .nodes()
            .iter()
            .map(|&t| hyperbolic_ivp(&f, &g, t, false).0)
            .collect::<Vec<_>>(),
        1.0.into(),
        &tgrid,
    )
    .unwrap();
    assert!(sup0 <= vh);

    // Parabolic class: u' = -(A^2/a^2) u computed spectrally.
    let a2 = basis.diffusion_coeff();
    let u: Vec<SpectralField> = tgrid
        .nodes()
        .iter()
        .map(|&t| parabolic_forward(&f, t, a2))
        .collect();
    let du: Vec<SpectralField> = u
        .iter()
        .map(|ut| ut.apply(|l| -l * l / a2).unwrap())
        .collect();
    let vp = (spacetime_l2_norm(&u, 1.0.into(), &tgrid).unwrap().powi(2)
        + spacetime_l2_norm(&du, (-1.0).into(), &tgrid).unwrap().powi(2))
    .sqrt();
    assert!(vp.is_finite() && vp > 0.0);
}

/// Round-trip of a random band-limited field through the grid, checked at
/// the acceptance tolerance on a rectangle with distinct axes.
#[test]
fn round_trip_rectangular_domain() {
    let domain = RectDomain::new(2.0, 1.0, 41, 21).unwrap();
    let basis = build_basis(domain, 10, 1.0).unwrap();
    let mut r = rng(5);
    let field = random_field(&basis, &mut r);
    let back = forward_transform(&inverse_transform(&field), &basis).unwrap();
    assert!(rel_l2(&back, &field) <= 1e-10);
    let worst = back
        .coeffs()
        .iter()
        .zip(field.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-10, "max abs {worst}");
}
