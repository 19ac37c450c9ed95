use std::f64::consts::PI;

use heleshaw::closed_form::{
    dipole_epsilon_family, example2_with_b, solve_dipole_limit, solve_example1, solve_example2, solve_example3,
    ClosedFormEquilibrium,
};
use heleshaw::field::FieldSpec;
use heleshaw::geometry::{domain_area, sample_boundary, ConformalMap};
use heleshaw::moments::{
    area_integral_grid, area_integral_polar, check_equilibrium, feasibility, is_feasible, moment_integral,
    rationality_check, transformed_moments, EquilibriumOptions, Monomial, TestFunction,
};
use heleshaw::{Complex64, Error, Execution};

fn scenarios() -> Vec<(&'static str, ClosedFormEquilibrium)> {
    vec![
        ("example1", solve_example1(1.0, 1.0, 4.0, 0.3424).unwrap()),
        ("example1 circle", solve_example1(1.0, 1.0, 4.0, 2.0).unwrap()),
        ("dipole limit", solve_dipole_limit(1.0, 1.0, 0.4053).unwrap()),
        ("example2", solve_example2(1.0, 1.0, 4.0).unwrap()),
        ("example3", solve_example3(1.0, 1.0, 0.4502).unwrap()),
    ]
}

#[test]
fn closed_forms_satisfy_moment_identities() {
    for (name, eq) in scenarios() {
        let boundary = sample_boundary(&eq.map, 2048).unwrap();
        let r = check_equilibrium(&boundary, &eq.field(), &eq.singularities, EquilibriumOptions::default()).unwrap();
        assert!(r.verdict, "{name}: relative residual {:e}", r.relative());
    }
}

#[test]
fn perturbed_size_fails_verification() {
    let eq = solve_example2(1.0, 1.0, 4.0).unwrap();
    let map = ConformalMap::DipoleChargeColocated { size: 4.04, b: 0.5 };
    let boundary = sample_boundary(&map, 2048).unwrap();
    let r = check_equilibrium(&boundary, &eq.field(), &eq.singularities, EquilibriumOptions::default()).unwrap();
    assert!(!r.verdict);
}

/// `∫_D ω̄ U' dA` directly on the pulled-back disk.
fn green_polar(eq: &ClosedFormEquilibrium, u: &Monomial) -> Complex64 {
    let field = eq.field();
    area_integral_polar(&eq.map, |z| field.gradient(z).unwrap().conj() * u.d1(z), 200, 512, Execution::default())
}

#[test]
fn boundary_form_matches_area_quadrature() {
    let mut checked = 0;
    for (name, eq) in scenarios() {
        let boundary = sample_boundary(&eq.map, 2048).unwrap();
        let center = boundary.centroid();
        let radius = boundary.radius_about(center);
        let field = eq.field();
        for k in 1..=3 {
            let u = Monomial { center, radius, k };
            let contour = moment_integral(&boundary, &field, &u).unwrap();
            let polar = green_polar(&eq, &u);
            let scale = contour.norm().max(1.0);
            assert!((contour - polar).norm() <= 1e-6 * scale, "{name} k={k}: {contour} vs {polar}");
        }
        checked += 1;
    }
    assert!(checked >= 3);
}

#[test]
fn boundary_form_matches_scanline_grid() {
    // charge outside the domain keeps the integrand smooth on the grid
    let eq = solve_example1(1.0, 1.0, 4.0, 0.3424).unwrap();
    let boundary = sample_boundary(&eq.map, 2048).unwrap();
    let field = eq.field();
    let center = boundary.centroid();
    let u = Monomial { center, radius: boundary.radius_about(center), k: 2 };
    let contour = moment_integral(&boundary, &field, &u).unwrap();
    let grid = area_integral_grid(&boundary, |z| field.gradient(z).unwrap().conj() * u.d1(z), 800, Execution::default());
    assert!((contour - grid).norm() <= 1e-3 * contour.norm().max(1.0), "{contour} vs {grid}");
}

#[test]
fn example2_area_from_taylor_coefficients() {
    let eq = solve_example2(1.0, 1.0, 4.0).unwrap();
    let area = domain_area(&sample_boundary(&eq.map, 2048).unwrap()).unwrap();
    // π Σ k |a_k|² for a_k = A B^{k−1}/(k−1)!
    let b: f64 = 0.5;
    let mut s = 0.0;
    let mut fact = 1.0;
    for k in 1..40 {
        if k > 1 {
            fact *= (k - 1) as f64;
        }
        s += k as f64 * (b.powi(k - 1) / fact).powi(2);
    }
    let s = PI * 16.0 * s;
    assert!((area - s).abs() < 1e-9 * s, "{area} vs {s}");
}

#[test]
fn rationality_of_closed_forms() {
    let ex2 = solve_example2(1.0, 1.0, 4.0).unwrap();
    let ex3 = solve_example3(1.0, 1.0, 0.4502).unwrap();
    for eq in [&ex2, &ex3] {
        let r = rationality_check(&eq.map, &eq.charges, &eq.singularities, 1024).unwrap();
        assert!(r.defect <= 1e-8, "defect {:e}", r.defect);
    }
    let perturbed = example2_with_b(1.0, 1.0, 4.0, 0.5).unwrap();
    let bent = ConformalMap::Numeric(
        heleshaw::geometry::NumericMap::new(heleshaw::spectral::PowerSeries::new(
            perturbed.map.taylor().coeffs.iter().enumerate().map(|(k, c)| c * (1.0 + 0.05 * (k as f64).sin())).collect(),
        ))
        .unwrap(),
    );
    let r = rationality_check(&bent, &perturbed.charges, &perturbed.singularities, 1024).unwrap();
    assert!(r.defect > 1e-3, "negative control defect {:e}", r.defect);
}

#[test]
fn transformed_moments_for_outside_charge() {
    let eq = solve_example1(1.0, 1.0, 4.0, 0.3424).unwrap();
    for m in transformed_moments(&eq.map, &eq.charges, &eq.singularities, 4, 2048).unwrap() {
        assert!((m.lhs - m.rhs).norm() <= 1e-8 * m.rhs.norm().max(1.0), "order {}: {} vs {}", m.order, m.lhs, m.rhs);
    }
    let ex2 = solve_example2(1.0, 1.0, 4.0).unwrap();
    assert!(matches!(
        transformed_moments(&ex2.map, &ex2.charges, &ex2.singularities, 2, 1024),
        Err(Error::ReductionInapplicable(_))
    ));
}

#[test]
fn feasibility_of_example1_is_the_image_area() {
    let eq = solve_example1(1.0, 1.0, 4.0, 0.3424).unwrap();
    let f = feasibility(&eq.charges, &eq.singularities).unwrap();
    assert!(is_feasible(f));
    let zero = transformed_moments(&eq.map, &eq.charges, &eq.singularities, 1, 2048).unwrap()[0];
    assert!((zero.lhs - f).norm() < 1e-8 * f.norm());
}

#[test]
fn source_sink_family_approaches_dipole_limit() {
    // first-order convergence: the family's centre sits at a e^{ε/2}
    let (mu, a, q) = (1.0, 1.0, 0.4053);
    let limit = solve_dipole_limit(mu, a, q).unwrap();
    let dist = |eps: f64| {
        let eq = dipole_epsilon_family(mu, a, q, eps).unwrap();
        (0..64)
            .map(|k| {
                let zeta = heleshaw::spectral::node(64, k);
                (eq.map.eval(zeta) - limit.map.eval(zeta)).norm()
            })
            .fold(0.0, f64::max)
    };
    let errs: Vec<f64> = [0.08, 0.04, 0.02, 0.01].iter().map(|&e| dist(e)).collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.45..0.55).contains(&ratio), "ratio {ratio}");
    }
    let rescaled = dipole_epsilon_family(mu, a, q, 1e-3).unwrap();
    let shift = (5e-4f64).exp();
    let err = (0..64)
        .map(|k| {
            let zeta = heleshaw::spectral::node(64, k);
            (rescaled.map.eval(zeta) - shift * limit.map.eval(zeta)).norm()
        })
        .fold(0.0, f64::max);
    assert!(err < 5e-4, "{err:e}");
}

#[test]
fn point_charge_field_spec_round_trip() {
    let eq = solve_example3(1.0, 1.0, 0.4502).unwrap();
    assert!(matches!(eq.field(), FieldSpec::PointCharges(_)));
    assert!(eq.field().is_harmonic());
}
