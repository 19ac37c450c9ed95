use heleshaw::field::{HarmonicCore, MonotoneProfile};
use heleshaw::geometry::{check_univalence, sample_boundary};
use heleshaw::moments::{check_equilibrium, EquilibriumOptions};
use heleshaw::riemann_hilbert::{dipole_parameters, solve_from_theta, RhOptions, RhProblem, RhSolution};

fn moments_pass(problem: &RhProblem, s: &RhSolution) {
    let boundary = sample_boundary(&s.map, s.n.max(2048)).unwrap();
    let report = check_equilibrium(&boundary, &problem.field(), &[s.singularity()], EquilibriumOptions::default()).unwrap();
    assert!(report.verdict, "relative residual {:e}", report.relative());
}

#[test]
fn unidirectional_moments() {
    let p = RhProblem::Unidirectional(MonotoneProfile::Square);
    for b in [2.02, 2.2, 3.0] {
        let s = solve_from_theta(&p, 1.0, b, RhOptions::default()).unwrap();
        assert!(s.node_residual < 1e-10);
        moments_pass(&p, &s);
    }
}

#[test]
fn kinked_unidirectional_at_b_two() {
    let p = RhProblem::Unidirectional(MonotoneProfile::Square);
    let s = solve_from_theta(&p, 1.0, 2.0, RhOptions::default()).unwrap();
    assert!(s.node_residual < 1e-8, "{}", s.node_residual);
    println!("n = {} midpoint {:e} warnings {:?}", s.n, s.midpoint_residual, s.warnings);
}

#[test]
fn axisymmetric_moments() {
    let p = RhProblem::Axisymmetric(MonotoneProfile::Identity);
    for b in [2.021, 2.201, 3.0] {
        let s = solve_from_theta(&p, 1.0, b, RhOptions::default()).unwrap();
        println!("axi B={b} n={} node {:e} mid {:e} uni {}", s.n, s.node_residual, s.midpoint_residual,
            check_univalence(&s.map, 1024).unwrap().univalent);
        moments_pass(&p, &s);
    }
}

#[test]
fn composed_moments() {
    let p = RhProblem::Composed { profile: MonotoneProfile::Square, core: HarmonicCore::HalfSquare };
    for b in [2.0201, 2.2001, 3.0] {
        let s = solve_from_theta(&p, 1.0, b, RhOptions::default()).unwrap();
        println!("comp B={b} n={} node {:e} mid {:e} warn {:?}", s.n, s.node_residual, s.midpoint_residual, s.warnings);
        moments_pass(&p, &s);
    }
    let (a, _) = dipole_parameters(&p, 1.0, 2.0, 200).unwrap();
    assert!((a - (8.0 / std::f64::consts::PI).sqrt()).abs() < 1e-10);
}

#[test]
fn composed_near_kink_refines_the_grid() {
    let p = RhProblem::Composed { profile: MonotoneProfile::Square, core: HarmonicCore::HalfSquare };
    let alpha = heleshaw::riemann_hilbert::alpha_for_center(&p, 2.0001, 1.0, 200).unwrap();
    let s = solve_from_theta(&p, alpha, 2.0001 * alpha, RhOptions::default()).unwrap();
    println!("n = {} node {:e} mid {:e} warn {:?}", s.n, s.node_residual, s.midpoint_residual, s.warnings);
    assert!(s.n > 2048);
    assert!((s.center - 1.0).abs() < 1e-10);
    moments_pass(&p, &s);
}

#[test]
fn kinked_unidirectional_moments_on_solution_grid() {
    let p = RhProblem::Unidirectional(MonotoneProfile::Square);
    let s = solve_from_theta(&p, 1.0, 2.0, RhOptions::default()).unwrap();
    let boundary = sample_boundary(&s.map, s.n).unwrap();
    let report = check_equilibrium(&boundary, &p.field(), &[s.singularity()], EquilibriumOptions::default()).unwrap();
    assert!(report.verdict, "relative residual {:e}", report.relative());
}
