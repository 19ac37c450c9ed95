//! Solver dispatch for one sweep item.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use heleshaw::closed_form::{
    self as cf, dipole_limit_critical_charge, example1_critical_charge, example2_critical_size,
    example3_critical_offset, ClosedFormEquilibrium,
};
use heleshaw::field::{FieldSpec, HarmonicCore, MonotoneProfile};
use heleshaw::geometry::{
    check_univalence, domain_area, sample_boundary, BoundaryCurve, ConformalMap, UnivalenceFailure,
};
use heleshaw::gravity::{disk_of_transform, evolve_transform, split_decomposition, GravityScenario};
use heleshaw::moments::{
    check_equilibrium, feasibility, rationality_check, EquilibriumOptions, HydroSingularity,
};
use heleshaw::riemann_hilbert::{self as rh, RhOptions, RhProblem};
use heleshaw::Error;

use crate::config::SolverKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerKind {
    Charge,
    Singularity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marker {
    pub kind: MarkerKind,
    pub position: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub parameter: &'static str,
    pub critical: f64,
    pub value: f64,
    pub predicted_univalent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub residuals: Vec<(u32, f64)>,
    pub max_abs_residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub verdict: bool,
    pub feasibility: Option<Complex64>,
    pub rationality_defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhSummary {
    pub alpha: f64,
    pub beta: f64,
    pub center: f64,
    pub mu: f64,
    pub node_residual: f64,
    pub midpoint_residual: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GravitySummary {
    pub stationary_residue: f64,
    pub sinking_residue: f64,
    pub sinking_center: Complex64,
    pub unphysical: bool,
}

/// Everything computed for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub phi: Vec<f64>,
    /// Boundary curves; one for an equilibrium, up to two for a split disk.
    pub curves: Vec<Vec<Complex64>>,
    pub markers: Vec<Marker>,
    pub univalent: bool,
    /// Why univalence fails, when it does.
    pub univalence_failure: Option<String>,
    pub area: Option<f64>,
    pub threshold: Option<Threshold>,
    pub verification: Option<Verification>,
    pub rh: Option<RhSummary>,
    pub gravity: Option<GravitySummary>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunSettings {
    pub grid: usize,
    pub verify: bool,
    pub tolerance: f64,
}

fn p(params: &BTreeMap<String, f64>, key: &str) -> f64 {
    params[key]
}

fn profile(power: f64) -> Result<MonotoneProfile, Error> {
    if power == 1.0 {
        Ok(MonotoneProfile::Identity)
    } else if power == 2.0 {
        Ok(MonotoneProfile::Square)
    } else {
        MonotoneProfile::power(power)
    }
}

fn singularity_markers(sings: &[HydroSingularity]) -> impl Iterator<Item = Marker> + '_ {
    sings.iter().map(|s| Marker { kind: MarkerKind::Singularity, position: s.position })
}

struct Solved {
    map: ConformalMap,
    field: FieldSpec,
    singularities: Vec<HydroSingularity>,
    closed_form: Option<ClosedFormEquilibrium>,
    threshold: Option<Threshold>,
    rh: Option<RhSummary>,
    warnings: Vec<String>,
}

fn closed_form(eq: ClosedFormEquilibrium, threshold: Threshold) -> Solved {
    Solved {
        map: eq.map.clone(),
        field: eq.field(),
        singularities: eq.singularities.clone(),
        threshold: Some(Threshold { predicted_univalent: eq.predicted_univalent, ..threshold }),
        closed_form: Some(eq),
        rh: None,
        warnings: Vec::new(),
    }
}

fn solve_rh(kind: SolverKind, params: &BTreeMap<String, f64>, grid: usize) -> Result<Solved, Error> {
    let power = params.get("p").copied().unwrap_or(if kind == SolverKind::RhAxisymmetric { 1.0 } else { 2.0 });
    let h = profile(power)?;
    let problem = match kind {
        SolverKind::RhUnidirectional => RhProblem::Unidirectional(h),
        SolverKind::RhAxisymmetric => RhProblem::Axisymmetric(h),
        _ => {
            let core = if params.get("core").copied().unwrap_or(2.0) == 1.0 {
                HarmonicCore::Identity
            } else {
                HarmonicCore::HalfSquare
            };
            RhProblem::Composed { profile: h, core }
        }
    };
    let guess = params.get("guess_alpha").map(|&a| (a, params["guess_beta"]));
    let opts = RhOptions { n: grid, guess, ..RhOptions::default() };
    let center_key = kind.center_key().expect("riemann-hilbert solver");
    let s = match (params.get("alpha"), params.get(center_key), params.get("B"), params.get("mu")) {
        (Some(&alpha), _, Some(&b), _) => rh::solve_from_theta(&problem, alpha, b * alpha, opts)?,
        (None, Some(&center), Some(&b), _) => {
            let alpha = rh::alpha_for_center(&problem, b, center, opts.gl_nodes)?;
            rh::solve_from_theta(&problem, alpha, b * alpha, opts)?
        }
        (None, Some(&center), None, Some(&mu)) => rh::solve(&problem, center, mu, opts)?,
        _ => unreachable!("validated parameter combination"),
    };
    Ok(Solved {
        map: s.map.clone(),
        field: problem.field(),
        singularities: vec![s.singularity()],
        closed_form: None,
        threshold: None,
        rh: Some(RhSummary {
            alpha: s.alpha,
            beta: s.beta,
            center: s.center,
            mu: s.mu,
            node_residual: s.node_residual,
            midpoint_residual: s.midpoint_residual,
            n: s.n,
        }),
        warnings: s.warnings,
    })
}

fn solve(kind: SolverKind, params: &BTreeMap<String, f64>, grid: usize) -> Result<Solved, Error> {
    let t = |parameter, critical, value| Threshold { parameter, critical, value, predicted_univalent: true };
    Ok(match kind {
        SolverKind::Example1 => {
            let (q, a, b, charge) = (p(params, "q"), p(params, "a"), p(params, "b"), p(params, "Q"));
            let eq = cf::solve_example1(q, a, b, charge)?;
            closed_form(eq, t("Q", example1_critical_charge(q, a.min(b) / a.max(b))?, charge))
        }
        SolverKind::DipoleLimit => {
            let (mu, a, charge) = (p(params, "mu"), p(params, "a"), p(params, "Q"));
            closed_form(cf::solve_dipole_limit(mu, a, charge)?, t("Q", dipole_limit_critical_charge(mu, a), charge))
        }
        SolverKind::Example2 => {
            let (mu, charge, size) = (p(params, "mu"), p(params, "Q"), p(params, "A"));
            let eq = match params.get("B") {
                Some(&b) => cf::example2_with_b(mu, charge, size, b)?,
                None => cf::solve_example2(mu, charge, size)?,
            };
            closed_form(eq, t("A", example2_critical_size(mu, charge), size))
        }
        SolverKind::Example3 => {
            let (beta, charge, a) = (p(params, "beta"), p(params, "Q"), p(params, "a"));
            closed_form(cf::solve_example3(beta, charge, a)?, t("a", example3_critical_offset(beta, charge), a))
        }
        _ => solve_rh(kind, params, grid)?,
    })
}

fn verification(solved: &Solved, boundary: &BoundaryCurve, settings: RunSettings) -> Result<Verification, Error> {
    let opts = EquilibriumOptions { tolerance: settings.tolerance, ..EquilibriumOptions::default() };
    let report = check_equilibrium(boundary, &solved.field, &solved.singularities, opts)?;
    let (feas, defect) = match &solved.closed_form {
        Some(eq) => (
            feasibility(&eq.charges, &eq.singularities).ok(),
            rationality_check(&eq.map, &eq.charges, &eq.singularities, settings.grid).ok().map(|r| r.defect),
        ),
        None => (None, None),
    };
    Ok(Verification {
        residuals: report.residuals.iter().map(|&(k, r)| (k, r.norm())).collect(),
        max_abs_residual: report.max_abs_residual,
        scale: report.scale,
        tolerance: report.tolerance,
        verdict: report.verdict,
        feasibility: feas,
        rationality_defect: defect,
    })
}

fn gravity_item(params: &BTreeMap<String, f64>, grid: usize) -> Result<ItemResult, Error> {
    let (c, mu, a, t) = (p(params, "C"), p(params, "mu"), p(params, "A"), p(params, "t"));
    let scenario = GravityScenario::dipole_on_disk(c, mu, a)?;
    let chi = evolve_transform(&scenario, t)?;
    let split = split_decomposition(&scenario, t)?;
    if !split.stationary.add(&split.sinking).same_as(&chi) {
        return Err(Error::AssumptionViolated("split parts do not sum to the evolved transform".into()));
    }
    let (_, stationary) = disk_of_transform(&split.stationary)?;
    let sinking = split.sinking.total_residue().re;
    let sinking_center = split.sinking.poles.first().map_or(Complex64::new(-c * t, 0.0), |p| p.pole);
    let phi: Vec<f64> = (0..grid).map(|k| heleshaw::spectral::angle(grid, k)).collect();
    let circle = |center: Complex64, residue: f64| -> Vec<Complex64> {
        // residue = area/π, so the radius is √residue
        phi.iter().map(|&f| center + Complex64::from_polar(residue.sqrt(), f)).collect()
    };
    let mut curves = vec![circle(Complex64::new(0.0, 0.0), stationary)];
    let mut warnings = Vec::new();
    if sinking > 0.0 {
        curves.push(circle(sinking_center, sinking));
    } else if split.unphysical {
        warnings.push(format!("sinking part has negative area/π {sinking:.6}: no such domain"));
    }
    Ok(ItemResult {
        phi: phi.clone(),
        curves,
        markers: vec![Marker { kind: MarkerKind::Singularity, position: Complex64::new(0.0, 0.0) }],
        univalent: true,
        univalence_failure: None,
        area: Some(PI * chi.total_residue().re),
        threshold: None,
        verification: None,
        rh: None,
        gravity: Some(GravitySummary { stationary_residue: stationary, sinking_residue: sinking, sinking_center, unphysical: split.unphysical }),
        warnings,
    })
}

/// Runs one item.
pub fn run_item(kind: SolverKind, params: &BTreeMap<String, f64>, settings: RunSettings) -> Result<ItemResult, Error> {
    if kind == SolverKind::GravityDynamics {
        return gravity_item(params, settings.grid);
    }
    let solved = solve(kind, params, settings.grid)?;
    let boundary = sample_boundary(&solved.map, settings.grid)?;
    let verdict = check_univalence(&solved.map, settings.grid)?;
    let mut warnings = solved.warnings.clone();
    warnings.extend(verdict.warning.clone());
    let area = domain_area(&boundary).ok();
    let verification = if !settings.verify {
        None
    } else if let Some(n) = solved.rh.as_ref().map(|s| s.n).filter(|&n| n > settings.grid) {
        // refined solutions are checked on their own grid
        Some(verification(&solved, &sample_boundary(&solved.map, n)?, settings)?)
    } else {
        Some(verification(&solved, &boundary, settings)?)
    };
    let univalence_failure = verdict.failure.map(|f| match f {
        UnivalenceFailure::BoundaryDerivativeZero(phi) => format!("f' vanishes on the boundary at phi = {phi:.6} (cusp)"),
        UnivalenceFailure::SelfIntersection(a, b) => format!("boundary self-intersects between phi = {a:.6} and {b:.6}"),
    });
    let mut markers: Vec<Marker> = solved
        .field
        .charges()
        .map(|c| c.charges().iter().map(|c| Marker { kind: MarkerKind::Charge, position: c.position }).collect())
        .unwrap_or_default();
    markers.extend(singularity_markers(&solved.singularities));
    let phi = (0..settings.grid).map(|k| heleshaw::spectral::angle(settings.grid, k)).collect();
    Ok(ItemResult {
        phi,
        curves: vec![boundary.z],
        markers,
        univalent: verdict.univalent,
        univalence_failure,
        area,
        threshold: solved.threshold,
        verification,
        rh: solved.rh,
        gravity: None,
        warnings,
    })
}

/// Rows `(α, β, x₀, μ/α)` of the position/strength relation over a range of
/// `B = β/α` for the unidirectional square-law field.
pub fn relation_table(alpha: f64, b_values: &[f64]) -> Result<Vec<[f64; 4]>, Error> {
    let problem = RhProblem::Unidirectional(MonotoneProfile::Square);
    b_values
        .iter()
        .map(|&b| {
            let (x0, slope) = rh::dipole_parameters(&problem, alpha, b * alpha, 200)?;
            Ok([alpha, b * alpha, x0, slope])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    const SETTINGS: RunSettings = RunSettings { grid: 1024, verify: true, tolerance: 1e-8 };

    #[test]
    fn example2_item() {
        let r = run_item(SolverKind::Example2, &params(&[("mu", 1.0), ("Q", 1.0), ("A", 4.0)]), SETTINGS).unwrap();
        assert!(r.univalent);
        assert!(r.verification.as_ref().unwrap().verdict);
        assert_eq!(r.markers.len(), 2);
        let r = run_item(SolverKind::Example2, &params(&[("mu", 1.0), ("Q", 1.0), ("A", 1.0)]), SETTINGS).unwrap();
        assert!(!r.univalent && r.area.is_none());
    }

    #[test]
    fn perturbed_size_with_fixed_exponent_fails() {
        let r = run_item(SolverKind::Example2, &params(&[("mu", 1.0), ("Q", 1.0), ("A", 4.04), ("B", 0.5)]), SETTINGS)
            .unwrap();
        assert!(!r.verification.unwrap().verdict);
    }

    #[test]
    fn infeasible_signs_are_an_error() {
        let r = run_item(SolverKind::Example1, &params(&[("q", 1.0), ("a", 1.0), ("b", 4.0), ("Q", -0.3)]), SETTINGS);
        assert!(matches!(r, Err(Error::Infeasible(_))));
    }

    #[test]
    fn rh_item_by_center() {
        let r = run_item(SolverKind::RhComposed, &params(&[("a", 1.0), ("B", 2.2001)]), SETTINGS).unwrap();
        let s = r.rh.unwrap();
        assert!((s.center - 1.0).abs() < 1e-10);
        assert!(r.verification.unwrap().verdict);
    }

    #[test]
    fn gravity_item_circles() {
        let r = run_item(SolverKind::GravityDynamics, &params(&[("C", 1.0), ("mu", 1.0), ("A", 2.0), ("t", 2.0)]), SETTINGS)
            .unwrap();
        let g = r.gravity.unwrap();
        assert_eq!((g.stationary_residue, g.sinking_residue), (1.0, 1.0));
        assert_eq!(g.sinking_center, Complex64::new(-2.0, 0.0));
        assert_eq!(r.curves.len(), 2);
    }

    #[test]
    fn relation_table_oracle() {
        let rows = relation_table(1.0, &[2.0]).unwrap();
        assert!((rows[0][2] - 4.0 / PI).abs() < 1e-12);
        assert!((rows[0][3] - 8.0 / (3.0 * PI)).abs() < 1e-12);
    }
}
