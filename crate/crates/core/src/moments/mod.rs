//! Moment identities of an equilibrium domain.
//!
//! For `U` analytic near the closed domain,
//! `J(U) = ∫_D ω̄ U' dA = −Σ q_i U(z_i) + μ U'(z_d) − (β/2) U''(z_q)`
//! over sources, dipoles and quadrupoles. The left side is evaluated on
//! the boundary, either as `(i/2)∮ ω̄ U dz̄ − Σ_{z'_m ∈ D} Q_m U(z'_m)/2` for
//! a charge array or as `−i∮ G U' dz` for any potential.

mod area;
mod transformed;

pub use area::{area_integral_grid, area_integral_polar};
pub use transformed::{rationality_check, transformed_moments, RationalityReport, TransformedMoment};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::field::{FieldSpec, PointCharges};
use crate::geometry::BoundaryCurve;
use crate::spectral::trapezoid;

/// Charges closer than this (relative to the domain radius) to the boundary
/// make the interior sum ill-conditioned.
pub const BOUNDARY_COLLAR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HydroKind {
    /// Source (`q > 0`) or sink.
    SourceSink(f64),
    /// Dipole moment `μ`.
    Dipole(Complex64),
    /// Quadrupole strength `β`.
    Quadrupole(Complex64),
}

/// A hydrodynamic singularity inside the fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroSingularity {
    pub kind: HydroKind,
    pub position: Complex64,
}

impl HydroSingularity {
    pub fn source(q: f64, position: Complex64) -> Self {
        HydroSingularity { kind: HydroKind::SourceSink(q), position }
    }

    pub fn dipole(mu: f64, position: Complex64) -> Self {
        HydroSingularity { kind: HydroKind::Dipole(Complex64::new(mu, 0.0)), position }
    }

    pub fn quadrupole(beta: f64, position: Complex64) -> Self {
        HydroSingularity { kind: HydroKind::Quadrupole(Complex64::new(beta, 0.0)), position }
    }
}

/// Net source strength must vanish for an equilibrium to exist.
pub fn check_balanced(singularities: &[HydroSingularity]) -> Result<()> {
    let (net, total) = singularities.iter().fold((0.0, 0.0), |(n, t), s| match s.kind {
        HydroKind::SourceSink(q) => (n + q, t + q.abs()),
        _ => (n, t),
    });
    if net.abs() > 1e-12 * total.max(1.0) {
        return Err(invalid(format!("net source strength {net} does not vanish")));
    }
    Ok(())
}

/// An analytic test function with two derivatives.
pub trait TestFunction: Sync {
    fn value(&self, z: Complex64) -> Complex64;
    fn d1(&self, z: Complex64) -> Complex64;
    fn d2(&self, z: Complex64) -> Complex64;
}

/// `((z − c)/R)^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub center: Complex64,
    pub radius: f64,
    pub k: u32,
}

impl TestFunction for Monomial {
    fn value(&self, z: Complex64) -> Complex64 {
        ((z - self.center) / self.radius).powu(self.k)
    }

    fn d1(&self, z: Complex64) -> Complex64 {
        if self.k == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.k as f64 / self.radius * ((z - self.center) / self.radius).powu(self.k - 1)
    }

    fn d2(&self, z: Complex64) -> Complex64 {
        if self.k < 2 {
            return Complex64::new(0.0, 0.0);
        }
        (self.k * (self.k - 1)) as f64 / (self.radius * self.radius)
            * ((z - self.center) / self.radius).powu(self.k - 2)
    }
}

/// A test function from three closures.
pub struct FnTest<V, D1, D2> {
    pub value: V,
    pub d1: D1,
    pub d2: D2,
}

impl<V, D1, D2> TestFunction for FnTest<V, D1, D2>
where
    V: Fn(Complex64) -> Complex64 + Sync,
    D1: Fn(Complex64) -> Complex64 + Sync,
    D2: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Complex64 {
        (self.value)(z)
    }
    fn d1(&self, z: Complex64) -> Complex64 {
        (self.d1)(z)
    }
    fn d2(&self, z: Complex64) -> Complex64 {
        (self.d2)(z)
    }
}

/// The two pieces of the boundary form of `J`, kept apart for scaling.
#[derive(Debug, Clone, Copy)]
struct MomentParts {
    value: Complex64,
    magnitude: f64,
}

fn interior_charges(boundary: &BoundaryCurve, charges: &PointCharges) -> Result<Vec<(f64, Complex64)>> {
    let centroid = boundary.centroid();
    let radius = boundary.radius_about(centroid);
    let mut inside = Vec::new();
    for c in charges.charges() {
        let d = boundary.distance_to(c.position);
        if d <= BOUNDARY_COLLAR * radius {
            return Err(Error::IllConditioned(format!(
                "charge at {} lies within {d:e} of the boundary",
                c.position
            )));
        }
        if boundary.winding_number(c.position) != 0 {
            inside.push((c.strength, c.position));
        }
    }
    Ok(inside)
}

fn moment_parts_charges(
    boundary: &BoundaryCurve,
    charges: &PointCharges,
    u: &dyn TestFunction,
) -> Result<MomentParts> {
    let inside = interior_charges(boundary, charges)?;
    let n = boundary.n();
    let mut vals = Vec::with_capacity(n);
    let mut mags = Vec::with_capacity(n);
    for k in 0..n {
        let z = boundary.z[k];
        let w = charges.current(z)?;
        let term = w.conj() * u.value(z) * boundary.dz[k].conj();
        vals.push(term);
        mags.push(Complex64::new(term.norm(), 0.0));
    }
    let contour = Complex64::new(0.0, 0.5) * trapezoid(&vals);
    let mut interior = Complex64::new(0.0, 0.0);
    let mut mag = 0.5 * trapezoid(&mags).re;
    for (q, p) in inside {
        let t = q * u.value(p) / 2.0;
        interior += t;
        mag += t.norm();
    }
    Ok(MomentParts { value: contour - interior, magnitude: mag })
}

fn moment_parts_potential(boundary: &BoundaryCurve, field: &FieldSpec, u: &dyn TestFunction) -> Result<MomentParts> {
    let n = boundary.n();
    let g: Vec<f64> = boundary.z.iter().map(|&z| field.potential(z)).collect::<Result<_>>()?;
    // J is unchanged by a constant shift of G; remove the mean for scaling
    let mean = g.iter().sum::<f64>() / n as f64;
    let mut vals = Vec::with_capacity(n);
    let mut mags = Vec::with_capacity(n);
    for k in 0..n {
        let term = (g[k] - mean) * u.d1(boundary.z[k]) * boundary.dz[k];
        vals.push(term);
        mags.push(Complex64::new(term.norm(), 0.0));
    }
    Ok(MomentParts {
        value: Complex64::new(0.0, -1.0) * trapezoid(&vals),
        magnitude: trapezoid(&mags).re,
    })
}

/// `J(U) = ∫_D ω̄ U' dA` from the boundary. Charge arrays use the `ω̄`
/// contour with the interior charge sum; other fields use `−i∮ G U' dz`.
pub fn moment_integral(boundary: &BoundaryCurve, field: &FieldSpec, u: &dyn TestFunction) -> Result<Complex64> {
    Ok(moment_parts(boundary, field, u)?.value)
}

fn moment_parts(boundary: &BoundaryCurve, field: &FieldSpec, u: &dyn TestFunction) -> Result<MomentParts> {
    match field {
        FieldSpec::PointCharges(c) => moment_parts_charges(boundary, c, u),
        other => moment_parts_potential(boundary, other, u),
    }
}

/// `J(U) = −i∮ G U' dz`, valid for every field.
pub fn moment_integral_potential(boundary: &BoundaryCurve, field: &FieldSpec, u: &dyn TestFunction) -> Result<Complex64> {
    Ok(moment_parts_potential(boundary, field, u)?.value)
}

/// Right side `−Σ q U(z_i) + μ U'(z_d) − (β/2) U''(z_q)`.
pub fn moment_rhs(singularities: &[HydroSingularity], u: &dyn TestFunction) -> Complex64 {
    singularities
        .iter()
        .map(|s| match s.kind {
            HydroKind::SourceSink(q) => -q * u.value(s.position),
            HydroKind::Dipole(mu) => mu * u.d1(s.position),
            HydroKind::Quadrupole(beta) => -0.5 * beta * u.d2(s.position),
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `(k, J(U_k) − rhs_k)`.
    pub residuals: Vec<(u32, Complex64)>,
    pub max_abs_residual: f64,
    /// Magnitude of the largest term entering any residual.
    pub scale: f64,
    pub tolerance: f64,
    /// `max_abs_residual <= tolerance · scale`.
    pub verdict: bool,
}

impl ResidualReport {
    pub fn relative(&self) -> f64 {
        self.max_abs_residual / self.scale
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EquilibriumOptions {
    /// Number of test functions `U_k`, `k = 1..=K`.
    pub k: u32,
    pub tolerance: f64,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        EquilibriumOptions { k: 12, tolerance: 1e-8 }
    }
}

/// Residuals of the moment identity for `U_k = ((z − z₀)/R)^k`, with `z₀`
/// the area centroid and `R` the largest distance from it to the boundary.
pub fn check_equilibrium(
    boundary: &BoundaryCurve,
    field: &FieldSpec,
    singularities: &[HydroSingularity],
    opts: EquilibriumOptions,
) -> Result<ResidualReport> {
    let center = boundary.centroid();
    let radius = boundary.radius_about(center);
    if !(radius > 0.0) || !center.is_finite() {
        return Err(Error::Geometry("degenerate boundary".into()));
    }
    let mut residuals = Vec::with_capacity(opts.k as usize);
    let mut scale: f64 = 0.0;
    for k in 1..=opts.k {
        let u = Monomial { center, radius, k };
        let parts = moment_parts(boundary, field, &u)?;
        let rhs = moment_rhs(singularities, &u);
        let rhs_mag: f64 = singularities
            .iter()
            .map(|s| moment_rhs(std::slice::from_ref(s), &u).norm())
            .sum();
        scale = scale.max(parts.magnitude).max(rhs_mag);
        residuals.push((k, parts.value - rhs));
    }
    let max_abs_residual = residuals.iter().map(|(_, r)| r.norm()).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    Ok(ResidualReport {
        verdict: max_abs_residual <= opts.tolerance * scale,
        residuals,
        max_abs_residual,
        scale,
        tolerance: opts.tolerance,
    })
}

/// `−Σ q_j F(z_j) + μ ω(z_d) − (β/2) ω'(z_q)`; the area of the image of
/// the domain under `F` when `F` is univalent there.
///
/// `F` differences are taken as logarithms of ratios, so the value does not
/// depend on where the branch cuts of the individual terms lie relative to
/// a common rotation of the configuration. An equilibrium is only possible
/// when the value is real and positive.
pub fn feasibility(field: &PointCharges, singularities: &[HydroSingularity]) -> Result<Complex64> {
    let sources: Vec<(f64, Complex64)> = singularities
        .iter()
        .filter_map(|s| match s.kind {
            HydroKind::SourceSink(q) => Some((q, s.position)),
            _ => None,
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    if let Some(&(_, z1)) = sources.first() {
        for &(q, zj) in &sources[1..] {
            let mut df = Complex64::new(0.0, 0.0);
            for c in field.charges() {
                if c.position == zj || c.position == z1 {
                    return Err(Error::Pole(c.position));
                }
                df += c.strength / (2.0 * std::f64::consts::PI) * ((zj - c.position) / (z1 - c.position)).ln();
            }
            total -= q * df;
        }
    }
    for s in singularities {
        match s.kind {
            HydroKind::SourceSink(_) => {}
            HydroKind::Dipole(mu) => total += mu * field.current(s.position)?,
            HydroKind::Quadrupole(beta) => total -= 0.5 * beta * field.current_derivative(s.position)?,
        }
    }
    Ok(total)
}

/// `Re > 0` and `|Im| ≤ 1e-10 |Re|`.
pub fn is_feasible(value: Complex64) -> bool {
    value.re > 0.0 && value.im.abs() <= 1e-10 * value.re.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Charge;
    use crate::geometry::{sample_boundary, ConformalMap, NumericMap};
    use crate::spectral::PowerSeries;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk(center: Complex64, r: f64, n: usize) -> BoundaryCurve {
        let m = ConformalMap::Numeric(NumericMap::new(PowerSeries::new(vec![center, c(r, 0.0)])).unwrap());
        sample_boundary(&m, n).unwrap()
    }

    fn charge(q: f64, p: Complex64) -> FieldSpec {
        FieldSpec::PointCharges(PointCharges::single(q, p).unwrap())
    }

    fn z_test() -> Monomial {
        Monomial { center: c(0.0, 0.0), radius: 1.0, k: 1 }
    }

    #[test]
    fn centered_charge_cancels() {
        let b = disk(c(0.0, 0.0), 2.0, 256);
        let j = moment_integral(&b, &charge(2.0 * PI, c(0.0, 0.0)), &z_test()).unwrap();
        assert!(j.norm() < 1e-13);
        let one = Monomial { center: c(0.0, 0.0), radius: 1.0, k: 0 };
        let j = moment_integral(&b, &charge(2.0 * PI, c(0.3, 0.1)), &one).unwrap();
        assert!(j.norm() < 1e-13);
    }

    #[test]
    fn outside_charge_matches_mean_value() {
        // ∫ dA / z̄ over the disk |z − 3| < 1 equals π/3 by the mean value property
        let b = disk(c(3.0, 0.0), 1.0, 256);
        let j = moment_integral(&b, &charge(2.0 * PI, c(0.0, 0.0)), &z_test()).unwrap();
        assert!((j - c(PI / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn both_boundary_forms_agree() {
        let b = disk(c(0.5, 0.2), 1.5, 512);
        let field = FieldSpec::PointCharges(
            PointCharges::new(vec![
                Charge::new(1.0, c(0.1, 0.0)).unwrap(),
                Charge::new(-2.0, c(4.0, 1.0)).unwrap(),
            ])
            .unwrap(),
        );
        for k in 0..5 {
            let u = Monomial { center: c(0.0, 0.0), radius: 1.0, k };
            let a = moment_integral(&b, &field, &u).unwrap();
            let g = moment_integral_potential(&b, &field, &u).unwrap();
            assert!((a - g).norm() < 1e-11, "k = {k}: {a} vs {g}");
        }
    }

    #[test]
    fn charge_on_boundary_is_ill_conditioned() {
        let b = disk(c(0.0, 0.0), 1.0, 256);
        let r = moment_integral(&b, &charge(1.0, c(1.0, 0.0)), &z_test());
        assert!(matches!(r, Err(Error::IllConditioned(_))));
    }

    #[test]
    fn feasibility_examples() {
        let field = PointCharges::single(2.0, c(0.0, 0.0)).unwrap();
        let s = [HydroSingularity::source(1.0, c(1.0, 0.0)), HydroSingularity::source(-1.0, c(4.0, 0.0))];
        let v = feasibility(&field, &s).unwrap();
        assert!((v - c(2.0 * 4f64.ln() / (2.0 * PI), 0.0)).norm() < 1e-14);
        assert!(is_feasible(v));
        let v = feasibility(&field, &[HydroSingularity::dipole(1.0, c(2.0, 0.0))]).unwrap();
        assert!((v - c(2.0 / (2.0 * PI * 2.0), 0.0)).norm() < 1e-15);
        // source and sink on the same circle about the charge: different field lines
        let s = [HydroSingularity::source(1.0, c(1.0, 0.0)), HydroSingularity::source(-1.0, c(0.0, 1.0))];
        assert!(!is_feasible(feasibility(&field, &s).unwrap()));
    }

    #[test]
    fn unbalanced_sources_rejected() {
        assert!(check_balanced(&[HydroSingularity::source(1.0, c(0.0, 0.0))]).is_err());
        assert!(check_balanced(&[
            HydroSingularity::source(1.0, c(0.0, 0.0)),
            HydroSingularity::source(-1.0, c(1.0, 0.0))
        ])
        .is_ok());
    }
}
