//! Uniform-gravity evolution of the exterior Cauchy transform
//! `χ(w) = (1/π) ∫_D dA/(w − z)`.
//!
//! Under gravity `C` every pole of `χ₀` slides to `w − Ct` and each
//! singularity adds the time integral of its own transform:
//!
//! ```text
//! χ(w, t) = χ₀(w + Ct) + ∫₀ᵗ s(w + C(t − τ)) dτ
//! ```
//!
//! A source gives a logarithm, a dipole a difference of two poles. The
//! arithmetic is generic so the dipole identities can be checked exactly
//! in rationals.
//!
//! Residues are `area/π`: a disk of area `S` at `z₀` has `χ = (S/π)/(w − z₀)`.
//! Source rates below are in the same units (`q/π` for a source of flux `q`).

use std::ops::Neg;

use num_complex::{Complex, Complex64};
use num_traits::{Num, Zero};

use crate::error::{Error, Result};

/// Scalar field for the transform arithmetic (`f64`, `Ratio<i64>`, ...).
pub trait Scalar: Clone + Num + Neg<Output = Self> + PartialOrd {}

impl<T: Clone + Num + Neg<Output = T> + PartialOrd> Scalar for T {}

/// `residue / (w − pole)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm<T> {
    pub residue: Complex<T>,
    pub pole: Complex<T>,
}

/// `coefficient · ln((w − to)/(w − from))`, cut along the segment.
#[derive(Debug, Clone, PartialEq)]
pub struct LogTerm<T> {
    pub coefficient: Complex<T>,
    pub from: Complex<T>,
    pub to: Complex<T>,
}

/// A transform built from simple poles and segment logarithms, plus a
/// polynomial part that has to vanish for a bounded domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyTransform<T> {
    pub poles: Vec<PoleTerm<T>>,
    pub logs: Vec<LogTerm<T>>,
    pub polynomial: Vec<Complex<T>>,
}

fn key_less<T: Scalar>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

impl<T: Scalar> CauchyTransform<T> {
    pub fn zero() -> Self {
        CauchyTransform { poles: Vec::new(), logs: Vec::new(), polynomial: Vec::new() }
    }

    pub fn pole(residue: Complex<T>, pole: Complex<T>) -> Self {
        CauchyTransform { poles: vec![PoleTerm { residue, pole }], ..Self::zero() }
    }

    pub fn is_rational(&self) -> bool {
        self.logs.iter().all(|l| l.coefficient.is_zero() || l.from == l.to)
    }

    /// Coefficient of `1/w` at infinity, i.e. area/π.
    pub fn total_residue(&self) -> Complex<T> {
        let mut s = Complex::zero();
        for p in &self.poles {
            s = s + p.residue.clone();
        }
        for l in &self.logs {
            s = s + l.coefficient.clone() * (l.from.clone() - l.to.clone());
        }
        s
    }

    /// `w ↦ χ(w + s)`: every pole and cut moves by `−s`.
    pub fn shifted(&self, s: &Complex<T>) -> Self {
        CauchyTransform {
            poles: self
                .poles
                .iter()
                .map(|p| PoleTerm { residue: p.residue.clone(), pole: p.pole.clone() - s.clone() })
                .collect(),
            logs: self
                .logs
                .iter()
                .map(|l| LogTerm {
                    coefficient: l.coefficient.clone(),
                    from: l.from.clone() - s.clone(),
                    to: l.to.clone() - s.clone(),
                })
                .collect(),
            polynomial: self.polynomial.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.poles.extend(other.poles.iter().cloned());
        out.logs.extend(other.logs.iter().cloned());
        let n = out.polynomial.len().max(other.polynomial.len());
        out.polynomial.resize(n, Complex::zero());
        for (a, b) in out.polynomial.iter_mut().zip(&other.polynomial) {
            *a = a.clone() + b.clone();
        }
        out
    }

    /// Merges coincident poles, drops vanishing terms and sorts, so two
    /// transforms are equal as functions iff their canonical forms are equal.
    pub fn canonical(&self) -> Self {
        let mut poles: Vec<PoleTerm<T>> = Vec::new();
        for p in &self.poles {
            match poles.iter_mut().find(|q| q.pole == p.pole) {
                Some(q) => q.residue = q.residue.clone() + p.residue.clone(),
                None => poles.push(p.clone()),
            }
        }
        poles.retain(|p| !p.residue.is_zero());
        poles.sort_by(|a, b| key_less(&a.pole, &b.pole));
        let mut logs: Vec<LogTerm<T>> = Vec::new();
        for l in &self.logs {
            if l.coefficient.is_zero() || l.from == l.to {
                continue;
            }
            match logs.iter_mut().find(|m| m.from == l.from && m.to == l.to) {
                Some(m) => m.coefficient = m.coefficient.clone() + l.coefficient.clone(),
                None => logs.push(l.clone()),
            }
        }
        logs.retain(|l| !l.coefficient.is_zero());
        logs.sort_by(|a, b| key_less(&a.from, &b.from).then(key_less(&a.to, &b.to)));
        let mut polynomial = self.polynomial.clone();
        while polynomial.last().is_some_and(|c| c.is_zero()) {
            polynomial.pop();
        }
        CauchyTransform { poles, logs, polynomial }
    }

    /// Equality as functions of `w`.
    pub fn same_as(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl CauchyTransform<f64> {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut s = Complex64::zero();
        for p in &self.poles {
            s += p.residue / (w - p.pole);
        }
        for l in &self.logs {
            s += l.coefficient * ((w - l.to) / (w - l.from)).ln();
        }
        let mut wk = Complex64::new(1.0, 0.0);
        for c in &self.polynomial {
            s += c * wk;
            wk *= w;
        }
        s
    }
}

/// Transform of a disk: a single pole with residue `coefficient = area/π`.
pub fn transform_of_disk<T: Scalar>(center: Complex<T>, coefficient: T) -> Result<CauchyTransform<T>> {
    if coefficient < T::zero() {
        return Err(Error::InvalidParameter("disk coefficient must be non-negative".into()));
    }
    if coefficient.is_zero() {
        return Ok(CauchyTransform::zero());
    }
    Ok(CauchyTransform::pole(Complex::new(coefficient, T::zero()), center))
}

/// Inverse of [`transform_of_disk`]: `(center, coefficient)`.
pub fn disk_of_transform<T: Scalar>(chi: &CauchyTransform<T>) -> Result<(Complex<T>, T)> {
    let c = chi.canonical();
    if !c.logs.is_empty() || !c.polynomial.is_empty() || c.poles.len() != 1 {
        return Err(Error::NotADisk);
    }
    let p = &c.poles[0];
    if !p.residue.im.is_zero() || p.residue.re < T::zero() {
        return Err(Error::NotADisk);
    }
    Ok((p.pole.clone(), p.residue.re.clone()))
}

/// A singularity feeding the domain while it sinks.
#[derive(Debug, Clone, PartialEq)]
pub enum GravitySource<T> {
    /// Injection rate `q/π` at a point.
    Source { rate: T, position: Complex<T> },
    /// Dipole: contributes `moment/(w − position)²` to `∂χ/∂t`.
    Dipole { moment: Complex<T>, position: Complex<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GravityScenario<T> {
    /// `ρgk/μ`, the sinking speed.
    pub c: T,
    pub sources: Vec<GravitySource<T>>,
    pub initial: CauchyTransform<T>,
}

impl<T: Scalar> GravityScenario<T> {
    pub fn new(c: T, sources: Vec<GravitySource<T>>, initial: CauchyTransform<T>) -> Result<Self> {
        if !(c > T::zero()) {
            return Err(Error::InvalidParameter("gravity constant must be positive".into()));
        }
        Ok(GravityScenario { c, sources, initial })
    }

    /// Dipole of moment `mu` at the origin acting on `χ₀ = a/w`.
    pub fn dipole_on_disk(c: T, mu: T, a: T) -> Result<Self> {
        let zero = Complex::zero();
        let initial = transform_of_disk(zero.clone(), a)?;
        Self::new(c, vec![GravitySource::Dipole { moment: Complex::new(mu, T::zero()), position: zero }], initial)
    }

    /// Translates the whole scenario by `s`.
    pub fn translated(&self, s: &Complex<T>) -> Self {
        let neg = -s.clone();
        GravityScenario {
            c: self.c.clone(),
            sources: self
                .sources
                .iter()
                .map(|src| match src {
                    GravitySource::Source { rate, position } => {
                        GravitySource::Source { rate: rate.clone(), position: position.clone() + s.clone() }
                    }
                    GravitySource::Dipole { moment, position } => {
                        GravitySource::Dipole { moment: moment.clone(), position: position.clone() + s.clone() }
                    }
                })
                .collect(),
            initial: self.initial.shifted(&neg),
        }
    }
}

impl GravityScenario<f64> {
    /// Sources given by their physical flux `q`, converted to rates `q/π`.
    pub fn with_fluxes(c: f64, fluxes: &[(f64, Complex64)], initial: CauchyTransform<f64>) -> Result<Self> {
        let sources = fluxes
            .iter()
            .map(|&(q, z)| GravitySource::Source { rate: q / std::f64::consts::PI, position: z })
            .collect();
        Self::new(c, sources, initial)
    }
}

fn ct<T: Scalar>(c: &T, t: &T) -> Complex<T> {
    Complex::new(c.clone() * t.clone(), T::zero())
}

/// `χ(·, t)` in closed form.
pub fn evolve_transform<T: Scalar>(scenario: &GravityScenario<T>, t: T) -> Result<CauchyTransform<T>> {
    if t < T::zero() {
        return Err(Error::InvalidParameter("time must be non-negative".into()));
    }
    if scenario.initial.polynomial.iter().any(|c| !c.is_zero()) || !scenario.initial.is_rational() {
        return Err(Error::Unsupported("initial transform must be a sum of simple poles".into()));
    }
    let shift = ct(&scenario.c, &t);
    let mut out = scenario.initial.shifted(&shift);
    let inv_c = Complex::new(T::one() / scenario.c.clone(), T::zero());
    for src in &scenario.sources {
        match src {
            GravitySource::Source { rate, position } => out.logs.push(LogTerm {
                coefficient: Complex::new(rate.clone(), T::zero()) * inv_c.clone(),
                from: position.clone(),
                to: position.clone() - shift.clone(),
            }),
            GravitySource::Dipole { moment, position } => {
                let k = moment.clone() * inv_c.clone();
                out.poles.push(PoleTerm { residue: k.clone(), pole: position.clone() });
                out.poles.push(PoleTerm { residue: -k, pole: position.clone() - shift.clone() });
            }
        }
    }
    Ok(out)
}

/// The stationary and sinking parts of a dipole-driven evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting<T> {
    /// `(μ/C)/(w − z_d)`: the disk that stays put.
    pub stationary: CauchyTransform<T>,
    /// `χ₀(w + Ct) − (μ/C)/(w − z_d + Ct)`.
    pub sinking: CauchyTransform<T>,
    /// Sinking part carries negative area: no such domain exists.
    pub unphysical: bool,
}

pub fn split_decomposition<T: Scalar>(scenario: &GravityScenario<T>, t: T) -> Result<Splitting<T>> {
    let (moment, position) = match scenario.sources.as_slice() {
        [GravitySource::Dipole { moment, position }] => (moment.clone(), position.clone()),
        _ => return Err(Error::InvalidParameter("splitting needs exactly one dipole and no sources".into())),
    };
    if t < T::zero() {
        return Err(Error::InvalidParameter("time must be non-negative".into()));
    }
    let shift = ct(&scenario.c, &t);
    let k = moment * Complex::new(T::one() / scenario.c.clone(), T::zero());
    let stationary = CauchyTransform::pole(k.clone(), position.clone());
    let mut sinking = scenario.initial.shifted(&shift);
    sinking.poles.push(PoleTerm { residue: -k, pole: position - shift });
    let sinking = sinking.canonical();
    let unphysical = sinking.total_residue().re < T::zero();
    Ok(Splitting { stationary, sinking, unphysical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Ratio::new(n, d)
    }

    fn cz(re: Q) -> Complex<Q> {
        Complex::new(re, q(0, 1))
    }

    #[test]
    fn translation_without_sources() {
        let s = GravityScenario::new(2.0, vec![], transform_of_disk(Complex64::new(0.0, 0.0), 3.0).unwrap()).unwrap();
        let chi = evolve_transform(&s, 1.5).unwrap();
        assert!(chi.same_as(&CauchyTransform::pole(Complex64::new(3.0, 0.0), Complex64::new(-3.0, 0.0))));
    }

    #[test]
    fn dipole_identity_is_exact_in_rationals() {
        let (c, mu, a) = (q(3, 2), q(5, 7), q(2, 1));
        let s = GravityScenario::dipole_on_disk(c, mu, a).unwrap();
        for k in 0..100 {
            let t = q(k, 10);
            let chi = evolve_transform(&s, t).unwrap();
            let expected = CauchyTransform::pole(cz(mu / c), cz(q(0, 1)))
                .add(&CauchyTransform::pole(cz(a - mu / c), cz(-(c * t))));
            assert!(chi.same_as(&expected), "t = {t}");
            let split = split_decomposition(&s, t).unwrap();
            assert!(split.stationary.add(&split.sinking).same_as(&chi));
            assert_eq!(chi.total_residue(), cz(a));
        }
    }

    #[test]
    fn initial_time_is_identity() {
        let s = GravityScenario::dipole_on_disk(q(1, 1), q(1, 3), q(4, 5)).unwrap();
        assert!(evolve_transform(&s, q(0, 1)).unwrap().same_as(&s.initial));
    }

    #[test]
    fn balanced_split_leaves_nothing_to_sink() {
        let s = GravityScenario::dipole_on_disk(q(2, 1), q(1, 1), q(1, 2)).unwrap();
        let split = split_decomposition(&s, q(3, 1)).unwrap();
        assert!(split.sinking.same_as(&CauchyTransform::zero()));
        assert!(!split.unphysical);
        let s = GravityScenario::dipole_on_disk(q(2, 1), q(1, 1), q(1, 3)).unwrap();
        assert!(split_decomposition(&s, q(1, 1)).unwrap().unphysical);
    }

    #[test]
    fn balanced_sources_conserve_residue() {
        let s = GravityScenario::with_fluxes(
            1.3,
            &[(1.0, Complex64::new(0.2, 0.1)), (-1.0, Complex64::new(-0.3, 0.0))],
            transform_of_disk(Complex64::new(0.0, 0.0), 1.0).unwrap(),
        )
        .unwrap();
        for t in [0.0, 0.5, 2.0] {
            let r = evolve_transform(&s, t).unwrap().total_residue();
            assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn source_log_matches_time_integral() {
        let (c, t, z0) = (0.8, 1.7, Complex64::new(0.3, -0.2));
        let s = GravityScenario::new(c, vec![GravitySource::Source { rate: 0.6, position: z0 }], CauchyTransform::zero())
            .unwrap();
        let chi = evolve_transform(&s, t).unwrap();
        let w = Complex64::new(4.0, 1.0);
        let rule = crate::spectral::GaussLegendre::new(40);
        let quad: Complex64 = rule.nodes_on(0.0, t).map(|(tau, wt)| wt * 0.6 / (w + c * (t - tau) - z0)).sum();
        assert!((chi.eval(w) - quad).norm() < 1e-13);
    }

    #[test]
    fn translation_covariance() {
        let s = GravityScenario::dipole_on_disk(q(1, 1), q(1, 2), q(3, 1)).unwrap();
        let shift = Complex::new(q(2, 3), q(-1, 5));
        let t = q(7, 4);
        let moved = evolve_transform(&s.translated(&shift), t).unwrap();
        let expected = evolve_transform(&s, t).unwrap().shifted(&-shift);
        assert!(moved.same_as(&expected));
    }

    #[test]
    fn disk_round_trip_and_errors() {
        let d = transform_of_disk(Complex64::new(3.0, 0.0), 2.0).unwrap();
        assert_eq!(d.eval(Complex64::new(5.0, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(disk_of_transform(&d).unwrap(), (Complex64::new(3.0, 0.0), 2.0));
        assert!(transform_of_disk(Complex64::new(0.0, 0.0), 0.0).unwrap().same_as(&CauchyTransform::zero()));
        let two = d.add(&transform_of_disk(Complex64::new(0.0, 0.0), 1.0).unwrap());
        assert_eq!(disk_of_transform(&two), Err(Error::NotADisk));
        let mut poly = CauchyTransform::<f64>::zero();
        poly.polynomial.push(Complex64::new(1.0, 0.0));
        let s = GravityScenario::new(1.0, vec![], poly).unwrap();
        assert!(matches!(evolve_transform(&s, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn unit_disk_boundary_quadrature() {
        // (1/π)∫_D dA/(w − z) = (1/2πi)∮ z̄/(w − z) dz for w outside
        let z: Vec<Complex64> = (0..256).map(|k| crate::spectral::node(256, k)).collect();
        let curve = crate::geometry::BoundaryCurve::from_samples(z);
        let w = Complex64::new(2.5, 0.7);
        let chi = curve.contour_integral(|_, z| z.conj() / (w - z)) / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let d = transform_of_disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert!((chi - d.eval(w)).norm() < 1e-12);
    }
}
