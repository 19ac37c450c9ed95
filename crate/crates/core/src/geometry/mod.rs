//! Conformal maps of the unit disk, their sampled boundaries, univalence
//! and critical-parameter search.

mod univalence;

pub use univalence::{
    check_univalence, check_univalence_with, critical_parameter, polygon_self_intersection,
    UnivalenceFailure, UnivalenceOptions, UnivalenceVerdict,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::spectral::{self, trapezoid, FourierSeries, PowerSeries};

/// Maximum allowed Taylor tail, relative to the largest coefficient, for a
/// sampled map to count as analytic on the closed disk.
pub const ANALYTIC_TOL: f64 = 1e-8;

/// A map `f` from the closed unit disk onto a fluid domain.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalMap {
    /// `√(ab) ((1 + αζ)/(1 − αζ))^{1/λ}`.
    SourceSinkCharge { q: f64, a: f64, b: f64, charge: f64, alpha: f64 },
    /// `a exp(κζ)` with `κ = √(2μ/(aQ))`.
    DipoleChargeLimit { mu: f64, a: f64, charge: f64 },
    /// `A ζ e^{Bζ}`.
    DipoleChargeColocated { size: f64, b: f64 },
    /// `a ζ √(c S(cζ²))`, `S(w) = (1 − e^{−w})/w`, `c = √(β/(a²Q))`.
    QuadrupoleTwoCharges { beta: f64, charge: f64, a: f64 },
    /// Taylor polynomial obtained from boundary samples.
    Numeric(NumericMap),
}

/// A map given by its Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericMap {
    series: PowerSeries,
    derivative: PowerSeries,
}

impl NumericMap {
    /// Checks that the coefficients decay (analyticity on the closed disk).
    pub fn new(series: PowerSeries) -> Result<Self> {
        let c = &series.coeffs;
        let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 || !peak.is_finite() {
            return Err(Error::NotAnalytic("coefficients are zero or not finite".into()));
        }
        let m = c.len();
        if m >= 16 {
            let tail = c[m - m / 8..].iter().map(|v| v.norm()).fold(0.0, f64::max) / peak;
            if tail > ANALYTIC_TOL {
                return Err(Error::NotAnalytic(format!("Taylor tail ratio {tail:e}")));
            }
        }
        let derivative = series.derivative();
        Ok(NumericMap { series, derivative })
    }

    /// Builds the map from samples of its boundary values `f(ζ_k)`; the
    /// negative-frequency content must vanish.
    pub fn from_boundary_values(values: &[Complex64]) -> Result<Self> {
        let s = FourierSeries::from_values(values);
        let peak = s.max_abs();
        let neg = (s.min_index() + 1..0).map(|j| s.coeff(j).norm()).fold(0.0, f64::max);
        if neg > ANALYTIC_TOL * peak.max(f64::MIN_POSITIVE) {
            return Err(Error::NotAnalytic(format!(
                "boundary data has negative-frequency content {:e}",
                neg / peak
            )));
        }
        let coeffs = (0..s.max_index()).map(|j| s.coeff(j)).collect();
        Self::new(PowerSeries::new(coeffs).trimmed(1e-17))
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }
}

/// `S(w) = (1 − e^{−w})/w`, written as `e^{−w/2} sinh(w/2)/(w/2)` so that
/// the square root below stays on one branch for `|w| < 2π`.
fn sinhc(u: Complex64) -> Complex64 {
    if u.norm() < 1e-3 {
        let u2 = u * u;
        1.0 + u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sinh() / u
    }
}

fn sqrt_s(w: Complex64) -> Complex64 {
    (-w / 4.0).exp() * sinhc(w / 2.0).sqrt()
}

impl ConformalMap {
    /// Checks finiteness and the family invariants.
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            ConformalMap::SourceSinkCharge { q, a, b, charge, alpha } => {
                pos("q", q)?;
                pos("a", a)?;
                pos("b", b)?;
                pos("Q", charge)?;
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(invalid(format!("α must lie in (0, 1), got {alpha}")));
                }
                Ok(())
            }
            ConformalMap::DipoleChargeLimit { mu, a, charge } => {
                pos("μ", mu)?;
                pos("a", a)?;
                pos("Q", charge)
            }
            ConformalMap::DipoleChargeColocated { size, b } => {
                pos("A", size)?;
                pos("B", b)
            }
            ConformalMap::QuadrupoleTwoCharges { beta, charge, a } => {
                pos("β", beta)?;
                pos("Q", charge)?;
                pos("a", a)?;
                let c = (beta / (a * a * charge)).sqrt();
                if c >= 2.0 * PI {
                    return Err(Error::NotAnalytic(format!(
                        "c = {c} ≥ 2π puts a branch point inside the disk"
                    )));
                }
                Ok(())
            }
            ConformalMap::Numeric(_) => Ok(()),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            ConformalMap::SourceSinkCharge { q, a, b, charge, alpha } => {
                let lambda = charge / (2.0 * q);
                let m = (1.0 + alpha * z) / (1.0 - alpha * z);
                (a * b).sqrt() * (m.ln() / lambda).exp()
            }
            ConformalMap::DipoleChargeLimit { mu, a, charge } => {
                let k = (2.0 * mu / (a * charge)).sqrt();
                a * (k * z).exp()
            }
            ConformalMap::DipoleChargeColocated { size, b } => size * z * (b * z).exp(),
            ConformalMap::QuadrupoleTwoCharges { beta, charge, a } => {
                let c = (beta / (a * a * charge)).sqrt();
                a * c.sqrt() * z * sqrt_s(c * z * z)
            }
            ConformalMap::Numeric(ref m) => m.series.eval(z),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match *self {
            ConformalMap::SourceSinkCharge { q, alpha, charge, .. } => {
                let lambda = charge / (2.0 * q);
                self.eval(z) * 2.0 * alpha / (lambda * (1.0 - alpha * alpha * z * z))
            }
            ConformalMap::DipoleChargeLimit { mu, a, charge } => {
                let k = (2.0 * mu / (a * charge)).sqrt();
                k * self.eval(z)
            }
            ConformalMap::DipoleChargeColocated { size, b } => size * (b * z).exp() * (1.0 + b * z),
            ConformalMap::QuadrupoleTwoCharges { beta, charge, a } => {
                let c = (beta / (a * a * charge)).sqrt();
                let w = c * z * z;
                a * c.sqrt() * (-w).exp() / sqrt_s(w)
            }
            ConformalMap::Numeric(ref m) => m.derivative.eval(z),
        }
    }

    /// True when `f(ζ̄) = conj f(ζ)` by construction.
    pub fn is_real_symmetric(&self) -> bool {
        match self {
            ConformalMap::Numeric(m) => m.series.coeffs.iter().all(|c| c.im.abs() <= 1e-14 * c.norm().max(1e-300) || c.im == 0.0),
            _ => true,
        }
    }

    /// `f(0)`.
    pub fn center(&self) -> Complex64 {
        self.eval(Complex64::new(0.0, 0.0))
    }

    /// Taylor coefficients, exact for [`ConformalMap::Numeric`] and from
    /// 256 boundary samples otherwise.
    pub fn taylor(&self) -> PowerSeries {
        match self {
            ConformalMap::Numeric(m) => m.series.clone(),
            _ => {
                let samples: Vec<Complex64> = (0..256).map(|k| self.eval(spectral::node(256, k))).collect();
                let s = FourierSeries::from_values(&samples);
                PowerSeries::new((0..s.max_index()).map(|j| s.coeff(j)).collect()).trimmed(1e-17)
            }
        }
    }

    /// The map `r·f` as a numeric map.
    pub fn scaled(&self, r: f64) -> Result<ConformalMap> {
        let coeffs = self.taylor().coeffs.into_iter().map(|c| c * r).collect();
        Ok(ConformalMap::Numeric(NumericMap::new(PowerSeries::new(coeffs))?))
    }
}

/// Uniform samples of a boundary `z_k = f(e^{iφ_k})` and `dz/dφ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub z: Vec<Complex64>,
    pub dz: Vec<Complex64>,
}

impl BoundaryCurve {
    /// From samples only; derivatives by spectral differentiation.
    pub fn from_samples(z: Vec<Complex64>) -> Self {
        let dz = FourierSeries::from_values(&z).derivative_values();
        BoundaryCurve { z, dz }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn phi(&self, k: usize) -> f64 {
        spectral::angle(self.n(), k)
    }

    /// Trapezoid rule for `∮ g(z) dz` over the samples.
    pub fn contour_integral<F: Fn(usize, Complex64) -> Complex64>(&self, g: F) -> Complex64 {
        let v: Vec<Complex64> = (0..self.n()).map(|k| g(k, self.z[k]) * self.dz[k]).collect();
        trapezoid(&v)
    }

    /// Signed area `(1/2)∮(x dy − y dx)`, without a simplicity check.
    pub fn signed_area(&self) -> f64 {
        let v: Vec<Complex64> = self
            .z
            .iter()
            .zip(&self.dz)
            .map(|(z, d)| Complex64::new((z.conj() * d).im, 0.0))
            .collect();
        0.5 * trapezoid(&v).re
    }

    /// Area centroid `∫ z dA / ∫ dA`.
    pub fn centroid(&self) -> Complex64 {
        let first = self.contour_integral(|_, z| Complex64::new(z.norm_sqr(), 0.0));
        first / Complex64::new(0.0, 2.0) / self.signed_area()
    }

    /// `max |z_k − centre|`.
    pub fn radius_about(&self, centre: Complex64) -> f64 {
        self.z.iter().map(|z| (z - centre).norm()).fold(0.0, f64::max)
    }

    /// Winding number of the sampled polygon about `p`.
    pub fn winding_number(&self, p: Complex64) -> i64 {
        let n = self.n();
        let mut total = 0.0;
        for k in 0..n {
            let a = self.z[k] - p;
            let b = self.z[(k + 1) % n] - p;
            total += (b / a).arg();
        }
        (total / (2.0 * PI)).round() as i64
    }

    /// Distance from `p` to the sampled polygon.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let n = self.n();
        (0..n)
            .map(|k| segment_distance(p, self.z[k], self.z[(k + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + t * d)).norm()
}

/// Samples `f` and `dz/dφ = iζ f'(ζ)` at `n` uniform angles.
pub fn sample_boundary(map: &ConformalMap, n: usize) -> Result<BoundaryCurve> {
    if n < 3 {
        return Err(Error::GridSize(n));
    }
    map.validate()?;
    let (fz, fd) = match map {
        ConformalMap::Numeric(m) => (m.series.sample_circle(n, 0.0), m.derivative.sample_circle(n, 0.0)),
        _ => (0..n)
            .map(|k| {
                let zeta = spectral::node(n, k);
                (map.eval(zeta), map.derivative(zeta))
            })
            .unzip(),
    };
    let mut z = Vec::with_capacity(n);
    let mut dz = Vec::with_capacity(n);
    for k in 0..n {
        let zeta = spectral::node(n, k);
        let w = fz[k];
        let d = Complex64::new(0.0, 1.0) * zeta * fd[k];
        if !w.is_finite() || !d.is_finite() {
            return Err(Error::NotAnalytic(format!("map is not finite at φ = {}", spectral::angle(n, k))));
        }
        z.push(w);
        dz.push(d);
    }
    Ok(BoundaryCurve { z, dz })
}

/// Area enclosed by a simple boundary.
pub fn domain_area(boundary: &BoundaryCurve) -> Result<f64> {
    if let Some((i, j)) = polygon_self_intersection(&boundary.z) {
        return Err(Error::Geometry(format!("boundary segments {i} and {j} intersect")));
    }
    let a = boundary.signed_area();
    if a <= 0.0 {
        return Err(Error::Geometry(format!("boundary is negatively oriented (signed area {a})")));
    }
    Ok(a)
}

/// Solves `f(ζ) = target` for `ζ` in (a neighbourhood of) the closed disk by
/// damped Newton iteration from the best of a set of starting points.
pub fn preimage(map: &ConformalMap, target: Complex64) -> Result<Complex64> {
    let mut starts = vec![Complex64::new(0.0, 0.0)];
    for r in [0.3, 0.6, 0.9] {
        for k in 0..16 {
            starts.push(Complex64::from_polar(r, 2.0 * PI * k as f64 / 16.0));
        }
    }
    starts.sort_by(|a, b| {
        let da = (map.eval(*a) - target).norm();
        let db = (map.eval(*b) - target).norm();
        da.total_cmp(&db)
    });
    let scale = target.norm().max(map.center().norm()).max(1e-300);
    let mut last = Error::NoSolution(format!("no preimage of {target} found"));
    for &start in starts.iter().take(6) {
        match newton_preimage(map, target, start, scale) {
            Ok(z) if z.norm() <= 1.0 + 1e-9 => return Ok(z),
            Ok(z) => last = Error::Domain(format!("preimage {z} of {target} lies outside the disk")),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn newton_preimage(map: &ConformalMap, target: Complex64, start: Complex64, scale: f64) -> Result<Complex64> {
    let mut z = start;
    let mut r = map.eval(z) - target;
    for it in 0..200 {
        if r.norm() <= 1e-14 * scale {
            return Ok(z);
        }
        let d = map.derivative(z);
        if d.norm() == 0.0 {
            return Err(Error::Convergence { iterations: it, residual: r.norm() });
        }
        let step = r / d;
        let mut lambda = 1.0;
        loop {
            let trial = z - lambda * step;
            let rt = map.eval(trial) - target;
            if rt.is_finite() && trial.norm() < 1.5 && rt.norm() < r.norm() {
                z = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-12 {
                return if r.norm() <= 1e-12 * scale {
                    Ok(z)
                } else {
                    Err(Error::Convergence { iterations: it, residual: r.norm() })
                };
            }
        }
    }
    Err(Error::Convergence { iterations: 200, residual: r.norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity() -> ConformalMap {
        ConformalMap::Numeric(NumericMap::new(PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0)])).unwrap())
    }

    #[test]
    fn identity_samples() {
        let b = sample_boundary(&identity(), 4).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (z, e) in b.z.iter().zip(expect) {
            assert!((z - e).norm() < 1e-15);
        }
    }

    #[test]
    fn colocated_samples_follow_formula() {
        let m = ConformalMap::DipoleChargeColocated { size: 4.0, b: 0.5 };
        let b = sample_boundary(&m, 64).unwrap();
        for k in 0..64 {
            let zeta = spectral::node(64, k);
            assert!((b.z[k] - 4.0 * zeta * (0.5 * zeta).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn quadrupole_parity() {
        let m = ConformalMap::QuadrupoleTwoCharges { beta: 1.0, charge: 1.0, a: 0.4502 };
        let b = sample_boundary(&m, 128).unwrap();
        for k in 0..128 {
            assert!((b.z[(k + 64) % 128] + b.z[k]).norm() < 1e-12);
            assert!((b.z[(128 - k) % 128] - b.z[k].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_spectral_differentiation() {
        let maps = [
            ConformalMap::SourceSinkCharge { q: 1.0, a: 1.0, b: 4.0, charge: 0.39, alpha: 0.3 },
            ConformalMap::DipoleChargeLimit { mu: 1.0, a: 1.0, charge: 0.4053 },
            ConformalMap::DipoleChargeColocated { size: 4.0, b: 0.5 },
            ConformalMap::QuadrupoleTwoCharges { beta: 1.0, charge: 1.0, a: 0.4502 },
        ];
        for m in &maps {
            let b = sample_boundary(m, 512).unwrap();
            let spectral_dz = FourierSeries::from_values(&b.z).derivative_values();
            let scale = b.dz.iter().map(|d| d.norm()).fold(0.0, f64::max);
            for (d, s) in b.dz.iter().zip(&spectral_dz) {
                assert!((d - s).norm() <= 1e-8 * scale, "{m:?}");
            }
        }
    }

    #[test]
    fn area_examples() {
        let b = sample_boundary(&identity(), 256).unwrap();
        assert_relative_eq!(domain_area(&b).unwrap(), PI, epsilon = 1e-13);
        let mu = 3.0f64;
        let r0 = (mu / PI).sqrt();
        let b = sample_boundary(&identity().scaled(r0).unwrap(), 256).unwrap();
        assert_relative_eq!(domain_area(&b).unwrap(), mu, epsilon = 1e-12);
        // Taylor coefficients of 4ζe^{ζ/2}: 4 (1/2)^{m−1}/(m−1)!
        let m = ConformalMap::DipoleChargeColocated { size: 4.0, b: 0.5 };
        let mut series = 0.0;
        let mut fact = 1.0f64;
        for k in 1..40 {
            if k > 1 {
                fact *= (k - 1) as f64;
            }
            series += k as f64 * 0.25f64.powi(k - 1) / (fact * fact);
        }
        let b = sample_boundary(&m, 256).unwrap();
        assert_relative_eq!(domain_area(&b).unwrap(), PI * 16.0 * series, max_relative = 1e-12);
    }

    #[test]
    fn self_intersecting_area_is_an_error() {
        let m = ConformalMap::DipoleChargeColocated { size: 1.0, b: 2.0 };
        let b = sample_boundary(&m, 512).unwrap();
        assert!(matches!(domain_area(&b), Err(Error::Geometry(_))));
    }

    #[test]
    fn numeric_from_boundary_values() {
        let vals: Vec<Complex64> = (0..64).map(|k| {
            let z = spectral::node(64, k);
            z + 0.1 * z * z
        }).collect();
        let m = NumericMap::from_boundary_values(&vals).unwrap();
        assert!((m.series().coeff(2) - c(0.1, 0.0)).norm() < 1e-15);
        let bad: Vec<Complex64> = (0..64).map(|k| spectral::node(64, k).inv()).collect();
        assert!(matches!(NumericMap::from_boundary_values(&bad), Err(Error::NotAnalytic(_))));
    }

    #[test]
    fn non_decaying_series_is_not_analytic() {
        let coeffs = vec![c(1.0, 0.0); 64];
        assert!(matches!(NumericMap::new(PowerSeries::new(coeffs)), Err(Error::NotAnalytic(_))));
    }

    #[test]
    fn preimages() {
        let m = ConformalMap::DipoleChargeColocated { size: 4.0, b: 0.5 };
        let zeta = c(0.3, -0.4);
        let z = preimage(&m, m.eval(zeta)).unwrap();
        assert!((z - zeta).norm() < 1e-12);
    }

    #[test]
    fn winding_and_centroid() {
        let b = sample_boundary(&identity(), 128).unwrap();
        assert_eq!(b.winding_number(c(0.2, 0.1)), 1);
        assert_eq!(b.winding_number(c(2.0, 0.0)), 0);
        assert!(b.centroid().norm() < 1e-14);
    }
}
