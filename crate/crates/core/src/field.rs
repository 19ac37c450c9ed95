//! External potentials.
//!
//! A field is either an array of point charges, with
//! `G(z) = Σ (Q_m/2π) ln|z − z'_m|`, complex potential `F` and complex
//! current `ω = F'`, or one of the non-harmonic profiles: a unidirectional
//! `G = H(x)`, an axisymmetric `G = H(x² + y²)`, a composition `H(Re Ξ(z))`
//! with a harmonic core `Ξ`, or the effective potential of a cell with a
//! curved bottom expressed in conformal coordinates.
//!
//! `F` is multivalued; every term uses the principal logarithm. Only `Re F`,
//! `ω` and differences along continuous paths are meaningful downstream.
//!
//! Units are reduced so that the velocity potential is `−G`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::spectral::integrate_adaptive;

/// A point source of the external field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Charge {
    pub strength: f64,
    pub position: Complex64,
}

impl Charge {
    pub fn new(strength: f64, position: Complex64) -> Result<Self> {
        if !strength.is_finite() || strength == 0.0 {
            return Err(invalid(format!("charge strength must be finite and nonzero, got {strength}")));
        }
        if !position.is_finite() {
            return Err(invalid("charge position must be finite"));
        }
        Ok(Charge { strength, position })
    }
}

/// A finite array of charges at distinct positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCharges {
    charges: Vec<Charge>,
}

impl PointCharges {
    pub fn new(charges: Vec<Charge>) -> Result<Self> {
        for (i, a) in charges.iter().enumerate() {
            for b in &charges[i + 1..] {
                if a.position == b.position {
                    return Err(invalid(format!("two charges share the position {}", a.position)));
                }
            }
        }
        Ok(PointCharges { charges })
    }

    /// A single charge.
    pub fn single(strength: f64, position: Complex64) -> Result<Self> {
        Self::new(vec![Charge::new(strength, position)?])
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.charges.iter().all(|c| c.position.im == 0.0)
    }

    fn check(&self, z: Complex64) -> Result<()> {
        match self.charges.iter().find(|c| c.position == z) {
            Some(_) => Err(Error::Pole(z)),
            None => Ok(()),
        }
    }

    pub fn potential(&self, z: Complex64) -> Result<f64> {
        self.check(z)?;
        Ok(self.charges.iter().map(|c| c.strength / (2.0 * PI) * (z - c.position).norm().ln()).sum())
    }

    pub fn complex_potential(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(self.charges.iter().map(|c| c.strength / (2.0 * PI) * (z - c.position).ln()).sum())
    }

    pub fn current(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(self.charges.iter().map(|c| c.strength / (2.0 * PI) / (z - c.position)).sum())
    }

    /// `ω'(z)`.
    pub fn current_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check(z)?;
        Ok(self
            .charges
            .iter()
            .map(|c| -c.strength / (2.0 * PI) / ((z - c.position) * (z - c.position)))
            .sum())
    }
}

/// `G(z)` of a charge array.
pub fn eval_g(field: &PointCharges, z: Complex64) -> Result<f64> {
    field.potential(z)
}

/// `F(z)` with per-term principal logarithms.
pub fn eval_f(field: &PointCharges, z: Complex64) -> Result<Complex64> {
    field.complex_potential(z)
}

/// `ω(z) = F'(z) = G_x − i G_y`.
pub fn eval_omega(field: &PointCharges, z: Complex64) -> Result<Complex64> {
    field.current(z)
}

/// Bottom elevation of a non-planar cell, a polynomial `Σ c_k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationProfile {
    pub coeffs: Vec<f64>,
}

impl ElevationProfile {
    pub fn new(coeffs: Vec<f64>) -> Self {
        ElevationProfile { coeffs }
    }

    pub fn flat(level: f64) -> Self {
        ElevationProfile { coeffs: vec![level] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
    }
}

const ARC_TOL: f64 = 1e-12;

/// `s(x) = ∫₀ˣ √(1 + h'(t)²) dt`, the conformal coordinate of a cell whose
/// bottom varies along one direction.
pub fn conformal_coordinate_1d(h: &ElevationProfile, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("coordinate {x} is not finite")));
    }
    integrate_adaptive(|t| (1.0 + h.slope(t).powi(2)).sqrt(), 0.0, x, ARC_TOL)
}

/// `R(r) = exp ∫₁^r √(1 + K'(ρ)²) dρ/ρ` for an axisymmetric bottom.
pub fn conformal_coordinate_radial(k: &ElevationProfile, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let e = integrate_adaptive(|p| (1.0 + k.slope(p).powi(2)).sqrt() / p, 1.0, r, ARC_TOL)?;
    Ok(e.exp())
}

/// `s⁻¹(y)`, by bisection on `[−|y|, |y|]` (since `|s(x)| ≥ |x|`).
pub fn inverse_conformal_coordinate_1d(h: &ElevationProfile, y: f64) -> Result<f64> {
    let (lo, hi) = if y >= 0.0 { (0.0, y) } else { (y, 0.0) };
    bisect_increasing(|x| conformal_coordinate_1d(h, x), y, lo, hi)
}

/// `R⁻¹(y)`, by bisection between 1 and `y`.
pub fn inverse_conformal_coordinate_radial(k: &ElevationProfile, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {y}")));
    }
    let (lo, hi) = if y >= 1.0 { (1.0, y) } else { (y, 1.0) };
    bisect_increasing(|r| conformal_coordinate_radial(k, r), y, lo, hi)
}

const BISECT_TOL: f64 = 1e-13;

fn bisect_increasing<F>(f: F, target: f64, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if lo == hi {
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= BISECT_TOL * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A strictly increasing profile `H` with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub enum MonotoneProfile {
    Identity,
    /// `x²` on `x ≥ 0`.
    Square,
    /// `x^p` on `x ≥ 0`, `p > 0`.
    Power(f64),
    /// Piecewise-linear through strictly increasing knots `(x_i, y_i)`,
    /// extended linearly beyond the ends.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
    /// `h(s⁻¹(x))` for an increasing elevation `h` of a one-directional
    /// non-planar cell.
    Elevation1d(ElevationProfile),
}

impl MonotoneProfile {
    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(invalid("tabulated profile needs at least two matching knots"));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&xs) || !increasing(&ys) {
            return Err(invalid("tabulated profile must be strictly increasing"));
        }
        Ok(MonotoneProfile::Tabulated { xs, ys })
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(invalid(format!("power profile needs p > 0, got {p}")));
        }
        Ok(MonotoneProfile::Power(p))
    }

    fn nonneg(x: f64) -> Result<f64> {
        if x < 0.0 {
            Err(Error::Domain(format!("profile argument {x} outside x ≥ 0")))
        } else {
            Ok(x)
        }
    }

    pub fn forward(&self, x: f64) -> Result<f64> {
        match self {
            MonotoneProfile::Identity => Ok(x),
            MonotoneProfile::Square => Ok(Self::nonneg(x)?.powi(2)),
            MonotoneProfile::Power(p) => Ok(Self::nonneg(x)?.powf(*p)),
            MonotoneProfile::Tabulated { xs, ys } => Ok(piecewise(xs, ys, x)),
            MonotoneProfile::Elevation1d(h) => Ok(h.eval(inverse_conformal_coordinate_1d(h, x)?)),
        }
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        match self {
            MonotoneProfile::Identity => Ok(1.0),
            MonotoneProfile::Square => Ok(2.0 * Self::nonneg(x)?),
            MonotoneProfile::Power(p) => Ok(p * Self::nonneg(x)?.powf(p - 1.0)),
            MonotoneProfile::Tabulated { xs, ys } => {
                let i = segment(xs, x);
                Ok((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
            }
            MonotoneProfile::Elevation1d(h) => {
                let u = inverse_conformal_coordinate_1d(h, x)?;
                let d = h.slope(u);
                Ok(d / (1.0 + d * d).sqrt())
            }
        }
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        match self {
            MonotoneProfile::Identity => Ok(y),
            MonotoneProfile::Square => {
                if y < 0.0 {
                    Err(Error::Domain(format!("square profile has no preimage of {y}")))
                } else {
                    Ok(y.sqrt())
                }
            }
            MonotoneProfile::Power(p) => {
                if y < 0.0 {
                    Err(Error::Domain(format!("power profile has no preimage of {y}")))
                } else {
                    Ok(y.powf(1.0 / p))
                }
            }
            MonotoneProfile::Tabulated { xs, ys } => {
                let f = |x: f64| Ok(piecewise(xs, ys, x));
                let (lo, hi) = expand_bracket(&f, y, xs[0], xs[xs.len() - 1])?;
                bisect_increasing(f, y, lo, hi)
            }
            MonotoneProfile::Elevation1d(h) => {
                let (lo, hi) = expand_bracket(&|u: f64| Ok(h.eval(u)), y, -1.0, 1.0)?;
                let u = bisect_increasing(|u| Ok(h.eval(u)), y, lo, hi)?;
                conformal_coordinate_1d(h, u)
            }
        }
    }
}

fn expand_bracket<F>(f: &F, y: f64, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let (flo, fhi) = (f(lo)?, f(hi)?);
        if flo <= y && y <= fhi {
            return Ok((lo, hi));
        }
        let w = hi - lo;
        if flo > y {
            lo -= w;
        }
        if fhi < y {
            hi += w;
        }
    }
    Err(Error::Domain(format!("profile value {y} is out of range")))
}

fn segment(xs: &[f64], x: f64) -> usize {
    let n = xs.len();
    match xs.partition_point(|&v| v <= x) {
        0 => 0,
        i if i >= n => n - 2,
        i => i - 1,
    }
}

fn piecewise(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = segment(xs, x);
    ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / (xs[i + 1] - xs[i])
}

/// Harmonic core `Ξ` of a composed field `G = H(Re Ξ(z))`.
#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicCore {
    /// `Ξ(z) = z`.
    Identity,
    /// `Ξ(z) = z²/2`, `Re Ξ = (x² − y²)/2`.
    HalfSquare,
    /// `Ξ = F` of a set of charges. Evaluation only; no inverse.
    Charges(PointCharges),
}

impl HarmonicCore {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            HarmonicCore::Identity => Ok(z),
            HarmonicCore::HalfSquare => Ok(0.5 * z * z),
            HarmonicCore::Charges(c) => c.complex_potential(z),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        match self {
            HarmonicCore::Identity => Ok(Complex64::new(1.0, 0.0)),
            HarmonicCore::HalfSquare => Ok(z),
            HarmonicCore::Charges(c) => c.current(z),
        }
    }

    /// `Ξ⁻¹` on the branch through `reference` (the image of the disk
    /// centre).
    pub fn inverse(&self, w: Complex64, reference: Complex64) -> Result<Complex64> {
        match self {
            HarmonicCore::Identity => Ok(w),
            HarmonicCore::HalfSquare => {
                let r = (2.0 * w).sqrt();
                Ok(if (r - reference).norm() <= (-r - reference).norm() { r } else { -r })
            }
            HarmonicCore::Charges(_) => {
                Err(Error::Unsupported("inverse of a point-charge harmonic core".into()))
            }
        }
    }
}

/// The external field driving an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    PointCharges(PointCharges),
    /// `G = H(x)`.
    Unidirectional(MonotoneProfile),
    /// `G = H(x² + y²)`.
    Axisymmetric(MonotoneProfile),
    /// `G = H(Re Ξ(z))`.
    ComposedHarmonic { profile: MonotoneProfile, core: HarmonicCore },
    /// `G = h(s⁻¹(x))` in conformal coordinates.
    NonPlanarUnidirectional(ElevationProfile),
    /// `G = K(R⁻¹(|z|))` in conformal coordinates.
    NonPlanarRadial(ElevationProfile),
}

impl FieldSpec {
    pub fn is_harmonic(&self) -> bool {
        matches!(self, FieldSpec::PointCharges(_))
            || matches!(self, FieldSpec::Unidirectional(MonotoneProfile::Identity))
            || matches!(
                self,
                FieldSpec::ComposedHarmonic { profile: MonotoneProfile::Identity, .. }
            )
    }

    pub fn charges(&self) -> Option<&PointCharges> {
        match self {
            FieldSpec::PointCharges(c) => Some(c),
            _ => None,
        }
    }

    pub fn potential(&self, z: Complex64) -> Result<f64> {
        match self {
            FieldSpec::PointCharges(c) => c.potential(z),
            FieldSpec::Unidirectional(h) => h.forward(z.re),
            FieldSpec::Axisymmetric(h) => h.forward(z.norm_sqr()),
            FieldSpec::ComposedHarmonic { profile, core } => profile.forward(core.eval(z)?.re),
            FieldSpec::NonPlanarUnidirectional(h) => Ok(h.eval(inverse_conformal_coordinate_1d(h, z.re)?)),
            FieldSpec::NonPlanarRadial(k) => Ok(k.eval(inverse_conformal_coordinate_radial(k, z.norm())?)),
        }
    }

    /// `G_x − i G_y`, equal to `ω` for a charge array.
    pub fn gradient(&self, z: Complex64) -> Result<Complex64> {
        match self {
            FieldSpec::PointCharges(c) => c.current(z),
            FieldSpec::Unidirectional(h) => Ok(Complex64::new(h.derivative(z.re)?, 0.0)),
            FieldSpec::Axisymmetric(h) => Ok(2.0 * h.derivative(z.norm_sqr())? * z.conj()),
            FieldSpec::ComposedHarmonic { profile, core } => {
                Ok(profile.derivative(core.eval(z)?.re)? * core.derivative(z)?)
            }
            FieldSpec::NonPlanarUnidirectional(h) => {
                let d = h.slope(inverse_conformal_coordinate_1d(h, z.re)?);
                Ok(Complex64::new(d / (1.0 + d * d).sqrt(), 0.0))
            }
            FieldSpec::NonPlanarRadial(k) => {
                let r = z.norm();
                if r == 0.0 {
                    return Err(Error::Pole(z));
                }
                let rho = inverse_conformal_coordinate_radial(k, r)?;
                let d = k.slope(rho);
                // dR/dρ = R √(1 + K'²)/ρ with R(ρ) = r
                let dg_dr = d * rho / (r * (1.0 + d * d).sqrt());
                Ok(dg_dr * z.conj() / r)
            }
        }
    }
}
