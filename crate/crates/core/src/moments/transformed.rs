//! Moments of the image domain `F(D)` and the rationality of
//! `d F(f(ζ))/dζ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{interior_charges, HydroKind, HydroSingularity};
use crate::error::{Error, Result};
use crate::field::PointCharges;
use crate::geometry::{polygon_self_intersection, preimage, sample_boundary, ConformalMap};
use crate::spectral::{self, trapezoid, FourierSeries, PowerSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedMoment {
    pub order: u32,
    /// `∫_{F(D)} w^order dA` by contour quadrature over the image curve.
    pub lhs: Complex64,
    /// The prediction from the singularity data.
    pub rhs: Complex64,
}

/// Continuous logarithm of `g` sampled along a path, starting from the
/// principal value at the first sample.
fn unwrap_logs(values: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev = values[0].ln();
    out.push(prev);
    for v in &values[1..] {
        let mut l = v.ln();
        let k = ((prev.im - l.im) / (2.0 * PI)).round();
        l.im += 2.0 * PI * k;
        out.push(l);
        prev = l;
    }
    out
}

/// `F` continued along `1 → 0 → ζ_j` from its principal value at `f(1)`.
fn continued_potential(map: &ConformalMap, field: &PointCharges, zeta: Complex64) -> Complex64 {
    const STEPS: usize = 4000;
    let path: Vec<Complex64> = (0..=STEPS)
        .map(|i| Complex64::new(1.0 - i as f64 / STEPS as f64, 0.0))
        .chain((1..=STEPS).map(|i| zeta * (i as f64 / STEPS as f64)))
        .collect();
    let images: Vec<Complex64> = path.iter().map(|&p| map.eval(p)).collect();
    field
        .charges()
        .iter()
        .map(|c| {
            let d: Vec<Complex64> = images.iter().map(|z| z - c.position).collect();
            c.strength / (2.0 * PI) * *unwrap_logs(&d).last().unwrap()
        })
        .sum()
}

/// Moments `M̃_m = ∫_{F(D)} w^m dA`, `m = 0..count`, against
/// `−Σ q F_j^{m+1}/(m+1) + μ (F^m ω)(z_d) − (β/2) (F^m ω)'(z_q)`.
///
/// Requires `F` single-valued and univalent on the domain: no charge inside
/// and a simple image curve.
pub fn transformed_moments(
    map: &ConformalMap,
    field: &PointCharges,
    singularities: &[HydroSingularity],
    count: u32,
    n: usize,
) -> Result<Vec<TransformedMoment>> {
    let boundary = sample_boundary(map, n)?;
    if !interior_charges(&boundary, field)?.is_empty() {
        return Err(Error::ReductionInapplicable("a charge lies inside the domain, F is multivalued there".into()));
    }
    let mut image = vec![Complex64::new(0.0, 0.0); n];
    for c in field.charges() {
        let d: Vec<Complex64> = boundary.z.iter().map(|z| z - c.position).collect();
        for (w, l) in image.iter_mut().zip(unwrap_logs(&d)) {
            *w += c.strength / (2.0 * PI) * l;
        }
    }
    let dimage: Vec<Complex64> = boundary
        .z
        .iter()
        .zip(&boundary.dz)
        .map(|(&z, &dz)| field.current(z).map(|w| w * dz))
        .collect::<Result<_>>()?;
    if let Some((i, j)) = polygon_self_intersection(&image) {
        return Err(Error::ReductionInapplicable(format!(
            "F is not univalent on the domain (image segments {i} and {j} cross)"
        )));
    }

    struct Point {
        kind: HydroKind,
        f: Complex64,
        w: Complex64,
        dw: Complex64,
    }
    let mut points = Vec::with_capacity(singularities.len());
    for s in singularities {
        let zeta = preimage(map, s.position)?;
        points.push(Point {
            kind: s.kind,
            f: continued_potential(map, field, zeta),
            w: field.current(s.position)?,
            dw: field.current_derivative(s.position)?,
        });
    }

    let mut out = Vec::with_capacity(count as usize);
    for m in 0..count {
        let vals: Vec<Complex64> = (0..n).map(|k| image[k].powu(m) * image[k].conj() * dimage[k]).collect();
        let lhs = trapezoid(&vals) / Complex64::new(0.0, 2.0);
        let mf = m as f64;
        let rhs = points
            .iter()
            .map(|p| match p.kind {
                HydroKind::SourceSink(q) => -q * p.f.powu(m + 1) / (mf + 1.0),
                HydroKind::Dipole(mu) => mu * p.f.powu(m) * p.w,
                HydroKind::Quadrupole(beta) => {
                    let lower = if m == 0 { Complex64::new(0.0, 0.0) } else { mf * p.f.powu(m - 1) * p.w * p.w };
                    -0.5 * beta * (lower + p.f.powu(m) * p.dw)
                }
            })
            .sum();
        out.push(TransformedMoment { order: m, lhs, rhs });
    }
    Ok(out)
}

/// Outcome of [`rationality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RationalityReport {
    /// Relative ℓ² Fourier content of `D·(F∘f)'` outside the expected band.
    pub defect: f64,
    /// Known denominator `D(ζ)`.
    pub denominator: PowerSeries,
    /// Coefficients of `D·(F∘f)'` inside the band `0..=degree`.
    pub numerator: PowerSeries,
}

const CENTER_TOL: f64 = 1e-12;

/// Multiplies `(F∘f)'` on the circle by the denominator built from the
/// preimages of interior charges (simple poles) and the reflections
/// `1/ζ̄_j` of the singularity preimages (poles of order 1, 2, 3 for a
/// source, dipole, quadrupole), and measures how far the product is from a
/// polynomial of the predicted degree.
pub fn rationality_check(
    map: &ConformalMap,
    field: &PointCharges,
    singularities: &[HydroSingularity],
    n: usize,
) -> Result<RationalityReport> {
    spectral::check_grid_size(n)?;
    let boundary = sample_boundary(map, n)?;
    let mut denom = PowerSeries::new(vec![Complex64::new(1.0, 0.0)]);
    let mul = |p: &PowerSeries, a: Complex64, b: Complex64| {
        // p · (a + bζ)
        let mut c = vec![Complex64::new(0.0, 0.0); p.coeffs.len() + 1];
        for (k, v) in p.coeffs.iter().enumerate() {
            c[k] += a * v;
            c[k + 1] += b * v;
        }
        PowerSeries::new(c)
    };
    for (_, pos) in interior_charges(&boundary, field)? {
        let zeta = preimage(map, pos)
            .map_err(|e| Error::Unsupported(format!("charge preimage unavailable: {e}")))?;
        denom = mul(&denom, -zeta, Complex64::new(1.0, 0.0));
    }
    let mut ord_inf: i64 = -1;
    for s in singularities {
        let order = match s.kind {
            HydroKind::SourceSink(_) => 1,
            HydroKind::Dipole(_) => 2,
            HydroKind::Quadrupole(_) => 3,
        };
        let zeta = preimage(map, s.position)
            .map_err(|e| Error::Unsupported(format!("singularity preimage unavailable: {e}")))?;
        if zeta.norm() <= CENTER_TOL {
            ord_inf = ord_inf.max(order - 2);
        } else {
            for _ in 0..order {
                denom = mul(&denom, Complex64::new(1.0, 0.0), -zeta.conj());
            }
        }
    }
    let top = denom.degree() as i64 + ord_inf;
    if top < 0 {
        return Err(Error::Unsupported("predicted numerator has negative degree".into()));
    }
    let samples: Vec<Complex64> = (0..n)
        .map(|k| {
            let zeta = spectral::node(n, k);
            let z = boundary.z[k];
            field.current(z).map(|w| denom.eval(zeta) * w * map.derivative(zeta))
        })
        .collect::<Result<_>>()?;
    let series = FourierSeries::from_values(&samples);
    let (mut inside, mut outside) = (0.0, 0.0);
    for (j, c) in series.iter() {
        if (0..=top).contains(&j) {
            inside += c.norm_sqr();
        } else {
            outside += c.norm_sqr();
        }
    }
    let total = inside + outside;
    let defect = if total > 0.0 { (outside / total).sqrt() } else { 0.0 };
    let numerator = PowerSeries::new((0..=top).map(|j| series.coeff(j)).collect());
    Ok(RationalityReport { defect, denominator: denom, numerator })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unwrap_follows_a_full_turn() {
        let v: Vec<Complex64> = (0..=64).map(|k| spectral::node(64, k % 64)).collect();
        let l = unwrap_logs(&v);
        assert!((l[64].im - 2.0 * PI).abs() < 1e-12);
    }
}
