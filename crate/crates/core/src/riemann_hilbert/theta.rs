//! The hydrodynamic potential pulled back to the disk and continued by
//! reflection across the circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `Θ(ζ)`, real on the unit circle and symmetric under `ζ ↦ 1/ζ̄`.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaFunction {
    /// `α(ζ + 1/ζ) + β`: a dipole at the disk centre.
    DipolePair { alpha: f64, beta: f64 },
    /// `Σ (q_j/2π)[ln(ζ − ζ_j) + ln(1 − ζ̄_j ζ) − ln ζ]` for sources `q_j`
    /// at `ζ_j`.
    GeneralLog { terms: Vec<(f64, Complex64)> },
}

impl ThetaFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            ThetaFunction::DipolePair { alpha, beta } => *alpha * (z + z.inv()) + *beta,
            ThetaFunction::GeneralLog { terms } => terms
                .iter()
                .map(|&(q, zj)| q / (2.0 * PI) * ((z - zj).ln() + (1.0 - zj.conj() * z).ln() - z.ln()))
                .sum(),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            ThetaFunction::DipolePair { alpha, .. } => *alpha * (1.0 - (z * z).inv()),
            ThetaFunction::GeneralLog { terms } => terms
                .iter()
                .map(|&(q, zj)| q / (2.0 * PI) * ((z - zj).inv() - zj.conj() / (1.0 - zj.conj() * z) - z.inv()))
                .sum(),
        }
    }

    /// `Θ(e^{iφ})`, real by construction.
    pub fn on_circle(&self, phi: f64) -> f64 {
        match self {
            ThetaFunction::DipolePair { alpha, beta } => 2.0 * alpha * phi.cos() + beta,
            ThetaFunction::GeneralLog { terms } => {
                let z = Complex64::from_polar(1.0, phi);
                terms.iter().map(|&(q, zj)| q / PI * (z - zj).norm().ln()).sum()
            }
        }
    }

    /// Smallest value on the circle (exact for the dipole form, sampled
    /// otherwise).
    pub fn min_on_circle(&self) -> f64 {
        match self {
            ThetaFunction::DipolePair { alpha, beta } => beta - 2.0 * alpha.abs(),
            ThetaFunction::GeneralLog { .. } => {
                (0..4096).map(|k| self.on_circle(2.0 * PI * k as f64 / 4096.0)).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// A singularity given by its preimage in the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskSingularity {
    Source { q: f64, zeta: Complex64 },
    Dipole { zeta: Complex64 },
}

/// Form of `Θ` for a singularity set; dipole parameters stay free.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaTemplate {
    DipolePair,
    GeneralLog(Vec<(f64, Complex64)>),
}

impl ThetaTemplate {
    pub fn instantiate(&self, alpha: f64, beta: f64) -> ThetaFunction {
        match self {
            ThetaTemplate::DipolePair => ThetaFunction::DipolePair { alpha, beta },
            ThetaTemplate::GeneralLog(terms) => ThetaFunction::GeneralLog { terms: terms.clone() },
        }
    }
}

pub fn build_theta(singularities: &[DiskSingularity]) -> Result<ThetaTemplate> {
    for s in singularities {
        let z = match *s {
            DiskSingularity::Source { zeta, .. } | DiskSingularity::Dipole { zeta } => zeta,
        };
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("singularity preimage {z} is not inside the unit disk")));
        }
    }
    match singularities {
        [DiskSingularity::Dipole { zeta }] if zeta.norm() == 0.0 => Ok(ThetaTemplate::DipolePair),
        [DiskSingularity::Dipole { zeta }] => Err(Error::Unsupported(format!("dipole preimage {zeta} away from the centre"))),
        _ => {
            let mut terms = Vec::with_capacity(singularities.len());
            for s in singularities {
                match *s {
                    DiskSingularity::Source { q, zeta } => terms.push((q, zeta)),
                    DiskSingularity::Dipole { .. } => {
                        return Err(Error::Unsupported("dipoles mixed with sources".into()))
                    }
                }
            }
            Ok(ThetaTemplate::GeneralLog(terms))
        }
    }
}
