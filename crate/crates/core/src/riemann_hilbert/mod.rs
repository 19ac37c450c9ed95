//! Equilibria in non-harmonic external fields by reduction to scalar
//! Riemann-Hilbert problems on the unit circle.
//!
//! With a dipole at the image of the disk centre the hydrodynamic
//! potential pulls back to `Θ(ζ) = α(ζ + 1/ζ) + β`. The boundary condition
//! fixes a real function of `f` on the circle, which the Cauchy split turns
//! into `f`:
//!
//! * unidirectional `G = H(x)`: `Re f = H⁻¹(Θ)`, `f = 2 P[H⁻¹(Θ)]`,
//! * axisymmetric `G = H(|z|²)`: `ln|f|² = ln H⁻¹(Θ)`, `f = exp P[ln H⁻¹(Θ)]`,
//! * composed `G = H(Re Ξ(z))`: `Z = 2 P[H⁻¹(Θ)]`, `f = Ξ⁻¹(Z)`,
//!
//! where `P` keeps the non-negative frequencies and half the mean. The
//! dipole position and strength then give two real equations for `(α, β)`,
//! written as Gauss-Legendre integrals over `[0, π]`; the strength enters
//! through `μ = α f'(0)`.

mod theta;

pub use theta::{build_theta, DiskSingularity, ThetaFunction, ThetaTemplate};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, HarmonicCore, MonotoneProfile};
use crate::geometry::{ConformalMap, NumericMap};
use crate::moments::HydroSingularity;
use crate::spectral::{self, cauchy_projection, CircleGrid, GaussLegendre, PowerSeries, find_root_2d_with, find_root_1d, Root2dOptions};

/// Which reduction to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum RhProblem {
    Unidirectional(MonotoneProfile),
    Axisymmetric(MonotoneProfile),
    Composed { profile: MonotoneProfile, core: HarmonicCore },
}

impl RhProblem {
    pub fn field(&self) -> FieldSpec {
        match self {
            RhProblem::Unidirectional(h) => FieldSpec::Unidirectional(h.clone()),
            RhProblem::Axisymmetric(h) => FieldSpec::Axisymmetric(h.clone()),
            RhProblem::Composed { profile, core } => {
                FieldSpec::ComposedHarmonic { profile: profile.clone(), core: core.clone() }
            }
        }
    }

    fn profile(&self) -> &MonotoneProfile {
        match self {
            RhProblem::Unidirectional(h) | RhProblem::Axisymmetric(h) => h,
            RhProblem::Composed { profile, .. } => profile,
        }
    }

    /// Real boundary datum whose Cauchy split gives the map.
    fn datum(&self, theta: f64) -> Result<f64> {
        let h = self.profile();
        match self {
            RhProblem::Axisymmetric(_) => {
                let r2 = h.inverse(theta)?;
                if !(r2 > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "H⁻¹(Θ) = {r2} is not positive on the circle, ln f is undefined"
                    )));
                }
                Ok(r2.ln())
            }
            _ => h.inverse(theta),
        }
    }

    fn check(&self) -> Result<()> {
        if let RhProblem::Composed { core: HarmonicCore::Charges(_), .. } = self {
            return Err(Error::Unsupported("composed solver needs an invertible core (identity or z²/2)".into()));
        }
        Ok(())
    }

    /// `(f(0), f'(0))` from the first two cosine coefficients of the datum.
    fn center_and_slope(&self, c0: f64, c1: f64) -> Result<(f64, f64)> {
        match self {
            RhProblem::Unidirectional(_) => Ok((c0, 2.0 * c1)),
            RhProblem::Axisymmetric(_) => {
                let r0 = (0.5 * c0).exp();
                Ok((r0, c1 * r0))
            }
            RhProblem::Composed { core, .. } => match core {
                HarmonicCore::Identity => Ok((c0, 2.0 * c1)),
                HarmonicCore::HalfSquare => {
                    if !(c0 > 0.0) {
                        return Err(Error::Branch(format!("Z(0) = {c0} leaves the branch of √(2Z) through a > 0")));
                    }
                    let a = (2.0 * c0).sqrt();
                    Ok((a, 2.0 * c1 / a))
                }
                HarmonicCore::Charges(_) => Err(Error::Unsupported("point-charge core".into())),
            },
        }
    }
}

/// Solver knobs.
#[derive(Debug, Clone, Copy)]
pub struct RhOptions {
    /// Starting grid size for the Cauchy split; doubled until resolved.
    pub n: usize,
    pub gl_nodes: usize,
    /// Initial `(α, β)` for the parameter solve; `None` means `(μ, 2.5μ)`.
    pub guess: Option<(f64, f64)>,
}

impl Default for RhOptions {
    fn default() -> Self {
        RhOptions { n: spectral::DEFAULT_GRID, gl_nodes: 200, guess: None }
    }
}

/// `(f(0), f'(0))` for given `(α, β)` by Gauss-Legendre quadrature of the two
/// lowest cosine coefficients of the boundary datum.
pub fn dipole_parameters(problem: &RhProblem, alpha: f64, beta: f64, gl_nodes: usize) -> Result<(f64, f64)> {
    let rule = GaussLegendre::new(gl_nodes);
    let mut c0 = 0.0;
    let mut c1 = 0.0;
    for (phi, w) in rule.nodes_on(0.0, PI) {
        let g = problem.datum(2.0 * alpha * phi.cos() + beta)?;
        c0 += w * g;
        c1 += w * g * phi.cos();
    }
    problem.center_and_slope(c0 / PI, c1 / PI)
}

/// A computed equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct RhSolution {
    pub map: ConformalMap,
    pub alpha: f64,
    pub beta: f64,
    /// `f(0)`: dipole position `x₀`, `r₀` or `a`.
    pub center: f64,
    /// Dipole strength `μ` (`W ~ μ/(z − f(0))`).
    pub mu: f64,
    /// `f'(0)` of the sampled map.
    pub slope: f64,
    /// `max |G̃(f) − Θ|` over the grid nodes.
    pub node_residual: f64,
    /// The same at the midpoints between nodes.
    pub midpoint_residual: f64,
    pub n: usize,
    pub warnings: Vec<String>,
}

impl RhSolution {
    /// The dipole as a moment-identity singularity (`J(U) = 2πμ U'(z_d)`).
    pub fn singularity(&self) -> HydroSingularity {
        HydroSingularity::dipole(2.0 * PI * self.mu, Complex64::new(self.center, 0.0))
    }

    pub fn b_ratio(&self) -> f64 {
        self.beta / self.alpha
    }
}

/// `max |G̃(f) − Θ|` at the angles `offset + 2πk/n`.
fn boundary_residual(problem: &RhProblem, map: &ConformalMap, theta: &ThetaFunction, n: usize, offset: f64) -> Result<f64> {
    let ConformalMap::Numeric(m) = map else {
        return Err(Error::Unsupported("residual needs a numeric map".into()));
    };
    let field = problem.field();
    let mut worst: f64 = 0.0;
    for (k, z) in m.series().sample_circle(n, offset).into_iter().enumerate() {
        let phi = offset + spectral::angle(n, k);
        worst = worst.max((field.potential(z)? - theta.on_circle(phi)).abs());
    }
    Ok(worst)
}

fn build_map(problem: &RhProblem, values: Vec<Complex64>, center: f64) -> Result<ConformalMap> {
    let n = values.len();
    let split = cauchy_projection(&CircleGrid::from_values(values)?);
    let plus = &split.plus;
    let boundary: Vec<Complex64> = match problem {
        RhProblem::Unidirectional(_) | RhProblem::Composed { core: HarmonicCore::Identity, .. } => {
            return Ok(ConformalMap::Numeric(NumericMap::new(PowerSeries::new(
                plus.coeffs.iter().map(|c| 2.0 * c).collect(),
            ).trimmed(1e-17))?));
        }
        RhProblem::Axisymmetric(_) => {
            let vals: Vec<Complex64> = plus.sample_circle(n, 0.0).into_iter().map(|v| v.exp()).collect();
            let mut winding = 0.0;
            for k in 0..n {
                winding += (vals[(k + 1) % n] / vals[k]).arg();
            }
            if (winding / (2.0 * PI)).round() != 0.0 {
                return Err(Error::AssumptionViolated("boundary winds around the symmetry axis".into()));
            }
            vals
        }
        RhProblem::Composed { core, .. } => {
            let z: Vec<Complex64> = plus.sample_circle(n, 0.0).into_iter().map(|v| 2.0 * v).collect();
            let mut winding = 0.0;
            for k in 0..n {
                winding += (z[(k + 1) % n] / z[k]).arg();
            }
            if (winding / (2.0 * PI)).round() != 0.0 {
                return Err(Error::Branch("Z vanishes inside the disk, Ξ⁻¹(Z) has a branch point".into()));
            }
            // continue Ξ⁻¹ along the circle starting from the branch through f(0)
            let start = core.inverse(2.0 * plus.eval(Complex64::new(1.0, 0.0)), Complex64::new(center, 0.0))?;
            let mut out = Vec::with_capacity(n);
            let mut prev = start;
            for zk in z {
                let w = core.inverse(zk, prev)?;
                out.push(w);
                prev = w;
            }
            out
        }
    };
    Ok(ConformalMap::Numeric(NumericMap::from_boundary_values(&boundary)?))
}

/// Builds the map for fixed `(α, β)`, doubling the grid until the Cauchy
/// split is resolved (up to 32768 nodes, then with a warning).
pub fn solve_from_theta(problem: &RhProblem, alpha: f64, beta: f64, opts: RhOptions) -> Result<RhSolution> {
    problem.check()?;
    spectral::check_grid_size(opts.n)?;
    if !(alpha > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("need α > 0 and finite β, got ({alpha}, {beta})")));
    }
    let theta = ThetaFunction::DipolePair { alpha, beta };
    let (center, slope_gl) = dipole_parameters(problem, alpha, beta, opts.gl_nodes)?;
    let mut n = opts.n;
    let mut warnings = Vec::new();
    // double until both the datum and the map built from it are resolved
    let map = loop {
        let values: Vec<Complex64> = (0..n)
            .map(|k| problem.datum(theta.on_circle(spectral::angle(n, k))).map(|g| Complex64::new(g, 0.0)))
            .collect::<Result<_>>()?;
        let tail = CircleGrid::from_values(values.clone())?.fourier().tail_ratio();
        let last = n >= spectral::MAX_GRID;
        if tail > spectral::RESOLUTION_TOL && !last {
            n *= 2;
            continue;
        }
        match build_map(problem, values, center) {
            Ok(map) => {
                if tail > spectral::RESOLUTION_TOL {
                    warnings.push(format!("boundary datum unresolved at n = {n} (tail ratio {tail:.2e})"));
                }
                break map;
            }
            Err(Error::NotAnalytic(_)) if !last => n *= 2,
            Err(e) => return Err(e),
        }
    };
    let node_residual = boundary_residual(problem, &map, &theta, n, 0.0)?;
    let midpoint_residual = boundary_residual(problem, &map, &theta, n, PI / n as f64)?;
    let f0 = map.center();
    let slope = map.derivative(Complex64::new(0.0, 0.0)).re;
    if (f0.re - center).abs() > 1e-6 * center.abs().max(1.0) || (slope - slope_gl).abs() > 1e-6 * slope_gl.abs().max(1.0) {
        warnings.push(format!(
            "sampled map gives f(0) = {}, f'(0) = {slope}; quadrature gives {center}, {slope_gl}",
            f0.re
        ));
    }
    Ok(RhSolution {
        map,
        alpha,
        beta,
        center,
        mu: alpha * slope_gl,
        slope,
        node_residual,
        midpoint_residual,
        n,
        warnings,
    })
}

/// Finds `(α, β)`, `β > 2α`, placing a dipole of strength `mu` at
/// `f(0) = center`, then builds the map.
pub fn solve(problem: &RhProblem, center: f64, mu: f64, opts: RhOptions) -> Result<RhSolution> {
    problem.check()?;
    if !(center > 0.0) || !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("need positive position and strength, got ({center}, {mu})")));
    }
    let (a0, b0) = opts.guess.unwrap_or((mu, 2.5 * mu));
    if !(a0 > 0.0) || !(b0 > 2.0 * a0) {
        return Err(Error::InvalidParameter(format!("initial guess ({a0}, {b0}) violates β > 2α")));
    }
    // α = e^u, β = α (2 + e^v) keeps both constraints
    let unpack = |p: [f64; 2]| {
        let alpha = p[0].exp();
        (alpha, alpha * (2.0 + p[1].exp()))
    };
    let residual = |p: [f64; 2]| -> Option<[f64; 2]> {
        let (alpha, beta) = unpack(p);
        let (c, s) = dipole_parameters(problem, alpha, beta, opts.gl_nodes).ok()?;
        if !(c > 0.0) || !(s > 0.0) {
            return None;
        }
        Some([(c / center).ln(), (alpha * s / mu).ln()])
    };
    let guess = [a0.ln(), (b0 / a0 - 2.0).ln()];
    let root = find_root_2d_with(residual, guess, Root2dOptions { tol: 1e-12, max_iter: 100, fd_step: 1e-7 })
        .map_err(|e| Error::NoSolution(format!("parameter solve failed: {e}")))?;
    let (alpha, beta) = unpack(root);
    solve_from_theta(problem, alpha, beta, opts)
}

pub fn solve_unidirectional(profile: MonotoneProfile, x0: f64, mu: f64, opts: RhOptions) -> Result<RhSolution> {
    solve(&RhProblem::Unidirectional(profile), x0, mu, opts)
}

pub fn solve_axisymmetric(profile: MonotoneProfile, r0: f64, mu: f64, opts: RhOptions) -> Result<RhSolution> {
    solve(&RhProblem::Axisymmetric(profile), r0, mu, opts)
}

pub fn solve_composed(core: HarmonicCore, profile: MonotoneProfile, a: f64, mu: f64, opts: RhOptions) -> Result<RhSolution> {
    solve(&RhProblem::Composed { profile, core }, a, mu, opts)
}

/// For a fixed ratio `B = β/α`, the `α` that puts the dipole at `f(0) = center`.
pub fn alpha_for_center(problem: &RhProblem, b_ratio: f64, center: f64, gl_nodes: usize) -> Result<f64> {
    let g = |la: f64| -> f64 {
        let alpha = la.exp();
        match dipole_parameters(problem, alpha, b_ratio * alpha, gl_nodes) {
            Ok((c, _)) => (c / center).ln(),
            Err(_) => f64::NAN,
        }
    };
    let la = find_root_1d(g, -30.0, 30.0)?;
    Ok(la.exp())
}
