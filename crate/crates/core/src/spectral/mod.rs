//! Unit-circle primitives: uniform grids, discrete Fourier series, the
//! trapezoid rule, Cauchy splitting of boundary data and root finders.
//!
//! Grids hold samples at `ζ_k = exp(2πik/n)`. For data analytic in an
//! annulus around the circle the trapezoid rule and the discrete Fourier
//! coefficients converge geometrically in `n`.

mod quadrature;
mod roots;

pub use quadrature::{integrate_adaptive, GaussLegendre};
pub use roots::{
    find_root_1d, find_root_1d_with, find_root_2d, find_root_2d_with, golden_min, Root1dOptions,
    Root2dOptions,
};

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::exec::Execution;

pub const DEFAULT_GRID: usize = 2048;
pub const MIN_GRID: usize = 64;
pub const MAX_GRID: usize = 32768;
/// Tail-to-peak coefficient ratio above which a grid counts as unresolved.
pub const RESOLUTION_TOL: f64 = 1e-8;

/// Rejects grid sizes outside `64..=32768` or not a power of two.
pub fn check_grid_size(n: usize) -> Result<()> {
    if n.is_power_of_two() && (MIN_GRID..=MAX_GRID).contains(&n) {
        Ok(())
    } else {
        Err(Error::GridSize(n))
    }
}

/// `ζ_k = exp(2πik/n)`.
pub fn node(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, angle(n, k))
}

pub fn angle(n: usize, k: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Samples on the uniform grid of the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleGrid {
    values: Vec<Complex64>,
}

impl CircleGrid {
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        check_grid_size(values.len())?;
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("grid value {k} is not finite")));
        }
        Ok(CircleGrid { values })
    }

    /// Samples `f(ζ_k)` for `k = 0..n`.
    pub fn sample<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Sync + Send,
    {
        Self::sample_with(n, Execution::Sequential, f)
    }

    pub fn sample_with<F>(n: usize, exec: Execution, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Sync + Send,
    {
        check_grid_size(n)?;
        Self::from_values(exec.map(n, |k| f(node(n, k))))
    }

    /// Like [`CircleGrid::sample`] with a fallible sampler.
    pub fn try_sample<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        check_grid_size(n)?;
        let values = (0..n).map(|k| f(node(n, k))).collect::<Result<Vec<_>>>()?;
        Self::from_values(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn fourier(&self) -> FourierSeries {
        FourierSeries::from_values(&self.values)
    }
}

/// Trapezoid rule `(2π/n) Σ g(ζ_k)`, the integral of `g` over `φ ∈ [0, 2π)`.
pub fn circle_quadrature(grid: &CircleGrid) -> Complex64 {
    trapezoid(grid.values())
}

/// Trapezoid rule on an arbitrary uniform periodic sample set.
pub fn trapezoid(values: &[Complex64]) -> Complex64 {
    let s: Complex64 = values.iter().sum();
    s * (2.0 * PI / values.len() as f64)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft(buf: &mut [Complex64], direction: FftDirection) {
    PLANNER.with(|p| {
        let plan = p.borrow_mut().plan_fft(buf.len(), direction);
        plan.process(buf);
    });
}

/// Discrete Fourier coefficients `c_j`, `j ∈ [−n/2, n/2)`, of uniform
/// samples: `g(ζ_k) = Σ_j c_j ζ_k^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    /// Stored in transform order: index `j mod n`.
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    pub fn from_values(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut buf = values.to_vec();
        fft(&mut buf, FftDirection::Forward);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        FourierSeries { coeffs: buf }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Lowest stored frequency, `−n/2`.
    pub fn min_index(&self) -> i64 {
        -((self.n() / 2) as i64)
    }

    /// Highest stored frequency, `n/2 − 1` (or `n/2` rounded down for odd `n`).
    pub fn max_index(&self) -> i64 {
        self.min_index() + self.n() as i64 - 1
    }

    /// `c_j`, zero outside the stored band.
    pub fn coeff(&self, j: i64) -> Complex64 {
        if j < self.min_index() || j > self.max_index() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[j.rem_euclid(self.n() as i64) as usize]
    }

    /// `(j, c_j)` pairs in increasing `j`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        (self.min_index()..=self.max_index()).map(move |j| (j, self.coeff(j)))
    }

    /// Samples at the grid nodes.
    pub fn to_values(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        fft(&mut buf, FftDirection::Inverse);
        buf
    }

    /// Evaluates the trigonometric polynomial at a point on (or near) the
    /// circle.
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let inv = zeta.inv();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for j in 0..=self.max_index() {
            acc += self.coeff(j) * p;
            p *= zeta;
        }
        let mut p = inv;
        for j in 1..=-self.min_index() {
            acc += self.coeff(-j) * p;
            p *= inv;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient in the outer eighth of the band on either side,
    /// relative to the largest coefficient overall.
    pub fn tail_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.n() as i64;
        let edge = (3 * n / 8).max(1);
        self.iter()
            .filter(|(j, _)| j.abs() >= edge)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
            / peak
    }

    /// Samples of `d/dφ` of the series at the grid nodes.
    pub fn derivative_values(&self) -> Vec<Complex64> {
        let n = self.n() as i64;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n()];
        for (j, c) in self.iter() {
            if n % 2 == 0 && j == -n / 2 {
                continue;
            }
            buf[j.rem_euclid(n) as usize] = c * Complex64::new(0.0, j as f64);
        }
        fft(&mut buf, FftDirection::Inverse);
        buf
    }
}

/// Taylor polynomial `Σ a_k w^k`. Used both for functions analytic in the
/// disk (`w = ζ`) and for functions analytic outside it (`w = 1/ζ`).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero() -> Self {
        PowerSeries { coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    /// Values at `e^{i(offset + 2πk/n)}`, `k = 0..n`, by one FFT.
    pub fn sample_circle(&self, n: usize, offset: f64) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            buf[j % n] += c * Complex64::from_polar(1.0, offset * j as f64);
        }
        fft(&mut buf, FftDirection::Inverse);
        buf
    }

    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() <= 1 {
            return PowerSeries::zero();
        }
        PowerSeries {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect(),
        }
    }

    /// Drops trailing coefficients below `tol · max |a_k|`.
    pub fn trimmed(mut self, tol: f64) -> Self {
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.norm() <= tol * peak) {
            self.coeffs.pop();
        }
        self
    }

    pub fn max_abs_diff(&self, other: &PowerSeries) -> f64 {
        let m = self.coeffs.len().max(other.coeffs.len());
        (0..m).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

/// Result of [`cauchy_projection`]: `g = plus(ζ) + minus(1/ζ)` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchySplit {
    /// Analytic inside the disk, carrying half of the mean.
    pub plus: PowerSeries,
    /// Series in `1/ζ`, analytic outside, carrying the other half of the mean.
    pub minus: PowerSeries,
    pub tail_ratio: f64,
    pub n: usize,
}

impl CauchySplit {
    pub fn resolved(&self) -> bool {
        self.tail_ratio <= RESOLUTION_TOL
    }
}

/// Splits boundary data into parts analytic inside and outside the circle.
///
/// Coefficients with `j ≥ 1` go to `plus`, those with `j ≤ −1` to `minus`,
/// and the mean is shared equally. The Nyquist coefficient is shared
/// equally between `ζ^{n/2}` and `ζ^{−n/2}` so the split reproduces the
/// data exactly at the nodes.
pub fn cauchy_projection(grid: &CircleGrid) -> CauchySplit {
    let series = grid.fourier();
    let n = series.n();
    let half = n / 2;
    let c0 = series.coeff(0);
    let nyq = series.coeff(-(half as i64));
    let mut plus = Vec::with_capacity(half + 1);
    let mut minus = Vec::with_capacity(half + 1);
    plus.push(0.5 * c0);
    minus.push(0.5 * c0);
    for j in 1..half {
        plus.push(series.coeff(j as i64));
        minus.push(series.coeff(-(j as i64)));
    }
    plus.push(0.5 * nyq);
    minus.push(0.5 * nyq);
    CauchySplit {
        plus: PowerSeries::new(plus),
        minus: PowerSeries::new(minus),
        tail_ratio: series.tail_ratio(),
        n,
    }
}

/// Samples `g` on successively doubled grids, starting at `n0`, until the
/// split is resolved.
pub fn cauchy_projection_adaptive<F>(n0: usize, g: F) -> Result<CauchySplit>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    check_grid_size(n0)?;
    let mut n = n0;
    loop {
        let split = cauchy_projection(&CircleGrid::try_sample(n, &g)?);
        if split.resolved() {
            return Ok(split);
        }
        if n >= MAX_GRID {
            return Err(Error::Unresolved { n, tail_ratio: split.tail_ratio });
        }
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_size_rules() {
        assert!(check_grid_size(64).is_ok());
        assert!(check_grid_size(32768).is_ok());
        assert_eq!(check_grid_size(32), Err(Error::GridSize(32)));
        assert_eq!(check_grid_size(100), Err(Error::GridSize(100)));
        assert_eq!(check_grid_size(65536), Err(Error::GridSize(65536)));
    }

    #[test]
    fn quadrature_examples() {
        let one = CircleGrid::sample(64, |_| c(1.0, 0.0)).unwrap();
        assert_relative_eq!(circle_quadrature(&one).re, 2.0 * PI, epsilon = 1e-14);
        let z = CircleGrid::sample(64, |z| z).unwrap();
        assert!(circle_quadrature(&z).norm() < 1e-14);
        let g = CircleGrid::sample(64, |z| (c(2.0, 0.0) - z).inv()).unwrap();
        let v = circle_quadrature(&g);
        assert_relative_eq!(v.re, PI, epsilon = 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn fourier_roundtrip() {
        let g = CircleGrid::sample(128, |z| (z * 0.3).exp() + (z.inv() * 0.5).sin()).unwrap();
        let s = g.fourier();
        let back = s.to_values();
        for (a, b) in back.iter().zip(g.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let zeta = node(128, 17);
        assert!((s.eval(zeta) - g.values()[17]).norm() < 1e-12);
    }

    #[test]
    fn spectral_derivative() {
        // d/dφ e^{ζ} = iζ e^{ζ}
        let g = CircleGrid::sample(64, |z| z.exp()).unwrap();
        let d = g.fourier().derivative_values();
        for k in 0..64 {
            let z = node(64, k);
            assert!((d[k] - c(0.0, 1.0) * z * z.exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_examples() {
        let g = CircleGrid::sample(64, |z| z + z.inv()).unwrap();
        let s = cauchy_projection(&g);
        assert!((s.plus.coeff(1) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((s.minus.coeff(1) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(s.plus.coeff(0).norm() < 1e-14 && s.plus.coeff(2).norm() < 1e-14);
        let seven = CircleGrid::sample(64, |_| c(7.0, 0.0)).unwrap();
        let s = cauchy_projection(&seven);
        assert!((s.plus.coeff(0) - c(3.5, 0.0)).norm() < 1e-14);
        assert!((s.minus.coeff(0) - c(3.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn projection_reconstructs_sqrt_data() {
        let g = |z: Complex64| (z + z.inv() + 2.2).sqrt();
        let s = cauchy_projection_adaptive(2048, |z| Ok(g(z))).unwrap();
        for k in (0..s.n).step_by(37) {
            let z = node(s.n, k);
            let r = s.plus.eval(z) + s.minus.eval(z.inv());
            assert!((r - g(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn nyquist_split_is_exact_at_nodes() {
        let g = CircleGrid::sample(64, |z| z.powi(32) * 3.0 + z.powi(-5)).unwrap();
        let s = cauchy_projection(&g);
        for k in 0..64 {
            let z = node(64, k);
            let r = s.plus.eval(z) + s.minus.eval(z.inv());
            assert!((r - g.values()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn unresolved_data_is_reported() {
        // pole at distance 1e-3 from the circle needs far more than 32768 nodes
        let r = cauchy_projection_adaptive(64, |z| Ok((c(1.001, 0.0) - z).inv()));
        assert!(matches!(r, Err(Error::Unresolved { .. })));
    }

    #[test]
    fn circle_sampling_matches_horner() {
        let p = PowerSeries::new((0..100).map(|k| c(1.0 / (k + 1) as f64, 0.3 * k as f64 / 100.0)).collect());
        for (n, off) in [(64, 0.0), (128, 0.1), (256, PI / 256.0)] {
            let v = p.sample_circle(n, off);
            for (k, vk) in v.iter().enumerate() {
                let z = Complex64::from_polar(1.0, off + angle(n, k));
                assert!((vk - p.eval(z)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn power_series_ops() {
        let p = PowerSeries::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(17.0, 0.0));
        assert_eq!(p.derivative().eval(c(2.0, 0.0)), c(14.0, 0.0));
        assert_eq!(p.degree(), 2);
    }
}
