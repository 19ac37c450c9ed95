//! Univalence of a map on the closed disk.
//!
//! A map analytic on the closed disk is univalent exactly when its boundary
//! curve is a simple closed curve, which fails either through a vanishing
//! boundary derivative (a cusp) or through a self-intersection. Both are
//! searched for on a sampled boundary and refined locally. Maps symmetric
//! about the real axis also get the sign test on `Im f` over the upper
//! semicircle, since such a boundary can only touch itself across the axis
//! or within one half.

use std::f64::consts::PI;

use num_complex::Complex64;
use robust::{orient2d, Coord};

use super::{segment_distance, ConformalMap};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spectral::{find_root_1d, find_root_2d_with, golden_min, Root2dOptions, MAX_GRID};

/// How univalence fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnivalenceFailure {
    /// `f'(e^{iφ}) = 0`.
    BoundaryDerivativeZero(f64),
    /// `f(e^{iφ₁}) = f(e^{iφ₂})`.
    SelfIntersection(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnivalenceVerdict {
    pub univalent: bool,
    /// Present exactly when `univalent` is false.
    pub failure: Option<UnivalenceFailure>,
    /// Grid size that settled the verdict.
    pub n: usize,
    /// Set when a near-tangency could not be resolved even at the largest grid.
    pub warning: Option<String>,
}

impl UnivalenceVerdict {
    fn ok(n: usize, warning: Option<String>) -> Self {
        UnivalenceVerdict { univalent: true, failure: None, n, warning }
    }

    fn fail(n: usize, failure: UnivalenceFailure) -> Self {
        UnivalenceVerdict { univalent: false, failure: Some(failure), n, warning: None }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UnivalenceOptions {
    /// `|f'|` below `derivative_tol · max |f'|` counts as zero.
    pub derivative_tol: f64,
    /// Angular resolution of local refinements.
    pub angle_tol: f64,
    pub max_n: usize,
}

impl Default for UnivalenceOptions {
    fn default() -> Self {
        UnivalenceOptions { derivative_tol: 1e-10, angle_tol: 1e-10, max_n: MAX_GRID }
    }
}

pub fn check_univalence(map: &ConformalMap, n: usize) -> Result<UnivalenceVerdict> {
    check_univalence_with(map, n, UnivalenceOptions::default())
}

pub fn check_univalence_with(map: &ConformalMap, n: usize, opts: UnivalenceOptions) -> Result<UnivalenceVerdict> {
    if n < 8 {
        return Err(Error::GridSize(n));
    }
    map.validate()?;
    let mut n = n;
    loop {
        match probe(map, n, &opts)? {
            Probe::Settled(v) => return Ok(v),
            Probe::Ambiguous(at) => {
                if n >= opts.max_n {
                    return Ok(UnivalenceVerdict::ok(
                        n,
                        Some(format!("near-tangency at φ ≈ {at:.6} unresolved at n = {n}")),
                    ));
                }
                n *= 2;
            }
        }
    }
}

enum Probe {
    Settled(UnivalenceVerdict),
    Ambiguous(f64),
}

fn at(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

fn probe(map: &ConformalMap, n: usize, opts: &UnivalenceOptions) -> Result<Probe> {
    let h = 2.0 * PI / n as f64;
    let phis: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
    let z: Vec<Complex64> = phis.iter().map(|&p| map.eval(at(p))).collect();
    let d: Vec<f64> = phis.iter().map(|&p| map.derivative(at(p)).norm()).collect();
    if z.iter().any(|v| !v.is_finite()) || d.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotAnalytic("map is not finite on the boundary".into()));
    }

    // cusps
    let scale = d.iter().copied().fold(0.0, f64::max);
    let zero = opts.derivative_tol * scale;
    for k in 0..n {
        let (prev, next) = (d[(k + n - 1) % n], d[(k + 1) % n]);
        if d[k] <= prev && d[k] <= next {
            let (phi, m) = golden_min(|p| map.derivative(at(p)).norm(), phis[k] - h, phis[k] + h, opts.angle_tol);
            if m <= zero {
                return Ok(Probe::Settled(UnivalenceVerdict::fail(
                    n,
                    UnivalenceFailure::BoundaryDerivativeZero(phi.rem_euclid(2.0 * PI)),
                )));
            }
        }
    }

    let symmetric = map.is_real_symmetric() && !matches!(map, ConformalMap::Numeric(_));
    if symmetric {
        if let Some(f) = symmetric_crossing(map, &phis, &z, n, opts) {
            return Ok(Probe::Settled(UnivalenceVerdict::fail(n, f)));
        }
        // remaining failures lie within one half; sweep the upper arc
        let upper = &z[..=n / 2];
        return Ok(match sweep(upper, false) {
            Sweep::Hit(i, j) => Probe::Settled(UnivalenceVerdict::fail(n, refine_pair(map, &phis, i, j, n))),
            Sweep::Near(i) => Probe::Ambiguous(phis[i]),
            Sweep::Clear => Probe::Settled(UnivalenceVerdict::ok(n, None)),
        });
    }

    Ok(match sweep(&z, true) {
        Sweep::Hit(i, j) => Probe::Settled(UnivalenceVerdict::fail(n, refine_pair(map, &phis, i, j, n))),
        Sweep::Near(i) => Probe::Ambiguous(phis[i]),
        Sweep::Clear => Probe::Settled(UnivalenceVerdict::ok(n, None)),
    })
}

/// Sign test on `Im f` over `(0, π)` together with the outward direction at
/// `ζ = ±1`.
fn symmetric_crossing(
    map: &ConformalMap,
    phis: &[f64],
    z: &[Complex64],
    n: usize,
    opts: &UnivalenceOptions,
) -> Option<UnivalenceFailure> {
    let one = Complex64::new(1.0, 0.0);
    if map.derivative(one).re <= 0.0 {
        return Some(UnivalenceFailure::SelfIntersection(0.0, 0.0));
    }
    if map.derivative(-one).re <= 0.0 {
        return Some(UnivalenceFailure::SelfIntersection(PI, PI));
    }
    let im = |p: f64| map.eval(at(p)).im;
    let half = n / 2;
    let h = phis[1];
    for k in 1..half {
        if z[k].im <= 0.0 {
            let lo = phis[k - 1].max(1e-300);
            let phi = if z[k - 1].im > 0.0 || k == 1 {
                find_root_1d(im, if k == 1 { h * 1e-6 } else { lo }, phis[k]).unwrap_or(phis[k])
            } else {
                phis[k]
            };
            return Some(UnivalenceFailure::SelfIntersection(phi, 2.0 * PI - phi));
        }
    }
    for k in 1..half {
        let prev = if k == 1 { f64::INFINITY } else { z[k - 1].im };
        let next = if k + 1 == half { f64::INFINITY } else { z[k + 1].im };
        if z[k].im <= prev && z[k].im <= next {
            let (phi, m) = golden_min(im, phis[k] - h, phis[k] + h, opts.angle_tol);
            if m <= 0.0 {
                return Some(UnivalenceFailure::SelfIntersection(phi, 2.0 * PI - phi));
            }
        }
    }
    None
}

fn refine_pair(map: &ConformalMap, phis: &[f64], i: usize, j: usize, n: usize) -> UnivalenceFailure {
    let h = 2.0 * PI / n as f64;
    let guess = [phis[i] + 0.5 * h, phis[j % n] + 0.5 * h];
    let scale = map.eval(at(0.0)).norm().max(map.center().norm()).max(1e-300);
    let opts = Root2dOptions { tol: 1e-13 * scale, max_iter: 60, fd_step: 1e-8 };
    let refined = find_root_2d_with(
        |p| {
            let g = map.eval(at(p[0])) - map.eval(at(p[1]));
            Some([g.re, g.im])
        },
        guess,
        opts,
    );
    let [a, b] = match refined {
        Ok(p) if (p[0] - p[1]).rem_euclid(2.0 * PI).min((p[1] - p[0]).rem_euclid(2.0 * PI)) > 0.5 * h => p,
        _ => guess,
    };
    UnivalenceFailure::SelfIntersection(a.rem_euclid(2.0 * PI), b.rem_euclid(2.0 * PI))
}

enum Sweep {
    Hit(usize, usize),
    Near(usize),
    Clear,
}

/// First pair of intersecting non-adjacent segments of a closed polygon.
pub fn polygon_self_intersection(points: &[Complex64]) -> Option<(usize, usize)> {
    match sweep(points, true) {
        Sweep::Hit(i, j) => Some((i, j)),
        _ => None,
    }
}

fn coord(p: Complex64) -> Coord<f64> {
    Coord { x: p.re, y: p.im }
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let (ca, cb, cc, cd) = (coord(a), coord(b), coord(c), coord(d));
    let o1 = orient2d(ca, cb, cc);
    let o2 = orient2d(ca, cb, cd);
    let o3 = orient2d(cc, cd, ca);
    let o4 = orient2d(cc, cd, cb);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

fn segment_gap(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    segment_distance(a, c, d)
        .min(segment_distance(b, c, d))
        .min(segment_distance(c, a, b))
        .min(segment_distance(d, a, b))
}

/// Sort-by-x sweep over polygon segments. Exact orientation predicates
/// decide crossings; pairs closer than half their length without crossing
/// are reported as near-tangencies.
fn sweep(points: &[Complex64], closed: bool) -> Sweep {
    let n = points.len();
    let m = if closed { n } else { n - 1 };
    if m < 3 {
        return Sweep::Clear;
    }
    let seg = |k: usize| (points[k], points[(k + 1) % n]);
    let len: Vec<f64> = (0..m).map(|k| (seg(k).1 - seg(k).0).norm()).collect();
    let pad: Vec<f64> = len.iter().map(|l| 0.5 * l).collect();
    let lo_x = |k: usize| seg(k).0.re.min(seg(k).1.re) - pad[k];
    let hi_x = |k: usize| seg(k).0.re.max(seg(k).1.re) + pad[k];
    let lo_y = |k: usize| seg(k).0.im.min(seg(k).1.im) - pad[k];
    let hi_y = |k: usize| seg(k).0.im.max(seg(k).1.im) + pad[k];
    let separation = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        if closed {
            d.min(m - d)
        } else {
            d
        }
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| lo_x(a).total_cmp(&lo_x(b)));
    let mut active: Vec<usize> = Vec::new();
    let mut near: Option<usize> = None;
    for &i in &order {
        let x0 = lo_x(i);
        active.retain(|&j| hi_x(j) >= x0);
        for &j in &active {
            let sep = separation(i, j);
            if sep < 2 {
                continue;
            }
            if hi_y(i) < lo_y(j) || hi_y(j) < lo_y(i) {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return Sweep::Hit(i.min(j), i.max(j));
            }
            if sep >= 3 && near.is_none() && segment_gap(a, b, c, d) < 0.5 * len[i].max(len[j]) {
                near = Some(i);
            }
        }
        active.push(i);
    }
    match near {
        Some(i) => Sweep::Near(i),
        None => Sweep::Clear,
    }
}

/// Locates the parameter at which a one-parameter family changes between
/// univalent and non-univalent, to relative tolerance `rel_tol`.
///
/// Each round evaluates `exec.width()` interior points of the bracket, so
/// the sequential mode is plain bisection.
pub fn critical_parameter<F>(
    family: F,
    lo: f64,
    hi: f64,
    n: usize,
    rel_tol: f64,
    exec: Execution,
) -> Result<f64>
where
    F: Fn(f64) -> Result<ConformalMap> + Sync + Send,
{
    let verdict = |x: f64| -> Result<bool> { Ok(check_univalence(&family(x)?, n)?.univalent) };
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let v_lo = verdict(lo)?;
    let v_hi = verdict(hi)?;
    if v_lo == v_hi {
        return Err(Error::Bracket { lo, hi });
    }
    let width = exec.width().max(1);
    while hi - lo > rel_tol * lo.abs().max(hi.abs()) {
        let step = (hi - lo) / (width + 1) as f64;
        let xs: Vec<f64> = (1..=width).map(|i| lo + step * i as f64).collect();
        let vs = exec.map_slice(&xs, |&x| verdict(x));
        let mut new_lo = lo;
        let mut new_hi = hi;
        for (x, v) in xs.iter().zip(vs) {
            if v? == v_lo {
                new_lo = *x;
            } else {
                new_hi = *x;
                break;
            }
        }
        lo = new_lo;
        hi = new_hi;
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NumericMap;
    use crate::spectral::PowerSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[Complex64]) -> ConformalMap {
        ConformalMap::Numeric(NumericMap::new(PowerSeries::new(coeffs.to_vec())).unwrap())
    }

    #[test]
    fn identity_is_univalent() {
        let v = check_univalence(&poly(&[c(0.0, 0.0), c(1.0, 0.0)]), 256).unwrap();
        assert!(v.univalent && v.failure.is_none());
    }

    #[test]
    fn cusp_is_detected() {
        // ζ + ζ²/2 has f'(−1) = 0
        let v = check_univalence(&poly(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]), 256).unwrap();
        match v.failure {
            Some(UnivalenceFailure::BoundaryDerivativeZero(phi)) => assert!((phi - PI).abs() < 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn loop_is_detected_by_sweep() {
        // ζ + 0.8 ζ² has a small inner loop
        let v = check_univalence(&poly(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.8)]), 256).unwrap();
        assert!(!v.univalent);
        assert!(matches!(v.failure, Some(UnivalenceFailure::SelfIntersection(_, _))));
    }

    #[test]
    fn colocated_family_flags() {
        for (size, univalent) in [(1.0, false), (2f64.sqrt(), false), (2.0 * 2f64.sqrt(), true), (4.0, true)] {
            let m = ConformalMap::DipoleChargeColocated { size, b: 2.0 / size };
            assert_eq!(check_univalence(&m, 2048).unwrap().univalent, univalent, "A = {size}");
        }
    }

    #[test]
    fn square_polygon_is_simple() {
        let sq = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        assert!(polygon_self_intersection(&sq).is_none());
        let bow = [c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(polygon_self_intersection(&bow).is_some());
    }

    #[test]
    fn critical_colocated_size() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let a = critical_parameter(
                |a| Ok(ConformalMap::DipoleChargeColocated { size: a, b: 2.0 / a }),
                1.0,
                4.0,
                1024,
                1e-6,
                exec,
            )
            .unwrap();
            assert!((a - 2.0).abs() < 1e-5, "{a}");
        }
    }

    #[test]
    fn same_verdict_is_a_bracket_error() {
        let r = critical_parameter(
            |a| Ok(ConformalMap::DipoleChargeColocated { size: a, b: 2.0 / a }),
            3.0,
            4.0,
            256,
            1e-6,
            Execution::Sequential,
        );
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }
}
