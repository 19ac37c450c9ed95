//! Direct 2-D quadratures of `∫_D g dA`, used as independent checks of the
//! boundary forms.

use num_complex::Complex64;

use crate::exec::Execution;
use crate::geometry::{BoundaryCurve, ConformalMap};
use crate::spectral::{self, GaussLegendre};

/// Midpoint rule on an `m × m` grid over the bounding box of the sampled
/// boundary, with a scanline even-odd inside test per row. First order
/// accurate because of the cells cut by the boundary.
pub fn area_integral_grid<G>(boundary: &BoundaryCurve, g: G, m: usize, exec: Execution) -> Complex64
where
    G: Fn(Complex64) -> Complex64 + Sync + Send,
{
    let pts = &boundary.z;
    let n = pts.len();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let hx = (x1 - x0) / m as f64;
    let hy = (y1 - y0) / m as f64;
    let rows = exec.map(m, |j| {
        let y = y0 + (j as f64 + 0.5) * hy;
        let mut cross: Vec<f64> = Vec::new();
        for k in 0..n {
            let a = pts[k];
            let b = pts[(k + 1) % n];
            if (a.im > y) != (b.im > y) {
                cross.push(a.re + (y - a.im) * (b.re - a.re) / (b.im - a.im));
            }
        }
        cross.sort_by(f64::total_cmp);
        let mut acc = Complex64::new(0.0, 0.0);
        for pair in cross.chunks_exact(2) {
            let first = ((pair[0] - x0) / hx - 0.5).ceil().max(0.0) as usize;
            let last = ((pair[1] - x0) / hx - 0.5).floor().min((m - 1) as f64);
            if last < first as f64 {
                continue;
            }
            for i in first..=last as usize {
                acc += g(Complex64::new(x0 + (i as f64 + 0.5) * hx, y));
            }
        }
        acc
    });
    rows.into_iter().sum::<Complex64>() * (hx * hy)
}

/// Pull-back to the disk: `∫₀¹ ∫₀^{2π} g(f(re^{iθ})) |f'(re^{iθ})|² r dθ dr`
/// with Gauss-Legendre in `r` and the trapezoid rule in `θ`. Spectrally
/// accurate whenever `g∘f` is smooth in polar coordinates.
pub fn area_integral_polar<G>(map: &ConformalMap, g: G, nr: usize, ntheta: usize, exec: Execution) -> Complex64
where
    G: Fn(Complex64) -> Complex64 + Sync + Send,
{
    let rule = GaussLegendre::new(nr);
    let nodes: Vec<(f64, f64)> = rule.nodes_on(0.0, 1.0).collect();
    let rings = exec.map_slice(&nodes, |&(r, w)| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..ntheta {
            let zeta = r * spectral::node(ntheta, k);
            acc += g(map.eval(zeta)) * map.derivative(zeta).norm_sqr();
        }
        acc * (w * r * 2.0 * std::f64::consts::PI / ntheta as f64)
    });
    rings.into_iter().sum()
}
