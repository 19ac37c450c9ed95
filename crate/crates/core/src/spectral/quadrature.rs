//! Gauss-Legendre rules and an adaptive interval integrator built on them.

use crate::error::{Error, Result};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the Legendre
    /// polynomial, accurate to a few ulps for `n` up to several thousand.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (p, p_prev) = legendre_pair(n, x);
            dp = if p.is_finite() { nf * (x * p - p_prev) / (x * x - 1.0) } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn nodes_on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.nodes_on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) as f64 * x * p2 - (j - 1) as f64 * p3) / j as f64;
    }
    (p1, p2)
}

const PANEL_NODES: usize = 15;
const MAX_DEPTH: u32 = 40;

/// Adaptive bisection with a 15-point Gauss-Legendre panel, comparing each
/// panel against its two halves. Targets `rel_tol` relative to the integral.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(PANEL_NODES);
    let panel = |lo: f64, hi: f64| -> Result<f64> {
        let v = rule.integrate(lo, hi, &f);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Integration(format!(
                "integrand is not finite on [{lo}, {hi}]"
            )))
        }
    };
    let whole = panel(a, b)?;
    let tol = rel_tol * whole.abs().max(1e-300) + 1e-300;
    refine(&panel, a, b, whole, tol, 0)
}

fn refine<P>(panel: &P, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    P: Fn(f64, f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let left = panel(a, m)?;
    let right = panel(m, b)?;
    let sum = left + right;
    if (sum - whole).abs() <= tol.max(8.0 * f64::EPSILON * (left.abs() + right.abs())) {
        return Ok(sum);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Integration(format!(
            "adaptive quadrature did not converge on [{a}, {b}]"
        )));
    }
    let sub = tol * std::f64::consts::FRAC_1_SQRT_2;
    Ok(refine(panel, a, m, left, sub, depth + 1)? + refine(panel, m, b, right, sub, depth + 1)?)
}
