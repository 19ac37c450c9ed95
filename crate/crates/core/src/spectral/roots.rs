//! Scalar and planar root finders.

use crate::error::{Error, Result};

/// Options for [`find_root_1d`].
#[derive(Debug, Clone, Copy)]
pub struct Root1dOptions {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than `x_tol * max(1, |x|)`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for Root1dOptions {
    fn default() -> Self {
        Root1dOptions { f_tol: 1e-12, x_tol: 1e-15, max_iter: 200 }
    }
}

/// Brent's method (bisection, secant and inverse quadratic interpolation)
/// on a sign-changing bracket.
pub fn find_root_1d<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    find_root_1d_with(f, lo, hi, Root1dOptions::default())
}

pub fn find_root_1d_with<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    opts: Root1dOptions,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Domain(format!("non-finite value at bracket end of [{lo}, {hi}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol * b.abs().max(1.0);
        let m = 0.5 * (c - b);
        if fb.abs() <= opts.f_tol || m.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::Domain(format!("non-finite value at x = {b}")));
        }
    }
    Err(Error::Convergence { iterations: opts.max_iter, residual: fb.abs() })
}

/// Options for [`find_root_2d`].
#[derive(Debug, Clone, Copy)]
pub struct Root2dOptions {
    /// Stop once the Euclidean residual norm is at most this.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative finite-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for Root2dOptions {
    fn default() -> Self {
        Root2dOptions { tol: 1e-10, max_iter: 100, fd_step: 1e-7 }
    }
}

/// Damped Newton iteration with a forward-difference Jacobian.
///
/// The residual returns `None` for inadmissible points; the step is then
/// halved, as it is when the residual norm fails to decrease.
pub fn find_root_2d<F>(f: F, guess: [f64; 2]) -> Result<[f64; 2]>
where
    F: FnMut([f64; 2]) -> Option<[f64; 2]>,
{
    find_root_2d_with(f, guess, Root2dOptions::default())
}

pub fn find_root_2d_with<F>(mut f: F, guess: [f64; 2], opts: Root2dOptions) -> Result<[f64; 2]>
where
    F: FnMut([f64; 2]) -> Option<[f64; 2]>,
{
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    let mut x = guess;
    let mut r = f(x).ok_or_else(|| Error::Domain(format!("initial guess {guess:?} is inadmissible")))?;
    let mut rn = norm(r);
    for _ in 0..opts.max_iter {
        if rn <= opts.tol {
            return Ok(x);
        }
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = opts.fd_step * x[k].abs().max(1.0);
            let mut xp = x;
            xp[k] += h;
            let mut rp = f(xp);
            let mut hs = h;
            if rp.is_none() {
                xp[k] = x[k] - h;
                hs = -h;
                rp = f(xp);
            }
            let rp = rp.ok_or_else(|| Error::Domain("Jacobian step left the admissible set".into()))?;
            jac[0][k] = (rp[0] - r[0]) / hs;
            jac[1][k] = (rp[1] - r[1]) / hs;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Convergence { iterations: 0, residual: rn });
        }
        let dx = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det,
        ];
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            if let Some(rt) = f(trial) {
                let tn = norm(rt);
                if tn.is_finite() && tn < rn {
                    x = trial;
                    r = rt;
                    rn = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if rn <= opts.tol {
        Ok(x)
    } else {
        Err(Error::Convergence { iterations: opts.max_iter, residual: rn })
    }
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
/// Returns `(x_min, f(x_min))`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
