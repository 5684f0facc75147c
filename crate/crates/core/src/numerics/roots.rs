//! Bracketed scalar root finding.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Terminates when the bracket is narrower than `2 * (tol + 4 eps |x|)` or an
/// exact zero is hit.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::Convergence(format!("Brent iteration did not converge near {b}")))
}

/// Plain bisection; slower than [`brent`] but useful as an independent check.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `f` on `grid` and returns every adjacent pair `(x_i, x_{i+1})` where
/// the sign changes (an exact zero at a node counts once).
pub fn sign_changes<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64]) -> Vec<(f64, f64)> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    sign_changes_of(grid, &values)
}

pub fn sign_changes_of(grid: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            out.push((grid[i], grid[i + 1]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn brent_rejects_missing_bracket() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn brent_and_bisect_agree_on_transcendental() {
        let f = |x: f64| x.cos() - x;
        let a = brent(f, 0.0, 1.0, 1e-13).unwrap();
        let b = bisect(f, 0.0, 1.0, 1e-13).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sign_change_scan() {
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let brackets = sign_changes(f64::sin, &grid);
        assert_eq!(brackets.len(), 3);
    }
}
