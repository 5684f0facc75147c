//! Dormand–Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive step-size control settings.
#[derive(Debug, Clone, Copy)]
pub struct Dopri {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Dopri {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-13,
            max_steps: 200_000,
        }
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl Dopri {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol * 1e-2,
            ..Self::default()
        }
    }

    /// Integrates `y' = f(x, y)` from `x0` to `x1`, returning `y(x1)`.
    pub fn integrate<const N: usize, F>(&self, f: F, x0: f64, y0: [f64; N], x1: f64) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let out = self.integrate_grid(f, &[x0, x1], y0)?;
        Ok(out[1])
    }

    /// Integrates through the monotone node sequence `grid` (starting at
    /// `grid[0]` with state `y0`) and returns the state at every node. Step
    /// size is carried across nodes; each node is hit exactly.
    pub fn integrate_grid<const N: usize, F>(&self, mut f: F, grid: &[f64], y0: [f64; N]) -> Result<Vec<[f64; N]>>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let mut out = Vec::with_capacity(grid.len());
        out.push(y0);
        if grid.len() < 2 {
            return Ok(out);
        }
        let span = grid[grid.len() - 1] - grid[0];
        if span == 0.0 {
            out.extend(std::iter::repeat_n(y0, grid.len() - 1));
            return Ok(out);
        }
        let dir = span.signum();
        let mut x = grid[0];
        let mut y = y0;
        let mut k1 = f(x, &y);
        let mut h = dir * (span.abs() * 1e-3).min((grid[1] - grid[0]).abs().max(f64::MIN_POSITIVE));
        let mut steps = 0usize;

        for &target in &grid[1..] {
            while (target - x) * dir > 0.0 {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::Convergence(format!(
                        "ODE integration exceeded {} steps near x = {x}",
                        self.max_steps
                    )));
                }
                let mut last = false;
                let planned = h;
                if (x + h - target) * dir >= 0.0 {
                    h = target - x;
                    last = true;
                }
                let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
                let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
                let k4 = f(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
                let k5 = f(
                    x + C5 * h,
                    &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
                );
                let k6 = f(
                    x + h,
                    &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
                );
                let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
                let k7 = f(x + h, &y_new);

                let mut err = 0.0f64;
                for i in 0..N {
                    let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                    let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                    err = err.max((e / sc).abs());
                }
                if !err.is_finite() {
                    return Err(Error::Convergence(format!("non-finite ODE state near x = {x}")));
                }
                if err <= 1.0 {
                    x = if last { target } else { x + h };
                    y = y_new;
                    k1 = k7;
                    let grow = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).min(5.0)
                    };
                    // a step clipped to hit a node says nothing about the scale
                    h = if last {
                        planned.abs().max((h * grow).abs()) * dir
                    } else {
                        h * grow
                    };
                } else {
                    h *= (0.9 * err.powf(-0.2)).max(0.2);
                    if h.abs() < 1e-14 * span.abs() {
                        return Err(Error::Convergence(format!("ODE step size underflow near x = {x}")));
                    }
                }
            }
            out.push(y);
        }
        Ok(out)
    }
}
