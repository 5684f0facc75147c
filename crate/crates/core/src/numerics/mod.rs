//! Numerical building blocks shared by the solvers.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod tridiag;

/// `n` equally spaced points on `[a, b]` including both ends.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
            v[n - 1] = b;
            v
        }
    }
}

/// Relative difference with an absolute floor for values near zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
