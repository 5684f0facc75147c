//! Polynomial vorticity functions ω(p) on the stream-function range [0, 1].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::roots;

/// Evaluates `c[0] + c[1] x + ...` by Horner's rule.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect()
}

/// Antiderivative vanishing at zero.
pub fn poly_antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(0.0);
    out.extend(coeffs.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
    out
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let mut n = coeffs.len();
    while n > 1 && coeffs[n - 1] == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

/// Real roots of a polynomial inside `[a, b]` where the polynomial changes
/// sign. Roots are isolated recursively between consecutive critical points,
/// so closely spaced roots are not lost to a coarse scan.
pub fn poly_sign_change_roots(coeffs: &[f64], a: f64, b: f64) -> Vec<f64> {
    let c = trim(coeffs);
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut knots = vec![a];
    if c.len() > 2 {
        let dc = poly_derivative(c);
        for r in poly_extrema(&dc, a, b) {
            if r > a && r < b {
                knots.push(r);
            }
        }
    }
    knots.push(b);
    let mut out = Vec::new();
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (poly_eval(c, lo), poly_eval(c, hi));
        if flo == 0.0 && lo == a {
            // handled by the neighbouring interval or the caller's endpoint check
            continue;
        }
        if (flo < 0.0 && fhi >= 0.0) || (flo > 0.0 && fhi <= 0.0) {
            if let Ok(r) = roots::brent(|x| poly_eval(c, x), lo, hi, 1e-15) {
                if out.last().is_none_or(|&last: &f64| (r - last).abs() > 1e-14) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// All points of `[a, b]` where the derivative polynomial `dc` vanishes
/// (sign-changing or touching), used as monotonicity breakpoints.
fn poly_extrema(dc: &[f64], a: f64, b: f64) -> Vec<f64> {
    let dc = trim(dc);
    let mut pts = poly_sign_change_roots(dc, a, b);
    // touching roots of dc are sign-change roots of dc'
    if dc.len() > 2 {
        let ddc = poly_derivative(dc);
        for r in poly_sign_change_roots(&ddc, a, b) {
            if poly_eval(dc, r).abs() < 1e-14 {
                pts.push(r);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts
}

/// Serialized form: `{"omega_poly": [c0, c1, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VorticityConfig {
    pub omega_poly: Vec<f64>,
}

/// Vorticity function ω(p) given by its polynomial coefficients in `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VorticityConfig", into = "VorticityConfig")]
pub struct VorticitySpec {
    coefficients: Vec<f64>,
    derivative: Vec<f64>,
    integral: Vec<f64>,
}

impl TryFrom<VorticityConfig> for VorticitySpec {
    type Error = Error;

    fn try_from(c: VorticityConfig) -> Result<Self> {
        Self::new(c.omega_poly)
    }
}

impl From<VorticitySpec> for VorticityConfig {
    fn from(v: VorticitySpec) -> Self {
        Self {
            omega_poly: v.coefficients,
        }
    }
}

impl VorticitySpec {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("vorticity coefficients must be finite".into()));
        }
        let coefficients = if coefficients.is_empty() {
            vec![0.0]
        } else {
            coefficients
        };
        let derivative = poly_derivative(&coefficients);
        let integral = poly_antiderivative(&coefficients);
        Ok(Self {
            coefficients,
            derivative,
            integral,
        })
    }

    /// ω ≡ 0.
    pub fn irrotational() -> Self {
        Self::new(vec![0.0]).expect("finite")
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![c])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn is_irrotational(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0.0)
    }

    pub fn omega(&self, p: f64) -> f64 {
        poly_eval(&self.coefficients, p)
    }

    pub fn omega_prime(&self, p: f64) -> f64 {
        poly_eval(&self.derivative, p)
    }

    /// Ω(τ) = ∫₀^τ ω(p) dp.
    pub fn big_omega(&self, tau: f64) -> f64 {
        poly_eval(&self.integral, tau)
    }

    pub fn big_omega_coefficients(&self) -> &[f64] {
        &self.integral
    }

    /// Maximum of Ω on `[0, 1]` and a point where it is attained. Candidates
    /// are the endpoints and the sign changes of ω.
    pub fn max_big_omega(&self) -> (f64, f64) {
        let mut best = (0.0, self.big_omega(0.0));
        let mut consider = |t: f64| {
            let v = self.big_omega(t);
            if v > best.1 {
                best = (t, v);
            }
        };
        consider(1.0);
        for r in poly_sign_change_roots(&self.coefficients, 0.0, 1.0) {
            consider(r);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_integral_examples() {
        assert_eq!(VorticitySpec::irrotational().big_omega(1.0), 0.0);
        assert_eq!(VorticitySpec::constant(1.0).unwrap().big_omega(0.5), 0.5);
        let lin = VorticitySpec::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(lin.big_omega(1.0), 0.5);
    }

    #[test]
    fn maximum_of_big_omega() {
        assert_eq!(VorticitySpec::irrotational().max_big_omega().1, 0.0);
        assert_eq!(VorticitySpec::constant(1.0).unwrap().max_big_omega(), (1.0, 1.0));
        assert_eq!(VorticitySpec::constant(-1.0).unwrap().max_big_omega(), (0.0, 0.0));
        // ω = 1 - 2p: Ω = p - p², max at p = 1/2
        let (t, v) = VorticitySpec::new(vec![1.0, -2.0]).unwrap().max_big_omega();
        assert!((t - 0.5).abs() < 1e-14 && (v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn close_roots_are_isolated() {
        // (p - 0.5)(p - 0.5001): both roots inside one coarse cell
        let c = [0.5 * 0.5001, -1.0001, 1.0];
        let r = poly_sign_change_roots(&c, 0.0, 1.0);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 0.5).abs() < 1e-12 && (r[1] - 0.5001).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let v: VorticitySpec = serde_json::from_str(r#"{"omega_poly": [0.5, -1.0]}"#).unwrap();
        assert_eq!(v.omega(1.0), -0.5);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"omega_poly":[0.5,-1.0]}"#);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(VorticitySpec::new(vec![f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn big_omega_vanishes_at_zero(c in proptest::collection::vec(-5.0f64..5.0, 1..6)) {
            let v = VorticitySpec::new(c).unwrap();
            prop_assert_eq!(v.big_omega(0.0), 0.0);
        }

        #[test]
        fn derivative_of_big_omega_is_omega(
            c in proptest::collection::vec(-5.0f64..5.0, 1..6),
            t in 0.0f64..1.0,
        ) {
            let v = VorticitySpec::new(c).unwrap();
            let d = poly_derivative(v.big_omega_coefficients());
            let lhs = poly_eval(&d, t);
            prop_assert!((lhs - v.omega(t)).abs() <= 1e-13 * (1.0 + v.omega(t).abs()));
        }

        #[test]
        fn scan_maximum_dominates_dense_grid(c in proptest::collection::vec(-5.0f64..5.0, 1..6)) {
            let v = VorticitySpec::new(c).unwrap();
            let (_, m) = v.max_big_omega();
            for i in 0..=2000 {
                let t = i as f64 / 2000.0;
                prop_assert!(v.big_omega(t) <= m + 1e-12);
            }
        }
    }
}
