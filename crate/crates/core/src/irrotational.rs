//! Closed-form small-amplitude expansion for irrotational flow, in variables
//! where the undisturbed depth is 1 and `θ = d₊³` plays the role of the
//! inverse Froude parameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{linspace, roots};

/// Smallest frequency accepted by the coefficient formulas; the mean-mode
/// coefficient is singular as `θ → 1`, i.e. `τ → 0`.
pub const TAU_MIN: f64 = 0.05;
pub const SCAN_POINTS: usize = 512;
pub const ROOT_TOL: f64 = 1e-12;

/// Lower Froude bound below which the needed spectral property is known to
/// hold, taken from numerical solitary-wave computations; not computed here.
pub const FROUDE_LOW: f64 = 1.29;
pub const FROUDE_LOW_SOURCE: &str = "Longuet-Higgins & Fenton (1974), numerical solitary waves";

/// `ν(τ) = τ coth τ`, with `ν(0) = 1`.
pub fn nu(tau: f64) -> f64 {
    let t = tau.abs();
    if t < 1e-4 {
        1.0 + t * t / 3.0
    } else {
        t / t.tanh()
    }
}

/// Both roots `0 < d₋ < 1 < d₊` of `1/d² + 2d = 2R`.
pub fn depths_from_r(r: f64) -> Result<(f64, f64)> {
    if !(r > 1.5) || !r.is_finite() {
        return Err(Error::NoTwoRoots { bernoulli: r });
    }
    let g = |d: f64| 1.0 / (d * d) + 2.0 * d - 2.0 * r;
    let d_minus = roots::brent(g, 0.999 / (2.0 * r).sqrt(), 1.0, 1e-15)?;
    let d_plus = roots::brent(g, 1.0, r, 1e-15)?;
    Ok((d_minus, d_plus))
}

/// `d₊/d₋` in terms of `d₋`.
pub fn conjugate_ratio(d_minus: f64) -> f64 {
    let c = d_minus.powi(3);
    (1.0 + (1.0 + 8.0 * c).sqrt()) / (4.0 * c)
}

/// `θ = ((F + √(F² + 8))/4)³ F`, where `F = d₋^{-3/2}`.
pub fn theta_from_froude(froude: f64) -> f64 {
    ((froude + (froude * froude + 8.0).sqrt()) / 4.0).powi(3) * froude
}

/// Inverse of [`theta_from_froude`].
pub fn froude_from_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidInput(format!("theta must be positive, got {theta}")));
    }
    let mut hi = theta.max(1.0);
    while theta_from_froude(hi) <= theta {
        hi *= 2.0;
    }
    roots::brent(|f| theta_from_froude(f) - theta, 0.0, hi, 1e-15)
}

/// Positive root of `ν(τ) = θ`.
pub fn tau_from_theta(theta: f64) -> Result<f64> {
    if !(theta > 1.0) || !theta.is_finite() {
        return Err(Error::NoThetaRoot { theta });
    }
    // ν(τ) ≥ τ, so θ + 1 bounds the root
    roots::brent(|t| nu(t) - theta, 0.0, theta + 1.0, 1e-15)
}

/// Second-order coefficients of the surface `η = t cos τs + t² (β₁ + β₂ cos 2τs)`
/// and stream function `ψ = 1 + y + t a cos τs sinh τ(y+1)
/// + t² (α₁ (y+1) + α₂ cos 2τs sinh 2τ(y+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub tau: f64,
    pub theta: f64,
    pub a: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// Residuals of the four defining equations and the two eliminated forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientResiduals {
    pub kinematic_mean: f64,
    pub kinematic_double: f64,
    pub bernoulli_mean: f64,
    pub bernoulli_double: f64,
    pub eliminated_mean: f64,
    pub eliminated_double: f64,
}

impl CoefficientResiduals {
    pub fn max_abs(&self) -> f64 {
        [
            self.kinematic_mean,
            self.kinematic_double,
            self.bernoulli_mean,
            self.bernoulli_double,
            self.eliminated_mean,
            self.eliminated_double,
        ]
        .iter()
        .fold(0.0, |m, r| m.max(r.abs()))
    }
}

pub fn second_order_coeffs(tau: f64) -> Result<Coefficients> {
    if !(tau >= TAU_MIN) || !tau.is_finite() {
        return Err(Error::TauBelowMinimum { tau, min: TAU_MIN });
    }
    let theta = nu(tau);
    let nu2 = nu(2.0 * tau);
    let t2 = tau * tau;
    let beta1 = -(theta + 0.5 * (theta * theta - t2)) / (2.0 * (theta - 1.0));
    let alpha1 = 0.5 * theta - beta1;
    let beta2 = -(theta * nu2 + 0.5 * (theta * theta - 3.0 * t2)) / (2.0 * theta - 2.0 * nu2);
    let alpha2 = (0.5 * theta - beta2) / (2.0 * tau).sinh();
    Ok(Coefficients {
        tau,
        theta,
        a: -1.0 / tau.sinh(),
        alpha1,
        alpha2,
        beta1,
        beta2,
    })
}

impl Coefficients {
    pub fn residuals(&self) -> CoefficientResiduals {
        let Self {
            tau,
            theta,
            alpha1,
            alpha2,
            beta1,
            beta2,
            ..
        } = *self;
        let t2 = tau * tau;
        let nu2 = nu(2.0 * tau);
        CoefficientResiduals {
            kinematic_mean: beta1 + alpha1 - 0.5 * theta,
            kinematic_double: beta2 + alpha2 * (2.0 * tau).sinh() - 0.5 * theta,
            bernoulli_mean: 2.0 * alpha1 + 2.0 * theta * beta1 + 0.5 * (theta * theta - t2),
            bernoulli_double: 4.0 * tau * alpha2 * (2.0 * tau).cosh()
                + 2.0 * theta * beta2
                + 0.5 * (theta * theta - 3.0 * t2),
            eliminated_mean: 2.0 * (theta - 1.0) * beta1 + theta + 0.5 * (theta * theta - t2),
            eliminated_double: (2.0 * theta - 2.0 * nu2) * beta2 + theta * nu2 + 0.5 * (theta * theta - 3.0 * t2),
        }
    }
}

/// The function whose sign decides the sign of the wavelength correction:
/// `f(τ) = −(τ²/sinh²τ)(β₁ + β₂/2) + 2θα₁ + α₂(2θτ cosh 2τ − τ² sinh 2τ) − θτ²`.
pub fn f_eval(tau: f64) -> Result<f64> {
    let c = second_order_coeffs(tau)?;
    Ok(f_from(&c))
}

fn f_from(c: &Coefficients) -> f64 {
    let Coefficients {
        tau,
        theta,
        alpha1,
        alpha2,
        beta1,
        beta2,
        ..
    } = *c;
    let t2 = tau * tau;
    -(t2 / tau.sinh().powi(2)) * (beta1 + 0.5 * beta2)
        + 2.0 * theta * alpha1
        + alpha2 * (2.0 * theta * tau * (2.0 * tau).cosh() - t2 * (2.0 * tau).sinh())
        - theta * t2
}

/// `λ₂ = −2 sinh²τ f(τ) / (τ (sinh 2τ − 2τ))`, the coefficient in
/// `λ = 1 + λ₂ t² + …` for a surface of amplitude `t` in unit-depth variables.
pub fn lambda2_irrotational(tau: f64) -> Result<f64> {
    Ok(lambda2_from(tau, f_eval(tau)?))
}

fn lambda2_from(tau: f64, f: f64) -> f64 {
    -2.0 * tau.sinh().powi(2) * f / (tau * ((2.0 * tau).sinh() - 2.0 * tau))
}

/// `μ₂ = −4 λ₂ τ²/θ`, the second-eigenvalue coefficient for the same
/// normalization (physical stream of depth `d₊ = θ^{1/3}` and shear `1/d₊`).
pub fn mu2_irrotational(tau: f64) -> Result<f64> {
    Ok(-4.0 * lambda2_irrotational(tau)? * tau * tau / nu(tau))
}

/// Second-order terms of the level-line height `y(s, p)` with `ψ(s, y) = p`,
/// in unit-depth variables: returns the mean and `cos 2τs` profiles at `p`.
/// Obtained by inverting the stream-function expansion,
/// `y₂ = −ψ₂ − ψ₁_y y₁` with `y₁ = −ψ₁`, all evaluated at `y = p − 1`.
pub fn level_line_modes(c: &Coefficients, p: f64) -> (f64, f64) {
    let shared = 0.25 * c.a * c.a * c.tau * (2.0 * c.tau * p).sinh();
    let mean = -c.alpha1 * p + shared;
    let double = -c.alpha2 * (2.0 * c.tau * p).sinh() + shared;
    (mean, double)
}

/// Full irrotational chain at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrrotationalChain {
    pub theta: f64,
    pub tau_star: f64,
    pub coefficients: Coefficients,
    pub f_value: f64,
    pub lambda2: f64,
    pub mu2: f64,
    /// Froude number `d₋^{-3/2}` of the conjugate supercritical stream.
    pub froude: f64,
}

pub fn chain(tau: f64) -> Result<IrrotationalChain> {
    let coefficients = second_order_coeffs(tau)?;
    let f_value = f_from(&coefficients);
    let lambda2 = lambda2_from(tau, f_value);
    Ok(IrrotationalChain {
        theta: coefficients.theta,
        tau_star: tau,
        coefficients,
        f_value,
        lambda2,
        mu2: -4.0 * lambda2 * tau * tau / coefficients.theta,
        froude: froude_from_theta(coefficients.theta)?,
    })
}

/// Chain for the conjugate-stream Froude number `F > 1`.
pub fn chain_from_froude(froude: f64) -> Result<IrrotationalChain> {
    chain(tau_from_theta(theta_from_froude(froude))?)
}

/// Root `τ₀` of `f`, bracketed on a uniform scan of `[0.5, 3]`.
pub fn tau0_root() -> Result<f64> {
    let grid = linspace(0.5, 3.0, SCAN_POINTS);
    let values = grid.iter().map(|&t| f_eval(t)).collect::<Result<Vec<_>>>()?;
    let brackets = roots::sign_changes_of(&grid, &values);
    let &(a, b) = brackets.first().ok_or(Error::NoBracket { lo: 0.5, hi: 3.0 })?;
    roots::brent(|t| f_eval(t).unwrap_or(f64::NAN), a, b, ROOT_TOL)
}

/// Froude threshold `F₀` where `μ₂` changes sign.
pub fn froude_threshold() -> Result<f64> {
    froude_from_theta(nu(tau0_root()?))
}

/// Froude interval where the spectral assumption on the Stokes branch is
/// known to hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionWindow {
    pub low: f64,
    pub high: f64,
    pub low_source: &'static str,
    /// Analytic upper bound `√2` on the Froude number of solitary waves.
    pub analytic_bound: f64,
    /// `false`: the analytic bound exceeds `F₀`, so it does not close the window.
    pub analytic_bound_sufficient: bool,
}

impl AssumptionWindow {
    pub fn contains(&self, froude: f64) -> bool {
        froude > self.low && froude < self.high
    }
}

pub fn assumption_window() -> Result<AssumptionWindow> {
    let high = froude_threshold()?;
    let analytic_bound = 2f64.sqrt();
    Ok(AssumptionWindow {
        low: FROUDE_LOW,
        high,
        low_source: FROUDE_LOW_SOURCE,
        analytic_bound,
        analytic_bound_sufficient: analytic_bound <= high,
    })
}

/// Max-norm residuals of the truncated two-term expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResidual {
    pub laplace: f64,
    pub bernoulli: f64,
    pub kinematic: f64,
}

/// Inserts the two-term expansion with `λ = 1 + λ₂t²` into
/// `(λ²∂²_s + ∂²_y)ψ = 0`, `ψ(s, η) = 1` and
/// `ψ_y² + λ²ψ_s² + 2θη = 1` at `y = η`, and returns the largest residual
/// of each over one period.
pub fn expansion_residual(tau: f64, t: f64) -> Result<ExpansionResidual> {
    if !(0.0..=0.1).contains(&t) {
        return Err(Error::InvalidInput(format!("amplitude must lie in [0, 0.1], got {t}")));
    }
    let ch = chain(tau)?;
    let Coefficients {
        theta,
        a,
        alpha1,
        alpha2,
        beta1,
        beta2,
        ..
    } = ch.coefficients;
    let lam = 1.0 + ch.lambda2 * t * t;
    let eta = |s: f64| t * (tau * s).cos() + t * t * (beta1 + beta2 * (2.0 * tau * s).cos());
    // ψ and its first derivatives, and λ²ψ_ss + ψ_yy
    let psi = |s: f64, y: f64| {
        let (c1, s1) = ((tau * s).cos(), (tau * s).sin());
        let (c2, s2) = ((2.0 * tau * s).cos(), (2.0 * tau * s).sin());
        let (sh1, ch1) = ((tau * (y + 1.0)).sinh(), (tau * (y + 1.0)).cosh());
        let (sh2, ch2) = ((2.0 * tau * (y + 1.0)).sinh(), (2.0 * tau * (y + 1.0)).cosh());
        let first = a * c1 * sh1;
        let second = alpha2 * c2 * sh2;
        let value = 1.0 + y + t * first + t * t * (alpha1 * (y + 1.0) + second);
        let dy = 1.0 + t * a * tau * c1 * ch1 + t * t * (alpha1 + 2.0 * tau * alpha2 * c2 * ch2);
        let ds = -t * a * tau * s1 * sh1 - t * t * 2.0 * tau * alpha2 * s2 * sh2;
        // each mode is harmonic, so only the λ² − 1 part survives
        let laplace = (lam * lam - 1.0) * (-tau * tau * t * first - 4.0 * tau * tau * t * t * second);
        (value, dy, ds, laplace)
    };
    let period = 2.0 * std::f64::consts::PI / tau;
    let mut out = ExpansionResidual {
        laplace: 0.0,
        bernoulli: 0.0,
        kinematic: 0.0,
    };
    for s in linspace(0.0, period, 257) {
        let top = eta(s);
        for y in linspace(-1.0, top, 65) {
            out.laplace = out.laplace.max(psi(s, y).3.abs());
        }
        let (value, dy, ds, _) = psi(s, top);
        out.kinematic = out.kinematic.max((value - 1.0).abs());
        out.bernoulli = out
            .bernoulli
            .max((dy * dy + lam * lam * ds * ds + 2.0 * theta * top - 1.0).abs());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conjugate_depths() {
        assert!(matches!(depths_from_r(1.5), Err(Error::NoTwoRoots { .. })));
        let (dm, dp) = depths_from_r(2.0).unwrap();
        // bisection oracle on 1/d² + 2d − 4
        let g = |d: f64| 1.0 / (d * d) + 2.0 * d - 4.0;
        let om = roots::bisect(g, 0.4, 1.0, 1e-15).unwrap();
        let op = roots::bisect(g, 1.0, 3.0, 1e-15).unwrap();
        assert!((dm - om).abs() < 1e-13 && (dp - op).abs() < 1e-13);
        // high-precision reference values
        assert!((dm - 0.596968283237315).abs() < 1e-13 && (dp - 1.854637679718461).abs() < 1e-13);
        assert!((dp / dm - conjugate_ratio(dm)).abs() < 1e-9);
    }

    #[test]
    fn froude_map() {
        assert_eq!(theta_from_froude(1.0), 1.0);
        // (F + √(F² + 8))/4 = (1 + √5)/(2√2) at F = √2
        assert!((theta_from_froude(2f64.sqrt()) - 2.118033988749895).abs() < 1e-13);
        assert!(theta_from_froude(1.3) < theta_from_froude(1.4));
        assert!((froude_from_theta(1.0).unwrap() - 1.0).abs() < 1e-14);
        for f in [1.1, 1.3, 1.41] {
            assert!((froude_from_theta(theta_from_froude(f)).unwrap() - f).abs() < 1e-10);
        }
        assert!((froude_from_theta(nu(1.992)).unwrap() - 1.399).abs() < 0.005);
    }

    #[test]
    fn dispersion_root() {
        assert!(tau_from_theta(1.0 + 1e-6).unwrap() < 2e-3);
        assert!((nu(tau_from_theta(2.0).unwrap()) - 2.0).abs() < 1e-10);
        assert!((tau_from_theta(nu(1.992)).unwrap() - 1.992).abs() < 1e-9);
        assert!(matches!(tau_from_theta(1.0), Err(Error::NoThetaRoot { .. })));
    }

    #[test]
    fn coefficients_solve_the_linear_system() {
        let c = second_order_coeffs(1.5).unwrap();
        assert!(c.residuals().max_abs() < 1e-10);
        assert!((c.a * 1.5f64.sinh() + 1.0).abs() < 1e-15);
        // unknowns (α₁, β₁, α₂, β₂)
        let (t, th) = (1.5f64, c.theta);
        let m = nalgebra::Matrix4::new(
            1.0,
            1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            (2.0 * t).sinh(),
            1.0,
            2.0,
            2.0 * th,
            0.0,
            0.0,
            0.0,
            0.0,
            4.0 * t * (2.0 * t).cosh(),
            2.0 * th,
        );
        let rhs = nalgebra::Vector4::new(
            0.5 * th,
            0.5 * th,
            -0.5 * (th * th - t * t),
            -0.5 * (th * th - 3.0 * t * t),
        );
        let x = m.lu().solve(&rhs).unwrap();
        for (got, want) in [c.alpha1, c.beta1, c.alpha2, c.beta2].iter().zip(x.iter()) {
            assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
        assert!(matches!(second_order_coeffs(0.01), Err(Error::TauBelowMinimum { .. })));
    }

    #[test]
    fn f_signs() {
        assert!(f_eval(1.5).unwrap() > 0.0);
        assert!(f_eval(2.2).unwrap() < 0.0);
        assert!((f_eval(0.5).unwrap() - 24.79).abs() < 0.01);
        assert!((f_eval(2.0).unwrap() + 0.0655).abs() < 1e-3);
        for tau in [0.7, 1.3, 2.1] {
            assert!((f_eval(tau + 1e-9).unwrap() - f_eval(tau).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn root_and_threshold() {
        let t0 = tau0_root().unwrap();
        assert!((t0 - 1.992).abs() < 0.005);
        assert!(f_eval(t0).unwrap().abs() < 1e-9);
        assert!(lambda2_irrotational(t0).unwrap().abs() < 1e-9);
        let f0 = froude_threshold().unwrap();
        assert!((f0 - 1.399).abs() < 0.005);
        assert!((theta_from_froude(1.399) - nu(1.992)).abs() < 0.01);
    }

    #[test]
    fn window() {
        let w = assumption_window().unwrap();
        assert_eq!(w.low, 1.29);
        assert!(w.high < 2f64.sqrt());
        assert!(!w.analytic_bound_sufficient);
        assert!(w.contains(1.35) && !w.contains(1.25));
    }

    #[test]
    fn lambda2_sign_below_root() {
        let t0 = tau0_root().unwrap();
        for tau in linspace(1.0, t0 - 0.01, 50) {
            assert!(lambda2_irrotational(tau).unwrap() < 0.0);
        }
    }

    #[test]
    fn expansion_residual_is_third_order() {
        let zero = expansion_residual(1.5, 0.0).unwrap();
        assert_eq!((zero.laplace, zero.bernoulli, zero.kinematic), (0.0, 0.0, 0.0));
        let r1 = expansion_residual(1.5, 0.05).unwrap();
        let r2 = expansion_residual(1.5, 0.025).unwrap();
        assert!(r1.laplace / r2.laplace >= 7.0);
        assert!(r1.bernoulli / r2.bernoulli >= 7.0);
        assert!(r1.kinematic / r2.kinematic >= 7.0);
    }

    proptest! {
        #[test]
        fn coefficient_redundancy(tau in 0.3f64..3.0) {
            prop_assert!(second_order_coeffs(tau).unwrap().residuals().max_abs() < 1e-9);
        }

        #[test]
        fn conjugacy(r in 1.51f64..3.0) {
            let (dm, dp) = depths_from_r(r).unwrap();
            prop_assert!(dm < 1.0 && dp > 1.0);
            prop_assert!((dp / dm - conjugate_ratio(dm)).abs() < 1e-9);
        }

        #[test]
        fn mu2_sign_follows_f(tau in 0.2f64..3.0) {
            let c = chain(tau).unwrap();
            prop_assert_eq!(c.mu2 > 0.0, c.f_value > 0.0);
            prop_assert!((c.lambda2 * tau * ((2.0 * tau).sinh() - 2.0 * tau) / (2.0 * tau.sinh().powi(2)) + c.f_value).abs()
                < 1e-10 * (1.0 + c.f_value.abs()));
        }

        #[test]
        fn theta_increasing(f in 0.5f64..3.0, df in 1e-3f64..0.5) {
            prop_assert!(theta_from_froude(f) < theta_from_froude(f + df));
        }
    }
}
