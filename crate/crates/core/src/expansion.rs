//! Second-order expansion of the Stokes branch in hodograph variables for a
//! general vorticity: kernel mode, second-order modes, the wavelength
//! coefficient λ₂ and the second-eigenvalue coefficient μ₂.
//!
//! The level-line height is `h = H(p) + t v`, `v = v₀ + t v₁ + …`, with
//! `v₀ = α₀(p) cos τq` and `v₁ = α₁(p) + β₁(p) cos 2τq`, and the wavelength
//! ratio is `λ = 1 + λ₂ t² + …`.

use serde::{Deserialize, Serialize};

use crate::bvp::{OuterCondition, RobinBvp};
use crate::dispersion::{gamma_solve, tau_star, DispersionResult};
use crate::error::{Error, Result};
use crate::numerics::interp::QuinticHermite;
use crate::numerics::{linspace, quad::simpson};
use crate::stream::StreamSolution;

/// Points of the trapezoid rule used for the numeric q-averages; exact for
/// trigonometric polynomials of degree below this.
pub const Q_POINTS: usize = 32;

/// The kernel profile `α₀ = γ(H(p); τ*) H_p` with its first two derivatives.
#[derive(Debug, Clone)]
pub struct KernelMode {
    pub p_grid: Vec<f64>,
    pub alpha0: Vec<f64>,
    pub alpha0_prime: Vec<f64>,
    pub alpha0_second: Vec<f64>,
    pub tau_star: f64,
    interp: QuinticHermite,
}

impl KernelMode {
    /// `(α₀, α₀')` at any `p ∈ [0, 1]`.
    pub fn eval(&self, p: f64) -> (f64, f64) {
        self.interp.eval(p)
    }

    /// `α₀''` from the equation `(α₀'/H_p³)' = τ² α₀/H_p`.
    fn second(stream: &StreamSolution, tau: f64, p: f64, a: f64, da: f64) -> f64 {
        let hp2 = stream.h_p(p).powi(2);
        tau * tau * hp2 * a + 3.0 * hp2 * stream.vorticity().omega(p) * da
    }

    /// Largest relative residual of the homogeneous hodograph equation at
    /// `τ*`, from a five-point difference of the flux `α₀'/H_p³`, together
    /// with the residual of the outer condition.
    pub fn residual(&self, stream: &StreamSolution) -> (f64, f64) {
        let flux: Vec<f64> = self
            .alpha0_prime
            .iter()
            .zip(&stream.hp_samples)
            .map(|(d, hp)| d / hp.powi(3))
            .collect();
        let h = self.p_grid[1] - self.p_grid[0];
        let t2 = self.tau_star * self.tau_star;
        let scale = self.alpha0.iter().fold(0.0f64, |m, a| m.max(a.abs())) * t2.max(1.0);
        let mut interior = 0.0f64;
        for i in 2..self.p_grid.len() - 2 {
            let div = (flux[i - 2] - 8.0 * flux[i - 1] + 8.0 * flux[i + 1] - flux[i + 2]) / (12.0 * h);
            let r = -div + t2 * self.alpha0[i] / stream.hp_samples[i];
            interior = interior.max(r.abs() / scale);
        }
        let n = self.p_grid.len() - 1;
        let outer = -flux[n] + self.alpha0[n];
        (interior, outer.abs() / scale)
    }
}

pub fn kernel_mode(stream: &StreamSolution, disp: &DispersionResult) -> Result<KernelMode> {
    let tau = disp.tau_star;
    let gamma = gamma_solve(stream, tau)?;
    let p_grid = stream.grid_p.clone();
    let mut alpha0 = Vec::with_capacity(p_grid.len());
    let mut alpha0_prime = Vec::with_capacity(p_grid.len());
    let mut alpha0_second = Vec::with_capacity(p_grid.len());
    for (i, &p) in p_grid.iter().enumerate() {
        let hp = stream.hp_samples[i];
        let a = gamma.values[i] * hp;
        let da = gamma.derivatives[i] * hp * hp + gamma.values[i] * stream.h_pp(p);
        alpha0.push(a);
        alpha0_prime.push(da);
        alpha0_second.push(KernelMode::second(stream, tau, p, a, da));
    }
    let interp = QuinticHermite::new(
        p_grid.clone(),
        alpha0.clone(),
        alpha0_prime.clone(),
        alpha0_second.clone(),
    );
    Ok(KernelMode {
        p_grid,
        alpha0,
        alpha0_prime,
        alpha0_second,
        tau_star: tau,
        interp,
    })
}

/// Fourier decomposition of the second-order forcing. With
/// `v₀ = A cos τq`, the forcing is `−X_p − Y_q` with
/// `X = v₀q²/(2H_p²) + 3v₀p²/(2H_p⁴) = P⁰ + P² cos 2τq` and
/// `Y_q = −G² cos 2τq`, and the outer condition reads
/// `−u_p/H_p³ + u = −X(1)`.
pub struct ForcingModes<'a> {
    kernel: &'a KernelMode,
    stream: &'a StreamSolution,
}

/// Mode data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeForcing {
    /// Divergence-form forcing of the mean mode.
    pub flux_mean: f64,
    /// Divergence-form forcing of the `cos 2τq` mode.
    pub flux_double: f64,
    /// Source term of the `cos 2τq` mode.
    pub source_double: f64,
}

pub fn rhs_modes<'a>(kernel: &'a KernelMode, stream: &'a StreamSolution) -> ForcingModes<'a> {
    ForcingModes { kernel, stream }
}

impl ForcingModes<'_> {
    fn at_values(&self, p: f64, a: f64, da: f64) -> ModeForcing {
        let hp = self.stream.h_p(p);
        let t2 = self.kernel.tau_star.powi(2);
        let q = t2 * a * a / (4.0 * hp * hp);
        let r = 3.0 * da * da / (4.0 * hp.powi(4));
        ModeForcing {
            flux_mean: q + r,
            flux_double: -q + r,
            source_double: t2 * a * da / (hp * hp),
        }
    }

    pub fn at(&self, p: f64) -> ModeForcing {
        let (a, da) = self.kernel.eval(p);
        self.at_values(p, a, da)
    }

    /// Robin data `(c⁰, c²) = (−P⁰(1), −P²(1))`.
    pub fn boundary_data(&self) -> (f64, f64) {
        let f = self.at(1.0);
        (-f.flux_mean, -f.flux_double)
    }

    /// Non-divergence interior forcing `(r⁰, r²)` with
    /// `r⁰ = −(P⁰)'` and `r² = G² − (P²)'`, from the analytic derivative of
    /// each flux.
    pub fn interior(&self, p: f64) -> (f64, f64) {
        let (a, da) = self.kernel.eval(p);
        let dda = KernelMode::second(self.stream, self.kernel.tau_star, p, a, da);
        let hp = self.stream.h_p(p);
        let hpp = self.stream.h_pp(p);
        let t2 = self.kernel.tau_star.powi(2);
        let dq = t2 * (a * da / (2.0 * hp * hp) - a * a * hpp / (2.0 * hp.powi(3)));
        let dr = 3.0 * da * dda / (2.0 * hp.powi(4)) - 3.0 * da * da * hpp / hp.powi(5);
        let m = self.at_values(p, a, da);
        (-(dq + dr), m.source_double - (-dq + dr))
    }

    /// The full forcing `−X_p − Y_q` evaluated directly at `(q, p)`.
    pub fn direct(&self, q: f64, p: f64) -> f64 {
        let tau = self.kernel.tau_star;
        let (a, da) = self.kernel.eval(p);
        let dda = KernelMode::second(self.stream, tau, p, a, da);
        let hp = self.stream.h_p(p);
        let hpp = self.stream.h_pp(p);
        let (c, s) = ((tau * q).cos(), (tau * q).sin());
        let v_q = -tau * a * s;
        let v_p = da * c;
        let v_qp = -tau * da * s;
        let v_pp = dda * c;
        let v_qq = -tau * tau * a * c;
        let x_p = v_q * v_qp / (hp * hp) - v_q * v_q * hpp / hp.powi(3) + 3.0 * v_p * v_pp / hp.powi(4)
            - 6.0 * v_p * v_p * hpp / hp.powi(5);
        let y_q = (v_qq * v_p + v_q * v_qp) / (hp * hp);
        -x_p - y_q
    }
}

/// Kernel and second-order mode profiles on the p-grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSet {
    pub p_grid: Vec<f64>,
    pub alpha0: Vec<f64>,
    pub alpha0_prime: Vec<f64>,
    pub alpha1: Vec<f64>,
    pub alpha1_prime: Vec<f64>,
    pub beta1: Vec<f64>,
    pub beta1_prime: Vec<f64>,
    pub tau_star: f64,
    pub lambda0: f64,
    /// `∫v₁v₀ / ∫v₀²` over one period before normalization.
    pub projection: f64,
}

/// Solves the mean and double-frequency mode problems. The `L²`-projection
/// of `v₁` on `v₀` is recorded; it vanishes up to rounding since
/// the modes occupy different Fourier components.
pub fn second_order_modes(
    stream: &StreamSolution,
    disp: &DispersionResult,
    kernel: &KernelMode,
    forcing: &ForcingModes<'_>,
) -> Result<ModeSet> {
    let (c0, c2) = forcing.boundary_data();
    let mean = RobinBvp::hodograph(stream, 0.0)
        .with_flux_forcing(|p| forcing.at(p).flux_mean)
        .with_outer(OuterCondition::Robin { rho: 1.0, datum: c0 })
        .solve(&stream.grid_p)?;
    let double = RobinBvp::hodograph(stream, 2.0 * disp.tau_star)
        .with_flux_forcing(|p| forcing.at(p).flux_double)
        .with_forcing(|p| forcing.at(p).source_double)
        .with_outer(OuterCondition::Robin { rho: 1.0, datum: c2 })
        .solve(&stream.grid_p)?;
    let mut modes = ModeSet {
        p_grid: stream.grid_p.clone(),
        alpha0: kernel.alpha0.clone(),
        alpha0_prime: kernel.alpha0_prime.clone(),
        alpha1: mean.values,
        alpha1_prime: mean.derivatives,
        beta1: double.values,
        beta1_prime: double.derivatives,
        tau_star: disp.tau_star,
        lambda0: disp.lambda0,
        projection: 0.0,
    };
    let projection = modes.kernel_projection()?;
    modes.projection = projection;
    Ok(modes)
}

impl ModeSet {
    fn step(&self) -> Result<f64> {
        let n = self.p_grid.len();
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "Simpson quadrature needs an odd number of p-nodes, got {n}"
            )));
        }
        Ok(self.p_grid[1] - self.p_grid[0])
    }

    fn q_nodes(&self) -> Vec<f64> {
        (0..Q_POINTS)
            .map(|j| -0.5 * self.lambda0 + self.lambda0 * j as f64 / Q_POINTS as f64)
            .collect()
    }

    /// `∫_Ω v₁ v₀ / ∫_Ω v₀²` by the numeric q-rule.
    pub fn kernel_projection(&self) -> Result<f64> {
        let h = self.step()?;
        let tau = self.tau_star;
        let qs = self.q_nodes();
        let mut cross = Vec::with_capacity(self.p_grid.len());
        let mut norm = Vec::with_capacity(self.p_grid.len());
        for i in 0..self.p_grid.len() {
            let (mut c, mut m) = (0.0, 0.0);
            for &q in &qs {
                let v0 = self.alpha0[i] * (tau * q).cos();
                let v1 = self.alpha1[i] + self.beta1[i] * (2.0 * tau * q).cos();
                c += v1 * v0;
                m += v0 * v0;
            }
            cross.push(c);
            norm.push(m);
        }
        Ok(simpson(&cross, h) / simpson(&norm, h))
    }

    /// Residual of the second-order equation at `(q, p)` for an interior
    /// node index `i`, using five-point differences of the mode fluxes.
    pub fn equation_residual(&self, stream: &StreamSolution, forcing: &ForcingModes<'_>, i: usize, q: f64) -> f64 {
        let h = self.p_grid[1] - self.p_grid[0];
        let flux = |vals: &[f64], j: usize| vals[j] / stream.hp_samples[j].powi(3);
        let d5 = |vals: &[f64]| {
            (flux(vals, i - 2) - 8.0 * flux(vals, i - 1) + 8.0 * flux(vals, i + 1) - flux(vals, i + 2)) / (12.0 * h)
        };
        let p = self.p_grid[i];
        let hp = stream.hp_samples[i];
        let t2 = 4.0 * self.tau_star * self.tau_star;
        let c2 = (2.0 * self.tau_star * q).cos();
        // A₀v₁ = −(v₁p/H_p³)_p − (v₁q/H_p)_q
        let a0v1 = -d5(&self.alpha1_prime) - d5(&self.beta1_prime) * c2 + t2 * self.beta1[i] * c2 / hp;
        a0v1 - forcing.direct(q, p)
    }

    /// Mode profiles with `s v₀` added to `v₁`, used to check that λ₂ does
    /// not depend on the kernel component of `v₁`.
    pub fn q_integrals_with_kernel_shift(&self, stream: &StreamSolution, shift: f64) -> Result<SolvabilityIntegrals> {
        self.q_numeric(stream, shift)
    }

    /// The p-integrals `T`, `N₂`, `N₃` with the q-averages done analytically.
    pub fn q_analytic(&self, stream: &StreamSolution) -> Result<SolvabilityIntegrals> {
        let h = self.step()?;
        let t2 = self.tau_star * self.tau_star;
        let n = self.p_grid.len();
        let (mut t, mut n2, mut n3, mut m) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            let hp = stream.hp_samples[i];
            let (a, da) = (self.alpha0[i], self.alpha0_prime[i]);
            let (b1, da1, db1) = (self.beta1[i], self.alpha1_prime[i], self.beta1_prime[i]);
            t[i] = t2 * a * a / (2.0 * hp);
            n2[i] = t2 * a * da * b1 / (hp * hp)
                + 3.0 * da * da * (0.5 * da1 + 0.25 * db1) / hp.powi(4)
                + t2 * a * a * (0.5 * da1 - 0.25 * db1) / (hp * hp);
            n3[i] = 0.75 * da.powi(4) / hp.powi(5) + 0.25 * t2 * a * a * da * da / hp.powi(3);
            m[i] = 0.5 * a * a;
        }
        Ok(SolvabilityIntegrals {
            t: simpson(&t, h),
            n2: simpson(&n2, h),
            n3: simpson(&n3, h),
            norm: simpson(&m, h),
        })
    }

    /// Same integrals with every q-average taken by the trapezoid rule over
    /// one period, from the full fields `v₀(q, p)` and `v₁(q, p) + s v₀`.
    fn q_numeric(&self, stream: &StreamSolution, shift: f64) -> Result<SolvabilityIntegrals> {
        let h = self.step()?;
        let tau = self.tau_star;
        let qs = self.q_nodes();
        let n = self.p_grid.len();
        let (mut t, mut n2, mut n3, mut m) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            let hp = stream.hp_samples[i];
            let (a, da) = (self.alpha0[i], self.alpha0_prime[i]);
            for &q in &qs {
                let (c, s) = ((tau * q).cos(), (tau * q).sin());
                let (c2, s2) = ((2.0 * tau * q).cos(), (2.0 * tau * q).sin());
                let v0 = a * c;
                let v0q = -tau * a * s;
                let v0p = da * c;
                let v1q = -2.0 * tau * self.beta1[i] * s2 + shift * v0q;
                let v1p = self.alpha1_prime[i] + self.beta1_prime[i] * c2 + shift * v0p;
                t[i] += v0q * v0q / hp;
                n2[i] += (v0q * v1q / (hp * hp) + 3.0 * v0p * v1p / hp.powi(4)) * v0p
                    + (v0q * v1p + v1q * v0p) * v0q / (hp * hp);
                n3[i] += (2.0 * v0p.powi(3) / hp.powi(5) + v0p * v0q * v0q / hp.powi(3)) * v0p
                    + v0p * v0p * v0q * v0q / hp.powi(3);
                m[i] += v0 * v0;
            }
        }
        let avg = 1.0 / Q_POINTS as f64;
        Ok(SolvabilityIntegrals {
            t: simpson(&t, h) * avg,
            n2: simpson(&n2, h) * avg,
            n3: simpson(&n3, h) * avg,
            norm: simpson(&m, h) * avg,
        })
    }

    pub fn q_numeric_integrals(&self, stream: &StreamSolution) -> Result<SolvabilityIntegrals> {
        self.q_numeric(stream, 0.0)
    }
}

/// Period-averaged integrals of the third-order solvability condition,
/// `2λ₂ T = N₂ − N₃`, and `norm = ⟨∫v₀²⟩`. Multiplying by the period `Λ₀`
/// gives the integrals over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityIntegrals {
    pub t: f64,
    pub n2: f64,
    pub n3: f64,
    pub norm: f64,
}

impl SolvabilityIntegrals {
    pub fn lambda2(&self) -> Result<f64> {
        if !(self.t.abs() >= 1e-12) {
            return Err(Error::DegenerateLeadingCoefficient { value: self.t });
        }
        Ok((self.n2 - self.n3) / (2.0 * self.t))
    }
}

/// λ₂ from the solvability condition with analytic q-averages.
pub fn lambda2_general(modes: &ModeSet, stream: &StreamSolution) -> Result<f64> {
    let ints = modes.q_analytic(stream)?;
    if !(modes.lambda0 * ints.t >= 1e-12) {
        return Err(Error::DegenerateLeadingCoefficient {
            value: modes.lambda0 * ints.t,
        });
    }
    ints.lambda2()
}

/// Second-order coefficients of the branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderResult {
    pub lambda2: f64,
    /// `Λ₂ = −λ₂ Λ₀`.
    pub big_lambda2: f64,
    pub mu2: f64,
    /// `∫_Ω v₀q²/H_p` over one period.
    pub i1: f64,
    /// `∫_Ω v₀²` over one period.
    pub i2: f64,
    /// μ₂ from the eigenvalue solvability condition evaluated on its own.
    pub mu2_eigen_route: f64,
    /// Relative mismatch of `−4λ₂I₁ = μ₂I₂` with μ₂ from the eigenvalue route.
    pub relation_residual: f64,
    /// Relative mismatch of the same relation written in physical variables.
    pub y_form_residual: f64,
}

/// `μ₂ = −4λ₂ I₁/I₂`, checked against the eigenvalue solvability condition
/// (with the first-order eigenfunction `2v₁`) and against the physical-variable
/// form `−4λ₂τ*² ∫γ² dY = μ₂ ∫γ²/U' dY`.
pub fn mu2_from_lambda2(lambda2: f64, modes: &ModeSet, stream: &StreamSolution) -> Result<SecondOrderResult> {
    let ints = modes.q_analytic(stream)?;
    let i1 = modes.lambda0 * ints.t;
    let i2 = modes.lambda0 * ints.norm;
    let mu2 = -4.0 * lambda2 * i1 / i2;

    let num = modes.q_numeric_integrals(stream)?;
    let mu2_eigen_route =
        modes.lambda0 * (2.0 * lambda2 * num.t - 3.0 * num.n2 + 3.0 * num.n3) / (modes.lambda0 * num.norm);
    let lhs = -4.0 * lambda2 * i1;
    let relation_residual = relative(lhs, mu2_eigen_route * i2);

    let (j1, j2) = physical_integrals(stream, modes.tau_star)?;
    let y_form_residual = relative(-4.0 * lambda2 * modes.tau_star.powi(2) * j1, mu2 * j2);

    Ok(SecondOrderResult {
        lambda2,
        big_lambda2: -lambda2 * modes.lambda0,
        mu2,
        i1,
        i2,
        mu2_eigen_route,
        relation_residual,
        y_form_residual,
    })
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `(∫₀^d γ² dY, ∫₀^d γ²/U' dY)` on a uniform Y-grid.
fn physical_integrals(stream: &StreamSolution, tau: f64) -> Result<(f64, f64)> {
    let n = if stream.grid_p.len() % 2 == 1 {
        stream.grid_p.len()
    } else {
        stream.grid_p.len() + 1
    };
    let ys = linspace(0.0, stream.depth, n);
    let gamma = RobinBvp::physical(stream, tau)
        .with_outer(OuterCondition::Dirichlet { value: 1.0 })
        .solve(&ys)?;
    let g2: Vec<f64> = gamma.values.iter().map(|g| g * g).collect();
    let weighted: Vec<f64> = ys.iter().zip(&g2).map(|(&y, g)| g / stream.u_prime_at(y)).collect();
    let h = ys[1] - ys[0];
    Ok((simpson(&g2, h), simpson(&weighted, h)))
}

/// Every stage of the second-order computation for one stream.
#[derive(Debug, Clone)]
pub struct SecondOrderPipeline {
    pub dispersion: DispersionResult,
    pub kernel: KernelMode,
    pub modes: ModeSet,
    pub result: SecondOrderResult,
    /// λ₂ with the q-averages done numerically.
    pub lambda2_q_numeric: f64,
}

pub fn second_order(stream: &StreamSolution) -> Result<SecondOrderPipeline> {
    let dispersion = tau_star(stream)?;
    let kernel = kernel_mode(stream, &dispersion)?;
    let forcing = rhs_modes(&kernel, stream);
    let modes = second_order_modes(stream, &dispersion, &kernel, &forcing)?;
    let lambda2 = lambda2_general(&modes, stream)?;
    let lambda2_q_numeric = modes.q_numeric_integrals(stream)?.lambda2()?;
    let result = mu2_from_lambda2(lambda2, &modes, stream)?;
    Ok(SecondOrderPipeline {
        dispersion,
        kernel,
        modes,
        result,
        lambda2_q_numeric,
    })
}
