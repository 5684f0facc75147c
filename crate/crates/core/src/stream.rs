//! Uniform shear flows U(Y) with a flat free surface, in physical and
//! hodograph variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::interp::{MonotoneCubic, QuinticHermite};
use crate::numerics::{linspace, quad, roots};
use crate::options::SolverOptions;
use crate::vorticity::{poly_sign_change_roots, VorticitySpec};

/// Smallest admissible value of `s² − 2 max Ω`.
pub const RADICAND_FLOOR: f64 = 1e-8;

/// Offset above the shear floor where the critical-point scan starts.
const SCAN_OFFSET: f64 = 1e-4;
/// Width of the critical-point scan window above the shear floor.
const SCAN_WIDTH: f64 = 50.0;
const SCAN_POINTS: usize = 400;

/// Half-width of the band around `∫ dY/U'² = 1` classified as critical.
pub const FROUDE_BAND: f64 = 1e-10;

pub fn omega_integral(v: &VorticitySpec, tau: f64) -> f64 {
    v.big_omega(tau)
}

/// Lower bound `2 √(max Ω)` on the surface shear.
pub fn s_floor(v: &VorticitySpec) -> f64 {
    2.0 * v.max_big_omega().1.max(0.0).sqrt()
}

fn check_shear(v: &VorticitySpec, s: f64) -> Result<()> {
    let floor = s_floor(v);
    let margin = s * s - 2.0 * v.max_big_omega().1;
    if !s.is_finite() || s < floor || margin < RADICAND_FLOOR {
        return Err(Error::BelowShearFloor { s, floor });
    }
    Ok(())
}

/// Breakpoints `0 = t_0 < ... < t_k = 1` at the sign changes of ω, where the
/// radicand `s² − 2Ω` attains its local minima.
fn breakpoints(v: &VorticitySpec) -> Vec<f64> {
    let mut pts = vec![0.0];
    pts.extend(
        poly_sign_change_roots(v.coefficients(), 0.0, 1.0)
            .into_iter()
            .filter(|&r| r > 0.0 && r < 1.0),
    );
    pts.push(1.0);
    pts
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: F, pts: &[f64], opts: &SolverOptions) -> Result<f64> {
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += quad::integrate(&f, w[0], w[1], opts.quad_abs_tol, opts.quad_rel_tol)?;
    }
    Ok(total)
}

/// `(s² − 2Ω(τ))^{-1/2}`, the hodograph derivative H_p.
fn inv_speed(v: &VorticitySpec, s: f64, tau: f64) -> f64 {
    1.0 / (s * s - 2.0 * v.big_omega(tau)).sqrt()
}

fn depth_raw(v: &VorticitySpec, s: f64, opts: &SolverOptions) -> Result<f64> {
    integrate_pieces(|t| inv_speed(v, s, t), &breakpoints(v), opts)
}

fn inverse_froude_sq_raw(v: &VorticitySpec, s: f64, opts: &SolverOptions) -> Result<f64> {
    integrate_pieces(|t| inv_speed(v, s, t).powi(3), &breakpoints(v), opts)
}

/// Depth `d(s) = ∫₀¹ dτ / √(s² − 2Ω(τ))`.
pub fn depth(v: &VorticitySpec, s: f64) -> Result<f64> {
    depth_with(v, s, &SolverOptions::default())
}

pub fn depth_with(v: &VorticitySpec, s: f64, opts: &SolverOptions) -> Result<f64> {
    check_shear(v, s)?;
    depth_raw(v, s, opts)
}

/// `1/F² = ∫₀¹ (s² − 2Ω)^{-3/2} dτ`.
pub fn inverse_froude_sq(v: &VorticitySpec, s: f64) -> Result<f64> {
    check_shear(v, s)?;
    inverse_froude_sq_raw(v, s, &SolverOptions::default())
}

/// `d'(s) = −s / F²`.
pub fn depth_derivative(v: &VorticitySpec, s: f64) -> Result<f64> {
    Ok(-s * inverse_froude_sq(v, s)?)
}

/// Bernoulli function `R(s) = s²/2 + d(s) − Ω(1)`.
pub fn bernoulli_r(v: &VorticitySpec, s: f64) -> Result<f64> {
    Ok(0.5 * s * s + depth(v, s)? - v.big_omega(1.0))
}

/// `R'(s) = s (1 − F⁻²)`.
pub fn bernoulli_derivative(v: &VorticitySpec, s: f64) -> Result<f64> {
    Ok(s * (1.0 - inverse_froude_sq(v, s)?))
}

/// Minimum of the Bernoulli function and its limit at the shear floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub s_c: f64,
    pub r_c: f64,
    /// `R(s₀⁺)`; infinite when the depth diverges at the floor.
    pub r_0: f64,
}

pub fn critical_point(v: &VorticitySpec) -> Result<CriticalPoint> {
    critical_point_with(v, &SolverOptions::default())
}

/// Locates the minimizer of `R` as the first upward zero crossing of `R'`
/// on a geometric scan of `[s₀ + 1e-4, s₀ + 50]`, refined by Brent.
pub fn critical_point_with(v: &VorticitySpec, opts: &SolverOptions) -> Result<CriticalPoint> {
    let floor = s_floor(v);
    let lo = floor + SCAN_OFFSET;
    let hi = floor + SCAN_WIDTH;
    let ratio = SCAN_WIDTH / SCAN_OFFSET;
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| floor + SCAN_OFFSET * ratio.powf(i as f64 / (SCAN_POINTS - 1) as f64))
        .collect();
    let slope = |s: f64| inverse_froude_sq_raw(v, s, opts).map(|i3| 1.0 - i3);
    let mut prev = (grid[0], slope(grid[0])?);
    let mut bracket = None;
    for &s in &grid[1..] {
        let g = slope(s)?;
        if prev.1 < 0.0 && g >= 0.0 {
            bracket = Some((prev.0, s));
            break;
        }
        prev = (s, g);
    }
    let (a, b) = bracket.ok_or(Error::NoInteriorMinimum { lo, hi })?;
    let s_c = roots::brent(
        |s| inverse_froude_sq_raw(v, s, opts).map_or(f64::NAN, |i3| 1.0 - i3),
        a,
        b,
        opts.root_tol,
    )?;
    let r_c = 0.5 * s_c * s_c + depth_raw(v, s_c, opts)? - v.big_omega(1.0);
    Ok(CriticalPoint {
        s_c,
        r_c,
        r_0: bernoulli_at_floor(v, opts)?,
    })
}

/// `R(s₀⁺)`.
pub fn bernoulli_at_floor(v: &VorticitySpec, opts: &SolverOptions) -> Result<f64> {
    let s0 = s_floor(v);
    Ok(0.5 * s0 * s0 + depth_at_floor(v, opts)? - v.big_omega(1.0))
}

/// `d(s₀⁺)`, infinite when the depth diverges. For `max Ω > 0` the integrand
/// is regular at the floor. For `max Ω = 0` it behaves like `(−2Ω)^{-1/2}`,
/// integrable where Ω vanishes with nonzero slope and divergent where Ω has
/// a double zero.
pub fn depth_at_floor(v: &VorticitySpec, opts: &SolverOptions) -> Result<f64> {
    let (_, m) = v.max_big_omega();
    if m > 0.0 {
        return depth_raw(v, s_floor(v), opts);
    }
    for r in poly_sign_change_roots(v.coefficients(), 0.0, 1.0) {
        if r > 0.0 && r < 1.0 && v.big_omega(r) >= 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    if v.omega(0.0) >= 0.0 || (v.big_omega(1.0) >= 0.0 && v.omega(1.0) <= 0.0) {
        return Ok(f64::INFINITY);
    }
    let at_one = v.big_omega(1.0) >= 0.0;
    let gap = |t: f64| 1.0 / (-2.0 * v.big_omega(t)).sqrt();
    // τ = u² near 0 (and τ = 1 − u² near 1) removes the endpoint singularity
    let half = 0.5f64.sqrt();
    let left = quad::integrate(
        |u| 2.0 * u * gap(u * u),
        0.0,
        half,
        opts.quad_abs_tol,
        opts.quad_rel_tol,
    )?;
    let right = if at_one {
        quad::integrate(
            |u| 2.0 * u * gap(1.0 - u * u),
            0.0,
            half,
            opts.quad_abs_tol,
            opts.quad_rel_tol,
        )?
    } else {
        quad::integrate(gap, 0.5, 1.0, opts.quad_abs_tol, opts.quad_rel_tol)?
    };
    Ok(left + right)
}

/// Surface shear of the subcritical stream (`s₀ < s < s_c`) with Bernoulli
/// constant `r`, which exists for `R_c < r < R₀`.
pub fn subcritical_shear(v: &VorticitySpec, r: f64) -> Result<f64> {
    let opts = SolverOptions::default();
    let cp = critical_point_with(v, &opts)?;
    let none = Error::NoSubcriticalStream {
        bernoulli: r,
        min: cp.r_c,
        max: cp.r_0,
    };
    if !(r > cp.r_c && r < cp.r_0) {
        return Err(none);
    }
    let floor = s_floor(v);
    let excess = |s: f64| 0.5 * s * s + depth_raw(v, s, &opts).unwrap_or(f64::NAN) - v.big_omega(1.0) - r;
    let mut delta = 0.5 * (cp.s_c - floor);
    let lo = loop {
        let s = floor + delta;
        if s * s - 2.0 * v.max_big_omega().1 >= RADICAND_FLOOR && excess(s) > 0.0 {
            break s;
        }
        delta *= 0.5;
        if delta < 1e-12 {
            return Err(none);
        }
    };
    roots::brent(excess, lo, cp.s_c, opts.root_tol)
}

/// Whether small-amplitude Stokes waves bifurcate from the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FroudeRegime {
    SubcriticalWavesExist,
    Supercritical,
}

/// One uniform stream sampled on a uniform p-grid. The physical grid
/// `grid_y` is the image `H(grid_p)`, so `u_samples` equals `grid_p`.
#[derive(Debug, Clone)]
pub struct StreamSolution {
    pub s: f64,
    pub depth: f64,
    pub bernoulli: f64,
    pub kappa: f64,
    pub froude: f64,
    /// `∫₀¹ H_p³ dp`.
    pub inverse_froude_sq: f64,
    pub grid_y: Vec<f64>,
    pub u_samples: Vec<f64>,
    pub grid_p: Vec<f64>,
    pub h_samples: Vec<f64>,
    pub hp_samples: Vec<f64>,
    vorticity: VorticitySpec,
    options: SolverOptions,
    u_interp: MonotoneCubic,
    h_interp: QuinticHermite,
}

pub fn stream_profile(v: &VorticitySpec, s: f64, n: usize) -> Result<StreamSolution> {
    stream_profile_with(v, s, &SolverOptions::default().with_grid_points(n))
}

pub fn stream_profile_with(v: &VorticitySpec, s: f64, opts: &SolverOptions) -> Result<StreamSolution> {
    check_shear(v, s)?;
    let n = opts.grid_points;
    if n < 3 {
        return Err(Error::InvalidInput(format!("grid needs at least 3 points, got {n}")));
    }
    let grid_p = linspace(0.0, 1.0, n);
    let hp_samples: Vec<f64> = grid_p.iter().map(|&p| inv_speed(v, s, p)).collect();
    let mut h_samples = Vec::with_capacity(n);
    h_samples.push(0.0);
    for w in grid_p.windows(2) {
        let cell = quad::integrate(|t| inv_speed(v, s, t), w[0], w[1], 1e-15, 1e-14)?;
        h_samples.push(h_samples.last().copied().unwrap_or(0.0) + cell);
    }
    let depth = h_samples[n - 1];
    let kappa = (s * s - 2.0 * v.big_omega(1.0)).sqrt();
    let inverse_froude_sq = inverse_froude_sq_raw(v, s, opts)?;
    let hpp: Vec<f64> = grid_p
        .iter()
        .zip(&hp_samples)
        .map(|(&p, &hp)| hp.powi(3) * v.omega(p))
        .collect();
    let u_slopes: Vec<f64> = hp_samples.iter().map(|hp| 1.0 / hp).collect();
    Ok(StreamSolution {
        s,
        depth,
        bernoulli: 0.5 * kappa * kappa + depth,
        kappa,
        froude: inverse_froude_sq.sqrt().recip(),
        inverse_froude_sq,
        grid_y: h_samples.clone(),
        u_samples: grid_p.clone(),
        u_interp: MonotoneCubic::new(h_samples.clone(), grid_p.clone(), u_slopes),
        h_interp: QuinticHermite::new(grid_p.clone(), h_samples.clone(), hp_samples.clone(), hpp),
        grid_p,
        h_samples,
        hp_samples,
        vorticity: v.clone(),
        options: *opts,
    })
}

impl StreamSolution {
    pub fn vorticity(&self) -> &VorticitySpec {
        &self.vorticity
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    /// Exact `H_p(p) = (s² − 2Ω(p))^{-1/2}`.
    pub fn h_p(&self, p: f64) -> f64 {
        inv_speed(&self.vorticity, self.s, p)
    }

    /// `H_pp = H_p³ ω(p)`.
    pub fn h_pp(&self, p: f64) -> f64 {
        self.h_p(p).powi(3) * self.vorticity.omega(p)
    }

    pub fn h_at(&self, p: f64) -> f64 {
        self.h_interp.eval(p).0
    }

    pub fn u_at(&self, y: f64) -> f64 {
        self.u_interp.eval(y)
    }

    /// `U'(Y) = √(s² − 2Ω(U(Y)))`.
    pub fn u_prime_at(&self, y: f64) -> f64 {
        (self.s * self.s - 2.0 * self.vorticity.big_omega(self.u_at(y))).sqrt()
    }

    /// Robin coefficient `κ⁻² − ω(1)/κ` of the linearized surface condition.
    pub fn rho0(&self) -> f64 {
        1.0 / (self.kappa * self.kappa) - self.vorticity.omega(1.0) / self.kappa
    }

    /// The same coefficient as `(1 + U'(d) U''(d)) / U'(d)²`, with `U'(d)`
    /// and `U''(d)` taken from integrating `U'' = −ω(U)` across the layer.
    pub fn rho0_physical(&self) -> Result<f64> {
        let v = &self.vorticity;
        let end =
            self.options
                .dopri()
                .integrate(|_, y: &[f64; 2]| [y[1], -v.omega(y[0])], 0.0, [0.0, self.s], self.depth)?;
        let (u1, u2) = (end[1], -v.omega(end[0]));
        Ok((1.0 + u1 * u2) / (u1 * u1))
    }

    /// `∫₀^d dY / U'(Y)²` evaluated in physical variables.
    pub fn inverse_froude_sq_physical(&self) -> Result<f64> {
        let opts = &self.options;
        let mut total = 0.0;
        let m = 16;
        for k in 0..m {
            let a = self.depth * k as f64 / m as f64;
            let b = self.depth * (k + 1) as f64 / m as f64;
            total += quad::integrate(
                |y| self.u_prime_at(y).powi(-2),
                a,
                b,
                opts.quad_abs_tol,
                opts.quad_rel_tol,
            )?;
        }
        Ok(total)
    }

    /// Largest `|H_pp − H_p³ ω| / (1 + |H_pp|)` over the grid, with `H_pp`
    /// from a centered difference of the exact `H_p`.
    pub fn hodograph_residual(&self) -> f64 {
        let h = 1e-6;
        self.grid_p
            .iter()
            .filter(|&&p| p >= h && p <= 1.0 - h)
            .map(|&p| {
                let exact = self.h_pp(p);
                ((self.h_p(p + h) - self.h_p(p - h)) / (2.0 * h) - exact).abs() / (1.0 + exact.abs())
            })
            .fold(0.0, f64::max)
    }
}

pub fn froude_condition(sol: &StreamSolution) -> FroudeRegime {
    if sol.inverse_froude_sq > 1.0 + FROUDE_BAND {
        FroudeRegime::SubcriticalWavesExist
    } else {
        FroudeRegime::Supercritical
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zero() -> VorticitySpec {
        VorticitySpec::irrotational()
    }

    fn constant(c: f64) -> VorticitySpec {
        VorticitySpec::constant(c).unwrap()
    }

    #[test]
    fn shear_floor_examples() {
        assert_eq!(s_floor(&zero()), 0.0);
        assert_eq!(s_floor(&constant(1.0)), 2.0);
        assert_eq!(s_floor(&constant(-1.0)), 0.0);
    }

    #[test]
    fn depth_examples() {
        assert!((depth(&zero(), 2.0).unwrap() - 0.5).abs() < 1e-13);
        assert!((depth(&zero(), 1.0).unwrap() - 1.0).abs() < 1e-13);
        // s = 2 is the floor for ω ≡ 1, where the radicand is still 2
        let exact = 2.0 - 2f64.sqrt();
        assert!((depth(&constant(1.0), 2.0).unwrap() - exact).abs() < 1e-10);
        let opts = SolverOptions::default();
        assert!((depth_at_floor(&constant(1.0), &opts).unwrap() - exact).abs() < 1e-10);
        assert!((depth(&constant(1.0), 2.5).unwrap() - (2.5 - 4.25f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn depth_rejects_floor() {
        assert!(matches!(depth(&constant(1.0), 1.9), Err(Error::BelowShearFloor { .. })));
        assert!(depth(&zero(), 0.0).is_err());
        assert!(depth(&zero(), -1.0).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        assert!((bernoulli_r(&zero(), 1.0).unwrap() - 1.5).abs() < 1e-13);
        assert!((bernoulli_r(&zero(), 2.0).unwrap() - 2.5).abs() < 1e-13);
        let floor_value = bernoulli_at_floor(&constant(1.0), &SolverOptions::default()).unwrap();
        assert!((floor_value - (3.0 - 2f64.sqrt())).abs() < 1e-10);
        assert!((bernoulli_r(&constant(1.0), 2.0).unwrap() - (3.0 - 2f64.sqrt())).abs() < 1e-10);
        let s = 2.5;
        let expected = 0.5 * s * s + (s - (s * s - 2.0f64).sqrt()) - 1.0;
        assert!((bernoulli_r(&constant(1.0), s).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn irrotational_critical_point() {
        let cp = critical_point(&zero()).unwrap();
        assert!((cp.s_c - 1.0).abs() < 1e-10);
        assert!((cp.r_c - 1.5).abs() < 1e-12);
        assert!(cp.r_0.is_infinite());
        assert!(bernoulli_derivative(&zero(), cp.s_c).unwrap().abs() < 1e-10);
    }

    #[test]
    fn critical_point_matches_grid_search() {
        let v = constant(0.1);
        let cp = critical_point(&v).unwrap();
        // dense grid + bisection on R'
        let floor = s_floor(&v);
        let grid = linspace(floor + 1e-3, floor + 5.0, 5000);
        let mut bracket = None;
        for w in grid.windows(2) {
            let a = bernoulli_derivative(&v, w[0]).unwrap();
            let b = bernoulli_derivative(&v, w[1]).unwrap();
            if a < 0.0 && b >= 0.0 {
                bracket = Some((w[0], w[1]));
                break;
            }
        }
        let (a, b) = bracket.unwrap();
        let s = roots::bisect(|s| bernoulli_derivative(&v, s).unwrap(), a, b, 1e-13).unwrap();
        assert!((cp.s_c - s).abs() < 1e-9);
        assert!((cp.r_c - bernoulli_r(&v, s).unwrap()).abs() < 1e-12);
        assert!(cp.r_0.is_finite() && cp.r_0 > cp.r_c);
        assert!((bernoulli_r(&v, floor).unwrap() - cp.r_0).abs() < 1e-12);
    }

    #[test]
    fn finite_limit_at_zero_floor() {
        // ω = −1: Ω = −τ, floor 0, depth at the floor ∫ dτ/√(2τ) = √2
        let v = constant(-1.0);
        let cp = critical_point(&v).unwrap();
        assert!((cp.r_0 - (2f64.sqrt() + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn subcritical_shear_inverts_bernoulli() {
        let s = subcritical_shear(&zero(), 2.0).unwrap();
        assert!(s < 1.0);
        assert!((bernoulli_r(&zero(), s).unwrap() - 2.0).abs() < 1e-11);
        assert!(matches!(
            subcritical_shear(&zero(), 1.4),
            Err(Error::NoSubcriticalStream { .. })
        ));
    }

    #[test]
    fn linear_stream_profile() {
        let sol = stream_profile(&zero(), 1.0, 101).unwrap();
        assert!((sol.depth - 1.0).abs() < 1e-14);
        assert!((sol.kappa - 1.0).abs() < 1e-14);
        assert!((sol.froude - 1.0).abs() < 1e-13);
        for y in [0.0, 0.123, 0.5, 0.999, 1.0] {
            assert!((sol.u_at(y) - y).abs() < 1e-14);
        }
        assert_eq!(froude_condition(&sol), FroudeRegime::Supercritical);
    }

    #[test]
    fn froude_formulas_agree_for_fast_stream() {
        let sol = stream_profile(&zero(), 2.0, 2001).unwrap();
        assert!((sol.froude - 2f64.powf(1.5)).abs() < 1e-12);
        assert!((sol.froude - sol.depth.powf(-1.5)).abs() < 1e-12);
        assert_eq!(froude_condition(&sol), FroudeRegime::Supercritical);
    }

    #[test]
    fn slow_stream_is_subcritical() {
        let sol = stream_profile(&zero(), 0.8, 201).unwrap();
        assert!((sol.froude - 0.8f64.powf(1.5)).abs() < 1e-12);
        assert_eq!(froude_condition(&sol), FroudeRegime::SubcriticalWavesExist);
    }

    #[test]
    fn rho0_two_ways() {
        let v = VorticitySpec::new(vec![0.3, -0.5]).unwrap();
        let sol = stream_profile(&v, 1.1, 501).unwrap();
        assert!((sol.rho0() - sol.rho0_physical().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn depth_matches_midpoint_brute_force() {
        for (c, s) in [(vec![0.2], 1.0), (vec![0.3, -0.5], 1.1), (vec![-1.0, 0.0, 2.0], 1.5)] {
            let v = VorticitySpec::new(c).unwrap();
            let n = 1_000_000;
            let h = 1.0 / n as f64;
            let brute: f64 = (0..n).map(|i| inv_speed(&v, s, (i as f64 + 0.5) * h)).sum::<f64>() * h;
            let d = depth(&v, s).unwrap();
            assert!((d - brute).abs() / d < 1e-8);
        }
    }

    fn vorticity_and_shear() -> impl Strategy<Value = (VorticitySpec, f64)> {
        (proptest::collection::vec(-1.0f64..1.0, 1..4), 0.05f64..2.0).prop_map(|(c, extra)| {
            let v = VorticitySpec::new(c).unwrap();
            let s = s_floor(&v) + extra;
            (v, s)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn stream_invariants((v, s) in vorticity_and_shear()) {
            let sol = stream_profile(&v, s, 401).unwrap();
            prop_assert!(sol.u_samples.windows(2).all(|w| w[1] > w[0]));
            prop_assert!(sol.grid_y.windows(2).all(|w| w[1] > w[0]));
            prop_assert!(sol.u_at(0.0).abs() < 1e-14);
            prop_assert!((sol.u_at(sol.depth) - 1.0).abs() < 1e-12);
            for &p in &sol.grid_p {
                prop_assert!(s * s - 2.0 * v.big_omega(p) > 0.0);
            }
            prop_assert!((0.5 * sol.kappa * sol.kappa + sol.depth - sol.bernoulli).abs() < 1e-12);
            prop_assert!((sol.bernoulli - bernoulli_r(&v, s).unwrap()).abs() < 1e-9);
            for p in [0.1, 0.37, 0.5, 0.81, 0.99] {
                prop_assert!((sol.u_at(sol.h_at(p)) - p).abs() < 1e-9);
            }
            prop_assert!(sol.hodograph_residual() < 1e-6);
            let phys = sol.inverse_froude_sq_physical().unwrap();
            prop_assert!((phys - sol.inverse_froude_sq).abs() < 1e-8 * sol.inverse_froude_sq);
        }

        #[test]
        fn froude_identities((v, s) in vorticity_and_shear()) {
            let h = 1e-4;
            let dd = (depth(&v, s + h).unwrap() - depth(&v, s - h).unwrap()) / (2.0 * h);
            let i3 = inverse_froude_sq(&v, s).unwrap();
            prop_assert!((i3 + dd / s).abs() < 1e-5 * i3.max(1.0));
            let dr = (bernoulli_r(&v, s + h).unwrap() - bernoulli_r(&v, s - h).unwrap()) / (2.0 * h);
            prop_assert!((dr - bernoulli_derivative(&v, s).unwrap()).abs() < 1e-5 * (1.0 + dr.abs()));
        }

        #[test]
        fn depth_decreases((v, s) in vorticity_and_shear()) {
            let grid = linspace(s, s + 3.0, 12);
            let d: Vec<f64> = grid.iter().map(|&x| depth(&v, x).unwrap()).collect();
            prop_assert!(d.windows(2).all(|w| w[1] < w[0]));
        }
    }
}
