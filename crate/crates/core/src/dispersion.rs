//! The dispersion function σ(τ) of a uniform stream and its positive root.

use serde::{Deserialize, Serialize};

use crate::bvp::{BvpSolution, OuterCondition, RobinBvp};
use crate::error::{Error, Result};
use crate::numerics::{linspace, roots};
use crate::stream::{froude_condition, FroudeRegime, StreamSolution};

const SCAN_POINTS: usize = 201;

/// Solves `γ'' + ω'(U) γ − τ² γ = 0`, `γ(0) = 0`, `γ(d) = 1` on the stream's
/// Y-grid. Only `|τ|` enters.
pub fn gamma_solve(stream: &StreamSolution, tau: f64) -> Result<BvpSolution> {
    gamma_problem(stream, tau).solve(&stream.grid_y)
}

fn gamma_problem(stream: &StreamSolution, tau: f64) -> RobinBvp<'_> {
    RobinBvp::physical(stream, tau.abs()).with_outer(OuterCondition::Dirichlet { value: 1.0 })
}

/// `γ'(d; τ)` from the final integrator state.
pub fn gamma_slope(stream: &StreamSolution, tau: f64) -> Result<f64> {
    Ok(gamma_problem(stream, tau).solve_endpoint()?.1)
}

/// `σ(τ) = κ γ'(d, τ) − κ⁻¹ + ω(1)`.
pub fn sigma(stream: &StreamSolution, tau: f64) -> Result<f64> {
    let k = stream.kappa;
    Ok(k * gamma_slope(stream, tau)? - 1.0 / k + stream.vorticity().omega(1.0))
}

/// `σ(τ) = κ γ'(d, τ) − κ ρ₀`, with ρ₀ computed in physical variables.
pub fn sigma_rho_form(stream: &StreamSolution, tau: f64) -> Result<f64> {
    let k = stream.kappa;
    Ok(k * gamma_slope(stream, tau)? - k * stream.rho0_physical()?)
}

/// Closed-form value `σ(0) = (F² − 1)/κ`.
pub fn sigma_at_zero(stream: &StreamSolution) -> f64 {
    (stream.froude * stream.froude - 1.0) / stream.kappa
}

pub fn sigma_scan(stream: &StreamSolution, taus: &[f64]) -> Result<Vec<f64>> {
    taus.iter().map(|&t| sigma(stream, t)).collect()
}

/// Dispersion data at the bifurcation point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionResult {
    pub tau_grid: Vec<f64>,
    pub sigma_values: Vec<f64>,
    pub sigma0: f64,
    pub tau_star: f64,
    /// Wavelength `2π/τ*`.
    pub lambda0: f64,
    /// `γ(Y; τ*)` on the stream's Y-grid.
    pub gamma_star: Vec<f64>,
    /// Whether σ increased strictly along the scan.
    pub monotone: bool,
}

/// Finds the unique positive root of σ. The upper bracket starts at
/// `max(4, 4 (|σ(0)| + 1)/κ)` and doubles until σ is positive; the root is
/// then isolated on a uniform scan and refined by Brent.
pub fn tau_star(stream: &StreamSolution) -> Result<DispersionResult> {
    let sigma0 = sigma(stream, 0.0)?;
    let no_root = Error::NoRoot {
        sigma0,
        froude: stream.froude,
    };
    if sigma0 >= 0.0 || froude_condition(stream) == FroudeRegime::Supercritical {
        return Err(no_root);
    }
    let mut hi = 4.0f64.max(4.0 * (sigma0.abs() + 1.0) / stream.kappa);
    while sigma(stream, hi)? <= 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoBracket { lo: 0.0, hi });
        }
    }
    let tau_grid = linspace(0.0, hi, SCAN_POINTS);
    let mut sigma_values = Vec::with_capacity(SCAN_POINTS);
    sigma_values.push(sigma0);
    for &t in &tau_grid[1..] {
        sigma_values.push(sigma(stream, t)?);
    }
    let brackets = roots::sign_changes_of(&tau_grid, &sigma_values);
    if brackets.len() != 1 {
        return Err(Error::MultipleRoots { count: brackets.len() });
    }
    let (a, b) = brackets[0];
    let tol = stream.options().root_tol;
    let root = roots::brent(|t| sigma(stream, t).unwrap_or(f64::NAN), a, b, tol)?;
    let gamma_star = gamma_solve(stream, root)?.values;
    Ok(DispersionResult {
        monotone: sigma_values.windows(2).all(|w| w[1] > w[0]),
        tau_grid,
        sigma_values,
        sigma0,
        tau_star: root,
        lambda0: 2.0 * std::f64::consts::PI / root,
        gamma_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::stream_profile;
    use crate::vorticity::VorticitySpec;
    use proptest::prelude::*;

    fn stream(c: Vec<f64>, s: f64) -> StreamSolution {
        stream_profile(&VorticitySpec::new(c).unwrap(), s, 401).unwrap()
    }

    #[test]
    fn irrotational_gamma() {
        let st = stream(vec![0.0], 0.8);
        let g = gamma_solve(&st, 1.3).unwrap();
        for (y, v) in st.grid_y.iter().zip(&g.values) {
            assert!((v - (1.3 * y).sinh() / (1.3 * st.depth).sinh()).abs() < 1e-10);
        }
        let g0 = gamma_solve(&st, 0.0).unwrap();
        for (y, v) in st.grid_y.iter().zip(&g0.values) {
            assert!((v - y / st.depth).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_matches_fixed_step_oracle() {
        // ω = 0.2, τ = 1: classical RK4 shooting with 10⁵ steps on
        // (U, U', γ, γ') then rescaling to γ(d) = 1
        let st = stream(vec![0.2], 1.0);
        let g = gamma_solve(&st, 1.0).unwrap();
        let n = 100_000;
        let h = st.depth / n as f64;
        let f = |y: [f64; 4]| [y[1], -0.2, y[3], y[2]];
        let mut y = [0.0, st.s, 0.0, 1.0];
        let mut samples = vec![(0.0, 0.0)];
        for i in 0..n {
            let add =
                |a: [f64; 4], k: [f64; 4], c: f64| [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2], a[3] + c * k[3]];
            let k1 = f(y);
            let k2 = f(add(y, k1, h / 2.0));
            let k3 = f(add(y, k2, h / 2.0));
            let k4 = f(add(y, k3, h));
            for j in 0..4 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            if (i + 1) % 1000 == 0 {
                samples.push(((i + 1) as f64 * h, y[2]));
            }
        }
        let end = y[2];
        let dense = crate::bvp::RobinBvp::physical(&st, 1.0)
            .with_outer(OuterCondition::Dirichlet { value: 1.0 })
            .solve(&samples.iter().map(|s| s.0).collect::<Vec<_>>())
            .unwrap();
        for ((_, v), w) in samples.iter().zip(&dense.values) {
            assert!((v / end - w).abs() < 1e-7);
        }
        assert!((g.values[400] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_stream_dispersion() {
        let st = stream(vec![0.0], 1.0);
        for tau in [0.1f64, 0.5, 1.0, 2.0, 5.0] {
            let exact = tau / tau.tanh() - 1.0;
            assert!((sigma(&st, tau).unwrap() - exact).abs() < 1e-10);
        }
        assert!(matches!(tau_star(&st), Err(Error::NoRoot { .. })));
        assert!(matches!(tau_star(&stream(vec![0.0], 2.0)), Err(Error::NoRoot { .. })));
    }

    #[test]
    fn sigma_at_zero_identity() {
        let st = stream(vec![0.0], 0.8);
        let f = 0.8f64.powf(1.5);
        assert!((sigma(&st, 0.0).unwrap() - (f * f - 1.0) / 0.8).abs() < 1e-12);
        for (c, s) in [(vec![0.2], 1.0), (vec![0.3, -0.5], 0.9)] {
            let st = stream(c, s);
            assert!((sigma(&st, 0.0).unwrap() - sigma_at_zero(&st)).abs() < 1e-9);
        }
    }

    #[test]
    fn root_for_irrotational_stream() {
        // scaled variables: ν(τ* d) = d³ with ν(x) = x coth x
        let st = stream(vec![0.0], 0.7);
        let r = tau_star(&st).unwrap();
        let x = r.tau_star * st.depth;
        assert!((x / x.tanh() - st.depth.powi(3)).abs() < 1e-9);
        assert!(r.monotone);
        assert!((r.lambda0 * r.tau_star - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!(r.gamma_star[0].abs() < 1e-15);
        assert!((r.gamma_star[400] - 1.0).abs() < 1e-12);
        assert!(sigma(&st, r.tau_star).unwrap().abs() < 1e-10);
    }

    #[test]
    fn even_in_tau() {
        let st = stream(vec![0.3, -0.5], 0.9);
        for t in [0.2, 1.0, 3.3] {
            assert_eq!(sigma(&st, t).unwrap(), sigma(&st, -t).unwrap());
        }
    }

    fn subcritical() -> impl Strategy<Value = StreamSolution> {
        (proptest::collection::vec(-0.6f64..0.6, 1..3), 0.3f64..0.95).prop_filter_map(
            "stream must be subcritical",
            |(c, frac)| {
                let v = VorticitySpec::new(c).unwrap();
                let cp = crate::stream::critical_point(&v).ok()?;
                let floor = crate::stream::s_floor(&v);
                let s = floor + frac * (cp.s_c - floor);
                let st = stream_profile(&v, s, 201).ok()?;
                (st.inverse_froude_sq > 1.0 + 1e-6).then_some(st)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn froude_criteria_agree(st in subcritical()) {
            let s0 = sigma(&st, 0.0).unwrap();
            prop_assert!(s0 < 0.0);
            prop_assert!(st.froude < 1.0);
            prop_assert_eq!(froude_condition(&st), FroudeRegime::SubcriticalWavesExist);
            prop_assert!((s0 - sigma_at_zero(&st)).abs() < 1e-8);
        }

        #[test]
        fn unique_increasing_root(st in subcritical()) {
            let r = tau_star(&st).unwrap();
            prop_assert!(r.tau_star > 0.0);
            prop_assert!(r.monotone);
            prop_assert!(sigma(&st, r.tau_star).unwrap().abs() < 1e-9);
            let rho = sigma_rho_form(&st, 0.7).unwrap();
            prop_assert!((rho - sigma(&st, 0.7).unwrap()).abs() < 1e-9);
        }
    }
}
