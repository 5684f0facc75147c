//! Linear second-order two-point boundary value problems over a uniform
//! stream, with `u(0) = 0` and a Robin (or Dirichlet) condition at the top.
//!
//! Both supported forms are written as
//! `−(a u' − P)' + b u = G`, with state `(u, w = a u' − P)`:
//!
//! * physical, on `[0, d]`: `v'' + ω'(U) v − τ² v = f`, so `a = 1`,
//!   `b = τ² − ω'(U(Y))`, `G = −f`;
//! * hodograph, on `[0, 1]`: `−(u_p/H_p³ − P)_p + τ² u/H_p = F`, so
//!   `a = H_p⁻³`, `b = τ²/H_p`, `G = F`.

use crate::error::{Error, Result};
use crate::numerics::linspace;
use crate::numerics::tridiag::Tridiagonal;
use crate::options::SolverOptions;
use crate::stream::StreamSolution;

type Profile<'a> = Box<dyn Fn(f64) -> f64 + 'a>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvpForm {
    Physical,
    Hodograph,
}

/// Condition at the top of the layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterCondition {
    /// Physical form: `v'(d) − ρ v(d) = datum`.
    /// Hodograph form: `−u_p/H_p³ + ρ u = datum` at `p = 1`.
    Robin {
        rho: f64,
        datum: f64,
    },
    Dirichlet {
        value: f64,
    },
}

/// Samples of a BVP solution.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// Normalized shooting determinant of the homogeneous problem.
    pub determinant: f64,
}

pub struct RobinBvp<'a> {
    stream: &'a StreamSolution,
    form: BvpForm,
    tau: f64,
    forcing: Option<Profile<'a>>,
    flux_forcing: Option<Profile<'a>>,
    outer: OuterCondition,
    options: SolverOptions,
}

/// Outer condition rewritten as `−a u' + ρ u = c` (Robin) in the common form.
#[derive(Clone, Copy)]
enum Closure {
    Robin { rho: f64, c: f64 },
    Dirichlet(f64),
}

impl<'a> RobinBvp<'a> {
    /// `v'' + ω'(U) v − τ² v = 0` on `[0, d]` with `v'(d) − ρ₀ v(d) = 0`.
    pub fn physical(stream: &'a StreamSolution, tau: f64) -> Self {
        Self {
            stream,
            form: BvpForm::Physical,
            tau,
            forcing: None,
            flux_forcing: None,
            outer: OuterCondition::Robin {
                rho: stream.rho0(),
                datum: 0.0,
            },
            options: *stream.options(),
        }
    }

    /// `−(u_p/H_p³)_p + τ² u/H_p = 0` on `[0, 1]` with `−u_p/H_p³ + u = 0`.
    pub fn hodograph(stream: &'a StreamSolution, tau: f64) -> Self {
        Self {
            stream,
            form: BvpForm::Hodograph,
            tau,
            forcing: None,
            flux_forcing: None,
            outer: OuterCondition::Robin { rho: 1.0, datum: 0.0 },
            options: *stream.options(),
        }
    }

    /// Right-hand side `f` (physical) or `F` (hodograph).
    pub fn with_forcing(mut self, f: impl Fn(f64) -> f64 + 'a) -> Self {
        self.forcing = Some(Box::new(f));
        self
    }

    /// Divergence-form forcing `P` entering as `(… − P)'`; hodograph form only.
    pub fn with_flux_forcing(mut self, p: impl Fn(f64) -> f64 + 'a) -> Self {
        self.flux_forcing = Some(Box::new(p));
        self
    }

    pub fn with_outer(mut self, outer: OuterCondition) -> Self {
        self.outer = outer;
        self
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn form(&self) -> BvpForm {
        self.form
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn length(&self) -> f64 {
        match self.form {
            BvpForm::Physical => self.stream.depth,
            BvpForm::Hodograph => 1.0,
        }
    }

    fn a(&self, x: f64) -> f64 {
        match self.form {
            BvpForm::Physical => 1.0,
            BvpForm::Hodograph => self.stream.h_p(x).powi(-3),
        }
    }

    /// Zeroth-order coefficient; `u_base` is U(Y) in the physical form.
    fn b(&self, x: f64, u_base: f64) -> f64 {
        let t2 = self.tau * self.tau;
        match self.form {
            BvpForm::Physical => t2 - self.stream.vorticity().omega_prime(u_base),
            BvpForm::Hodograph => t2 / self.stream.h_p(x),
        }
    }

    fn g(&self, x: f64) -> f64 {
        let f = self.forcing.as_ref().map_or(0.0, |f| f(x));
        match self.form {
            BvpForm::Physical => -f,
            BvpForm::Hodograph => f,
        }
    }

    fn p(&self, x: f64) -> f64 {
        self.flux_forcing.as_ref().map_or(0.0, |p| p(x))
    }

    fn closure(&self) -> Closure {
        match (self.outer, self.form) {
            (OuterCondition::Dirichlet { value }, _) => Closure::Dirichlet(value),
            (OuterCondition::Robin { rho, datum }, BvpForm::Physical) => Closure::Robin { rho, c: -datum },
            (OuterCondition::Robin { rho, datum }, BvpForm::Hodograph) => Closure::Robin { rho, c: datum },
        }
    }

    /// Integrates the forced and the homogeneous initial value problems
    /// together (plus `U, U'` in the physical form). State layout:
    /// `[u_p, w_p, u_h, w_h, U, U']`.
    fn shoot(&self, nodes: &[f64]) -> Result<Vec<[f64; 6]>> {
        let y0 = [0.0, 0.0, 0.0, 1.0, 0.0, self.stream.s];
        let vort = self.stream.vorticity();
        let rhs = |x: f64, y: &[f64; 6]| {
            let a = self.a(x);
            let b = self.b(x, y[4]);
            let p = self.p(x);
            let (du_base, ddu_base) = match self.form {
                BvpForm::Physical => (y[5], -vort.omega(y[4])),
                BvpForm::Hodograph => (0.0, 0.0),
            };
            [
                (y[1] + p) / a,
                b * y[0] - self.g(x),
                y[3] / a,
                b * y[2],
                du_base,
                ddu_base,
            ]
        };
        self.options.dopri().integrate_grid(rhs, nodes, y0)
    }

    fn check_nodes(&self, nodes: &[f64]) -> Result<()> {
        let l = self.length();
        let ok = nodes.len() >= 2
            && nodes[0] == 0.0
            && (nodes[nodes.len() - 1] - l).abs() <= 1e-12 * l.max(1.0)
            && nodes.windows(2).all(|w| w[1] > w[0]);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("BVP nodes must increase from 0 to {l}")))
        }
    }

    /// Normalized determinant of the homogeneous problem from an end state.
    fn determinant_of(&self, end: &[f64; 6]) -> (f64, f64) {
        let (uh, wh) = (end[2], end[3]);
        let scale = uh.hypot(wh);
        match self.closure() {
            Closure::Robin { rho, .. } => {
                let raw = rho * uh - wh;
                (raw, raw / (scale * (1.0 + rho * rho).sqrt()))
            }
            Closure::Dirichlet(_) => (uh, uh / scale),
        }
    }

    /// Normalized shooting determinant; vanishes exactly when the homogeneous
    /// problem has a nontrivial solution.
    pub fn shooting_determinant(&self) -> Result<f64> {
        let out = self.shoot(&[0.0, self.length()])?;
        Ok(self.determinant_of(&out[1]).1)
    }

    /// Solution of the homogeneous equation with `u(0) = 0`, `(a u')(0) = 1`,
    /// ignoring the outer condition. Returns values and derivatives.
    pub fn homogeneous_solution(&self, nodes: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_nodes(nodes)?;
        let states = self.shoot(nodes)?;
        let values = states.iter().map(|y| y[2]).collect();
        let derivatives = nodes.iter().zip(&states).map(|(&x, y)| y[3] / self.a(x)).collect();
        Ok((values, derivatives))
    }

    /// Shooting solve at the given nodes (first node 0, last node the layer
    /// top). Fails with `NearResonance` when the normalized determinant is
    /// below the resonance threshold.
    pub fn solve(&self, nodes: &[f64]) -> Result<BvpSolution> {
        self.check_nodes(nodes)?;
        let states = self.shoot(nodes)?;
        let end = states[states.len() - 1];
        let (raw, determinant) = self.determinant_of(&end);
        if !(determinant.abs() >= self.options.resonance_threshold) {
            return Err(Error::NearResonance {
                tau: self.tau,
                determinant,
            });
        }
        let l = self.length();
        let residual = match self.closure() {
            Closure::Robin { rho, c } => rho * end[0] - end[1] - self.p(l) - c,
            Closure::Dirichlet(value) => end[0] - value,
        };
        let k = -residual / raw;
        let values = states.iter().map(|y| y[0] + k * y[2]).collect();
        let derivatives = nodes
            .iter()
            .zip(&states)
            .map(|(&x, y)| (y[1] + k * y[3] + self.p(x)) / self.a(x))
            .collect();
        Ok(BvpSolution {
            nodes: nodes.to_vec(),
            values,
            derivatives,
            determinant,
        })
    }

    /// Solution on `n` uniform nodes.
    pub fn solve_uniform(&self, n: usize) -> Result<BvpSolution> {
        self.solve(&linspace(0.0, self.length(), n))
    }

    /// Value and derivative at the top of the layer.
    pub fn solve_endpoint(&self) -> Result<(f64, f64)> {
        let sol = self.solve(&[0.0, self.length()])?;
        Ok((sol.values[1], sol.derivatives[1]))
    }

    /// Conservative three-point discretization on `n` cells, symmetric for
    /// both forms. Rows are scaled by the cell width; the last row is the
    /// half-cell balance carrying the outer condition. Returns the matrix and
    /// right-hand side for the unknowns `u_1 … u_n`.
    pub fn assemble(&self, n: usize) -> (Tridiagonal, Vec<f64>) {
        let l = self.length();
        let h = l / n as f64;
        let x = |i: usize| if i == n { l } else { h * i as f64 };
        let base = |y: f64| match self.form {
            BvpForm::Physical => self.stream.u_at(y),
            BvpForm::Hodograph => 0.0,
        };
        // coefficients at the cell midpoints x_{j+1/2}, j = 0 … n−1
        let mids: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
        let a_mid: Vec<f64> = mids.iter().map(|&x| self.a(x)).collect();
        let p_mid: Vec<f64> = mids.iter().map(|&x| self.p(x)).collect();
        let mut m = Tridiagonal::new(n);
        let mut rhs = vec![0.0; n];
        for i in 1..=n {
            let row = i - 1;
            let (am, pm) = (a_mid[i - 1], p_mid[i - 1]);
            if i < n {
                let (ap, pp) = (a_mid[i], p_mid[i]);
                m.diag[row] = (am + ap) / h + h * self.b(x(i), base(x(i)));
                m.upper[row] = -ap / h;
                rhs[row] = h * self.g(x(i)) - (pp - pm);
            } else {
                m.diag[row] = am / h + 0.5 * h * self.b(l, base(l));
                rhs[row] = 0.5 * h * self.g(l) + pm - self.p(l);
                match self.closure() {
                    Closure::Robin { rho, c } => {
                        m.diag[row] -= rho;
                        rhs[row] -= c;
                    }
                    Closure::Dirichlet(_) => {}
                }
            }
            if row > 0 {
                m.lower[row - 1] = -am / h;
            }
        }
        if let Closure::Dirichlet(value) = self.closure() {
            let last = n - 1;
            m.diag[last] = 1.0;
            if last > 0 {
                m.lower[last - 1] = 0.0;
                rhs[last - 1] -= m.upper[last - 1] * value;
                m.upper[last - 1] = 0.0;
            }
            rhs[last] = value;
        }
        (m, rhs)
    }

    fn solve_fd_once(&self, n: usize) -> Result<Vec<f64>> {
        let (m, rhs) = self.assemble(n);
        let mut u = vec![0.0];
        u.extend(m.solve(&rhs)?);
        Ok(u)
    }

    /// Finite-difference solution on `n + 1` uniform nodes, improved by two
    /// levels of Richardson extrapolation over `n`, `2n` and `4n` cells.
    pub fn solve_fd(&self, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let u1 = self.solve_fd_once(n)?;
        let u2 = self.solve_fd_once(2 * n)?;
        let u4 = self.solve_fd_once(4 * n)?;
        let values = (0..=n)
            .map(|i| {
                let r1 = (4.0 * u2[2 * i] - u1[i]) / 3.0;
                let r2 = (4.0 * u4[4 * i] - u2[2 * i]) / 3.0;
                (16.0 * r2 - r1) / 15.0
            })
            .collect();
        Ok((linspace(0.0, self.length(), n + 1), values))
    }

    /// `uᵀ K w` for the assembled operator `K` on `n` cells, with `u` and `w`
    /// sampled at the unknown nodes `1 … n`.
    pub fn discrete_bilinear(&self, n: usize, u: &[f64], w: &[f64]) -> f64 {
        let (m, _) = self.assemble(n);
        u.iter().zip(m.mul(w)).map(|(a, b)| a * b).sum()
    }
}

/// Solves the hodograph problem `−(u_p/H_p³)_p + τ² u/H_p = F` with
/// `u(0) = 0` and `−u_p/H_p³ + u = c` at `p = 1` on the stream's p-grid.
pub fn solve_mode(
    stream: &StreamSolution,
    tau: f64,
    rhs: impl Fn(f64) -> f64,
    robin_datum: f64,
) -> Result<BvpSolution> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidInput(format!("tau must be non-negative, got {tau}")));
    }
    RobinBvp::hodograph(stream, tau)
        .with_forcing(rhs)
        .with_outer(OuterCondition::Robin {
            rho: 1.0,
            datum: robin_datum,
        })
        .solve(&stream.grid_p)
}
