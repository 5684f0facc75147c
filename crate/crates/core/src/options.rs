use serde::{Deserialize, Serialize};

/// Tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// Relative tolerance of the adaptive Runge–Kutta integrator.
    pub ode_tol: f64,
    pub root_tol: f64,
    /// Normalized shooting determinants below this are treated as resonant.
    pub resonance_threshold: f64,
    /// Points in the uniform p- and Y-grids.
    pub grid_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            quad_abs_tol: 1e-10,
            quad_rel_tol: 1e-10,
            ode_tol: 1e-11,
            root_tol: 1e-12,
            resonance_threshold: 1e-8,
            grid_points: 2001,
        }
    }
}

impl SolverOptions {
    pub fn with_grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }

    pub(crate) fn dopri(&self) -> crate::numerics::ode::Dopri {
        crate::numerics::ode::Dopri::with_tolerance(self.ode_tol)
    }
}
