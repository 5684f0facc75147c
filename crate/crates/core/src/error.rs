use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shear parameter s = {s} is not above the admissible floor {floor}")]
    BelowShearFloor { s: f64, floor: f64 },

    #[error("no interior minimum of the Bernoulli function in s ∈ [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },

    #[error("Bernoulli constant {bernoulli} admits no subcritical stream (need {min} < R < {max})")]
    NoSubcriticalStream { bernoulli: f64, min: f64, max: f64 },

    #[error("near resonance at tau = {tau}: normalized shooting determinant {determinant:e}")]
    NearResonance { tau: f64, determinant: f64 },

    #[error("dispersion equation has no positive root: sigma(0) = {sigma0} >= 0 (Froude number {froude})")]
    NoRoot { sigma0: f64, froude: f64 },

    #[error("dispersion function changes sign {count} times on the scan; expected exactly one")]
    MultipleRoots { count: usize },

    #[error("1/d^2 + 2d = 2R has no two distinct roots for R = {bernoulli} (need R > 3/2)")]
    NoTwoRoots { bernoulli: f64 },

    #[error("nu(tau) = theta has no positive root for theta = {theta} (need theta > 1)")]
    NoThetaRoot { theta: f64 },

    #[error("no sign change bracketed on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("tau = {tau} is below the admissible minimum {min}")]
    TauBelowMinimum { tau: f64, min: f64 },

    #[error("degenerate leading coefficient {value:e} in the solvability condition")]
    DegenerateLeadingCoefficient { value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Convergence(String),
}
