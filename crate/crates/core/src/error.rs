use thiserror::Error;

/// Failures raised by the solvers. Values are reported as `f64` regardless
/// of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dielectric pole: |omega^2 - Omega^2| = {distance:e} is below the floor {floor:e}")]
    Pole { distance: f64, floor: f64 },

    #[error("frequency {omega} lies outside the bound-mode band ({lo}, {hi})")]
    OutOfBand { omega: f64, lo: f64, hi: f64 },

    #[error("wavenumber {k} lies in the forbidden band (dielectric {eps} <= 0)")]
    ForbiddenBand { k: f64, eps: f64 },

    #[error("parity alternation violated at mode {n}: root found on the {found} branch")]
    ParityViolation { n: usize, found: &'static str },

    #[error("mode {requested} requested but only {available} bound modes exist at L = {length}")]
    MissingMode {
        requested: usize,
        available: usize,
        length: f64,
    },

    #[error("quadrature did not converge after {panels} panels (last change {change:e})")]
    QuadratureNonConvergence { panels: usize, change: f64 },

    #[error("eta = {eta} is outside the validated series range [0, 0.1)")]
    EtaOutOfRange { eta: f64 },

    #[error("drive frequency {omega_m} is below the continuum threshold {threshold}")]
    BelowThreshold { omega_m: f64, threshold: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("step budget of {steps} exhausted at t = {t}")]
    StepBudget { steps: usize, t: f64 },

    #[error("bound mode {mode} disappears at L = {length} along the trajectory")]
    ModeDisappeared { mode: usize, length: f64 },

    #[error("trajectory leaves the admissible range at t = {t}: {reason}")]
    InvalidTrajectory { t: f64, reason: &'static str },

    #[error("coefficient interpolant deviates from direct solve by {deviation:e} at L = {length}")]
    InterpolationMismatch { length: f64, deviation: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
