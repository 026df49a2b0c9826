//! Dynamical Casimir effect in a one-dimensional cavity whose mirrors are
//! modelled as dispersive matter rather than as boundary conditions.
//!
//! Everything is generic over [`Real`]; the aliases below fix the scalar to
//! `f64`, the precision the default tolerances are calibrated for.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod interp;
pub mod model;
pub mod modes;
pub mod ode;
pub mod quadrature;
pub mod real;

pub use error::{Error, Result};
pub use real::Real;

pub type CavityParams = model::CavityParams<f64>;
pub type MirrorTrajectory = model::MirrorTrajectory<f64>;
pub type DimensionlessGroup = model::DimensionlessGroup<f64>;
pub type DiscreteMode = modes::DiscreteMode<f64>;
pub type ContinuumMode = modes::ContinuumMode<f64>;
pub type QuadraticHamiltonian = hamiltonian::QuadraticHamiltonian<f64>;
pub type FTriple = hamiltonian::FTriple<f64>;
pub type ScalingReport = hamiltonian::ScalingReport<f64>;
pub type BogoliubovMap = dynamics::BogoliubovMap<f64>;
pub type EvolutionResult = dynamics::EvolutionResult<f64>;
pub type EvolveControls = dynamics::EvolveControls<f64>;
pub type DecayResult = decay::DecayResult<f64>;

pub use decay::{decay_asymptote, decay_rate, matrix_element};
pub use dynamics::{evolve, photon_numbers};
pub use hamiltonian::{
    build_quadratic, coeff_photon, coeff_polariton, compare_models, eta_series, log_grid, sweep_row, Model, SeriesKind,
};
pub type SweepRow = hamiltonian::SweepRow<f64>;
pub use model::{dielectric, discrete_band, eta_of};
pub use modes::{continuum_mode, mode_profile, overlap, solve_discrete, Branch, Parity};
