//! Covariance-matrix simulator for mechanical squeezing in an
//! optomechanical cavity driven by two tones and an intracavity
//! degenerate parametric amplifier.
//!
//! The crate works entirely with the linearized quadrature fluctuations
//! `(dX, dY, dQ, dP)` of the cavity field and the mechanical oscillator:
//!
//! - [`model`] converts laboratory units into `omega_m`-normalized
//!   parameters and solves the classical steady state of the driven
//!   cavity.
//! - [`dynamics`] builds the drift and diffusion matrices (with and
//!   without the rotating-wave approximation), integrates the covariance
//!   motion equation, and solves the stationary Lyapunov equation.
//! - [`stability`] evaluates the closed-form Routh-Hurwitz inequalities
//!   and the eigenvalue test.
//! - [`analysis`] turns covariances into squeezing degrees in dB,
//!   carries the weak-coupling closed-form solution, Wigner grids, and
//!   the optimal-ratio search.
//! - [`sweep`] runs deterministic parameter grids and provides the named
//!   figure presets.
//!
//! The library is `no_std` (with `alloc`); all floating-point math goes
//! through `libm`, so results are bit-reproducible across builds.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod stability;
pub mod sweep;

pub use analysis::{
    adiabatic_model, analytic_squeezing_db, analytic_variance_p, analytic_variance_q,
    optimal_ratio_search, squeezing_db, squeezing_report, wigner, AdiabaticModel, CovBlock,
    SqueezingReport, WignerGrid, WignerGridSpec,
};
pub use dynamics::{
    diffusion, drift_rwa, drift_time_dependent, evolve, initial_covariance,
    steady_state_covariance, CovarianceMatrix, DiffusionMatrix, DriftMatrix, Trajectory,
};
pub use error::{Error, Result};
pub use model::{
    couplings, normalize_params, solve_steady_amplitudes, Couplings, Drives, PhysicalConstants,
    PhysicalParams, SteadyState, SystemParams,
};
pub use stability::{eigen_stable, routh_hurwitz, StabilityReport};
pub use sweep::{
    evaluate_point, figure_preset, run_sweep, Axis, Column, SweepRow, SweepSpec, SweepTable,
    PRESET_NAMES,
};
