//! Discrete-time quantum walks on the integer line with a single phase
//! defect at the origin: simulation, closed-form stationary eigenstates,
//! and the numerical machinery that verifies the closed forms against
//! brute-force evolution.
//!
//! - [`walk`]: states, coins, one-step evolution, site measures, and the
//!   time-averaged origin measure that witnesses localization
//! - [`analytic`]: the two stationary solution branches in closed form,
//!   their eigenvalues, spatial decay ratios, and decay classification
//! - [`genfun`]: the half-line generating-function system, its determinant
//!   roots, and truncated-series residual checks
//! - [`spectral`]: the truncated one-step operator as an explicit matrix,
//!   eigen-relation residuals, and geometric decay fitting

pub mod analytic;
pub mod error;
pub mod genfun;
pub mod spectral;
pub mod walk;

pub use analytic::{
    Branch, DecayClass, StationarySolution, build_solution, gamma_factor, lambda_sq_components,
    lambda_squared, omega, phi_grid, select_lambda, stationary_amplitude, stationary_measure,
    theta_s_all_forms, theta_s_form1, theta_s_squared,
};
pub use error::{Error, Result};
pub use genfun::{
    Chirality, GenFunSystem, Side, build_system, det_a_roots, system_residual, truncated_series,
    unit_circle_points,
};
pub use spectral::{TruncatedOperator, build_truncated_operator, decay_fit, stationarity_residual};
pub use walk::{
    Amplitude, Coin, CoinField, CoinSplit, Measure, WalkState, build_wojcik_coin_field, evolve,
    measure, split_coin, step, time_averaged_measure, total_norm,
};
