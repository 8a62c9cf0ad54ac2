//! Statistical estimators for the gate angles.

pub mod fidelity;
pub mod general;
pub mod peak;
pub mod spectral;

pub use fidelity::{estimate_fidelity_and_theta, fidelity_bias_for_phases};
pub use general::{default_gamma, general_theta_solve, IntervalSolution, DEFAULT_EPSILON};
pub use peak::{peak_diff_depths, peak_diff_estimate, peak_fit, peak_fit_grid, DepthSample, PeakFit};
pub use spectral::{
    predicted_variances, qspe_estimate, qspe_estimate_with, EstimateReport, Method, PhaseDifferenceVector, QspeOptions,
};
