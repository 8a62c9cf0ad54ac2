//! Optimality analysis: Fisher information, Cramér–Rao bounds, quantum
//! Fisher information and the periodic-calibration baseline.

pub mod fisher;
pub mod periodic;
pub mod qfi;

pub use fisher::{
    crlb, crlb_from_matrix, fd_step, fisher_information, fisher_matrix, preasymptotic_crlb, preasymptotic_fisher,
    signal_derivative, DerivativeScheme, FisherReport, Regime,
};
pub use periodic::{
    depth_ladder, local_minima, pc_fisher_info, pc_loss_landscape, pc_probability, pc_probability_dtheta,
    PeriodicCalibReport,
};
pub use qfi::{grid_average_qfi, qfi_bound, qfi_per_omega, quantum_crlb};
