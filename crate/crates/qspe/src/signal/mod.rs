//! Exact noiseless model of the QSPE circuit.

pub mod gate;
pub mod polynomial;
pub mod spectrum;

pub use gate::{building_block, circuit_unitary, u_gate_euler, u_gate_subspace, GateParams, SubspaceUnitary};
pub use polynomial::{
    building_block_closed_form, chebyshev_pair, chebyshev_u, circuit_unitary_closed_form, pq_closed_form, pq_from_theta,
    reduced_signal, signal, signal_power, transition_probs, ExperimentGrid, SignalSample,
};
pub use spectrum::{
    approx_coefficient_unscaled, approx_fourier_coefficients, exact_fourier_coefficients, exact_spectrum,
    FourierSpectrum, ThetaSpectrum,
};
