//! Classical simulation and estimation toolkit for quantum signal-processing
//! phase estimation (QSPE) of two-qubit gates with a two-level invariant
//! subspace.
//!
//! * [`signal`]: exact circuit model, closed-form QSP polynomials, Fourier
//!   coefficients.
//! * [`noise`]: shot noise, depolarizing, drift, readout and state-prep errors.
//! * [`estimation`]: Fourier-space estimators and refinements.
//! * [`analysis`]: Fisher information, CRLB, QFI, periodic calibration.
//!
//! All routines are generic over [`scalar::Real`] (`f32` or `f64`). The
//! aliases below fix the scalar to `f64`, which is what the documented
//! tolerances assume.

pub mod analysis;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod noise;
pub mod scalar;
pub mod seed;
pub mod signal;

pub use error::{QspeError, Result};
pub use scalar::{Complex, Real};

pub type GateParams = signal::GateParams<f64>;
pub type SubspaceUnitary = signal::SubspaceUnitary<f64>;
pub type ExperimentGrid = signal::ExperimentGrid<f64>;
pub type FourierSpectrum = signal::FourierSpectrum<f64>;
pub type ThetaSpectrum = signal::ThetaSpectrum<f64>;
pub type SignalSample = signal::SignalSample<f64>;
pub type ShotRecord = noise::ShotRecord<f64>;
pub type NoiseConfig = noise::NoiseConfig<f64>;
pub type DriftConfig = noise::DriftConfig<f64>;
pub type ConfusionMatrix = noise::ConfusionMatrix<f64>;
pub type InitialStateError = noise::InitialStateError<f64>;
pub type EstimateReport = estimation::EstimateReport<f64>;
pub type IntervalSolution = estimation::IntervalSolution<f64>;
pub type PeakFit = estimation::PeakFit<f64>;
pub type FisherReport = analysis::FisherReport<f64>;
pub type PeriodicCalibReport = analysis::PeriodicCalibReport<f64>;

pub type GateParamsF32 = signal::GateParams<f32>;
pub type FourierSpectrumF32 = signal::FourierSpectrum<f32>;
