//! Synthetic data generation: shot noise, depolarizing, drift, readout
//! confusion and initial-state error, composed per experiment.

pub mod depolarizing;
pub mod drift;
pub mod initial_state;
pub mod readout;
pub mod shots;

pub use depolarizing::{apply_depolarizing, dem_fidelity, fidelity_for_gates, gate_count_x, gate_count_y};
pub use drift::{drifted_circuit, simulate_drift_circuit, DriftConfig};
pub use initial_state::{inject_initial_state_error, pauli_rotation, BellInput, InitialStateError, InitialStateStrategy};
pub use readout::{
    apply_readout, embed_depolarized, embed_subspace_probability, invert_readout, invert_with_matrix,
    required_confusion_shots, ConfusionMatrix, ShotBoundConstant,
};
pub use shots::{sample_count, sample_multinomial, sample_shots, ShotRecord};

use rand::Rng;

use crate::error::Result;
use crate::scalar::{Complex, Real};
use crate::seed::{mix, rng_from};
use crate::signal::{circuit_unitary_closed_form, transition_probs, ExperimentGrid, FourierSpectrum, GateParams, SignalSample};

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig<T> {
    /// Per-gate depolarizing rate r ∈ [0, 1).
    pub depolarizing_rate: T,
    pub drift: Option<DriftConfig<T>>,
    pub readout: Option<ConfusionMatrix<T>>,
    pub initial_state_error: Option<InitialStateError<T>>,
    pub shots: u64,
}

impl<T: Real> NoiseConfig<T> {
    /// Shot noise only.
    pub fn shot_noise(shots: u64) -> Self {
        Self { depolarizing_rate: T::zero(), drift: None, readout: None, initial_state_error: None, shots }
    }
}

/// Subspace transition probability of one experiment before depolarizing and
/// readout, drawing drift and random preparation error from `rng`.
fn ideal_probability<T: Real, R: Rng + ?Sized>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    input: BellInput,
    noise: &NoiseConfig<T>,
    rng: &mut R,
) -> T {
    if noise.drift.is_none() && noise.initial_state_error.is_none() {
        let (px, py) = transition_probs(p, omega, d);
        return match input {
            BellInput::X => px,
            BellInput::Y => py,
        };
    }
    let h = T::FRAC_1_SQRT_2();
    let mut state = [Complex::new(h, T::zero()), input.beta::<T>() * h];
    if let Some(e) = &noise.initial_state_error {
        state = inject_initial_state_error(e, input, rng).apply(state);
    }
    let u = match &noise.drift {
        Some(dr) => drifted_circuit(p, omega, d, dr, rng),
        None => circuit_unitary_closed_form(p, omega, d),
    };
    u.apply(state)[0].norm_sqr()
}

fn fidelity_for<T: Real>(noise: &NoiseConfig<T>, d: usize, input: BellInput) -> T {
    let n = match input {
        BellInput::X => gate_count_x(d),
        BellInput::Y => gate_count_y(d),
    };
    fidelity_for_gates(noise.depolarizing_rate, n)
}

fn measure<T: Real>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    input: BellInput,
    noise: &NoiseConfig<T>,
    seed: u64,
    sample: bool,
) -> Result<T> {
    let mut rng = rng_from(seed);
    let ideal = ideal_probability(p, omega, d, input, noise, &mut rng);
    let alpha = fidelity_for(noise, d, input);
    match &noise.readout {
        None => {
            let pd = apply_depolarizing(ideal, alpha);
            if sample {
                let c = sample_count(pd, noise.shots, &mut rng)?;
                Ok(T::lit(c as f64 / noise.shots as f64))
            } else {
                Ok(pd)
            }
        }
        Some(r) => {
            let q = apply_readout(&embed_depolarized(ideal, alpha), r);
            let q = if sample {
                let probs: Vec<f64> = q.iter().map(|v| v.as_f64()).collect();
                let c = sample_multinomial(&probs, noise.shots, &mut rng)?;
                let m = noise.shots as f64;
                [T::lit(c[0] as f64 / m), T::lit(c[1] as f64 / m), T::lit(c[2] as f64 / m), T::lit(c[3] as f64 / m)]
            } else {
                q
            };
            Ok(invert_readout(&q, r)?[1])
        }
    }
}

/// Seed of experiment `(point j, input β)` within a repetition.
pub fn experiment_seed(seed: u64, j: usize, input: BellInput) -> u64 {
    mix(seed, j as u64, input.index())
}

/// Noisy record at one ω; `index` selects the derived seed stream.
pub fn simulate_record<T: Real>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    noise: &NoiseConfig<T>,
    seed: u64,
    index: usize,
) -> Result<ShotRecord<T>> {
    let p_x_hat = measure(p, omega, d, BellInput::X, noise, experiment_seed(seed, index, BellInput::X), true)?;
    let p_y_hat = measure(p, omega, d, BellInput::Y, noise, experiment_seed(seed, index, BellInput::Y), true)?;
    Ok(ShotRecord { omega, p_x_hat, p_y_hat, shots: noise.shots, seed })
}

/// Infinite-shot `(p_X, p_Y)` including every non-sampling noise source.
pub fn model_probabilities<T: Real>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    noise: &NoiseConfig<T>,
    seed: u64,
    index: usize,
) -> Result<(T, T)> {
    Ok((
        measure(p, omega, d, BellInput::X, noise, experiment_seed(seed, index, BellInput::X), false)?,
        measure(p, omega, d, BellInput::Y, noise, experiment_seed(seed, index, BellInput::Y), false)?,
    ))
}

/// Noisy records on arbitrary ω points, all at depth d.
pub fn simulate_points<T: Real>(
    p: &GateParams<T>,
    omegas: &[T],
    d: usize,
    noise: &NoiseConfig<T>,
    seed: u64,
) -> Result<Vec<ShotRecord<T>>> {
    omegas.iter().enumerate().map(|(j, &w)| simulate_record(p, w, d, noise, seed, j)).collect()
}

/// Noisy records on the standard 2d−1 point grid.
pub fn simulate_grid<T: Real>(p: &GateParams<T>, d: usize, noise: &NoiseConfig<T>, seed: u64) -> Result<Vec<ShotRecord<T>>> {
    simulate_points(p, &ExperimentGrid::<T>::new(d).omegas, d, noise, seed)
}

/// Infinite-shot grid samples with all other noise sources.
pub fn model_grid<T: Real>(p: &GateParams<T>, d: usize, noise: &NoiseConfig<T>, seed: u64) -> Result<Vec<SignalSample<T>>> {
    ExperimentGrid::<T>::new(d)
        .omegas
        .iter()
        .enumerate()
        .map(|(j, &w)| model_probabilities(p, w, d, noise, seed, j).map(|(x, y)| SignalSample::from_probabilities(w, x, y)))
        .collect()
}

pub fn records_to_samples<T: Real>(records: &[ShotRecord<T>]) -> Vec<SignalSample<T>> {
    records.iter().map(|r| SignalSample::from_probabilities(r.omega, r.p_x_hat, r.p_y_hat)).collect()
}

pub fn spectrum_from_samples<T: Real>(samples: &[SignalSample<T>]) -> FourierSpectrum<T> {
    let h: Vec<_> = samples.iter().map(|s| s.h).collect();
    FourierSpectrum::from_samples(&h)
}

pub fn spectrum_from_records<T: Real>(records: &[ShotRecord<T>]) -> FourierSpectrum<T> {
    spectrum_from_samples(&records_to_samples(records))
}
