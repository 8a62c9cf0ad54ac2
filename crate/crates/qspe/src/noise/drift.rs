//! Time-dependent coherent drift: at the j-th U-gate of a depth-d circuit the
//! angles are drawn uniformly from
//! `θ ± f_θ·θ`, `φ ± a·j/d`, `χ ± a·j/d` (defaults f_θ = 0.1, a = 0.3).
//!
//! One draw per circuit realization; the caller samples shots from it.

use rand::Rng;

use crate::scalar::{Complex, Real};
use crate::seed::{mix, rng_from};
use crate::signal::{u_gate_subspace, GateParams, SubspaceUnitary};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftConfig<T> {
    pub theta_fraction: T,
    pub phase_amplitude: T,
}

impl<T: Real> Default for DriftConfig<T> {
    fn default() -> Self {
        Self { theta_fraction: T::lit(0.1), phase_amplitude: T::lit(0.3) }
    }
}

fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, center: T, half_width: T) -> T {
    let u: f64 = rng.gen::<f64>() * 2.0 - 1.0;
    center + half_width * T::lit(u)
}

/// One drifted realization of `∏_j e^{iωZ} U_j`, gate 1 applied first.
pub fn drifted_circuit<T: Real, R: Rng + ?Sized>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    drift: &DriftConfig<T>,
    rng: &mut R,
) -> SubspaceUnitary<T> {
    let phase = SubspaceUnitary::rz(omega);
    let dt = drift.theta_fraction * p.theta.abs();
    let df = T::from_usize_lossy(d);
    let mut acc = SubspaceUnitary::identity();
    for j in 1..=d {
        let dp = drift.phase_amplitude * T::from_usize_lossy(j) / df;
        let g = GateParams {
            theta: uniform(rng, p.theta, dt),
            varphi: uniform(rng, p.varphi, dp),
            chi: uniform(rng, p.chi, dp),
            psi: p.psi,
        };
        acc = phase * u_gate_subspace(&g) * acc;
    }
    acc
}

/// Exact `(p_X, p_Y)` of two independently drifted circuits (one per Bell input).
pub fn simulate_drift_circuit<T: Real>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    drift: &DriftConfig<T>,
    seed: u64,
) -> (T, T) {
    let ux = drifted_circuit(p, omega, d, drift, &mut rng_from(mix(seed, 0, 0)));
    let uy = drifted_circuit(p, omega, d, drift, &mut rng_from(mix(seed, 1, 0)));
    let (one, i) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::one()));
    (ux.bell_probability(one), uy.bell_probability(i))
}
