//! Initial-state preparation error `E_η = exp(−iηK)` applied to the ideal
//! Bell input before the circuit.

use rand::Rng;

use crate::scalar::{Complex, Real};
use crate::signal::SubspaceUnitary;

/// Which Bell input an experiment uses: |+⟩ (β = 1) or |i⟩ (β = i).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellInput {
    X,
    Y,
}

impl BellInput {
    pub fn beta<T: Real>(self) -> Complex<T> {
        match self {
            BellInput::X => Complex::new(T::one(), T::zero()),
            BellInput::Y => Complex::new(T::zero(), T::one()),
        }
    }

    pub fn index(self) -> u64 {
        match self {
            BellInput::X => 0,
            BellInput::Y => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialStateStrategy {
    /// `K = (X+Y)/√2` for every experiment.
    Identical,
    /// `K = (X+Y)/√2` for |+⟩ and `(2X+Y)/√5` for |i⟩.
    Fixed,
    /// Fresh random unit-norm traceless Hermitian K per experiment. The trace
    /// part of a general Hermitian generator is a global phase and is dropped.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateError<T> {
    pub eta: T,
    pub strategy: InitialStateStrategy,
}

/// `exp(−iη n·σ) = cos η I − i sin η (n·σ)` for a unit vector n.
pub fn pauli_rotation<T: Real>(eta: T, n: [T; 3]) -> SubspaceUnitary<T> {
    let (s, c) = eta.sin_cos();
    let mi_s = Complex::new(T::zero(), -s);
    let (nx, ny, nz) = (n[0], n[1], n[2]);
    SubspaceUnitary::new(
        Complex::new(c, T::zero()) + mi_s * nz,
        mi_s * Complex::new(nx, -ny),
        mi_s * Complex::new(nx, ny),
        Complex::new(c, T::zero()) - mi_s * nz,
    )
}

/// Error unitary for one experiment. `rng` is only drawn from for `Random`.
pub fn inject_initial_state_error<T: Real, R: Rng + ?Sized>(
    err: &InitialStateError<T>,
    input: BellInput,
    rng: &mut R,
) -> SubspaceUnitary<T> {
    let n = match (err.strategy, input) {
        (InitialStateStrategy::Identical, _) | (InitialStateStrategy::Fixed, BellInput::X) => {
            [T::FRAC_1_SQRT_2(), T::FRAC_1_SQRT_2(), T::zero()]
        }
        (InitialStateStrategy::Fixed, BellInput::Y) => {
            let r5 = T::lit(5.0).sqrt();
            [T::lit(2.0) / r5, T::one() / r5, T::zero()]
        }
        (InitialStateStrategy::Random, _) => random_unit_vector(rng),
    };
    pauli_rotation(err.eta, n)
}

fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [T; 3] {
    // Uniform on the sphere: z uniform in [−1, 1], azimuth uniform.
    let z: f64 = rng.gen::<f64>() * 2.0 - 1.0;
    let a: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let r = (1.0 - z * z).sqrt();
    [T::lit(r * a.cos()), T::lit(r * a.sin()), T::lit(z)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;

    #[test]
    fn zero_eta_is_identity() {
        let e = InitialStateError { eta: 0.0f64, strategy: InitialStateStrategy::Random };
        let u = inject_initial_state_error(&e, BellInput::Y, &mut rng_from(1));
        assert!(u.max_abs_diff(&SubspaceUnitary::identity()) < 1e-15);
    }

    #[test]
    fn rotation_matches_series() {
        // exp(−iηK) against a truncated Taylor series.
        let (eta, n) = (0.3f64, [0.6, 0.0, 0.8]);
        let k = SubspaceUnitary::new(
            Complex::new(n[2], 0.0),
            Complex::new(n[0], -n[1]),
            Complex::new(n[0], n[1]),
            Complex::new(-n[2], 0.0),
        );
        let step = k.scale(Complex::new(0.0, -eta));
        let mut term = SubspaceUnitary::identity();
        let mut sum = SubspaceUnitary::identity();
        for j in 1..30 {
            term = (term * step).scale(Complex::new(1.0 / j as f64, 0.0));
            let e = &mut sum.entries;
            for (a, row) in e.iter_mut().enumerate() {
                for (b, v) in row.iter_mut().enumerate() {
                    *v += term.entries[a][b];
                }
            }
        }
        assert!(pauli_rotation(eta, n).max_abs_diff(&sum) < 1e-14);
    }
}
