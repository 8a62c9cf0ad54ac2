//! Readout confusion on the four computational outcomes |00⟩,|01⟩,|10⟩,|11⟩.

use rand::Rng;

use crate::error::{QspeError, Result};
use crate::linalg::{condition_number, Matrix};
use crate::noise::shots::sample_multinomial;
use crate::scalar::Real;

const MAX_CONDITION: f64 = 1e8;

/// Row-stochastic `R_{ij} = P(read j | prepared i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix<T> {
    matrix: Matrix<T>,
}

impl<T: Real> ConfusionMatrix<T> {
    pub fn new(rows: [[T; 4]; 4]) -> Result<Self> {
        let rows: Vec<Vec<T>> = rows.iter().map(|r| r.to_vec()).collect();
        for (i, r) in rows.iter().enumerate() {
            if r.iter().any(|&v| !(v >= T::zero() && v <= T::one())) {
                return Err(QspeError::InvalidArgument(format!("confusion row {i} has entries outside [0, 1]")));
            }
            let s = r.iter().fold(T::zero(), |a, &b| a + b);
            if (s - T::one()).abs() > T::lit(1e-12) {
                return Err(QspeError::InvalidArgument(format!("confusion row {i} sums to {s}")));
            }
            if r[i] <= T::lit(0.5) {
                return Err(QspeError::InvalidArgument(format!("confusion diagonal R[{i}][{i}] must exceed 1/2")));
            }
        }
        Ok(Self { matrix: Matrix::from_rows(&rows) })
    }

    pub fn identity() -> Self {
        Self { matrix: Matrix::identity(4) }
    }

    /// Uniform off-diagonal leakage with diagonal `fidelity`.
    pub fn symmetric(fidelity: T) -> Result<Self> {
        let off = (T::one() - fidelity) / T::lit(3.0);
        let mut rows = [[off; 4]; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = fidelity;
        }
        Self::new(rows)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix.get(i, j)
    }

    /// `κ = max_i 1/(2R_ii − 1)`.
    pub fn kappa(&self) -> T {
        (0..4).map(|i| T::one() / (T::lit(2.0) * self.get(i, i) - T::one())).fold(T::zero(), T::max)
    }

    /// Finite-sample estimate: each row from `shots` multinomial draws.
    pub fn estimate<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<Matrix<T>> {
        let mut m = Matrix::zeros(4);
        for i in 0..4 {
            let probs: Vec<f64> = (0..4).map(|j| self.get(i, j).as_f64()).collect();
            for (j, c) in sample_multinomial(&probs, shots, rng)?.into_iter().enumerate() {
                m.set(i, j, T::lit(c as f64 / shots as f64));
            }
        }
        Ok(m)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }
}

/// `q = Rᵀ p`.
pub fn apply_readout<T: Real>(p: &[T; 4], r: &ConfusionMatrix<T>) -> [T; 4] {
    let v = r.matrix.transpose().mul_vec(p);
    [v[0], v[1], v[2], v[3]]
}

/// Solves `Rᵀ p = q` for p, for any (possibly estimated) row-stochastic R.
pub fn invert_with_matrix<T: Real>(q: &[T; 4], r: &Matrix<T>) -> Result<[T; 4]> {
    let (lu, cond) = condition_number(&r.transpose())?;
    if cond > T::lit(MAX_CONDITION) {
        return Err(QspeError::IllConditioned { condition: cond.as_f64() });
    }
    let v = lu.solve(q);
    Ok([v[0], v[1], v[2], v[3]])
}

pub fn invert_readout<T: Real>(q: &[T; 4], r: &ConfusionMatrix<T>) -> Result<[T; 4]> {
    invert_with_matrix(q, &r.matrix)
}

/// Embeds a subspace transition probability: |0_ℓ⟩ = |01⟩ gets p, |1_ℓ⟩ = |10⟩ gets 1−p.
pub fn embed_subspace_probability<T: Real>(p: T) -> [T; 4] {
    [T::zero(), p, T::one() - p, T::zero()]
}

/// Subspace embedding followed by global depolarizing with fidelity α.
pub fn embed_depolarized<T: Real>(p: T, alpha: T) -> [T; 4] {
    let e = embed_subspace_probability(p);
    let floor = (T::one() - alpha) / T::lit(4.0);
    [alpha * e[0] + floor, alpha * e[1] + floor, alpha * e[2] + floor, alpha * e[3] + floor]
}

/// Which constant to use in the confusion-matrix sample bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShotBoundConstant {
    /// The constant 8 obtained in the proof; never under-samples.
    #[default]
    Proof,
    /// The tighter constant 2; may under-sample.
    Tight,
}

/// `M_cmt = ⌈c κ²(κ+ε)² ln(32/α)/ε²⌉` (at least 1), `c ∈ {8, 2}`.
pub fn required_confusion_shots(kappa: f64, epsilon: f64, alpha: f64, constant: ShotBoundConstant) -> Result<u64> {
    if !(kappa >= 1.0) || !(epsilon > 0.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(QspeError::InvalidArgument("need kappa >= 1, epsilon > 0, 0 < alpha < 1".into()));
    }
    let c = match constant {
        ShotBoundConstant::Proof => 8.0,
        ShotBoundConstant::Tight => 2.0,
    };
    // ((κ+ε)/ε)² rather than (κ+ε)²/ε², which overflows for huge ε
    let m = c * kappa * kappa * ((kappa + epsilon) / epsilon).powi(2) * (32.0 / alpha).ln();
    Ok((m.ceil() as u64).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_round_trip() {
        let p = [0.1f64, 0.2, 0.3, 0.4];
        let r = ConfusionMatrix::identity();
        assert_eq!(apply_readout(&p, &r), p);
        assert_eq!(invert_readout(&p, &r).unwrap(), p);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(ConfusionMatrix::new([[0.5f64, 0.5, 0.0, 0.0]; 4]).is_err());
        assert!(ConfusionMatrix::symmetric(0.9f64).is_ok());
    }

    #[test]
    fn kappa_of_symmetric() {
        let r = ConfusionMatrix::symmetric(0.9f64).unwrap();
        assert!((r.kappa() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn shot_bound_limits() {
        // (κ+ε)²/ε² → 1, so the bound tends to ⌈8κ² ln(32/α)⌉ rather than vanishing.
        let limit = (8.0 * (64.0f64).ln()).ceil() as u64;
        assert_eq!(required_confusion_shots(1.0, 1e9, 0.5, ShotBoundConstant::Proof).unwrap(), limit);
        let a = required_confusion_shots(1.25, 0.01, 0.05, ShotBoundConstant::Proof).unwrap();
        let b = required_confusion_shots(1.25, 0.01, 0.05, ShotBoundConstant::Tight).unwrap();
        assert_eq!(a, 1_282_279);
        assert!((a as f64 / b as f64 - 4.0).abs() < 1e-5);
    }
}
