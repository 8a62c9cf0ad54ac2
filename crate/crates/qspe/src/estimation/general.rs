//! Interval-counting solver for θ outside the small-angle regime.
//!
//! [0, π] is cut into ⌈π/ε⌉ intervals. An interval "satisfies" equation k when
//! A_k evaluated at its two endpoints brackets +|c_k| or −|c_k|, widened by γ
//! on both sides. Intervals satisfying the most equations are returned.

use crate::error::{QspeError, Result};
use crate::scalar::Real;
use crate::signal::exact_fourier_coefficients;

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSolution<T> {
    /// Midpoints of maximal-count intervals, ascending.
    pub candidates: Vec<T>,
    /// Satisfaction count per interval.
    pub counter: Vec<usize>,
    pub max_count: usize,
    pub epsilon: T,
    pub gamma: T,
}

impl<T: Real> IntervalSolution<T> {
    /// Merges runs of adjacent maximal intervals and returns each run's centre.
    pub fn cluster_centers(&self) -> Vec<T> {
        let m = self.counter.len();
        let width = T::PI() / T::from_usize_lossy(m);
        let mut out = Vec::new();
        let mut j = 0;
        while j < m {
            if self.counter[j] == self.max_count {
                let start = j;
                while j + 1 < m && self.counter[j + 1] == self.max_count {
                    j += 1;
                }
                out.push(T::from_usize_lossy(start + j + 1) * width / T::lit(2.0));
            }
            j += 1;
        }
        out
    }

    /// θ and π − θ give the same amplitudes; this folds a value into [0, π/2].
    pub fn canonical(theta: T) -> T {
        theta.min(T::PI() - theta)
    }

    /// Cluster centre closest to `reference` modulo the θ ↔ π−θ equivalence.
    pub fn nearest_to(&self, reference: T) -> Option<T> {
        self.cluster_centers().into_iter().min_by(|a, b| {
            let da = (Self::canonical(*a) - Self::canonical(reference)).abs();
            let db = (Self::canonical(*b) - Self::canonical(reference)).abs();
            da.partial_cmp(&db).expect("finite")
        })
    }
}

/// `γ = 3·sqrt(1/(2M(2d−1)))`, three standard deviations of a Fourier
/// coefficient's shot noise.
pub fn default_gamma<T: Real>(d: usize, shots: u64) -> T {
    let n = T::from_usize_lossy(2 * d - 1);
    T::lit(3.0) * (T::one() / (T::lit(2.0 * shots as f64) * n)).sqrt()
}

pub const DEFAULT_EPSILON: f64 = 1e-3;

/// `amplitudes` are `|c_k|` in natural order `k = −d+1 … d−1`.
pub fn general_theta_solve<T: Real>(amplitudes: &[T], d: usize, epsilon: T, gamma: T) -> Result<IntervalSolution<T>> {
    if amplitudes.len() != 2 * d - 1 {
        return Err(QspeError::InvalidArgument(format!("expected {} amplitudes, got {}", 2 * d - 1, amplitudes.len())));
    }
    if !(epsilon > T::zero()) || amplitudes.iter().any(|a| !a.is_finite()) || !(gamma >= T::zero()) {
        return Err(QspeError::InvalidArgument("epsilon must be positive, gamma non-negative, amplitudes finite".into()));
    }
    let m = (T::PI() / epsilon).ceil().to_usize().expect("interval count");
    let width = T::PI() / T::from_usize_lossy(m);
    let ends: Vec<Vec<T>> =
        (0..=m).map(|j| exact_fourier_coefficients(T::from_usize_lossy(j) * width, d).amplitudes).collect();
    let counter: Vec<usize> = (0..m)
        .map(|j| {
            let (l, r) = (&ends[j], &ends[j + 1]);
            (0..amplitudes.len())
                .filter(|&k| {
                    let lo = l[k].min(r[k]) - gamma;
                    let hi = l[k].max(r[k]) + gamma;
                    let a = amplitudes[k].abs();
                    (lo <= a && a <= hi) || (lo <= -a && -a <= hi)
                })
                .count()
        })
        .collect();
    let max_count = counter.iter().copied().max().unwrap_or(0);
    if max_count == 0 {
        return Err(QspeError::EmptyCandidates);
    }
    let candidates = counter
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == max_count)
        .map(|(j, _)| (T::from_usize_lossy(j) + T::lit(0.5)) * width)
        .collect();
    Ok(IntervalSolution { candidates, counter, max_count, epsilon, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_recovers_theta() {
        let (theta, d) = (0.7f64, 4);
        let amps: Vec<f64> = exact_fourier_coefficients(theta, d).amplitudes.iter().map(|a| a.abs()).collect();
        let sol = general_theta_solve(&amps, d, 1e-4, 0.0).unwrap();
        assert_eq!(sol.max_count, 2 * d - 1);
        assert!(sol.candidates.iter().any(|c| (c - theta).abs() <= 1e-4));
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(general_theta_solve(&[0.1f64; 4], 3, 1e-3, 0.0).is_err());
    }
}
