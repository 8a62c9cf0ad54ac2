//! Finite-shot sampling.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{QspeError, Result};
use crate::scalar::Real;
use crate::seed::rng_from;

const RANGE_TOLERANCE: f64 = 1e-12;

/// One experiment's empirical frequencies on a grid point.
///
/// Without readout correction `p_x_hat·shots` and `p_y_hat·shots` are exact
/// counts; readout-corrected records hold the linear-solve output instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotRecord<T> {
    pub omega: T,
    pub p_x_hat: T,
    pub p_y_hat: T,
    pub shots: u64,
    pub seed: u64,
}

pub(crate) fn checked_probability<T: Real>(p: T) -> Result<f64> {
    let v = p.as_f64();
    if !(v >= -RANGE_TOLERANCE && v <= 1.0 + RANGE_TOLERANCE) {
        return Err(QspeError::ProbabilityOutOfRange { value: v });
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `Binomial(M, p)` count using the caller's generator.
pub fn sample_count<T: Real, R: Rng + ?Sized>(p: T, shots: u64, rng: &mut R) -> Result<u64> {
    if shots == 0 {
        return Err(QspeError::InvalidArgument("shot count must be positive".into()));
    }
    let p = checked_probability(p)?;
    let dist = Binomial::new(shots, p).map_err(|e| QspeError::InvalidArgument(e.to_string()))?;
    Ok(dist.sample(rng))
}

/// `Binomial(M, p)/M`, deterministic in `seed`.
pub fn sample_shots<T: Real>(p: T, shots: u64, seed: u64) -> Result<T> {
    let count = sample_count(p, shots, &mut rng_from(seed))?;
    Ok(T::lit(count as f64) / T::lit(shots as f64))
}

/// Counts over several outcomes by sequential conditional binomials.
pub fn sample_multinomial<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Result<Vec<u64>> {
    let mut remaining = shots;
    let mut mass = 1.0;
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        let p = checked_probability(p)?;
        if i + 1 == probs.len() {
            out.push(remaining);
            break;
        }
        let cond = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = if remaining == 0 {
            0
        } else {
            Binomial::new(remaining, cond).map_err(|e| QspeError::InvalidArgument(e.to_string()))?.sample(rng)
        };
        out.push(n);
        remaining -= n;
        mass -= p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_probabilities() {
        assert_eq!(sample_shots(0.0f64, 100, 3).unwrap(), 0.0);
        assert_eq!(sample_shots(1.0f64, 100, 3).unwrap(), 1.0);
        assert_eq!(sample_shots(1.0f64 + 5e-13, 100, 3).unwrap(), 1.0);
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(sample_shots(1.0f64 + 1e-9, 100, 3).is_err());
        assert!(sample_shots(-1e-9f64, 100, 3).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(sample_shots(0.3f64, 10, 42).unwrap(), sample_shots(0.3f64, 10, 42).unwrap());
    }

    #[test]
    fn multinomial_conserves_shots() {
        let mut rng = rng_from(5);
        let c = sample_multinomial(&[0.1, 0.2, 0.3, 0.4], 1000, &mut rng).unwrap();
        assert_eq!(c.iter().sum::<u64>(), 1000);
    }
}
