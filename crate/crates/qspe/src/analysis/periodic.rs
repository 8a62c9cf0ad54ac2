//! Periodic (Floquet) calibration baseline: `P_pc = sin²θ U²_{d−1}(cos σ)` on a
//! power-of-two depth ladder, `cos σ = cos θ cos(ω−φ)`.

use rand_distr::{Binomial, Distribution};

use crate::error::{QspeError, Result};
use crate::scalar::{compensated_sum, Real};
use crate::seed::{mix, rng_from};
use crate::signal::chebyshev_u;

const DEGENERATE: f64 = 1e-12;
const THETA_NUDGE: f64 = 1e-12;

fn sigma<T: Real>(theta: T, offset: T) -> (T, T) {
    let (so, co) = offset.sin_cos();
    let st = theta.sin();
    let c = (theta.cos() * co).max(-T::one()).min(T::one());
    (c, (so * so + co * co * st * st).sqrt())
}

/// `(U_{d−1}(c), U'_{d−1}(c))` by the joint three-term recurrence.
fn chebyshev_u_with_derivative<T: Real>(c: T, d: usize) -> (T, T) {
    let two = T::lit(2.0);
    // n = 0: U_0 = 1, U'_0 = 0; U_{-1} = 0
    let (mut u_prev, mut u) = (T::zero(), T::one());
    let (mut du_prev, mut du) = (T::zero(), T::zero());
    for _ in 1..d {
        let next = two * c * u - u_prev;
        let dnext = two * u + two * c * du - du_prev;
        u_prev = u;
        u = next;
        du_prev = du;
        du = dnext;
    }
    (u, du)
}

/// `P_pc(θ, φ, ω, d)`.
pub fn pc_probability<T: Real>(theta: T, varphi: T, omega: T, d: usize) -> T {
    let (c, s) = sigma(theta, omega - varphi);
    let a = theta.sin() * chebyshev_u(c, s, d);
    a * a
}

/// `∂P_pc/∂θ = 2 sinθ cosθ U² − 2 sin³θ cos(ω−φ) U U'`.
pub fn pc_probability_dtheta<T: Real>(theta: T, varphi: T, omega: T, d: usize) -> T {
    let (c, s) = sigma(theta, omega - varphi);
    let (st, ct) = theta.sin_cos();
    let (u, du) = if d <= 1 << 14 || s < T::lit(1e-6) {
        chebyshev_u_with_derivative(c, d)
    } else {
        let u = chebyshev_u(c, s, d);
        let ds = T::from_usize_lossy(d) * s.atan2(c);
        (u, -(T::from_usize_lossy(d) * ds.cos() - c * u) / (s * s))
    };
    let two = T::lit(2.0);
    two * st * ct * u * u - two * st * st * st * (omega - varphi).cos() * u * du
}

/// Depth ladder `1, 2, 4, …, max_depth`.
pub fn depth_ladder(max_depth: usize) -> Result<Vec<usize>> {
    if max_depth == 0 || !max_depth.is_power_of_two() {
        return Err(QspeError::InvalidArgument(format!("max depth {max_depth} is not a power of two")));
    }
    Ok((0..=max_depth.trailing_zeros()).map(|j| 1usize << j).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCalibReport<T> {
    pub fisher_theta: T,
    pub crlb_theta: T,
    pub depths: Vec<usize>,
    pub phase_offset: T,
    /// Exact per-depth information `J_θ(d_j)`.
    pub per_depth: Vec<T>,
    /// Small-θ envelope `4M(1+φ²)/(d⁻²+φ²)` per depth.
    pub approx_per_depth: Vec<T>,
    /// `2M(1+φ²)/φ² · log₂((1+(dφ)²)/(1+φ²))`; absent at zero offset.
    pub approx_total: Option<T>,
    /// `4M(4d²−1)/3`.
    pub phase_matched_total: T,
}

fn rung_information<T: Real>(theta: T, varphi: T, omega: T, d: usize, m: T) -> Option<T> {
    let p = pc_probability(theta, varphi, omega, d);
    let lo = T::lit(DEGENERATE);
    if p < lo || p > T::one() - lo {
        return None;
    }
    let g = pc_probability_dtheta(theta, varphi, omega, d);
    Some(m * g * g / (p * (T::one() - p)))
}

/// θ-information of the ladder experiment, with the analytic approximations
/// attached for comparison.
pub fn pc_fisher_info<T: Real>(theta: T, varphi: T, omega: T, max_depth: usize, shots: u64) -> Result<PeriodicCalibReport<T>> {
    let depths = depth_ladder(max_depth)?;
    let m = T::lit(shots as f64);
    let mut per_depth = Vec::with_capacity(depths.len());
    for &d in &depths {
        let j = match rung_information(theta, varphi, omega, d, m) {
            Some(v) => v,
            None => rung_information(theta + T::lit(THETA_NUDGE), varphi, omega, d, m).ok_or_else(|| {
                QspeError::DegenerateProbability { value: pc_probability(theta, varphi, omega, d).as_f64() }
            })?,
        };
        per_depth.push(j);
    }
    let fisher_theta = compensated_sum(per_depth.iter().copied());
    let off = omega - varphi;
    let o2 = off * off;
    let four_m = T::lit(4.0) * m;
    let approx_per_depth = depths
        .iter()
        .map(|&d| {
            let df = T::from_usize_lossy(d);
            four_m * (T::one() + o2) / (T::one() / (df * df) + o2)
        })
        .collect();
    let dmax = T::from_usize_lossy(max_depth);
    let approx_total = (o2 > T::zero())
        .then(|| T::lit(2.0) * m * (T::one() + o2) / o2 * ((T::one() + dmax * dmax * o2) / (T::one() + o2)).log2());
    Ok(PeriodicCalibReport {
        fisher_theta,
        crlb_theta: T::one() / fisher_theta,
        depths,
        phase_offset: off,
        per_depth,
        approx_per_depth,
        approx_total,
        phase_matched_total: four_m * (T::lit(4.0) * dmax * dmax - T::one()) / T::lit(3.0),
    })
}

/// Landscape `ℒ(θ) = Σ_j (P_pc(θ, φ, 0, 2^j) − P̂_{2^j})²` over trial angles.
/// With `shots = None` the targets are exact; otherwise each rung is a
/// binomial sample seeded from `seed`.
pub fn pc_loss_landscape<T: Real>(
    theta_grid: &[T],
    true_theta: T,
    varphi: T,
    max_depth: usize,
    shots: Option<u64>,
    seed: u64,
) -> Result<Vec<T>> {
    if theta_grid.is_empty() {
        return Err(QspeError::InvalidArgument("empty theta grid".into()));
    }
    let depths = depth_ladder(max_depth)?;
    let mut targets = Vec::with_capacity(depths.len());
    for (j, &d) in depths.iter().enumerate() {
        let p = pc_probability(true_theta, varphi, T::zero(), d);
        let v = match shots {
            None => p,
            Some(m) => {
                let pf = p.as_f64().clamp(0.0, 1.0);
                let b = Binomial::new(m, pf).map_err(|e| QspeError::InvalidArgument(e.to_string()))?;
                T::lit(b.sample(&mut rng_from(mix(seed, j as u64, 0))) as f64 / m as f64)
            }
        };
        targets.push(v);
    }
    Ok(theta_grid
        .iter()
        .map(|&t| {
            compensated_sum(depths.iter().zip(&targets).map(|(&d, &y)| {
                let r = pc_probability(t, varphi, T::zero(), d) - y;
                r * r
            }))
        })
        .collect())
}

/// Indices of grid points strictly below both neighbours.
pub fn local_minima<T: Real>(values: &[T]) -> Vec<usize> {
    (1..values.len().saturating_sub(1)).filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_matched_probability() {
        let (t, d) = (0.013f64, 37);
        assert!((pc_probability(t, 0.2, 0.2, d) - (d as f64 * t).sin().powi(2)).abs() < 1e-14);
        assert_eq!(pc_probability(0.0f64, 0.1, 0.5, 8), 0.0);
    }

    #[test]
    fn derivative_against_difference() {
        let (t, phi, d) = (0.2f64, 0.05, 16);
        let h = 1e-6;
        let fd = (pc_probability(t + h, phi, 0.0, d) - pc_probability(t - h, phi, 0.0, d)) / (2.0 * h);
        assert!((pc_probability_dtheta(t, phi, 0.0, d) - fd).abs() < 1e-7);
    }

    #[test]
    fn ladder_requires_power_of_two() {
        assert_eq!(depth_ladder(8).unwrap(), vec![1, 2, 4, 8]);
        assert!(depth_ladder(12).is_err());
    }

    #[test]
    fn exact_landscape_vanishes_at_truth() {
        let l = pc_loss_landscape(&[0.4f64, 0.5], 0.5, 0.0, 16, None, 1).unwrap();
        assert!(l[1] < 1e-28 && l[0] > 0.0);
    }
}
