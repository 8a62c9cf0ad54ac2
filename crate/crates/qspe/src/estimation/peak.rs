//! Refinements of θ̂ that sit at the phase-matching peak ω = φ̂_pri.

use crate::error::{QspeError, Result};
use crate::estimation::spectral::{EstimateReport, Method};
use crate::linalg::{laplacian_weights, Matrix};
use crate::scalar::Real;
use crate::signal::SignalSample;

/// A signal sample taken at a given circuit depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthSample<T> {
    pub depth: usize,
    pub sample: SignalSample<T>,
}

/// Depths `d, d+2, …, 3d` used by peak differentiation.
pub fn peak_diff_depths(d: usize) -> Vec<usize> {
    (0..=d).map(|j| d + 2 * j).collect()
}

/// Peak differentiation: `Γ_j = |h_{d+2j+2}| − |h_{d+2j}|`, j = 0..d−1, and
/// `θ̂_pd = ½(𝟙ᵀ𝔇⁻¹Γ)/(𝟙ᵀ𝔇⁻¹𝟙)` with a d×d Laplacian.
///
/// `var_prior` is the variance of φ̂_pri and only enters the bias bound.
pub fn peak_diff_estimate<T: Real>(
    d: usize,
    samples: &[DepthSample<T>],
    phi_prior: T,
    var_prior: T,
    shots: u64,
) -> Result<EstimateReport<T>> {
    if d < 2 {
        return Err(QspeError::InvalidArgument(format!("peak differentiation needs d >= 2, got {d}")));
    }
    let mut mags = Vec::with_capacity(d + 1);
    for depth in peak_diff_depths(d) {
        let s = samples.iter().find(|s| s.depth == depth).ok_or(QspeError::MissingDepth { depth })?;
        if (s.sample.omega - phi_prior).abs() > T::lit(1e-12) {
            return Err(QspeError::InvalidArgument(format!("depth {depth} was not measured at omega = phi_prior")));
        }
        mags.push(s.sample.h.norm());
    }
    let gamma: Vec<T> = mags.windows(2).map(|w| w[1] - w[0]).collect();
    let mu = laplacian_weights::<T>(d);
    let theta_hat = gamma.iter().zip(&mu).fold(T::zero(), |a, (&g, &w)| a + g * w) / T::lit(2.0);
    let (df, m) = (T::from_usize_lossy(d), T::lit(shots as f64));
    let var = T::lit(3.0) / (T::lit(4.0) * m * df * (df + T::one()) * (df + T::lit(2.0)));
    let dt = df * theta_hat.abs();
    let bias = T::lit(6.5) * df * df * theta_hat.abs() * var_prior + T::lit(37.0) * dt * dt * dt;
    Ok(EstimateReport {
        theta_hat,
        varphi_hat: phi_prior,
        alpha_hat: None,
        predicted_var_theta: var,
        predicted_var_varphi: var_prior,
        bias_bound: Some(bias),
        method: Method::PeakDiff,
    })
}

/// Peak-fit ω points `φ̂_pri + (π/d)(j/(n−1) − ½)`, j = 0..n−1.
pub fn peak_fit_grid<T: Real>(phi_prior: T, d: usize, n: usize) -> Vec<T> {
    assert!(n >= 2);
    let width = T::PI() / T::from_usize_lossy(d);
    let last = T::from_usize_lossy(n - 1);
    (0..n).map(|j| phi_prior + width * (T::from_usize_lossy(j) / last - T::lit(0.5))).collect()
}

/// Result of the parabola fit `𝔭 = β_0(ω − β_1)² + β_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakFit<T> {
    pub beta0: T,
    pub beta1: T,
    pub beta2: T,
    pub accepted: bool,
    /// `β_2/d` when accepted.
    pub theta_hat: Option<T>,
}

/// Least-squares parabola through `|h|` near the peak; accepted iff concave
/// and centred within `threshold` of φ̂_pri.
pub fn peak_fit<T: Real>(samples: &[SignalSample<T>], d: usize, phi_prior: T, threshold: T) -> Result<PeakFit<T>> {
    let mut distinct: Vec<T> = samples.iter().map(|s| s.omega).collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite omega"));
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(QspeError::InvalidArgument("peak fit needs at least 3 distinct omega values".into()));
    }
    // Fit in the scaled coordinate v = (ω − φ̂_pri)·d/π for conditioning.
    let scale = T::from_usize_lossy(d) / T::PI();
    let mut ata = Matrix::zeros(3);
    let mut atb = [T::zero(); 3];
    for s in samples {
        let v = (s.omega - phi_prior) * scale;
        let row = [T::one(), v, v * v];
        let y = s.h.norm();
        for i in 0..3 {
            atb[i] = atb[i] + row[i] * y;
            for j in 0..3 {
                ata.set(i, j, ata.get(i, j) + row[i] * row[j]);
            }
        }
    }
    let coef = ata.lu()?.solve(&atb);
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    let beta0 = c * scale * scale;
    let (beta1, beta2) = if c != T::zero() {
        (phi_prior - b / (c + c) / scale, a - b * b / (T::lit(4.0) * c))
    } else {
        (T::infinity(), a)
    };
    let accepted = beta0 < T::zero() && (beta1 - phi_prior).abs() < threshold;
    let theta_hat = accepted.then(|| beta2 / T::from_usize_lossy(d));
    Ok(PeakFit { beta0, beta1, beta2, accepted, theta_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn parabola_samples(phi: f64, d: usize, peak: f64, curv: f64) -> Vec<SignalSample<f64>> {
        peak_fit_grid(phi, d, 15)
            .into_iter()
            .map(|w| {
                let y = peak + curv * (w - phi - 0.001).powi(2);
                SignalSample { omega: w, h: Complex::new(y, 0.0), p_x: 0.5 + y, p_y: 0.5 }
            })
            .collect()
    }

    #[test]
    fn exact_parabola_is_recovered() {
        let f = peak_fit(&parabola_samples(0.2, 10, 0.05, -0.5), 10, 0.2, 0.01).unwrap();
        assert!(f.accepted);
        assert!((f.beta1 - 0.201).abs() < 1e-12);
        assert!((f.theta_hat.unwrap() - 0.005).abs() < 1e-14);
    }

    #[test]
    fn convex_fit_is_rejected() {
        let f = peak_fit(&parabola_samples(0.2, 10, 0.01, 0.5), 10, 0.2, 1.0).unwrap();
        assert!(!f.accepted && f.theta_hat.is_none());
    }

    #[test]
    fn degenerate_design_errors() {
        let s = SignalSample::from_probabilities(0.1, 0.5, 0.5);
        assert!(peak_fit(&[s, s, s], 4, 0.1, 1.0).is_err());
    }

    #[test]
    fn missing_depth_is_reported() {
        let s = DepthSample { depth: 3, sample: SignalSample::from_probabilities(0.0, 0.5, 0.5) };
        assert_eq!(peak_diff_estimate(3, &[s], 0.0, 0.0, 10).unwrap_err(), QspeError::MissingDepth { depth: 5 });
    }
}
