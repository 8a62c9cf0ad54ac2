//! Circuit-fidelity corrected estimator for globally depolarized data.
//!
//! Depolarizing shifts only the constant Fourier term: `h_α = αh − (1−α)(1+i)/4`.
//! The gap between |c_0| and the remaining magnitudes therefore measures α.
//! The estimator assumes |α c_0 + offset| ≈ α|c_0| + |offset|, which is exact
//! only when c_0 and the offset are collinear; otherwise it carries a bias of
//! up to 4√2·αθ (see `fidelity_bias_for_phases`).

use crate::error::{QspeError, Result};
use crate::estimation::spectral::{predicted_variances, EstimateReport, Method, PhaseDifferenceVector, NO_SIGNAL_THRESHOLD};
use crate::scalar::{wrap_half_pi, Real};
use crate::signal::FourierSpectrum;

const MIN_FIDELITY: f64 = 0.05;

/// `α̂ = 1 − 2√2(|c_0| − mean_{k≥1}|c_k|)`, `θ̂ = mean_{k≥1}|c_k| / α̂`.
///
/// φ̂ uses only the differences between k ≥ 1 coefficients since c_0 carries
/// the depolarizing offset.
pub fn estimate_fidelity_and_theta<T: Real>(spectrum: &FourierSpectrum<T>, shots: u64) -> Result<EstimateReport<T>> {
    let d = spectrum.d;
    if d < 3 {
        return Err(QspeError::InvalidArgument(format!("fidelity estimation needs d >= 3, got {d}")));
    }
    let c = spectrum.nonnegative();
    let rest = &c[1..];
    if rest.iter().all(|v| v.norm() < T::lit(NO_SIGNAL_THRESHOLD)) {
        return Err(QspeError::NoSignal { threshold: NO_SIGNAL_THRESHOLD });
    }
    let mean_rest = rest.iter().fold(T::zero(), |a, v| a + v.norm()) / T::from_usize_lossy(d - 1);
    let raw = T::one() - T::lit(2.0) * T::SQRT_2() * (c[0].norm() - mean_rest);
    if raw <= T::lit(MIN_FIDELITY) {
        return Err(QspeError::FidelityTooLow { alpha_hat: raw.as_f64() });
    }
    let alpha_hat = raw.min(T::one());
    let theta_hat = mean_rest / alpha_hat;
    let varphi_hat = wrap_half_pi(PhaseDifferenceVector::from_coefficients(rest).weighted_mean() / T::lit(2.0));
    let (vt, vp) = depolarized_variances(d, shots, theta_hat, alpha_hat);
    Ok(EstimateReport {
        theta_hat,
        varphi_hat,
        alpha_hat: Some(alpha_hat),
        predicted_var_theta: vt,
        predicted_var_varphi: vp,
        bias_bound: None,
        method: Method::QspeDepol,
    })
}

/// Shot-noise variances when only `c_1 … c_{d−1}` carry the signal, rescaled
/// by the fidelity. Leading order only.
fn depolarized_variances<T: Real>(d: usize, shots: u64, theta: T, alpha: T) -> (T, T) {
    let (df, m) = (T::from_usize_lossy(d), T::lit(shots as f64));
    let n = df - T::one();
    let a2 = alpha * alpha;
    let vt = T::one() / (T::lit(4.0) * m * n * (df + df - T::one()) * a2);
    let vp = if d > 3 { predicted_variances(d - 1, shots, theta).1 / a2 } else { T::infinity() };
    (vt, vp)
}

/// Leading-order bias `α̂ − α ≈ 2√2·αθ(1 − cos γ)`, with γ the angle between c_0
/// and the offset `−(1−α)(1+i)/4`. Diagnostic helper; γ = 0 when
/// `χ + φ ≡ 5π/4 (mod 2π)`.
pub fn fidelity_bias_for_phases<T: Real>(theta: T, varphi: T, chi: T, alpha: T) -> T {
    let c0_phase = T::FRAC_PI_2() - chi - varphi;
    let offset_phase = -T::lit(3.0) * T::FRAC_PI_4();
    let gamma = c0_phase - offset_phase;
    T::lit(2.0) * T::SQRT_2() * alpha * theta * (T::one() - gamma.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{exact_spectrum, GateParams};
    use std::f64::consts::PI;

    #[test]
    fn unit_fidelity_leaves_theta() {
        let p = GateParams::new(1e-3, PI / 16.0, 5.0 * PI / 32.0);
        let s = exact_spectrum(&p, 8);
        let r = estimate_fidelity_and_theta(&s, 1000).unwrap();
        // |c_0| − mean|c_k≥1| is O(θ(dθ)²), so α̂ is 1 to that order.
        assert!((r.alpha_hat.unwrap() - 1.0).abs() < 1e-6);
        assert!((r.theta_hat - 1e-3).abs() < 1e-7);
    }

    #[test]
    fn low_fidelity_is_rejected() {
        let mut s = exact_spectrum(&GateParams::new(1e-3, 0.1, 0.2), 5);
        s.coeffs[4] = s.coeffs[4] + num_complex::Complex::new(0.4, 0.0);
        assert!(matches!(estimate_fidelity_and_theta(&s, 1000), Err(QspeError::FidelityTooLow { .. })));
    }
}
