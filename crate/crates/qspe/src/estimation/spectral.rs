//! Fourier-space QSPE estimators: θ from coefficient magnitudes, φ from the
//! Laplacian-weighted sequential phase differences.

use crate::error::{QspeError, Result};
use crate::linalg::laplacian_weights;
use crate::scalar::{wrap_half_pi, wrap_pi, Complex, Real};
use crate::signal::FourierSpectrum;

/// Which estimator produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Qspe,
    QspeDepol,
    PeakDiff,
    PeakFit,
    GeneralInterval,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Qspe => "qspe",
            Method::QspeDepol => "qspe_depol",
            Method::PeakDiff => "peak_diff",
            Method::PeakFit => "peak_fit",
            Method::GeneralInterval => "general_interval",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport<T> {
    pub theta_hat: T,
    /// For the peak-based refinements this is the prior φ̂ they were run at.
    pub varphi_hat: T,
    pub alpha_hat: Option<T>,
    pub predicted_var_theta: T,
    pub predicted_var_varphi: T,
    /// Deterministic bias bound, where the method has one (peak differentiation).
    pub bias_bound: Option<T>,
    pub method: Method,
}

/// Sequential phase differences `Δ_k = phase(c_k conj(c_{k+1}))`, each in (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDifferenceVector<T> {
    pub deltas: Vec<T>,
}

impl<T: Real> PhaseDifferenceVector<T> {
    pub fn from_coefficients(c: &[Complex<T>]) -> Self {
        let deltas = c.windows(2).map(|w| wrap_pi((w[0] * w[1].conj()).arg())).collect();
        Self { deltas }
    }

    /// Laplacian-weighted average `(𝟙ᵀ𝔇⁻¹Δ)/(𝟙ᵀ𝔇⁻¹𝟙)`.
    ///
    /// The average is taken on the circle: deviations are wrapped around a
    /// reference direction first, so a true 2φ near ±π does not get split
    /// across the branch cut.
    pub fn weighted_mean(&self) -> T {
        let n = self.deltas.len();
        let mu = laplacian_weights::<T>(n);
        let reference = self
            .deltas
            .iter()
            .zip(&mu)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&d, &w)| acc + Complex::from_polar(w, d))
            .arg();
        let dev = self.deltas.iter().zip(&mu).fold(T::zero(), |acc, (&d, &w)| acc + w * wrap_pi(d - reference));
        reference + dev
    }

    /// Sliding-window average of the differences (window clipped at the ends).
    pub fn moving_average(&self, window: usize) -> Self {
        let n = self.deltas.len();
        if window <= 1 || n == 0 {
            return self.clone();
        }
        let half = window / 2;
        let deltas = (0..n)
            .map(|i| {
                let (lo, hi) = (i.saturating_sub(half), (i + half).min(n - 1));
                let center = self.deltas[i];
                let s = (lo..=hi).fold(T::zero(), |a, j| a + wrap_pi(self.deltas[j] - center));
                wrap_pi(center + s / T::from_usize_lossy(hi - lo + 1))
            })
            .collect();
        Self { deltas }
    }
}

/// Options of [`qspe_estimate_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QspeOptions {
    /// Optional moving-average window over the phase differences. Off by default.
    pub moving_average: Option<usize>,
    /// Drop c_0 and use only k = 1..d−1. A constant offset in p_X, p_Y (for
    /// example from state-preparation error) lands entirely in c_0.
    pub skip_zero_mode: bool,
}

/// `Var θ̂ = 1/(4Md(2d−1))`, `Var φ̂ = 3/(4Md(2d−1)(d²−1)θ²)`.
pub fn predicted_variances<T: Real>(d: usize, shots: u64, theta: T) -> (T, T) {
    variances_for_modes(d, d, shots, theta)
}

/// Same formulas when the estimators average `n` of the d nonnegative modes.
fn variances_for_modes<T: Real>(d: usize, n: usize, shots: u64, theta: T) -> (T, T) {
    let (df, nf, m) = (T::from_usize_lossy(d), T::from_usize_lossy(n), T::lit(shots as f64));
    let base = T::lit(4.0) * m * nf * (df + df - T::one());
    (T::one() / base, T::lit(3.0) / (base * (nf * nf - T::one()) * theta * theta))
}

pub(crate) const NO_SIGNAL_THRESHOLD: f64 = 1e-15;

/// Plain QSPE estimators applied to a measured (or exact) spectrum.
pub fn qspe_estimate<T: Real>(spectrum: &FourierSpectrum<T>, shots: u64) -> Result<EstimateReport<T>> {
    qspe_estimate_with(spectrum, shots, &QspeOptions::default())
}

pub fn qspe_estimate_with<T: Real>(
    spectrum: &FourierSpectrum<T>,
    shots: u64,
    options: &QspeOptions,
) -> Result<EstimateReport<T>> {
    let d = spectrum.d;
    let first = usize::from(options.skip_zero_mode);
    if d < 2 + first {
        return Err(QspeError::InvalidArgument(format!("QSPE needs d >= {}, got {d}", 2 + first)));
    }
    let c = &spectrum.nonnegative()[first..];
    if c.iter().all(|v| v.norm() < T::lit(NO_SIGNAL_THRESHOLD)) {
        return Err(QspeError::NoSignal { threshold: NO_SIGNAL_THRESHOLD });
    }
    let theta_hat = c.iter().fold(T::zero(), |a, v| a + v.norm()) / T::from_usize_lossy(c.len());
    let mut deltas = PhaseDifferenceVector::from_coefficients(c);
    if let Some(w) = options.moving_average {
        deltas = deltas.moving_average(w);
    }
    let varphi_hat = wrap_half_pi(deltas.weighted_mean() / T::lit(2.0));
    let (vt, vp) = variances_for_modes(d, c.len(), shots, theta_hat);
    Ok(EstimateReport {
        theta_hat,
        varphi_hat,
        alpha_hat: None,
        predicted_var_theta: vt,
        predicted_var_varphi: vp,
        bias_bound: None,
        method: Method::Qspe,
    })
}
