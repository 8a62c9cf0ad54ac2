//! Fourier side of the signal: grid transform, exact amplitudes A_k(θ) and
//! their small-angle approximation.

use rustfft::FftPlanner;

use crate::scalar::{cis, Complex, Real};
use crate::signal::gate::GateParams;
use crate::signal::polynomial::{reduced_signal, ExperimentGrid};

/// Coefficients `c_k`, `k = −d+1 … d−1`, of `h(ω) = Σ_k c_k e^{2ikω}`.
///
/// Stored in natural order: `coeffs[k + d − 1] = c_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum<T> {
    pub d: usize,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> FourierSpectrum<T> {
    /// `c = (1/(2d−1)) Ω† h` with `Ω_{jk} = e^{i2πjk/(2d−1)}`. Transform slot s
    /// holds k = s for s < d and k = s − (2d−1) otherwise.
    pub fn from_samples(h: &[Complex<T>]) -> Self {
        let n = h.len();
        assert!(n % 2 == 1, "the signal grid has an odd number (2d-1) of points");
        let d = n.div_ceil(2);
        let mut buf = h.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = T::one() / T::from_usize_lossy(n);
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n];
        for (slot, v) in buf.into_iter().enumerate() {
            let k = if slot < d { slot as isize } else { slot as isize - n as isize };
            coeffs[(k + d as isize - 1) as usize] = v * scale;
        }
        Self { d, coeffs }
    }

    /// Evaluates `h(ω_j)` back on the grid.
    pub fn to_samples(&self) -> Vec<Complex<T>> {
        let n = self.coeffs.len();
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        for k in self.indices() {
            let slot = if k >= 0 { k as usize } else { (k + n as isize) as usize };
            buf[slot] = self.coeff(k);
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        buf
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<isize> {
        let m = self.d as isize - 1;
        -m..=m
    }

    pub fn coeff(&self, k: isize) -> Complex<T> {
        self.coeffs[(k + self.d as isize - 1) as usize]
    }

    /// `c_0 … c_{d−1}`.
    pub fn nonnegative(&self) -> &[Complex<T>] {
        &self.coeffs[self.d - 1..]
    }

    /// `|c_k|` in natural order.
    pub fn magnitudes(&self) -> Vec<T> {
        self.coeffs.iter().map(|c| c.norm()).collect()
    }
}

/// Real amplitudes `A_k(θ) = c̃_k(θ)`, natural order `k = −d+1 … d−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpectrum<T> {
    pub d: usize,
    pub amplitudes: Vec<T>,
    /// Largest |imaginary part| discarded by the exact transform.
    pub imag_residue: T,
}

impl<T: Real> ThetaSpectrum<T> {
    pub fn amplitude(&self, k: isize) -> T {
        self.amplitudes[(k + self.d as isize - 1) as usize]
    }

    /// Applies the phase factors `c_k = i e^{−iχ} e^{−i(2k+1)φ} A_k`.
    pub fn with_phases(&self, varphi: T, chi: T) -> FourierSpectrum<T> {
        let m = self.d as isize - 1;
        let i = Complex::new(T::zero(), T::one());
        let coeffs = (-m..=m)
            .map(|k| {
                let odd = T::lit((2 * k + 1) as f64);
                i * cis(-chi - odd * varphi) * self.amplitude(k)
            })
            .collect();
        FourierSpectrum { d: self.d, coeffs }
    }
}

/// Exact `A_k(θ)` from `h̃` sampled on the grid. The sampled function is a
/// trigonometric polynomial in `e^{2iω}` with exactly 2d−1 terms, so the
/// grid transform has no aliasing.
pub fn exact_fourier_coefficients<T: Real>(theta: T, d: usize) -> ThetaSpectrum<T> {
    let grid = ExperimentGrid::<T>::new(d);
    let h: Vec<_> = grid.omegas.iter().map(|&w| reduced_signal(w, theta, d)).collect();
    let spec = FourierSpectrum::from_samples(&h);
    let imag_residue = spec.coeffs.iter().fold(T::zero(), |m, c| m.max(c.im.abs()));
    let amplitudes = spec.coeffs.iter().map(|c| c.re).collect();
    ThetaSpectrum { d, amplitudes, imag_residue }
}

/// Exact coefficients `c_k(θ, φ, χ)`.
pub fn exact_spectrum<T: Real>(p: &GateParams<T>, d: usize) -> FourierSpectrum<T> {
    exact_fourier_coefficients(p.theta, d).with_phases(p.varphi, p.chi)
}

/// `ĉ*_k(θ)` without the `sin θ` factor.
pub fn approx_coefficient_unscaled<T: Real>(theta: T, d: usize, k: isize) -> T {
    let half = T::lit(0.5);
    // 1 − cos θ without cancellation
    let s = (theta * half).sin();
    let one_minus_cos = s * s * T::lit(2.0);
    let d = d as isize;
    let sq = |v: isize| T::lit((v * v) as f64);
    if k >= 0 {
        let q = T::lit(3.0) * sq(d) - sq(k) - sq(k + 1) - sq(d - (2 * k + 1));
        T::one() - half * q * one_minus_cos
    } else {
        let q = sq(d) + sq(d + 2 * k + 1) - sq(k) - sq(k + 1);
        -half * q * one_minus_cos
    }
}

/// Small-angle approximation `sin θ · ĉ*_k(θ)`; within `2(dθ)^5` of `A_k(θ)`.
pub fn approx_fourier_coefficients<T: Real>(theta: T, d: usize) -> ThetaSpectrum<T> {
    let m = d as isize - 1;
    let s = theta.sin();
    let amplitudes = (-m..=m).map(|k| s * approx_coefficient_unscaled(theta, d, k)).collect();
    ThetaSpectrum { d, amplitudes, imag_residue: T::zero() }
}
