//! Closed-form QSP polynomials and the noiseless measurement model.

use crate::scalar::{cis, Complex, Real};
use crate::signal::gate::{GateParams, SubspaceUnitary};

/// Below this |sin σ| the ratio sin(dσ)/sin σ is evaluated by recurrence.
const SIN_SIGMA_CUTOFF: f64 = 1e-6;

/// Chebyshev values `(T_d(c), U_{d−1}(c))` by the three-term recurrence.
/// Division-free, so safe at c = ±1.
pub fn chebyshev_pair<T: Real>(c: T, d: usize) -> (T, T) {
    // u_prev = U_{n-1}, u = U_n, starting at n = 0 with U_{-1} = 0.
    let two_c = c + c;
    let (mut u_prev, mut u) = (T::zero(), T::one());
    for _ in 1..d {
        let next = two_c * u - u_prev;
        u_prev = u;
        u = next;
    }
    // T_d = c·U_{d−1} − U_{d−2}
    (c * u - u_prev, u)
}

/// `(−1)^n` as a scalar.
fn parity<T: Real>(n: usize) -> T {
    if n % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Second-kind Chebyshev value `U_{d−1}(cos σ)` given `cos σ` and `sin σ ≥ 0`.
pub fn chebyshev_u<T: Real>(cos_sigma: T, sin_sigma: T, d: usize) -> T {
    if d == 0 {
        return T::zero();
    }
    if sin_sigma.abs() < T::lit(SIN_SIGMA_CUTOFF) {
        return chebyshev_pair(cos_sigma, d).1;
    }
    // Reflect σ into [0, π/2] with U_{d−1}(−y) = (−1)^{d−1} U_{d−1}(y); near
    // σ = π the angle itself would otherwise lose relative accuracy.
    let sign = if cos_sigma < T::zero() { parity::<T>(d - 1) } else { T::one() };
    let sigma = sin_sigma.atan2(cos_sigma.abs());
    sign * (T::from_usize_lossy(d) * sigma).sin() / sin_sigma
}

/// `(cos(dσ), sin(dσ)/sin σ)` for `cos σ = cos ω · cos θ`.
///
/// `sin σ` is formed as `sqrt(sin²ω + cos²ω·sin²θ)` rather than from
/// `1 − cos²σ`, which keeps full relative accuracy near phase matching.
fn sigma_terms<T: Real>(omega: T, cos_t: T, sin_t: T, d: usize) -> (T, T) {
    let (so, co) = omega.sin_cos();
    let c = (co * cos_t).max(-T::one()).min(T::one());
    let s = (so * so + co * co * sin_t * sin_t).sqrt();
    if s < T::lit(SIN_SIGMA_CUTOFF) {
        return chebyshev_pair(c, d);
    }
    // Same reflection as in `chebyshev_u`, with T_d(−y) = (−1)^d T_d(y).
    let (st, su) = if c < T::zero() { (parity::<T>(d), parity::<T>(d - 1)) } else { (T::one(), T::one()) };
    let ds = T::from_usize_lossy(d) * s.atan2(c.abs());
    (st * ds.cos(), su * ds.sin() / s)
}

fn pq_inner<T: Real>(omega: T, cos_t: T, sin_t: T, d: usize) -> (Complex<T>, T) {
    let (cos_ds, q) = sigma_terms(omega, cos_t, sin_t, d);
    let p = cis(omega) * Complex::new(cos_ds, q * omega.sin() * cos_t);
    (p, q)
}

/// Closed-form `(P_ω(x), Q_ω(x))` of the depth-d building block,
/// `P = e^{iω}(cos dσ + i (sin dσ / sin σ) sin ω · x)`, `Q = sin dσ / sin σ`,
/// `cos σ = x cos ω`.
pub fn pq_closed_form<T: Real>(omega: T, x: T, d: usize) -> (Complex<T>, T) {
    assert!(d >= 1, "depth must be positive");
    let x = x.max(-T::one()).min(T::one());
    pq_inner(omega, x, (T::one() - x * x).max(T::zero()).sqrt(), d)
}

/// Same as [`pq_closed_form`] with `x = cos θ`, using `sin θ` directly.
pub fn pq_from_theta<T: Real>(omega: T, theta: T, d: usize) -> (Complex<T>, T) {
    assert!(d >= 1, "depth must be positive");
    let (s, c) = theta.sin_cos();
    pq_inner(omega, c, s, d)
}

/// Building block `[[P, i sinθ Q], [i sinθ Q, P*]]` from the closed form.
pub fn building_block_closed_form<T: Real>(omega: T, theta: T, d: usize) -> SubspaceUnitary<T> {
    let (p, q) = pq_from_theta(omega, theta, d);
    let off = Complex::new(T::zero(), theta.sin() * q);
    SubspaceUnitary::new(p, off, off, p.conj())
}

/// Full QSPE circuit unitary assembled from the closed form,
/// `e^{−idψ} e^{i((χ+π+φ)/2)Z} U^(d)(ω−φ, θ) e^{−i(ω+(χ+π−φ)/2)Z}`.
pub fn circuit_unitary_closed_form<T: Real>(p: &GateParams<T>, omega: T, d: usize) -> SubspaceUnitary<T> {
    let two = T::lit(2.0);
    let left = SubspaceUnitary::rz((p.chi + T::PI() + p.varphi) / two);
    let right = SubspaceUnitary::rz(-(omega + (p.chi + T::PI() - p.varphi) / two));
    let block = building_block_closed_form(omega - p.varphi, p.theta, d);
    (left * block * right).scale(cis(-T::from_usize_lossy(d) * p.psi))
}

/// Reconstructed signal `h(ω) = p_X − 1/2 + i(p_Y − 1/2)` of the noiseless model,
/// `e^{i(φ−χ−2ω)} P_{ω−φ}(cos θ) · i sin θ · Q_{ω−φ}(cos θ)`.
pub fn signal<T: Real>(p: &GateParams<T>, omega: T, d: usize) -> Complex<T> {
    let (pp, q) = pq_from_theta(omega - p.varphi, p.theta, d);
    let phase = cis(p.varphi - p.chi - (omega + omega));
    phase * pp * Complex::new(T::zero(), p.theta.sin() * q)
}

/// θ-only signal `h̃(ω, θ) = sin θ e^{−2iω} P_ω Q_ω`; π-periodic in ω.
pub fn reduced_signal<T: Real>(omega: T, theta: T, d: usize) -> Complex<T> {
    let (pp, q) = pq_from_theta(omega, theta, d);
    cis(-(omega + omega)) * pp * (theta.sin() * q)
}

/// Noiseless `(p_X, p_Y)` for the Bell inputs |+⟩ and |i⟩ (logical basis).
pub fn transition_probs<T: Real>(p: &GateParams<T>, omega: T, d: usize) -> (T, T) {
    let h = signal(p, omega, d);
    let half = T::lit(0.5);
    (half + h.re, half + h.im)
}

/// `𝔭(ω, θ) = |h|² = sin²θ Q² (1 − sin²θ Q²)`.
pub fn signal_power<T: Real>(omega: T, theta: T, d: usize) -> T {
    let (_, q) = pq_from_theta(omega, theta, d);
    let s = theta.sin() * q;
    let s2 = s * s;
    s2 * (T::one() - s2)
}

/// One measured (or modelled) point of the reconstructed signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSample<T> {
    pub omega: T,
    pub h: Complex<T>,
    pub p_x: T,
    pub p_y: T,
}

impl<T: Real> SignalSample<T> {
    pub fn from_probabilities(omega: T, p_x: T, p_y: T) -> Self {
        let half = T::lit(0.5);
        Self { omega, h: Complex::new(p_x - half, p_y - half), p_x, p_y }
    }
}

/// The 2d−1 point ω grid `ω_j = jπ/(2d−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid<T> {
    pub d: usize,
    pub omegas: Vec<T>,
}

impl<T: Real> ExperimentGrid<T> {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "depth must be positive");
        let n = 2 * d - 1;
        let step = T::PI() / T::from_usize_lossy(n);
        let omegas = (0..n).map(|j| T::from_usize_lossy(j) * step).collect();
        Self { d, omegas }
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Noiseless signal over the grid.
    pub fn signal(&self, p: &GateParams<T>) -> Vec<Complex<T>> {
        self.omegas.iter().map(|&w| signal(p, w, self.d)).collect()
    }

    pub fn samples(&self, p: &GateParams<T>) -> Vec<SignalSample<T>> {
        self.omegas
            .iter()
            .map(|&w| {
                let (px, py) = transition_probs(p, w, self.d);
                SignalSample::from_probabilities(w, px, py)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::gate::{building_block, circuit_unitary};
    use std::f64::consts::PI;

    #[test]
    fn depth_one_reduces() {
        let (w, x) = (0.41f64, 0.77);
        let (p, q) = pq_closed_form(w, x, 1);
        assert!((p - cis(2.0 * w) * x).norm() < 1e-15);
        assert!((q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_matched_identity_limit() {
        let (p, q) = pq_closed_form(0.0f64, 1.0, 7);
        assert!((q - 7.0).abs() < 1e-14);
        assert!((p - Complex::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn chebyshev_matches_trig() {
        let s: f64 = 0.3;
        for d in 1..20 {
            let (t, u) = chebyshev_pair(s.cos(), d);
            assert!((t - (d as f64 * s).cos()).abs() < 1e-12);
            assert!((u - (d as f64 * s).sin() / s.sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn block_matches_product_small_case() {
        let b = building_block(0.3, 0.2, 4);
        let c = building_block_closed_form(0.3, 0.2, 4);
        assert!(b.max_abs_diff(&c) < 1e-13);
    }

    #[test]
    fn circuit_matches_product_with_psi() {
        let p = GateParams::new(0.2, 0.5, -1.0).with_psi(0.3);
        let a = circuit_unitary(&p, 0.9, 6);
        let b = circuit_unitary_closed_form(&p, 0.9, 6);
        assert!(a.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn probabilities_match_bell_oracle() {
        let p = GateParams::new(1e-3, PI / 16.0, 5.0 * PI / 32.0);
        let grid = ExperimentGrid::new(5);
        for &w in &grid.omegas {
            let u = circuit_unitary(&p, w, 5);
            let (px, py) = transition_probs(&p, w, 5);
            assert!((px - u.bell_probability(Complex::new(1.0, 0.0))).abs() < 1e-12);
            assert!((py - u.bell_probability(Complex::new(0.0, 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_swap_gives_half() {
        let (px, py) = transition_probs(&GateParams::new(0.0, 0.3, 0.2), 0.5, 4);
        assert_eq!((px, py), (0.5, 0.5));
    }

    #[test]
    fn grid_shape() {
        let g = ExperimentGrid::<f64>::new(4);
        assert_eq!(g.len(), 7);
        assert_eq!(g.omegas[0], 0.0);
        assert!(g.omegas.windows(2).all(|w| w[1] > w[0]));
        assert!(*g.omegas.last().unwrap() < PI);
    }
}
