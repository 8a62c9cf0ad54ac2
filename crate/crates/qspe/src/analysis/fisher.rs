//! Classical Fisher information of the QSPE experiment over (θ, φ, χ).

use crate::error::{QspeError, Result};
use crate::linalg::{condition_number, Matrix};
use crate::scalar::{compensated_sum, Complex, Real};
use crate::signal::{signal, ExperimentGrid, GateParams};

const MAX_CONDITION: f64 = 1e12;
const DEGENERATE: f64 = 1e-12;
/// Base finite-difference step.
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// dθ ≤ 0.1
    PreAsymptotic,
    Transition,
    /// dθ ≥ 10
    Asymptotic,
}

impl Regime {
    pub fn classify<T: Real>(theta: T, d: usize) -> Self {
        let x = T::from_usize_lossy(d) * theta.abs();
        if x <= T::lit(0.1) {
            Regime::PreAsymptotic
        } else if x >= T::lit(10.0) {
            Regime::Asymptotic
        } else {
            Regime::Transition
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Regime::PreAsymptotic => "pre_asymptotic",
            Regime::Transition => "transition",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FisherReport<T> {
    /// Ordering (θ, φ, χ).
    pub matrix: [[T; 3]; 3],
    /// Diagonal of the inverse.
    pub crlb: [T; 3],
    pub regime: Regime,
    /// One-norm condition number of the diagonally equilibrated matrix.
    pub condition: T,
}

/// Finite-difference scheme for the signal derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeScheme {
    /// Central differences at h and h/2 combined by one Richardson step.
    CentralRichardson,
    /// Five-point fourth-order stencil at 2h/5 (a different set of nodes, used
    /// to cross-check the main scheme).
    FivePointStencil,
}

/// Step actually used at depth d: `h = 1e−5` up to d = 100; beyond that shrunk
/// as 100/d so that d·h stays ≤ 1e−3 (the signal oscillates ~d times per radian).
pub fn fd_step<T: Real>(d: usize) -> T {
    let scale = if d > 100 { 100.0 / d as f64 } else { 1.0 };
    T::lit(FD_STEP * scale)
}

fn shifted<T: Real>(p: &GateParams<T>, k: usize, delta: T) -> GateParams<T> {
    let mut q = *p;
    match k {
        0 => q.theta = q.theta + delta,
        1 => q.varphi = q.varphi + delta,
        _ => q.chi = q.chi + delta,
    }
    q
}

/// `∂h/∂ξ_k` at one ω. `h` carries both probabilities: p_X − ½ = Re h,
/// p_Y − ½ = Im h, so differencing h avoids the ½ offset.
pub fn signal_derivative<T: Real>(
    p: &GateParams<T>,
    omega: T,
    d: usize,
    k: usize,
    scheme: DerivativeScheme,
) -> Complex<T> {
    let f = |delta: T| signal(&shifted(p, k, delta), omega, d);
    let h = fd_step::<T>(d);
    let two = T::lit(2.0);
    match scheme {
        DerivativeScheme::CentralRichardson => {
            let central = |s: T| (f(s) - f(-s)) / (two * s);
            let (coarse, fine) = (central(h), central(h / two));
            (fine * T::lit(4.0) - coarse) / T::lit(3.0)
        }
        DerivativeScheme::FivePointStencil => {
            let s = h * T::lit(0.4);
            (f(-two * s) - f(two * s) + (f(s) - f(-s)) * T::lit(8.0)) / (T::lit(12.0) * s)
        }
    }
}

/// Fisher matrix with explicit derivative scheme.
pub fn fisher_matrix<T: Real>(p: &GateParams<T>, d: usize, shots: u64, scheme: DerivativeScheme) -> Result<[[T; 3]; 3]> {
    let grid = ExperimentGrid::<T>::new(d);
    let m = T::lit(shots as f64);
    let half = T::lit(0.5);
    let mut terms: [[Vec<T>; 3]; 3] = Default::default();
    for &w in &grid.omegas {
        let h0 = signal(p, w, d);
        let grads = [0, 1, 2].map(|k| signal_derivative(p, w, d, k, scheme));
        for (re, prob) in [(true, half + h0.re), (false, half + h0.im)] {
            if prob < T::lit(DEGENERATE) || prob > T::one() - T::lit(DEGENERATE) {
                return Err(QspeError::DegenerateProbability { value: prob.as_f64() });
            }
            let weight = m / (prob * (T::one() - prob));
            let g = grads.map(|c| if re { c.re } else { c.im });
            for a in 0..3 {
                for b in a..3 {
                    terms[a][b].push(weight * g[a] * g[b]);
                }
            }
        }
    }
    let mut out = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let v = compensated_sum(terms[a][b].iter().copied());
            out[a][b] = v;
            out[b][a] = v;
        }
    }
    Ok(out)
}

/// Inverse diagonal of a Fisher matrix, rejecting unidentifiable cases.
pub fn crlb_from_matrix<T: Real>(matrix: &[[T; 3]; 3]) -> Result<([T; 3], T)> {
    // Equilibrate so the condition number does not depend on parameter units.
    let s: Vec<T> = (0..3).map(|i| matrix[i][i].sqrt()).collect();
    if s.iter().any(|&v| !(v > T::zero())) {
        return Err(QspeError::IllConditioned { condition: f64::INFINITY });
    }
    let rows: Vec<Vec<T>> = (0..3).map(|i| (0..3).map(|j| matrix[i][j] / (s[i] * s[j])).collect()).collect();
    let scaled = Matrix::from_rows(&rows);
    let (lu, cond) = condition_number(&scaled)?;
    if cond > T::lit(MAX_CONDITION) {
        return Err(QspeError::IllConditioned { condition: cond.as_f64() });
    }
    let inv = lu.inverse();
    Ok(([0, 1, 2].map(|i| inv.get(i, i) / (s[i] * s[i])), cond))
}

/// Fisher matrix, its CRLB and the dθ regime tag.
pub fn fisher_information<T: Real>(p: &GateParams<T>, d: usize, shots: u64) -> Result<FisherReport<T>> {
    let matrix = fisher_matrix(p, d, shots, DerivativeScheme::CentralRichardson)?;
    let (crlb, condition) = crlb_from_matrix(&matrix)?;
    Ok(FisherReport { matrix, crlb, regime: Regime::classify(p.theta, d), condition })
}

/// `[Var θ, Var φ, Var χ]` lower bounds.
pub fn crlb<T: Real>(p: &GateParams<T>, d: usize, shots: u64) -> Result<[T; 3]> {
    Ok(fisher_information(p, d, shots)?.crlb)
}

/// Closed-form small-θ bounds
/// `1/(4Md(2d−1))`, `3/(4Md(2d−1)(d²−1)θ²)`, `(4d²−1)/((d²−1)·4Md(2d−1)θ²)`.
pub fn preasymptotic_crlb<T: Real>(theta: T, d: usize, shots: u64) -> (T, T, T) {
    let (df, m) = (T::from_usize_lossy(d), T::lit(shots as f64));
    let base = T::lit(4.0) * m * df * (df + df - T::one());
    let d2m1 = df * df - T::one();
    let t2 = theta * theta;
    (
        T::one() / base,
        T::lit(3.0) / (base * d2m1 * t2),
        (T::lit(4.0) * df * df - T::one()) / (d2m1 * base * t2),
    )
}

/// Pre-asymptotic Fisher matrix `4M(2d−1)[[d,0,0],[0,d(4d²−1)θ²/3,d²θ²],[0,d²θ²,dθ²]]`.
pub fn preasymptotic_fisher<T: Real>(theta: T, d: usize, shots: u64) -> [[T; 3]; 3] {
    let (df, m) = (T::from_usize_lossy(d), T::lit(shots as f64));
    let c = T::lit(4.0) * m * (df + df - T::one());
    let t2 = theta * theta;
    let z = T::zero();
    [
        [c * df, z, z],
        [z, c * df * (T::lit(4.0) * df * df - T::one()) * t2 / T::lit(3.0), c * df * df * t2],
        [z, c * df * df * t2, c * df * t2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn regimes() {
        assert_eq!(Regime::classify(1e-3, 50), Regime::PreAsymptotic);
        assert_eq!(Regime::classify(1e-3, 5000), Regime::Transition);
        assert_eq!(Regime::classify(1e-3, 20000), Regime::Asymptotic);
    }

    #[test]
    fn theta_zero_is_singular() {
        assert!(crlb(&GateParams::new(0.0, PI / 16.0, 0.3), 5, 1000).is_err());
    }

    #[test]
    fn preasymptotic_ratio() {
        let (_, vp, vc) = preasymptotic_crlb(1e-3f64, 7, 1000);
        assert!((vc / vp - (4.0 * 49.0 - 1.0) / 3.0).abs() < 1e-10);
    }
}
