//! Gate model and brute-force matrix products on the invariant subspace.

use std::ops::Mul;

use crate::scalar::{cis, Complex, Real};

/// Unknown angles of a U-gate, in radians.
///
/// Reported estimates live in the canonical ranges θ ∈ [0, π],
/// φ ∈ (−π/2, π/2], χ ∈ (−π, π]; true values may be any finite reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams<T> {
    pub theta: T,
    pub varphi: T,
    pub chi: T,
    pub psi: T,
}

impl<T: Real> GateParams<T> {
    /// Parameters with zero global phase.
    pub fn new(theta: T, varphi: T, chi: T) -> Self {
        Self { theta, varphi, chi, psi: T::zero() }
    }

    pub fn with_psi(mut self, psi: T) -> Self {
        self.psi = psi;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.varphi.is_finite() && self.chi.is_finite() && self.psi.is_finite()
    }
}

/// A 2×2 complex matrix acting on the two-level invariant subspace
/// spanned by |0_ℓ⟩ = |01⟩ and |1_ℓ⟩ = |10⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceUnitary<T> {
    pub entries: [[Complex<T>; 2]; 2],
}

impl<T: Real> SubspaceUnitary<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { entries: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self::new(o, z, z, o)
    }

    /// `e^{i a Z}`
    pub fn rz(a: T) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(cis(a), z, z, cis(-a))
    }

    /// `e^{i a X}`
    pub fn rx(a: T) -> Self {
        let c = Complex::new(a.cos(), T::zero());
        let s = Complex::new(T::zero(), a.sin());
        Self::new(c, s, s, c)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let e = &self.entries;
        Self::new(e[0][0] * s, e[0][1] * s, e[1][0] * s, e[1][1] * s)
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new(e[0][0].conj(), e[1][0].conj(), e[0][1].conj(), e[1][1].conj())
    }

    pub fn det(&self) -> Complex<T> {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let e = &self.entries;
        [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]]
    }

    /// `self^n` by repeated multiplication (left to right, no squaring) so that
    /// it stays a literal product oracle.
    pub fn pow_naive(&self, n: usize) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = *self * acc;
        }
        acc
    }

    /// Max-abs entry of U†U − I.
    pub fn unitarity_defect(&self) -> T {
        let g = self.adjoint() * *self;
        let id = Self::identity();
        g.max_abs_diff(&id)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        m
    }

    /// `|⟨0_ℓ| U |β⟩|²` with `|β⟩ = (|0_ℓ⟩ + β|1_ℓ⟩)/√2`.
    pub fn bell_probability(&self, beta: Complex<T>) -> T {
        let h = T::FRAC_1_SQRT_2();
        let out = self.apply([Complex::new(h, T::zero()), beta * h]);
        out[0].norm_sqr()
    }
}

impl<T: Real> Mul for SubspaceUnitary<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { entries: out }
    }
}

/// Direct matrix form of the U-gate on the subspace, global phase included.
pub fn u_gate_subspace<T: Real>(p: &GateParams<T>) -> SubspaceUnitary<T> {
    let (c, s) = (p.theta.cos(), p.theta.sin());
    let mi = Complex::new(T::zero(), -T::one());
    SubspaceUnitary::new(
        cis(-p.varphi - p.psi) * c,
        mi * cis(p.chi - p.psi) * s,
        mi * cis(-p.chi - p.psi) * s,
        cis(p.varphi - p.psi) * c,
    )
}

/// Euler decomposition `e^{−iψ} e^{−i((φ−χ−π)/2)Z} e^{iθX} e^{−i((φ+χ+π)/2)Z}`.
/// Kept separate from [`u_gate_subspace`] so the two can check each other.
pub fn u_gate_euler<T: Real>(p: &GateParams<T>) -> SubspaceUnitary<T> {
    let two = T::lit(2.0);
    let left = SubspaceUnitary::rz(-(p.varphi - p.chi - T::PI()) / two);
    let right = SubspaceUnitary::rz(-(p.varphi + p.chi + T::PI()) / two);
    (left * SubspaceUnitary::rx(p.theta) * right).scale(cis(-p.psi))
}

/// `(e^{iωZ} U)^d` as an explicit d-fold product. This is the brute-force
/// reference every closed form is checked against; it carries the global
/// phase `e^{−idψ}`, which never enters a probability.
pub fn circuit_unitary<T: Real>(p: &GateParams<T>, omega: T, d: usize) -> SubspaceUnitary<T> {
    let layer = SubspaceUnitary::rz(omega) * u_gate_subspace(p);
    layer.pow_naive(d)
}

/// Building block `(e^{iωZ} e^{iθX})^d e^{iωZ}` by explicit product.
pub fn building_block<T: Real>(omega: T, theta: T, d: usize) -> SubspaceUnitary<T> {
    let layer = SubspaceUnitary::rz(omega) * SubspaceUnitary::rx(theta);
    layer.pow_naive(d) * SubspaceUnitary::rz(omega)
}
