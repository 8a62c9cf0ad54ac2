//! Quantum Fisher information bounds for θ.

use crate::scalar::{compensated_sum, Real};
use crate::signal::{chebyshev_u, ExperimentGrid};

/// Per-experiment bound `4 U²_{d−1}(cos(ω−φ))`.
pub fn qfi_per_omega<T: Real>(omega: T, varphi: T, d: usize) -> T {
    let x = omega - varphi;
    let u = chebyshev_u(x.cos(), x.sin().abs(), d);
    T::lit(4.0) * u * u
}

/// Grid average of [`qfi_per_omega`], evaluated numerically.
pub fn grid_average_qfi<T: Real>(varphi: T, d: usize) -> T {
    let grid = ExperimentGrid::<T>::new(d);
    let total = compensated_sum(grid.omegas.iter().map(|&w| qfi_per_omega(w, varphi, d)));
    total / T::from_usize_lossy(grid.len())
}

/// Closed value of the grid average, `4d`.
pub fn qfi_bound<T: Real>(d: usize) -> T {
    T::lit(4.0) * T::from_usize_lossy(d)
}

/// `1/(8Md(2d−1))`: both Bell inputs at every grid point, each with M shots.
pub fn quantum_crlb<T: Real>(d: usize, shots: u64) -> T {
    let df = T::from_usize_lossy(d);
    T::one() / (T::lit(8.0 * shots as f64) * df * (df + df - T::one()))
}
