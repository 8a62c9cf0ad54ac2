//! Global depolarizing channel on the two-qubit register.

use crate::scalar::Real;

/// `p_α = αp + (1−α)/4`.
pub fn apply_depolarizing<T: Real>(p: T, alpha: T) -> T {
    alpha * p + (T::one() - alpha) / T::lit(4.0)
}

/// Gates in the |+⟩ experiment at depth d: the d U-gates, d+1 Z-phase layers
/// and four preparation/measurement gates.
pub fn gate_count_x(d: usize) -> usize {
    2 * d + 5
}

/// The |i⟩ experiment needs one extra phase gate in its preparation. This
/// one-gate difference is an O(r) ambiguity in α_DEM.
pub fn gate_count_y(d: usize) -> usize {
    2 * d + 6
}

/// Survival factor `(1−r)^n` of n independently depolarized gates.
pub fn fidelity_for_gates<T: Real>(r: T, n: usize) -> T {
    (T::one() - r).powi(n as i32)
}

/// `α_DEM = (1−r)^{2d+5}`.
pub fn dem_fidelity<T: Real>(r: T, d: usize) -> T {
    fidelity_for_gates(r, gate_count_x(d))
}
