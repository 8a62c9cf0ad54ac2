//! Noise-model examples and invariants.

use qspe::noise::*;
use qspe::scalar::Complex;
use qspe::seed::{mix, rng_from};
use qspe::signal::{transition_probs, SubspaceUnitary};
use qspe::{ConfusionMatrix, DriftConfig, GateParams, NoiseConfig};
use rand::Rng;
use std::f64::consts::PI;

type C = Complex<f64>;

fn sample_variance(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

#[test]
fn sample_shots_examples() {
    assert_eq!(sample_shots(0.0f64, 1000, 3).unwrap(), 0.0);
    assert_eq!(sample_shots(1.0f64, 1000, 3).unwrap(), 1.0);
    assert_eq!(sample_shots(0.3f64, 10, 42).unwrap(), sample_shots(0.3f64, 10, 42).unwrap());
    assert!(sample_shots(1.0 + 1e-13, 10, 1).is_ok());
    assert!(sample_shots(1.0 + 1e-9, 10, 1).is_err());
    assert!(sample_shots(-1e-9, 10, 1).is_err());
}

#[test]
fn sample_shots_variance_at_half() {
    let m = 100_000u64;
    let xs: Vec<f64> = (0..200).map(|s| sample_shots(0.5, m, mix(11, s, 0)).unwrap()).collect();
    let ratio = sample_variance(&xs) / (0.25 / m as f64);
    assert!((0.8..=1.2).contains(&ratio), "ratio = {ratio}");
}

#[test]
fn sample_shots_variance_matches_binomial() {
    let m = 10_000u64;
    for (i, &p) in [0.1, 0.5, 0.9].iter().enumerate() {
        let xs: Vec<f64> = (0..400).map(|s| sample_shots(p, m, mix(12, s, i as u64)).unwrap()).collect();
        let ratio = sample_variance(&xs) / (p * (1.0 - p) / m as f64);
        assert!((0.8..=1.2).contains(&ratio), "p = {p}: ratio = {ratio}");
    }
}

#[test]
fn depolarizing_examples() {
    assert_eq!(apply_depolarizing(0.37f64, 1.0), 0.37);
    assert_eq!(apply_depolarizing(0.9f64, 0.0), 0.25);
    assert!((apply_depolarizing(0.5f64, 0.9) - 0.475).abs() < 1e-15);
}

#[test]
fn dem_fidelity_examples() {
    assert_eq!(dem_fidelity(0.0f64, 17), 1.0);
    let a50 = dem_fidelity(1e-3f64, 50);
    assert!((a50 - 0.999f64.powi(105)).abs() < 1e-15);
    assert!((a50 - 0.9003).abs() < 5e-5);
    let a5 = dem_fidelity(1e-3f64, 5);
    assert!((a5 - 0.999f64.powi(15)).abs() < 1e-15);
    assert!((a5 - 0.98511).abs() < 1e-5);
}

#[test]
fn zero_drift_reproduces_the_noiseless_model() {
    let g = GateParams::new(1e-2, PI / 16.0, 5.0 * PI / 32.0);
    let off = DriftConfig { theta_fraction: 0.0, phase_amplitude: 0.0 };
    for d in [1usize, 5, 20] {
        for &w in &[0.0, 0.4, 2.9] {
            let (a, b) = simulate_drift_circuit(&g, w, d, &off, 9);
            let (x, y) = transition_probs(&g, w, d);
            assert!((a - x).abs() < 1e-13 && (b - y).abs() < 1e-13);
        }
    }
}

#[test]
fn drift_is_reproducible_and_lipschitz() {
    let g = GateParams::new(1e-2, 0.2, 0.3);
    let full = DriftConfig::default();
    assert_eq!(simulate_drift_circuit(&g, 0.5, 30, &full, 77), simulate_drift_circuit(&g, 0.5, 30, &full, 77));
    assert_ne!(simulate_drift_circuit(&g, 0.5, 30, &full, 77), simulate_drift_circuit(&g, 0.5, 30, &full, 78));
    let d = 10;
    let (x, y) = transition_probs(&g, 0.5, d);
    for &a in &[1e-2, 1e-3, 1e-4, 1e-6] {
        let cfg = DriftConfig { theta_fraction: a, phase_amplitude: a };
        for seed in 0..20 {
            let (px, py) = simulate_drift_circuit(&g, 0.5, d, &cfg, seed);
            assert!((px - x).abs() <= 10.0 * a && (py - y).abs() <= 10.0 * a, "a = {a}");
        }
    }
}

#[test]
fn drifted_circuits_stay_unitary() {
    let g = GateParams::new(0.1, 0.2, -0.4);
    let cfg = DriftConfig::default();
    let mut rng = rng_from(5);
    for d in [1usize, 8, 50] {
        let u = drifted_circuit(&g, 0.3, d, &cfg, &mut rng);
        assert!(u.unitarity_defect() < 1e-13);
    }
}

#[test]
fn readout_identity_and_round_trip() {
    let p = [0.1, 0.2, 0.3, 0.4];
    assert_eq!(apply_readout(&p, &ConfusionMatrix::identity()), p);
    let mut rng = rng_from(2024);
    for _ in 0..200 {
        let mut rows = [[0.0f64; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            let diag = 0.9 + 0.1 * rng.gen::<f64>();
            let w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let total: f64 = w.iter().sum();
            let mut k = 0;
            for (j, v) in row.iter_mut().enumerate() {
                if j == i {
                    *v = diag;
                } else {
                    *v = (1.0 - diag) * w[k] / total;
                    k += 1;
                }
            }
        }
        let r = ConfusionMatrix::new(rows).unwrap();
        let raw: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        let s: f64 = raw.iter().sum();
        let p = raw.map(|v| v / s);
        let back = invert_readout(&apply_readout(&p, &r), &r).unwrap();
        assert!(p.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn readout_applies_the_transpose() {
    let r = ConfusionMatrix::new([
        [0.91, 0.03, 0.04, 0.02],
        [0.05, 0.9, 0.01, 0.04],
        [0.0, 0.06, 0.92, 0.02],
        [0.03, 0.03, 0.03, 0.91],
    ])
    .unwrap();
    let p = [0.25, 0.35, 0.3, 0.1];
    let q = apply_readout(&p, &r);
    for j in 0..4 {
        let want: f64 = (0..4).map(|i| r.get(i, j) * p[i]).sum();
        assert!((q[j] - want).abs() < 1e-15);
    }
    assert!(ConfusionMatrix::new([[0.4, 0.6, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]).is_err());
    assert!(ConfusionMatrix::new([[0.9, 0.2, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]).is_err());
}

#[test]
fn subspace_embedding_uses_the_01_slot() {
    let g = GateParams::new(0.05, 0.1, 0.2);
    let d = 4;
    let plain = NoiseConfig::shot_noise(1000);
    let ideal = NoiseConfig { readout: Some(ConfusionMatrix::identity()), ..plain.clone() };
    for j in 0..(2 * d - 1) {
        let w = j as f64 * PI / (2 * d - 1) as f64;
        let (px, py) = transition_probs(&g, w, d);
        assert_eq!(embed_subspace_probability(px)[1], px);
        let (a, b) = model_probabilities(&g, w, d, &ideal, 1, j).unwrap();
        assert!((a - px).abs() < 1e-15 && (b - py).abs() < 1e-15);
    }
}

#[test]
fn confusion_shot_bound() {
    let k = ConfusionMatrix::symmetric(0.9f64).unwrap().kappa();
    assert!((k - 1.25).abs() < 1e-14);
    // 40-digit evaluation: 1282278.36…
    assert_eq!(required_confusion_shots(1.25, 0.01, 0.05, ShotBoundConstant::Proof).unwrap(), 1_282_279);
    let statement = required_confusion_shots(1.25, 0.01, 0.05, ShotBoundConstant::Tight).unwrap();
    assert_eq!(statement, (1_282_278.36f64 / 4.0).ceil() as u64);
    assert_eq!(required_confusion_shots(1.0, 1e300, 0.5, ShotBoundConstant::Proof).unwrap(), 34);
    // Doubling ε quarters M up to the (κ+ε)² factor.
    let (a, b) = (
        required_confusion_shots(1.25, 1e-3, 0.05, ShotBoundConstant::Proof).unwrap() as f64,
        required_confusion_shots(1.25, 2e-3, 0.05, ShotBoundConstant::Proof).unwrap() as f64,
    );
    let want = 0.25 * ((1.25f64 + 2e-3) / (1.25 + 1e-3)).powi(2);
    assert!((b / a - want).abs() < 1e-6);
}

/// `exp(−iηK)` by its power series, independent of the closed rotation.
fn series_exp(eta: f64, k: [[C; 2]; 2]) -> SubspaceUnitary<f64> {
    let mut term = SubspaceUnitary::identity();
    let mut sum = SubspaceUnitary::identity();
    let step = SubspaceUnitary { entries: k }.scale(C::new(0.0, -eta));
    for n in 1..30 {
        term = (term * step).scale(C::new(1.0 / n as f64, 0.0));
        for i in 0..2 {
            for j in 0..2 {
                sum.entries[i][j] += term.entries[i][j];
            }
        }
    }
    sum
}

fn generator(a: f64, b: f64) -> [[C; 2]; 2] {
    // aX + bY
    [[C::new(0.0, 0.0), C::new(a, -b)], [C::new(a, b), C::new(0.0, 0.0)]]
}

#[test]
fn initial_state_strategies() {
    let eta = 0.03;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s5 = 5f64.sqrt();
    let mut rng = rng_from(0);
    let id = InitialStateError { eta, strategy: InitialStateStrategy::Identical };
    let fixed = InitialStateError { eta, strategy: InitialStateStrategy::Fixed };
    let diag = series_exp(eta, generator(s2, s2));
    for input in [BellInput::X, BellInput::Y] {
        assert!(inject_initial_state_error(&id, input, &mut rng).max_abs_diff(&diag) < 1e-15);
    }
    assert!(inject_initial_state_error(&fixed, BellInput::X, &mut rng).max_abs_diff(&diag) < 1e-15);
    let fy = series_exp(eta, generator(2.0 / s5, 1.0 / s5));
    assert!(inject_initial_state_error(&fixed, BellInput::Y, &mut rng).max_abs_diff(&fy) < 1e-15);

    let zero = InitialStateError { eta: 0.0, strategy: InitialStateStrategy::Identical };
    assert!(inject_initial_state_error(&zero, BellInput::X, &mut rng).max_abs_diff(&SubspaceUnitary::identity()) == 0.0);

    let random = InitialStateError { eta, strategy: InitialStateStrategy::Random };
    let a = inject_initial_state_error(&random, BellInput::X, &mut rng_from(4));
    let b = inject_initial_state_error(&random, BellInput::X, &mut rng_from(4));
    let c = inject_initial_state_error(&random, BellInput::X, &mut rng_from(5));
    assert_eq!(a, b);
    assert!(a.max_abs_diff(&c) > 1e-6);
    for u in [a, c] {
        assert!(u.unitarity_defect() < 1e-15 && (u.det() - C::new(1.0, 0.0)).norm() < 1e-15);
        // Traceless unit generator: the Hermitian part is exactly cos η · I.
        let h = (u.entries[0][0] + u.entries[1][1]) * 0.5;
        assert!((h - C::new(eta.cos(), 0.0)).norm() < 1e-15);
    }
}

#[test]
fn records_are_deterministic_counts() {
    let g = GateParams::new(1e-3, PI / 16.0, 5.0 * PI / 32.0);
    let m = 12_345u64;
    let noise = NoiseConfig { depolarizing_rate: 1e-3, ..NoiseConfig::shot_noise(m) };
    let a = simulate_grid(&g, 7, &noise, 99).unwrap();
    let threads: Vec<_> = (0..4)
        .map(|_| {
            let n = noise.clone();
            std::thread::spawn(move || simulate_grid(&g, 7, &n, 99).unwrap())
        })
        .collect();
    for t in threads {
        assert_eq!(t.join().unwrap(), a);
    }
    for r in &a {
        for v in [r.p_x_hat, r.p_y_hat] {
            let c = v * m as f64;
            assert!((c - c.round()).abs() < 1e-6);
        }
    }
    assert_ne!(simulate_grid(&g, 7, &noise, 100).unwrap(), a);
}

#[test]
fn depolarized_model_is_affine() {
    let g = GateParams::new(0.02, 0.3, -0.1);
    let d = 6;
    let r = 2e-3;
    let noise = NoiseConfig { depolarizing_rate: r, ..NoiseConfig::shot_noise(1) };
    let (ax, ay) = (fidelity_for_gates(r, gate_count_x(d)), fidelity_for_gates(r, gate_count_y(d)));
    for j in 0..(2 * d - 1) {
        let w = j as f64 * PI / (2 * d - 1) as f64;
        let (px, py) = transition_probs(&g, w, d);
        let (x, y) = model_probabilities(&g, w, d, &noise, 0, j).unwrap();
        assert!((x - (ax * px + (1.0 - ax) / 4.0)).abs() < 1e-15);
        assert!((y - (ay * py + (1.0 - ay) / 4.0)).abs() < 1e-15);
    }
}

#[test]
fn multinomial_counts_conserve_shots() {
    let mut rng = rng_from(8);
    for _ in 0..50 {
        let c = sample_multinomial(&[0.1, 0.2, 0.3, 0.4], 1000, &mut rng).unwrap();
        assert_eq!(c.iter().sum::<u64>(), 1000);
    }
}
