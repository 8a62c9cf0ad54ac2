//! Fisher information, CRLB, QFI and periodic-calibration examples.

use qspe::analysis::*;
use qspe::estimation::{predicted_variances, qspe_estimate};
use qspe::noise::{simulate_grid, spectrum_from_records};
use qspe::seed::mix;
use qspe::signal::{circuit_unitary, ExperimentGrid};
use qspe::{GateParams, NoiseConfig};
use std::f64::consts::PI;

const PHI: f64 = PI / 16.0;
const CHI: f64 = 5.0 * PI / 32.0;
const M: u64 = 100_000;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn fisher_pre_asymptotic_entry() {
    let d = 5;
    let r = fisher_information(&GateParams::new(1e-3, PHI, CHI), d, M).unwrap();
    let want = 4.0 * M as f64 * (2 * d - 1) as f64 * d as f64;
    assert!(rel(r.matrix[0][0], want) < 0.01, "I11 = {}", r.matrix[0][0]);
    for a in 0..3 {
        for b in 0..3 {
            assert!((r.matrix[a][b] - r.matrix[b][a]).abs() <= 1e-10 * r.matrix[a][a].max(r.matrix[b][b]));
        }
    }
    assert_eq!(r.regime, Regime::PreAsymptotic);
    for i in 0..3 {
        assert!(r.crlb[i] >= 1.0 / r.matrix[i][i] * (1.0 - 1e-12));
    }
}

#[test]
fn derivative_schemes_agree() {
    for &(t, d) in &[(1e-3, 5usize), (0.05, 12), (0.4, 30)] {
        let g = GateParams::new(t, PHI, CHI);
        for &w in &ExperimentGrid::<f64>::new(d).omegas {
            for k in 0..3 {
                let a = signal_derivative(&g, w, d, k, DerivativeScheme::CentralRichardson);
                let b = signal_derivative(&g, w, d, k, DerivativeScheme::FivePointStencil);
                let scale = a.norm().max(b.norm()).max(1e-300);
                // Tiny derivatives (φ, χ when θ is small) are held to an absolute floor.
                assert!((a - b).norm() <= 1e-6 * scale + 1e-11 * d as f64, "θ = {t}, d = {d}, k = {k}");
            }
        }
    }
}

#[test]
fn fisher_matrices_from_both_schemes_agree() {
    let g = GateParams::new(0.02, PHI, CHI);
    let a = fisher_matrix(&g, 8, M, DerivativeScheme::CentralRichardson).unwrap();
    let b = fisher_matrix(&g, 8, M, DerivativeScheme::FivePointStencil).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let scale = (a[i][i] * a[j][j]).sqrt();
            assert!((a[i][j] - b[i][j]).abs() <= 1e-6 * scale);
        }
    }
}

#[test]
fn crlb_pre_asymptotic_closed_forms() {
    let t = 1e-3;
    for d in [2usize, 5, 10] {
        let c = crlb(&GateParams::new(t, PHI, CHI), d, M).unwrap();
        let (vt, vp, vc) = preasymptotic_crlb(t, d, M);
        let df = d as f64;
        let chi = (4.0 * df * df - 1.0) / ((df * df - 1.0) * 4.0 * M as f64 * df * (2.0 * df - 1.0) * t * t);
        assert!((vc - chi).abs() <= 1e-12 * chi);
        assert!(rel(c[0], vt) < 0.02, "d = {d}: θ");
        assert!(rel(c[1], vp) < 0.02, "d = {d}: φ");
        assert!(rel(c[2], vc) < 0.02, "d = {d}: χ");
    }
}

#[test]
fn crlb_is_singular_at_zero_swap() {
    assert!(crlb(&GateParams::new(0.0, PHI, CHI), 5, M).is_err());
}

#[test]
fn preasymptotic_formula_examples() {
    let (vt, vp, vc) = preasymptotic_crlb(1e-3, 10, M);
    let (pt, pp) = predicted_variances(10, M, 1e-3);
    assert_eq!((vt, vp), (pt, pp));
    assert!(rel(vc / vp, (4.0 * 100.0 - 1.0) / 3.0) < 1e-13);
    let (_, vp100, _) = preasymptotic_crlb(1e-3, 100, M);
    // 3/(4·1e5·100·199·9999·1e−6) = 3/79592040, evaluated in exact rationals.
    let want = 3.0 / (4.0e5 * 100.0 * 199.0 * 9999.0 * 1e-6);
    assert!(rel(vp100, want) < 1e-14);
    assert!(rel(vp100, 3.76922114321985e-8) < 1e-13);
}

#[test]
fn preasymptotic_fisher_inverts_to_the_closed_forms() {
    let (t, d) = (1e-3, 7);
    let f = preasymptotic_fisher(t, d, M);
    let (c, _) = crlb_from_matrix(&f).unwrap();
    let (vt, vp, vc) = preasymptotic_crlb(t, d, M);
    assert!(rel(c[0], vt) < 1e-12 && rel(c[1], vp) < 1e-10 && rel(c[2], vc) < 1e-10);
}

#[test]
fn qfi_examples() {
    for d in [1usize, 2, 10, 50, 100] {
        for &phi in &[0.0, 0.3, -1.1, PHI] {
            assert!((grid_average_qfi(phi, d) - 4.0 * d as f64).abs() < 1e-9, "d = {d}");
        }
        let peak = qfi_per_omega(0.4, 0.4, d);
        assert!(rel(peak, 4.0 * (d * d) as f64) < 1e-12);
        assert_eq!(qfi_bound::<f64>(d), 4.0 * d as f64);
    }
    for d in [2usize, 10, 100] {
        let q: f64 = quantum_crlb(d, M);
        assert!(rel(q, 1.0 / (8.0 * M as f64 * (d * (2 * d - 1)) as f64)) < 1e-14);
        assert!(rel(preasymptotic_crlb(1e-3, d, M).0 / q, 2.0) < 1e-14);
    }
}

#[test]
fn pc_probability_examples() {
    for d in [1usize, 3, 16, 200] {
        let t = 0.013;
        assert!((pc_probability(t, 0.2, 0.2, d) - (d as f64 * t).sin().powi(2)).abs() < 1e-12);
        assert_eq!(pc_probability(0.0, 0.2, 0.7, d), 0.0);
    }
    // Against the off-diagonal of the brute-force circuit.
    for &(t, phi, w, d) in &[(0.1, 0.0, 0.3, 7usize), (1e-3, PHI, 1.0, 20), (0.7, -0.2, 2.5, 33)] {
        let u = circuit_unitary(&GateParams::new(t, phi, CHI), w, d);
        assert!((pc_probability(t, phi, w, d) - u.entries[1][0].norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn pc_phase_matched_fisher() {
    let t = 1e-6;
    let r = pc_fisher_info(t, 0.0, 0.0, 1024, M).unwrap();
    let want = 4.0 * M as f64 * (4.0 * 1024.0f64.powi(2) - 1.0) / 3.0;
    assert!(rel(r.fisher_theta, want) < 1e-6);
    assert!(rel(r.phase_matched_total, want) < 1e-15);
    assert!(rel(r.crlb_theta, 3.0 / (4.0 * M as f64 * (4.0 * 1024.0f64.powi(2) - 1.0))) < 1e-6);
    assert_eq!(r.depths.len(), 11);
    assert!(r.approx_total.is_none());
    // Per-depth cap 4M·4^j holds everywhere.
    let off = pc_fisher_info(1e-4, 0.0, 0.05, 256, M).unwrap();
    for (j, v) in off.per_depth.iter().enumerate() {
        assert!(*v <= 4.0 * M as f64 * 4f64.powi(j as i32) * (1.0 + 1e-9));
    }
}

#[test]
fn pc_offset_degrades_to_logarithmic_growth() {
    let t = 1e-4;
    let big = pc_fisher_info(t, 0.1, 0.0, 1024, M).unwrap().fisher_theta;
    let small = pc_fisher_info(t, 0.1, 0.0, 32, M).unwrap().fisher_theta;
    assert!(big / small <= 2.5, "ratio = {}", big / small);
    let r = pc_fisher_info(t, 0.1, 0.0, 1024, M).unwrap();
    let approx = r.approx_total.unwrap();
    assert!(rel(r.fisher_theta, approx) < 0.5, "exact {} vs log form {approx}", r.fisher_theta);
}

#[test]
fn pc_first_zero_offset_loses_most_information() {
    // θ large enough that P at the zero stays above the degeneracy guard.
    let t = 1e-2;
    for d in [16usize, 32, 64] {
        let r = pc_fisher_info(t, 0.0, PI / d as f64, d, M).unwrap();
        let cap = 4.0 * M as f64 * (d * d) as f64;
        let frac = r.per_depth.last().unwrap() / cap;
        assert!(frac <= 0.092, "d = {d}: {frac}");
        // The small-θ envelope there is (1+π²/d²)/(1+π²) ≈ 9.2%.
        let env = r.approx_per_depth.last().unwrap() / cap;
        assert!((env - 1.0 / (1.0 + PI * PI)).abs() < 4e-3, "d = {d}: {env}");
    }
}

#[test]
fn pc_ladder_information_increases() {
    let mut prev = 0.0;
    for j in 0..=10 {
        let v = pc_fisher_info(1e-5, 0.0, 0.0, 1 << j, M).unwrap().fisher_theta;
        assert!(v > prev);
        prev = v;
    }
    assert!(pc_fisher_info(1e-3, 0.0, 0.0, 12, M).is_err());
}

#[test]
fn pc_landscape_examples() {
    let grid: Vec<f64> = (1..4000).map(|j| j as f64 * (PI / 2.0) / 4000.0).collect();
    let at_truth = pc_loss_landscape(&[1.0], 1.0, 0.0, 1024, None, 0).unwrap();
    assert!(at_truth[0] < 1e-20);
    let count = |dmax: usize| {
        let l = pc_loss_landscape(&grid, 1.0, 0.0, dmax, None, 0).unwrap();
        let max = l.iter().cloned().fold(0.0, f64::max);
        local_minima(&l).into_iter().filter(|&i| l[i] < 0.01 * max && (grid[i] - 1.0).abs() > 1e-2).count()
    };
    let (few, many) = (count(16), count(1024));
    assert!(many > few, "local minima: d=16 -> {few}, d=1024 -> {many}");
    // Finite shots barely move the landscape.
    let exact = pc_loss_landscape(&grid, 1.0, 0.0, 1024, None, 0).unwrap();
    let noisy = pc_loss_landscape(&grid, 1.0, 0.0, 1024, Some(1000), 3).unwrap();
    let scale = exact.iter().cloned().fold(0.0, f64::max);
    let dev = exact.iter().zip(&noisy).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev / scale < 0.1, "deviation {}", dev / scale);
    assert!(pc_loss_landscape(&[], 1.0, 0.0, 4, None, 0).is_err());
}

#[test]
fn estimator_does_not_beat_the_crlb() {
    let (t, d) = (1e-3, 10usize);
    let g = GateParams::new(t, PHI, CHI);
    let noise = NoiseConfig::shot_noise(M);
    let th: Vec<f64> = (0..500u64)
        .map(|r| qspe_estimate(&spectrum_from_records(&simulate_grid(&g, d, &noise, mix(99, d as u64, r)).unwrap()), M).unwrap().theta_hat)
        .collect();
    let mean = th.iter().sum::<f64>() / th.len() as f64;
    let var = th.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (th.len() - 1) as f64;
    let bound = crlb(&g, d, M).unwrap()[0];
    assert!(var >= 0.9 * bound, "Var/CRLB = {}", var / bound);
}

#[test]
fn regime_tags() {
    assert_eq!(Regime::classify(1e-3, 100), Regime::PreAsymptotic);
    assert_eq!(Regime::classify(1e-3, 1000), Regime::Transition);
    assert_eq!(Regime::classify(1e-2, 1000), Regime::Asymptotic);
    assert_eq!(Regime::Transition.tag(), "transition");
}
