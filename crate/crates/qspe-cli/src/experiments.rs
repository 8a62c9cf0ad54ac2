//! Per-experiment computation of result rows.
//!
//! A run is the cartesian product of the sweep axes (θ, d, M, r, η, offset,
//! nested in that order, last fastest) times the repetitions. Every
//! (point, repetition) job gets the child seed `mix(master, point, rep)` and
//! is independent of all others, so rows come out identical at any thread
//! count.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use qspe::analysis::{fisher_information, pc_fisher_info, pc_loss_landscape, preasymptotic_crlb, qfi_per_omega, quantum_crlb};
use qspe::estimation::{
    default_gamma, estimate_fidelity_and_theta, general_theta_solve, peak_fit, peak_fit_grid, predicted_variances,
    qspe_estimate_with, QspeOptions,
};
use qspe::noise::{dem_fidelity, records_to_samples, simulate_grid, simulate_points, spectrum_from_records, InitialStateStrategy};
use qspe::scalar::wrap_half_pi;
use qspe::seed::mix;
use qspe::{ConfusionMatrix, DriftConfig, ExperimentGrid, GateParams, InitialStateError, NoiseConfig, QspeError};

use crate::config::{Experiment, RunConfig, Strategy};

/// One parameter point of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub index: usize,
    pub theta: f64,
    pub d: usize,
    pub shots: u64,
    pub r: Option<f64>,
    pub eta: Option<f64>,
    pub offset: Option<f64>,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "point {} (theta = {:e}, d = {}, shots = {}", self.index, self.theta, self.d, self.shots)?;
        if let Some(r) = self.r {
            write!(f, ", r = {r:e}")?;
        }
        if let Some(e) = self.eta {
            write!(f, ", eta = {e:e}")?;
        }
        if let Some(o) = self.offset {
            write!(f, ", offset = {o}")?;
        }
        f.write_str(")")
    }
}

/// One output row. `None` fields are written as empty cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub point: usize,
    pub rep: usize,
    pub seed: u64,
    pub d: usize,
    pub shots: u64,
    pub theta: f64,
    pub varphi: f64,
    pub chi: f64,
    pub r: Option<f64>,
    pub eta: Option<f64>,
    pub x: Option<f64>,
    pub theta_hat: Option<f64>,
    pub theta_hat_pf: Option<f64>,
    pub varphi_hat: Option<f64>,
    pub alpha_hat: Option<f64>,
    pub sq_err_theta: Option<f64>,
    pub sq_err_varphi: Option<f64>,
    pub pred_var_theta: Option<f64>,
    pub pred_var_varphi: Option<f64>,
    pub crlb_theta: Option<f64>,
    pub crlb_varphi: Option<f64>,
    pub crlb_chi: Option<f64>,
    pub value: Option<f64>,
}

impl Row {
    fn floats(&self) -> [(&'static str, Option<f64>); 17] {
        [
            ("theta", Some(self.theta)),
            ("varphi", Some(self.varphi)),
            ("chi", Some(self.chi)),
            ("r", self.r),
            ("eta", self.eta),
            ("x", self.x),
            ("theta_hat", self.theta_hat),
            ("theta_hat_pf", self.theta_hat_pf),
            ("varphi_hat", self.varphi_hat),
            ("alpha_hat", self.alpha_hat),
            ("sq_err_theta", self.sq_err_theta),
            ("sq_err_varphi", self.sq_err_varphi),
            ("pred_var_theta", self.pred_var_theta),
            ("pred_var_varphi", self.pred_var_varphi),
            ("crlb_theta", self.crlb_theta),
            ("crlb_varphi", self.crlb_varphi),
            ("crlb_chi", self.crlb_chi),
        ]
    }

    fn first_non_finite(&self) -> Option<&'static str> {
        if self.value.is_some_and(|v| !v.is_finite()) {
            return Some("value");
        }
        self.floats().into_iter().find(|(_, v)| v.is_some_and(|x| !x.is_finite())).map(|(n, _)| n)
    }
}

/// A numerical failure, tied to the job that raised it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub point: Point,
    pub rep: usize,
    pub message: String,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "numerical failure at {}, repetition {}: {}", self.point, self.rep, self.message)
    }
}

impl std::error::Error for RunError {}

fn axis<T: Copy>(values: Option<&[T]>) -> Vec<Option<T>> {
    match values {
        Some(v) => v.iter().copied().map(Some).collect(),
        None => vec![None],
    }
}

/// Expands the sweep axes into parameter points.
pub fn points(cfg: &RunConfig) -> Vec<Point> {
    let e = cfg.experiment;
    let uses_noise = e.uses_noise();
    let rates = axis(uses_noise.then_some(cfg.noise.depolarizing_rate.as_slice()));
    let etas = axis(cfg.noise.initial_state.as_ref().filter(|_| uses_noise).map(|s| s.eta.as_slice()));
    let offsets = axis((e == Experiment::PcFisher).then_some(cfg.pc.offset.as_slice()));
    let mut out = Vec::new();
    for &theta in &cfg.gate.theta {
        for &d in &cfg.grid.d {
            for &shots in &cfg.grid.shots {
                for &r in &rates {
                    for &eta in &etas {
                        for &offset in &offsets {
                            out.push(Point { index: out.len(), theta, d, shots, r, eta, offset });
                        }
                    }
                }
            }
        }
    }
    out
}

fn noise_for(cfg: &RunConfig, p: &Point) -> Result<NoiseConfig, QspeError> {
    let mut n = NoiseConfig::shot_noise(p.shots);
    n.depolarizing_rate = p.r.unwrap_or(0.0);
    n.drift = cfg.noise.drift.map(|s| DriftConfig { theta_fraction: s.theta_fraction, phase_amplitude: s.phase_amplitude });
    n.readout = cfg.noise.readout_fidelity.map(ConfusionMatrix::symmetric).transpose()?;
    n.initial_state_error = match (p.eta, cfg.noise.initial_state.as_ref()) {
        (Some(eta), Some(s)) => Some(InitialStateError {
            eta,
            strategy: match s.strategy {
                Strategy::Identical => InitialStateStrategy::Identical,
                Strategy::Fixed => InitialStateStrategy::Fixed,
                Strategy::Random => InitialStateStrategy::Random,
            },
        }),
        _ => None,
    };
    Ok(n)
}

fn base_row(cfg: &RunConfig, p: &Point, rep: usize, seed: u64) -> Row {
    Row {
        point: p.index,
        rep,
        seed,
        d: p.d,
        shots: p.shots,
        theta: p.theta,
        varphi: cfg.gate.varphi,
        chi: cfg.gate.chi,
        r: p.r,
        eta: p.eta,
        ..Row::default()
    }
}

fn gate(cfg: &RunConfig, p: &Point) -> GateParams {
    GateParams::new(p.theta, cfg.gate.varphi, cfg.gate.chi).with_psi(cfg.gate.psi)
}

/// Runs one (point, repetition) job.
fn job(cfg: &RunConfig, p: &Point, rep: usize) -> Result<Vec<Row>, QspeError> {
    let seed = mix(cfg.master_seed, p.index as u64, rep as u64);
    let g = gate(cfg, p);
    let (d, m) = (p.d, p.shots);
    let mut row = base_row(cfg, p, rep, seed);
    let opts = QspeOptions { moving_average: cfg.estimator.moving_average, skip_zero_mode: cfg.estimator.skip_zero_mode };
    let (pv_theta, pv_varphi) = predicted_variances(d, m, p.theta);

    let rows = match cfg.experiment {
        Experiment::Box1 | Experiment::SweepDegree | Experiment::SweepShots => {
            let noise = noise_for(cfg, p)?;
            let spectrum = spectrum_from_records(&simulate_grid(&g, d, &noise, seed)?);
            let est = qspe_estimate_with(&spectrum, m, &opts)?;
            fill_estimate(&mut row, est.theta_hat, est.varphi_hat, p.theta, g.varphi);
            row.pred_var_theta = Some(pv_theta);
            row.pred_var_varphi = Some(pv_varphi);
            vec![row]
        }
        Experiment::AlphaEstimate => {
            let noise = noise_for(cfg, p)?;
            let spectrum = spectrum_from_records(&simulate_grid(&g, d, &noise, seed)?);
            let est = estimate_fidelity_and_theta(&spectrum, m)?;
            fill_estimate(&mut row, est.theta_hat, est.varphi_hat, p.theta, g.varphi);
            row.alpha_hat = est.alpha_hat;
            row.pred_var_theta = Some(pv_theta);
            row.pred_var_varphi = Some(pv_varphi);
            row.value = Some(dem_fidelity(p.r.unwrap_or(0.0), d));
            vec![row]
        }
        Experiment::PeakFit => {
            let noise = noise_for(cfg, p)?;
            let spectrum = spectrum_from_records(&simulate_grid(&g, d, &noise, mix(seed, 0, 0))?);
            let est = qspe_estimate_with(&spectrum, m, &opts)?;
            fill_estimate(&mut row, est.theta_hat, est.varphi_hat, p.theta, g.varphi);
            let omegas = peak_fit_grid(est.varphi_hat, d, cfg.peak_fit.points);
            let recs = simulate_points(&g, &omegas, d, &noise, mix(seed, 1, 0))?;
            let threshold = cfg.peak_fit.threshold.unwrap_or(PI / (2.0 * d as f64));
            let fit = peak_fit(&records_to_samples(&recs), d, est.varphi_hat, threshold)?;
            row.theta_hat_pf = fit.theta_hat;
            row.value = Some(if fit.accepted { 1.0 } else { 0.0 });
            row.pred_var_theta = Some(pv_theta);
            row.pred_var_varphi = Some(pv_varphi);
            vec![row]
        }
        Experiment::GeneralTheta => {
            let noise = noise_for(cfg, p)?;
            let spectrum = spectrum_from_records(&simulate_grid(&g, d, &noise, seed)?);
            let gamma = cfg.general_theta.gamma.unwrap_or_else(|| default_gamma(d, m));
            let sol = general_theta_solve(&spectrum.magnitudes(), d, cfg.general_theta.epsilon, gamma)?;
            // Amplitudes cannot tell θ from π − θ: the row of the cluster
            // nearest the truth carries θ̂, taken from whichever twin is closer.
            let best = sol.nearest_to(p.theta);
            sol.cluster_centers()
                .into_iter()
                .map(|center| {
                    let mut r = row.clone();
                    r.x = Some(center);
                    r.value = Some(sol.max_count as f64);
                    if Some(center) == best {
                        let twin = PI - center;
                        let hat = if (twin - p.theta).abs() < (center - p.theta).abs() { twin } else { center };
                        r.theta_hat = Some(hat);
                        r.sq_err_theta = Some((hat - p.theta).powi(2));
                    }
                    r
                })
                .collect()
        }
        Experiment::CrlbScan => {
            let report = fisher_information(&g, d, m)?;
            let (_, pv_varphi_pre, pv_chi) = preasymptotic_crlb(p.theta, d, m);
            row.crlb_theta = Some(report.crlb[0]);
            row.crlb_varphi = Some(report.crlb[1]);
            row.crlb_chi = Some(report.crlb[2]);
            row.pred_var_theta = Some(pv_theta);
            row.pred_var_varphi = Some(pv_varphi_pre);
            // Pre-asymptotic χ bound rides in `value`; see docs/schema.md.
            row.value = Some(pv_chi);
            vec![row]
        }
        Experiment::Qfi => {
            let q = quantum_crlb(d, m);
            ExperimentGrid::new(d)
                .omegas
                .iter()
                .map(|&w| {
                    let mut r = row.clone();
                    r.x = Some(w);
                    r.value = Some(qfi_per_omega(w, g.varphi, d));
                    r.crlb_theta = Some(q);
                    r.pred_var_theta = Some(pv_theta);
                    r
                })
                .collect()
        }
        Experiment::PcFisher => {
            let offset = p.offset.unwrap_or(0.0);
            let report = pc_fisher_info(p.theta, g.varphi, g.varphi + offset, d, m)?;
            row.x = Some(offset);
            row.value = Some(report.fisher_theta);
            row.crlb_theta = Some(report.crlb_theta);
            row.pred_var_theta = Some(1.0 / report.phase_matched_total);
            vec![row]
        }
        Experiment::PcLandscape => {
            let n = cfg.pc.trial_points;
            let trial: Vec<f64> = (1..=n).map(|j| j as f64 * (PI / 2.0) / (n + 1) as f64).collect();
            let shots = (!cfg.pc.exact).then_some(m);
            let loss = pc_loss_landscape(&trial, p.theta, g.varphi, d, shots, seed)?;
            trial
                .iter()
                .zip(loss)
                .map(|(&t, l)| {
                    let mut r = row.clone();
                    r.x = Some(t);
                    r.value = Some(l);
                    r
                })
                .collect()
        }
    };
    Ok(rows)
}

fn fill_estimate(row: &mut Row, theta_hat: f64, varphi_hat: f64, theta: f64, varphi: f64) {
    row.theta_hat = Some(theta_hat);
    row.varphi_hat = Some(varphi_hat);
    row.sq_err_theta = Some((theta_hat - theta).powi(2));
    // φ is identified modulo π.
    row.sq_err_varphi = Some(wrap_half_pi(varphi_hat - varphi).powi(2));
}

/// Runs every job on the current rayon pool. Rows come back in canonical
/// (point, repetition, sub-row) order; on failure the lowest-indexed failing
/// job is reported, so the error does not depend on scheduling either.
pub fn run_rows(cfg: &RunConfig) -> Result<Vec<Row>, RunError> {
    let pts = points(cfg);
    let reps = cfg.effective_repetitions();
    let results: Vec<Result<Vec<Row>, RunError>> = (0..pts.len() * reps)
        .into_par_iter()
        .map(|i| {
            let (p, rep) = (&pts[i / reps], i % reps);
            let rows = job(cfg, p, rep).map_err(|e| RunError { point: *p, rep, message: e.to_string() })?;
            if let Some(col) = rows.iter().find_map(Row::first_non_finite) {
                return Err(RunError { point: *p, rep, message: format!("non-finite value in column {col}") });
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

