//! Run configuration: TOML parsing, validation and default resolution.
//!
//! Validation walks the parsed table by hand instead of deserializing in one
//! go, so that every violation in a file is reported at once, each with the
//! dotted field name and (when the key is present) its line.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;
pub const DEFAULT_REPETITIONS: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Box1,
    SweepDegree,
    SweepShots,
    CrlbScan,
    Qfi,
    AlphaEstimate,
    PeakFit,
    GeneralTheta,
    PcLandscape,
    PcFisher,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Box1,
        Experiment::SweepDegree,
        Experiment::SweepShots,
        Experiment::CrlbScan,
        Experiment::Qfi,
        Experiment::AlphaEstimate,
        Experiment::PeakFit,
        Experiment::GeneralTheta,
        Experiment::PcLandscape,
        Experiment::PcFisher,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::Box1 => "box1",
            Experiment::SweepDegree => "sweep-degree",
            Experiment::SweepShots => "sweep-shots",
            Experiment::CrlbScan => "crlb-scan",
            Experiment::Qfi => "qfi",
            Experiment::AlphaEstimate => "alpha-estimate",
            Experiment::PeakFit => "peak-fit",
            Experiment::GeneralTheta => "general-theta",
            Experiment::PcLandscape => "pc-landscape",
            Experiment::PcFisher => "pc-fisher",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::Box1 => "QSPE estimates of (theta, varphi) at each point, Monte Carlo over repetitions",
            Experiment::SweepDegree => "box1 swept over the circuit depth d",
            Experiment::SweepShots => "box1 swept over the shot count M",
            Experiment::CrlbScan => "numerical CRLB of (theta, varphi, chi) next to the pre-asymptotic closed forms",
            Experiment::Qfi => "per-omega quantum Fisher information across the experiment grid",
            Experiment::AlphaEstimate => "circuit fidelity and corrected theta under global depolarizing noise",
            Experiment::PeakFit => "plain QSPE followed by the parabola fit at the phase-matching peak",
            Experiment::GeneralTheta => "interval solver candidates for swap angles away from zero",
            Experiment::PcLandscape => "periodic-calibration loss landscape over trial swap angles",
            Experiment::PcFisher => "periodic-calibration Fisher information on the power-of-two depth ladder",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.id() == s)
    }

    /// Deterministic experiments emit repetition 0 only.
    pub fn is_deterministic(self) -> bool {
        matches!(self, Experiment::CrlbScan | Experiment::Qfi | Experiment::PcFisher)
    }

    pub fn uses_noise(self) -> bool {
        matches!(
            self,
            Experiment::Box1
                | Experiment::SweepDegree
                | Experiment::SweepShots
                | Experiment::AlphaEstimate
                | Experiment::PeakFit
                | Experiment::GeneralTheta
        )
    }

    fn is_periodic(self) -> bool {
        matches!(self, Experiment::PcLandscape | Experiment::PcFisher)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Identical,
    Fixed,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateSpec {
    pub theta: Vec<f64>,
    pub varphi: f64,
    pub chi: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub d: Vec<usize>,
    pub shots: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftSpec {
    pub theta_fraction: f64,
    pub phase_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialStateSpec {
    pub eta: Vec<f64>,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub depolarizing_rate: Vec<f64>,
    pub drift: Option<DriftSpec>,
    pub readout_fidelity: Option<f64>,
    pub initial_state: Option<InitialStateSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSpec {
    pub skip_zero_mode: bool,
    pub moving_average: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakFitSpec {
    pub points: usize,
    /// `None` resolves to π/(2d) per point.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralThetaSpec {
    pub epsilon: f64,
    /// `None` resolves to the library default per (d, M).
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicSpec {
    /// Measurement offset ω − φ (pc-fisher).
    pub offset: Vec<f64>,
    /// Trial swap angles in (0, π/2) (pc-landscape).
    pub trial_points: usize,
    /// Exact landscape targets instead of binomial samples.
    pub exact: bool,
}

/// A fully resolved run: every default filled in, every axis expanded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub schema_version: i64,
    pub experiment: Experiment,
    pub master_seed: u64,
    pub repetitions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub gate: GateSpec,
    pub grid: GridSpec,
    pub noise: NoiseSpec,
    pub estimator: EstimatorSpec,
    pub peak_fit: PeakFitSpec,
    pub general_theta: GeneralThetaSpec,
    pub pc: PeriodicSpec,
}

impl RunConfig {
    /// Repetitions actually run.
    pub fn effective_repetitions(&self) -> usize {
        let exact_landscape = self.experiment == Experiment::PcLandscape && self.pc.exact;
        if self.experiment.is_deterministic() || exact_landscape {
            1
        } else {
            self.repetitions
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Finds the line of a dotted field, tracking `[table]` headers. List indices
/// and keys inside inline tables resolve to the enclosing key's line.
fn locate(source: &str, field: &str) -> Option<usize> {
    let mut field = field.split('[').next().unwrap_or(field);
    loop {
        if let Some(l) = locate_exact(source, field) {
            return Some(l);
        }
        field = field.rsplit_once('.')?.0;
    }
}

fn locate_exact(source: &str, field: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if let Some(h) = line.strip_prefix('[') {
            current = h.split(']').next().unwrap_or("").trim().to_string();
            if current == field {
                return Some(i + 1);
            }
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else { continue };
        let lhs = lhs.trim();
        let full = if current.is_empty() { lhs.to_string() } else { format!("{current}.{lhs}") };
        if full == field {
            return Some(i + 1);
        }
    }
    None
}

struct Checker<'a> {
    source: &'a str,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn fail(&mut self, field: &str, message: impl Into<String>) {
        let line = locate(self.source, field);
        self.violations.push(Violation { field: field.to_string(), line, message: message.into() });
    }

    fn unknown_keys(&mut self, table: &Table, prefix: &str, allowed: &[&str]) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                let field = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                self.fail(&field, format!("unknown key (expected one of: {})", allowed.join(", ")));
            }
        }
    }

    fn table<'t>(&mut self, root: &'t Table, key: &str, field: &str) -> Option<&'t Table> {
        match root.get(key) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => {
                self.fail(field, "expected a table");
                None
            }
        }
    }

    fn float(&mut self, v: &Value, field: &str) -> Option<f64> {
        match number(v) {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.fail(field, "expected a finite number");
                None
            }
        }
    }

    fn angle(&mut self, v: &Value, field: &str) -> Option<f64> {
        match v {
            Value::String(s) => match parse_angle(s) {
                Some(x) => Some(x),
                None => {
                    self.fail(field, format!("cannot parse angle {s:?} (use a number or a form like \"5pi/32\")"));
                    None
                }
            },
            _ => self.float(v, field),
        }
    }

    fn integer(&mut self, v: &Value, field: &str, min: u64) -> Option<u64> {
        let n = match v {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            Value::Float(f) if f.fract() == 0.0 && *f >= 0.0 && *f < 1.8e19 => Some(*f as u64),
            _ => None,
        };
        match n {
            Some(n) if n >= min => Some(n),
            _ => {
                self.fail(field, format!("expected an integer >= {min}"));
                None
            }
        }
    }

    fn boolean(&mut self, v: &Value, field: &str) -> Option<bool> {
        match v {
            Value::Boolean(b) => Some(*b),
            _ => {
                self.fail(field, "expected true or false");
                None
            }
        }
    }

    /// A float axis: a number, a list, or `{min, max, count, log}`.
    fn float_axis(&mut self, v: &Value, field: &str, angle: bool) -> Option<Vec<f64>> {
        match v {
            Value::Array(items) => {
                if items.is_empty() {
                    self.fail(field, "empty list");
                    return None;
                }
                let vals: Vec<Option<f64>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        let f = format!("{field}[{i}]");
                        if angle {
                            self.angle(x, &f)
                        } else {
                            self.float(x, &f)
                        }
                    })
                    .collect();
                vals.into_iter().collect()
            }
            Value::Table(t) => self.float_range(t, field),
            _ if angle => self.angle(v, field).map(|x| vec![x]),
            _ => self.float(v, field).map(|x| vec![x]),
        }
    }

    fn float_range(&mut self, t: &Table, field: &str) -> Option<Vec<f64>> {
        self.unknown_keys(t, field, &["min", "max", "count", "log"]);
        let min = self.required(t, "min", field).and_then(|v| self.float(v, &format!("{field}.min")));
        let max = self.required(t, "max", field).and_then(|v| self.float(v, &format!("{field}.max")));
        let count = self.required(t, "count", field).and_then(|v| self.integer(v, &format!("{field}.count"), 1));
        let log = match t.get("log") {
            Some(v) => self.boolean(v, &format!("{field}.log"))?,
            None => false,
        };
        let (min, max, count) = (min?, max?, count? as usize);
        if min > max {
            self.fail(field, format!("min {min} is greater than max {max}"));
            return None;
        }
        if log && min <= 0.0 {
            self.fail(field, "log range needs min > 0");
            return None;
        }
        Some(spaced(min, max, count, log))
    }

    /// An integer axis: an integer, a list, or `{min, max, step}` /
    /// `{min, max, count, log}`.
    fn int_axis(&mut self, v: &Value, field: &str, min_value: u64) -> Option<Vec<u64>> {
        match v {
            Value::Array(items) => {
                if items.is_empty() {
                    self.fail(field, "empty list");
                    return None;
                }
                let vals: Vec<Option<u64>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.integer(x, &format!("{field}[{i}]"), min_value))
                    .collect();
                vals.into_iter().collect()
            }
            Value::Table(t) => {
                self.unknown_keys(t, field, &["min", "max", "step", "count", "log"]);
                let min = self.required(t, "min", field).and_then(|v| self.integer(v, &format!("{field}.min"), min_value));
                let max = self.required(t, "max", field).and_then(|v| self.integer(v, &format!("{field}.max"), min_value));
                let (min, max) = (min?, max?);
                if min > max {
                    self.fail(field, format!("min {min} is greater than max {max}"));
                    return None;
                }
                if t.contains_key("count") {
                    if t.contains_key("step") {
                        self.fail(field, "give either step or count, not both");
                        return None;
                    }
                    let count = self.integer(&t["count"], &format!("{field}.count"), 1)? as usize;
                    let log = match t.get("log") {
                        Some(v) => self.boolean(v, &format!("{field}.log"))?,
                        None => false,
                    };
                    if log && min == 0 {
                        self.fail(field, "log range needs min > 0");
                        return None;
                    }
                    let mut out: Vec<u64> =
                        spaced(min as f64, max as f64, count, log).into_iter().map(|x| x.round() as u64).collect();
                    out.dedup();
                    Some(out)
                } else {
                    if t.contains_key("log") {
                        self.fail(&format!("{field}.log"), "log spacing needs count");
                        return None;
                    }
                    let step = match t.get("step") {
                        Some(v) => self.integer(v, &format!("{field}.step"), 1)?,
                        None => 1,
                    };
                    Some((min..=max).step_by(step as usize).collect())
                }
            }
            _ => self.integer(v, field, min_value).map(|x| vec![x]),
        }
    }

    fn required<'t>(&mut self, t: &'t Table, key: &str, prefix: &str) -> Option<&'t Value> {
        let v = t.get(key);
        if v.is_none() {
            let field = if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
            self.fail(&field, "missing required field");
        }
        v
    }
}

fn number(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

/// `count` points from `min` to `max` inclusive, linear or geometric.
fn spaced(min: f64, max: f64, count: usize, log: bool) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            if i == count - 1 {
                max
            } else if log {
                min * (max / min).powf(t)
            } else {
                min + (max - min) * t
            }
        })
        .collect()
}

/// Parses a number or `[-][a][*]pi[/b]`, e.g. `"pi/16"`, `"5pi/32"`, `"-2*pi"`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let Some((lhs, rhs)) = s.split_once("pi") else {
        return s.parse().ok();
    };
    let lhs = lhs.strip_suffix('*').unwrap_or(lhs);
    let a = match lhs {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    let b = match rhs {
        "" => 1.0,
        other => other.strip_prefix('/')?.parse::<f64>().ok()?,
    };
    (b != 0.0).then(|| a * PI / b).filter(|x| x.is_finite())
}

fn parse_seed(v: &Value) -> Option<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Some(*i as u64),
        Value::String(s) => match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16).ok(),
            None => s.replace('_', "").parse().ok(),
        },
        _ => None,
    }
}

/// Error of [`parse`]: either TOML syntax or a list of schema violations.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax(String),
    Invalid(Vec<Violation>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax(m) => write!(f, "TOML syntax error: {m}"),
            ConfigError::Invalid(v) => {
                writeln!(f, "{} violation(s):", v.len())?;
                for x in v {
                    writeln!(f, "  {x}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parses and validates a config file's contents.
pub fn parse(source: &str) -> Result<RunConfig, ConfigError> {
    let root: Table = source.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let mut c = Checker { source, violations: Vec::new() };
    c.unknown_keys(
        &root,
        "",
        &[
            "schema_version",
            "experiment",
            "master_seed",
            "repetitions",
            "output",
            "gate",
            "grid",
            "noise",
            "estimator",
            "peak_fit",
            "general_theta",
            "pc",
        ],
    );

    if let Some(v) = c.required(&root, "schema_version", "") {
        if v.as_integer() != Some(SCHEMA_VERSION) {
            c.fail("schema_version", format!("unsupported schema version (this build reads {SCHEMA_VERSION})"));
        }
    }
    let experiment = c.required(&root, "experiment", "").and_then(|v| {
        let e = v.as_str().and_then(Experiment::parse);
        if e.is_none() {
            let ids: Vec<_> = Experiment::ALL.iter().map(|e| e.id()).collect();
            c.fail("experiment", format!("expected one of: {}", ids.join(", ")));
        }
        e
    });
    let master_seed = c.required(&root, "master_seed", "").and_then(|v| {
        let s = parse_seed(v);
        if s.is_none() {
            c.fail("master_seed", "expected a non-negative integer or a decimal/hex string of a 64-bit integer");
        }
        s
    });
    let repetitions = match root.get("repetitions") {
        Some(v) => c.integer(v, "repetitions", 1).map(|n| n as usize),
        None => Some(DEFAULT_REPETITIONS),
    };
    let output = match root.get("output") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => {
            c.fail("output", "expected a path string");
            None
        }
    };

    let gate = parse_gate(&mut c, &root);
    let grid = parse_grid(&mut c, &root);
    let noise = parse_noise(&mut c, &root);
    let estimator = parse_estimator(&mut c, &root);
    let peak_fit = parse_peak_fit(&mut c, &root);
    let general_theta = parse_general_theta(&mut c, &root);
    let pc = parse_pc(&mut c, &root);

    if let Some(e) = experiment {
        check_experiment(&mut c, &root, e, grid.as_ref(), gate.as_ref());
    }

    if !c.violations.is_empty() {
        return Err(ConfigError::Invalid(c.violations));
    }
    let cfg = RunConfig {
        schema_version: SCHEMA_VERSION,
        experiment: experiment.expect("validated"),
        master_seed: master_seed.expect("validated"),
        repetitions: repetitions.expect("validated"),
        output,
        gate: gate.expect("validated"),
        grid: grid.expect("validated"),
        noise: noise.expect("validated"),
        estimator: estimator.expect("validated"),
        peak_fit: peak_fit.expect("validated"),
        general_theta: general_theta.expect("validated"),
        pc: pc.expect("validated"),
    };
    Ok(cfg)
}

fn parse_gate(c: &mut Checker, root: &Table) -> Option<GateSpec> {
    let Some(t) = c.table(root, "gate", "gate") else {
        if !root.contains_key("gate") {
            c.fail("gate", "missing required table");
        }
        return None;
    };
    c.unknown_keys(t, "gate", &["theta", "varphi", "chi", "psi"]);
    let theta = c.required(t, "theta", "gate").and_then(|v| c.float_axis(v, "gate.theta", true));
    let varphi = c.required(t, "varphi", "gate").and_then(|v| c.angle(v, "gate.varphi"));
    let chi = c.required(t, "chi", "gate").and_then(|v| c.angle(v, "gate.chi"));
    let psi = match t.get("psi") {
        Some(v) => c.angle(v, "gate.psi"),
        None => Some(0.0),
    };
    let theta = theta?;
    if let Some(bad) = theta.iter().find(|&&x| !(0.0..=PI).contains(&x)) {
        c.fail("gate.theta", format!("swap angle {bad} outside [0, pi]"));
    }
    Some(GateSpec { theta, varphi: varphi?, chi: chi?, psi: psi? })
}

fn parse_grid(c: &mut Checker, root: &Table) -> Option<GridSpec> {
    let Some(t) = c.table(root, "grid", "grid") else {
        if !root.contains_key("grid") {
            c.fail("grid", "missing required table");
        }
        return None;
    };
    c.unknown_keys(t, "grid", &["d", "shots"]);
    let d = c.required(t, "d", "grid").and_then(|v| c.int_axis(v, "grid.d", 1));
    let shots = c.required(t, "shots", "grid").and_then(|v| c.int_axis(v, "grid.shots", 1));
    Some(GridSpec { d: d?.into_iter().map(|x| x as usize).collect(), shots: shots? })
}

fn parse_noise(c: &mut Checker, root: &Table) -> Option<NoiseSpec> {
    let empty = Table::new();
    let t = match c.table(root, "noise", "noise") {
        Some(t) => t,
        None if root.contains_key("noise") => return None,
        None => &empty,
    };
    c.unknown_keys(t, "noise", &["depolarizing_rate", "drift", "readout_fidelity", "initial_state"]);
    let rate = match t.get("depolarizing_rate") {
        Some(v) => c.float_axis(v, "noise.depolarizing_rate", false),
        None => Some(vec![0.0]),
    };
    if let Some(bad) = rate.as_ref().and_then(|r| r.iter().find(|&&x| !(0.0..1.0).contains(&x))) {
        c.fail("noise.depolarizing_rate", format!("rate {bad} outside [0, 1)"));
    }
    let drift = match t.get("drift") {
        None | Some(Value::Boolean(false)) => Some(None),
        Some(Value::Boolean(true)) => Some(Some(DriftSpec { theta_fraction: 0.1, phase_amplitude: 0.3 })),
        Some(Value::Table(d)) => {
            c.unknown_keys(d, "noise.drift", &["theta_fraction", "phase_amplitude"]);
            let tf = d.get("theta_fraction").map_or(Some(0.1), |v| c.float(v, "noise.drift.theta_fraction"));
            let pa = d.get("phase_amplitude").map_or(Some(0.3), |v| c.float(v, "noise.drift.phase_amplitude"));
            match (tf, pa) {
                (Some(tf), Some(pa)) if tf >= 0.0 && pa >= 0.0 => {
                    Some(Some(DriftSpec { theta_fraction: tf, phase_amplitude: pa }))
                }
                (Some(_), Some(_)) => {
                    c.fail("noise.drift", "drift amplitudes must be non-negative");
                    None
                }
                _ => None,
            }
        }
        Some(_) => {
            c.fail("noise.drift", "expected true, false or a table");
            None
        }
    };
    let readout = match t.get("readout_fidelity") {
        None => Some(None),
        Some(v) => match c.float(v, "noise.readout_fidelity") {
            Some(f) if f > 0.5 && f <= 1.0 => Some(Some(f)),
            Some(f) => {
                c.fail("noise.readout_fidelity", format!("fidelity {f} outside (0.5, 1]"));
                None
            }
            None => None,
        },
    };
    let initial = match t.get("initial_state") {
        None => Some(None),
        Some(Value::Table(s)) => {
            c.unknown_keys(s, "noise.initial_state", &["eta", "strategy"]);
            let eta = c.required(s, "eta", "noise.initial_state").and_then(|v| c.float_axis(v, "noise.initial_state.eta", false));
            if let Some(bad) = eta.as_ref().and_then(|e| e.iter().find(|&&x| x < 0.0)) {
                c.fail("noise.initial_state.eta", format!("eta {bad} is negative"));
            }
            let strategy = match s.get("strategy").map(|v| v.as_str()) {
                None => Some(Strategy::Fixed),
                Some(Some("identical")) => Some(Strategy::Identical),
                Some(Some("fixed")) => Some(Strategy::Fixed),
                Some(Some("random")) => Some(Strategy::Random),
                Some(_) => {
                    c.fail("noise.initial_state.strategy", "expected \"identical\", \"fixed\" or \"random\"");
                    None
                }
            };
            Some(Some(InitialStateSpec { eta: eta?, strategy: strategy? }))
        }
        Some(_) => {
            c.fail("noise.initial_state", "expected a table");
            None
        }
    };
    Some(NoiseSpec { depolarizing_rate: rate?, drift: drift?, readout_fidelity: readout?, initial_state: initial? })
}

fn parse_estimator(c: &mut Checker, root: &Table) -> Option<EstimatorSpec> {
    let empty = Table::new();
    let t = match c.table(root, "estimator", "estimator") {
        Some(t) => t,
        None if root.contains_key("estimator") => return None,
        None => &empty,
    };
    c.unknown_keys(t, "estimator", &["skip_zero_mode", "moving_average"]);
    let skip = t.get("skip_zero_mode").map_or(Some(false), |v| c.boolean(v, "estimator.skip_zero_mode"));
    let ma = match t.get("moving_average") {
        None => Some(None),
        Some(v) => c.integer(v, "estimator.moving_average", 1).map(|w| Some(w as usize)),
    };
    Some(EstimatorSpec { skip_zero_mode: skip?, moving_average: ma? })
}

fn parse_peak_fit(c: &mut Checker, root: &Table) -> Option<PeakFitSpec> {
    let empty = Table::new();
    let t = match c.table(root, "peak_fit", "peak_fit") {
        Some(t) => t,
        None if root.contains_key("peak_fit") => return None,
        None => &empty,
    };
    c.unknown_keys(t, "peak_fit", &["points", "threshold"]);
    let points = t.get("points").map_or(Some(15), |v| c.integer(v, "peak_fit.points", 3));
    let threshold = match t.get("threshold") {
        None => Some(None),
        Some(v) => match c.float(v, "peak_fit.threshold") {
            Some(x) if x > 0.0 => Some(Some(x)),
            Some(_) => {
                c.fail("peak_fit.threshold", "must be positive");
                None
            }
            None => None,
        },
    };
    Some(PeakFitSpec { points: points? as usize, threshold: threshold? })
}

fn parse_general_theta(c: &mut Checker, root: &Table) -> Option<GeneralThetaSpec> {
    let empty = Table::new();
    let t = match c.table(root, "general_theta", "general_theta") {
        Some(t) => t,
        None if root.contains_key("general_theta") => return None,
        None => &empty,
    };
    c.unknown_keys(t, "general_theta", &["epsilon", "gamma"]);
    let eps = match t.get("epsilon") {
        None => Some(qspe::estimation::DEFAULT_EPSILON),
        Some(v) => match c.float(v, "general_theta.epsilon") {
            Some(x) if x > 0.0 && x < 1.0 => Some(x),
            Some(_) => {
                c.fail("general_theta.epsilon", "must lie in (0, 1)");
                None
            }
            None => None,
        },
    };
    let gamma = match t.get("gamma") {
        None => Some(None),
        Some(v) => match c.float(v, "general_theta.gamma") {
            Some(x) if x >= 0.0 => Some(Some(x)),
            Some(_) => {
                c.fail("general_theta.gamma", "must be non-negative");
                None
            }
            None => None,
        },
    };
    Some(GeneralThetaSpec { epsilon: eps?, gamma: gamma? })
}

fn parse_pc(c: &mut Checker, root: &Table) -> Option<PeriodicSpec> {
    let empty = Table::new();
    let t = match c.table(root, "pc", "pc") {
        Some(t) => t,
        None if root.contains_key("pc") => return None,
        None => &empty,
    };
    c.unknown_keys(t, "pc", &["offset", "trial_points", "exact"]);
    let offset = t.get("offset").map_or(Some(vec![0.0]), |v| c.float_axis(v, "pc.offset", true));
    let trial = t.get("trial_points").map_or(Some(2000), |v| c.integer(v, "pc.trial_points", 3));
    let exact = t.get("exact").map_or(Some(false), |v| c.boolean(v, "pc.exact"));
    Some(PeriodicSpec { offset: offset?, trial_points: trial? as usize, exact: exact? })
}

/// Cross-field rules that depend on the experiment.
fn check_experiment(c: &mut Checker, root: &Table, e: Experiment, grid: Option<&GridSpec>, gate: Option<&GateSpec>) {
    if !e.uses_noise() && root.contains_key("noise") {
        c.fail("noise", format!("experiment {e} does not simulate noise"));
    }
    if !e.is_periodic() && root.contains_key("pc") {
        c.fail("pc", format!("only used by pc-landscape and pc-fisher, not {e}"));
    }
    if e != Experiment::PeakFit && root.contains_key("peak_fit") {
        c.fail("peak_fit", format!("only used by peak-fit, not {e}"));
    }
    if e != Experiment::GeneralTheta && root.contains_key("general_theta") {
        c.fail("general_theta", format!("only used by general-theta, not {e}"));
    }
    if let Some(noise) = root.get("noise").and_then(Value::as_table) {
        let dep = noise.get("depolarizing_rate");
        if e == Experiment::AlphaEstimate && dep.is_none() {
            c.fail("noise.depolarizing_rate", "alpha-estimate needs a depolarizing rate");
        }
    } else if e == Experiment::AlphaEstimate {
        c.fail("noise.depolarizing_rate", "alpha-estimate needs a depolarizing rate");
    }
    if e == Experiment::PcLandscape && root.get("pc").and_then(Value::as_table).is_some_and(|t| t.contains_key("offset")) {
        c.fail("pc.offset", "pc-landscape measures at omega = 0; set gate.varphi for the offset");
    }
    if let Some(g) = grid {
        let min_d = match e {
            Experiment::Qfi | Experiment::PcLandscape | Experiment::PcFisher => 1,
            _ => 2,
        };
        if let Some(bad) = g.d.iter().find(|&&d| d < min_d) {
            c.fail("grid.d", format!("experiment {e} needs d >= {min_d}, got {bad}"));
        }
        if e.is_periodic() {
            if let Some(bad) = g.d.iter().find(|d| !d.is_power_of_two()) {
                c.fail("grid.d", format!("periodic calibration needs power-of-two depths, got {bad}"));
            }
        }
    }
    if let Some(g) = gate {
        let needs_signal = !matches!(e, Experiment::Qfi);
        if needs_signal && g.theta.iter().any(|&t| t == 0.0) {
            c.fail("gate.theta", format!("experiment {e} needs theta > 0"));
        }
    }
}
