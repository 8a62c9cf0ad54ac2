//! CSV and JSON writers. Column contracts live in docs/schema.md.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::config::RunConfig;
use crate::experiments::Row;

pub const RESULT_COLUMNS: [&str; 24] = [
    "experiment",
    "point",
    "rep",
    "seed",
    "d",
    "shots",
    "theta",
    "varphi",
    "chi",
    "r",
    "eta",
    "x",
    "theta_hat",
    "theta_hat_pf",
    "varphi_hat",
    "alpha_hat",
    "sq_err_theta",
    "sq_err_varphi",
    "pred_var_theta",
    "pred_var_varphi",
    "crlb_theta",
    "crlb_varphi",
    "crlb_chi",
    "value",
];

pub const SUMMARY_COLUMNS: [&str; 27] = [
    "experiment",
    "point",
    "d",
    "shots",
    "theta",
    "varphi",
    "chi",
    "r",
    "eta",
    "x",
    "n",
    "mean_theta_hat",
    "var_theta_hat",
    "mse_theta_hat",
    "mean_varphi_hat",
    "var_varphi_hat",
    "mse_varphi_hat",
    "n_pf",
    "mean_theta_hat_pf",
    "mse_theta_hat_pf",
    "mean_alpha_hat",
    "mean_value",
    "pred_var_theta",
    "pred_var_varphi",
    "crlb_theta",
    "crlb_varphi",
    "crlb_chi",
];

/// 17 significant digits, enough to round-trip any f64.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn results_csv(experiment: &str, rows: &[Row]) -> String {
    let mut s = RESULT_COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let cells = [
            experiment.to_string(),
            r.point.to_string(),
            r.rep.to_string(),
            r.seed.to_string(),
            r.d.to_string(),
            r.shots.to_string(),
            float(r.theta),
            float(r.varphi),
            float(r.chi),
            opt(r.r),
            opt(r.eta),
            opt(r.x),
            opt(r.theta_hat),
            opt(r.theta_hat_pf),
            opt(r.varphi_hat),
            opt(r.alpha_hat),
            opt(r.sq_err_theta),
            opt(r.sq_err_varphi),
            opt(r.pred_var_theta),
            opt(r.pred_var_varphi),
            opt(r.crlb_theta),
            opt(r.crlb_varphi),
            opt(r.crlb_chi),
            opt(r.value),
        ];
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Mean and unbiased variance; the variance needs two samples.
fn moments(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = (xs.len() > 1).then(|| xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0));
    (Some(mean), var)
}

fn column(rows: &[&Row], f: impl Fn(&Row) -> Option<f64>) -> Vec<f64> {
    rows.iter().filter_map(|r| f(r)).collect()
}

/// Per-point aggregate of a point's rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub point: usize,
    pub n: usize,
    pub mean_theta_hat: Option<f64>,
    pub var_theta_hat: Option<f64>,
    pub mse_theta_hat: Option<f64>,
    pub mean_varphi_hat: Option<f64>,
    pub var_varphi_hat: Option<f64>,
    pub mse_varphi_hat: Option<f64>,
    pub n_pf: usize,
    pub mean_theta_hat_pf: Option<f64>,
    pub mse_theta_hat_pf: Option<f64>,
    pub mean_alpha_hat: Option<f64>,
    pub mean_value: Option<f64>,
}

fn summarize(rows: &[&Row]) -> Summary {
    let theta = rows[0].theta;
    let th = column(rows, |r| r.theta_hat);
    let ph = column(rows, |r| r.varphi_hat);
    let pf = column(rows, |r| r.theta_hat_pf);
    let (mean_theta_hat, var_theta_hat) = moments(&th);
    let (mean_varphi_hat, var_varphi_hat) = moments(&ph);
    let pf_err: Vec<f64> = pf.iter().map(|x| (x - theta).powi(2)).collect();
    Summary {
        point: rows[0].point,
        n: th.len(),
        mean_theta_hat,
        var_theta_hat,
        mse_theta_hat: moments(&column(rows, |r| r.sq_err_theta)).0,
        mean_varphi_hat,
        var_varphi_hat,
        mse_varphi_hat: moments(&column(rows, |r| r.sq_err_varphi)).0,
        n_pf: pf.len(),
        mean_theta_hat_pf: moments(&pf).0,
        mse_theta_hat_pf: moments(&pf_err).0,
        mean_alpha_hat: moments(&column(rows, |r| r.alpha_hat)).0,
        mean_value: moments(&column(rows, |r| r.value)).0,
    }
}

/// Groups consecutive rows of one point (rows are already in point order).
pub fn group_by_point(rows: &[Row]) -> Vec<Vec<&Row>> {
    let mut out: Vec<Vec<&Row>> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some(g) if g[0].point == r.point => g.push(r),
            _ => out.push(vec![r]),
        }
    }
    out
}

pub fn summaries(rows: &[Row]) -> Vec<Summary> {
    group_by_point(rows).iter().map(|g| summarize(g)).collect()
}

pub fn summary_csv(experiment: &str, rows: &[Row]) -> String {
    let mut s = SUMMARY_COLUMNS.join(",");
    s.push('\n');
    for g in group_by_point(rows) {
        let first = g[0];
        let sm = summarize(&g);
        // x is only a point parameter when every row of the point agrees.
        let x = first.x.filter(|x| g.iter().all(|r| r.x == Some(*x)));
        let cells = [
            experiment.to_string(),
            first.point.to_string(),
            first.d.to_string(),
            first.shots.to_string(),
            float(first.theta),
            float(first.varphi),
            float(first.chi),
            opt(first.r),
            opt(first.eta),
            opt(x),
            sm.n.to_string(),
            opt(sm.mean_theta_hat),
            opt(sm.var_theta_hat),
            opt(sm.mse_theta_hat),
            opt(sm.mean_varphi_hat),
            opt(sm.var_varphi_hat),
            opt(sm.mse_varphi_hat),
            sm.n_pf.to_string(),
            opt(sm.mean_theta_hat_pf),
            opt(sm.mse_theta_hat_pf),
            opt(sm.mean_alpha_hat),
            opt(sm.mean_value),
            opt(first.pred_var_theta),
            opt(first.pred_var_varphi),
            opt(first.crlb_theta),
            opt(first.crlb_varphi),
            opt(first.crlb_chi),
        ];
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Run metadata. Unlike the CSVs this is not byte-reproducible: it records
/// wall-clock timing and the thread count.
pub struct Metadata<'a> {
    pub config: &'a RunConfig,
    pub config_path: &'a Path,
    pub threads: usize,
    pub points: usize,
    pub rows: usize,
    pub started_unix: u64,
    pub elapsed_seconds: f64,
}

impl Metadata<'_> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tool": "qspe",
            "tool_version": env!("CARGO_PKG_VERSION"),
            "csv_schema_version": crate::config::SCHEMA_VERSION,
            "config_path": self.config_path.display().to_string(),
            "config": self.config,
            "git_commit": git_commit(self.config_path),
            "threads": self.threads,
            "points": self.points,
            "repetitions_run": self.config.effective_repetitions(),
            "rows": self.rows,
            "started_unix": self.started_unix,
            "elapsed_seconds": self.elapsed_seconds,
            "files": ["results.csv", "summary.csv", "metadata.json"],
        })
    }
}

/// Commit of the repository holding the config, if there is one.
fn git_commit(config_path: &Path) -> Option<String> {
    let dir = config_path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let out = std::process::Command::new("git").arg("-C").arg(dir).args(["rev-parse", "HEAD"]).output().ok()?;
    out.status.success().then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}

/// Writes via a temporary file and rename so a failed run leaves no partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}
