//! Small statistics helpers and the pass/fail reporter used by the
//! acceptance target.

use std::time::{Duration, Instant};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Mean squared deviation from a known truth.
pub fn mse(xs: &[f64], truth: f64) -> f64 {
    xs.iter().map(|x| (x - truth) * (x - truth)).sum::<f64>() / xs.len() as f64
}

/// Least-squares slope of y against x.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Log-log slope between two points.
pub fn loglog_slope(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    (y1 / y0).ln() / (x1 / x0).ln()
}

/// One sub-check of a criterion.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

/// Collects sub-checks for one criterion and prints a single verdict line
/// (plus one indented line per sub-check).
pub struct Criterion {
    name: &'static str,
    budget: Duration,
    started: Instant,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Criterion {
    pub fn start(name: &'static str, budget_secs: u64) -> Self {
        Self { name, budget: Duration::from_secs(budget_secs), started: Instant::now(), checks: Vec::new(), notes: Vec::new() }
    }

    pub fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { label: label.into(), pass, detail: detail.into() });
        pass
    }

    /// Informational line that does not affect the verdict.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Adds the runtime check, prints, and returns whether everything passed.
    pub fn finish(mut self) -> bool {
        let elapsed = self.started.elapsed();
        let within = elapsed <= self.budget;
        self.check(
            "runtime",
            within,
            format!("{:.2} s (budget {} s)", elapsed.as_secs_f64(), self.budget.as_secs()),
        );
        let pass = self.checks.iter().all(|c| c.pass);
        println!("{} {}", if pass { "PASS" } else { "FAIL" }, self.name);
        for c in &self.checks {
            println!("    [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.label, c.detail);
        }
        for n in &self.notes {
            println!("    note: {n}");
        }
        pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = (1..6).map(|i| (i as f64).ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -3.0 * x + 2.0).collect();
        assert!((ls_slope(&xs, &ys) + 3.0).abs() < 1e-12);
        assert!((loglog_slope(2.0, 8.0, 4.0, 64.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn variance_of_small_sample() {
        assert!((variance(&[1.0, 2.0, 3.0, 4.0]) - 5.0 / 3.0).abs() < 1e-15);
        assert!((mse(&[1.0, 3.0], 2.0) - 1.0).abs() < 1e-15);
    }
}
