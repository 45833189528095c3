use serde::Serialize;

use crate::inverse::Reconstruction;
use crate::InflowRate;

/// `(1 / dt) int_{t_n}^{t_{n+1}} f` for `n < steps`.
pub fn interval_means(truth: &InflowRate<f64>, dt: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|n| truth.interval_mean(n as f64 * dt, (n + 1) as f64 * dt))
        .collect()
}

/// Errors of `f_n` against the interval means of the true rate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FError {
    pub sup: f64,
    pub rel_l2: f64,
    /// Standard deviation of `f_n - truth`, a measure of oscillation.
    pub std: f64,
    pub mean: f64,
}

pub fn f_error(rec: &Reconstruction<f64>, truth: &InflowRate<f64>) -> FError {
    f_error_on(rec, truth, 0..rec.steps())
}

/// [`f_error`] restricted to the steps in `range`.
pub fn f_error_on(
    rec: &Reconstruction<f64>,
    truth: &InflowRate<f64>,
    range: std::ops::Range<usize>,
) -> FError {
    let means = interval_means(truth, rec.dt, rec.steps());
    let errs: Vec<f64> = range.clone().map(|n| rec.f[n] - means[n]).collect();
    if errs.is_empty() {
        return FError::default();
    }
    let n = errs.len() as f64;
    let sup = errs.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let mean = errs.iter().sum::<f64>() / n;
    let var = errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    let num = errs.iter().map(|e| e * e).sum::<f64>().sqrt();
    let den = range.map(|i| means[i] * means[i]).sum::<f64>().sqrt();
    FError {
        sup,
        rel_l2: if den > 0.0 { num / den } else { num },
        std: var.sqrt(),
        mean,
    }
}

/// `max |a_n - b_n|`; `NaN` if lengths differ.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::NAN;
    }
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
