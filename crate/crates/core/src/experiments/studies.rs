use rayon::prelude::*;
use serde::Serialize;

use super::metrics::sup_distance;
use super::pipeline::nearest_divisor;
use super::{add_noise, f_error, fit, NoiseSpec, Oracle, RateFit};
use crate::inverse::{reconstruct, Method};
use crate::{Error, Result, Scenario};

/// Solver settings shared by the studies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverSettings {
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            method: Method::Explicit,
            tol: crate::inverse::DEFAULT_TOL,
            max_iter: crate::inverse::DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub dts: Vec<f64>,
    /// `sup_n |f_n - mean f|` per step.
    pub f_errors: Vec<f64>,
    /// `sup_n |delta_n - delta(t_n)|` against the oracle mass.
    pub delta_errors: Vec<f64>,
    pub fit: RateFit,
    pub delta_fit: Option<RateFit>,
}

/// Exact-data refinement study: one oracle trace, reconstructed at every
/// inverse step in `dts`.
pub fn convergence_study(
    s: &Scenario<f64>,
    dts: &[f64],
    oracle: &Oracle,
    solver: SolverSettings,
) -> Result<ConvergenceStudy> {
    let mut dts = dts.to_vec();
    dts.sort_by(f64::total_cmp);
    if dts.len() < 3 || dts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config(
            "convergence study needs at least 3 distinct steps".into(),
        ));
    }
    if oracle.trace.dt > dts[0] * (1.0 + 1e-9) {
        return Err(Error::Config(format!(
            "oracle step {} is coarser than the finest inverse step {}",
            oracle.trace.dt, dts[0]
        )));
    }
    let runs: Vec<(f64, f64)> = dts
        .par_iter()
        .map(|&dt| -> Result<(f64, f64)> {
            let trace = oracle.trace_at(dt)?;
            let rec = reconstruct(&trace, s, solver.method, solver.tol, solver.max_iter)?;
            let truth = oracle.mass_at(dt)?;
            Ok((
                f_error(&rec, &s.inflow).sup,
                sup_distance(&rec.delta, &truth.delta),
            ))
        })
        .collect::<Result<_>>()?;
    let f_errors: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let delta_errors: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let pairs = |e: &[f64]| {
        dts.iter()
            .copied()
            .zip(e.iter().copied())
            .collect::<Vec<_>>()
    };
    Ok(ConvergenceStudy {
        fit: fit(&pairs(&f_errors))?,
        delta_fit: fit(&pairs(&delta_errors)).ok(),
        dts,
        f_errors,
        delta_errors,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseStudy {
    pub sigmas: Vec<f64>,
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    pub fit: RateFit,
    pub warnings: Vec<String>,
}

/// Noise study with inverse step `factor * sqrt(sigma)`, rounded to a divisor
/// of the oracle mesh. Zero noise levels are dropped with a warning.
pub fn noise_scaling_study(
    s: &Scenario<f64>,
    sigmas: &[f64],
    oracle: &Oracle,
    seed: u64,
    factor: f64,
    solver: SolverSettings,
) -> Result<NoiseStudy> {
    let mut warnings = Vec::new();
    let mut levels: Vec<f64> = Vec::new();
    for &sigma in sigmas {
        NoiseSpec::new(sigma, seed)?;
        if sigma == 0.0 {
            warnings.push("sigma = 0 excluded from the noise study".to_string());
        } else {
            levels.push(sigma);
        }
    }
    levels.sort_by(f64::total_cmp);
    if levels.len() < 3 {
        return Err(Error::Config(
            "noise study needs at least 3 positive noise levels".into(),
        ));
    }
    if levels[levels.len() - 1] / levels[0] < 100.0 {
        return Err(Error::Config(
            "noise levels must span at least two decades".into(),
        ));
    }
    let steps = oracle.trace.steps();
    let runs: Vec<(f64, f64)> = levels
        .par_iter()
        .map(|&sigma| -> Result<(f64, f64)> {
            let stride = nearest_divisor(steps, factor * sigma.sqrt() / oracle.trace.dt);
            let trace = add_noise(&oracle.trace.subsample(stride)?, &NoiseSpec { sigma, seed });
            let rec = reconstruct(&trace, s, solver.method, solver.tol, solver.max_iter)?;
            Ok((trace.dt, f_error(&rec, &s.inflow).sup))
        })
        .collect::<Result<_>>()?;
    let errors: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let pairs: Vec<(f64, f64)> = levels.iter().copied().zip(errors.iter().copied()).collect();
    Ok(NoiseStudy {
        fit: fit(&pairs)?,
        dts: runs.iter().map(|r| r.0).collect(),
        sigmas: levels,
        errors,
        warnings,
    })
}
