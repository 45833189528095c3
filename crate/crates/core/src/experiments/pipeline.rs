//! Inverse pipelines shared by the scripted examples and the CLI, so that
//! chaining subcommands through files reproduces an example run exactly.

use serde::Serialize;

use super::{add_noise, f_error, FError, NoiseSpec};
use crate::forward::{steps_for, BoundaryTrace};
use crate::inverse::distribution::{recover_distribution, DistributionRecovery};
use crate::inverse::{reconstruct, Reconstruction};
use crate::io::RunOptions;
use crate::{Error, Result, Scenario};

/// Inverse/forward step ratio used for exact data when nothing is specified.
pub const DEFAULT_COARSENING: usize = 10;

/// Divisor of `steps` closest to `target` on a log scale.
pub fn nearest_divisor(steps: usize, target: f64) -> usize {
    (1..=steps)
        .filter(|d| steps.is_multiple_of(*d))
        .min_by(|a, b| {
            let da = (*a as f64 / target).ln().abs();
            let db = (*b as f64 / target).ln().abs();
            da.total_cmp(&db)
        })
        .unwrap_or(1)
}

/// Stride from the trace mesh to the inverse mesh.
///
/// An explicit `inverse_dt` must be a multiple of the trace step. Otherwise
/// noisy data use `noisy_dt_factor * sqrt(sigma)` and exact data use
/// [`DEFAULT_COARSENING`] trace steps, each rounded to a divisor of the
/// number of trace steps.
pub fn inverse_stride(run: &RunOptions, trace: &BoundaryTrace<f64>) -> Result<usize> {
    if let Some(dt) = run.inverse_dt {
        let stride = steps_for(dt, trace.dt, "inverse").map_err(|_| {
            Error::MeshMismatch(format!(
                "inverse step {dt} is not a multiple of the trace step {}",
                trace.dt
            ))
        })?;
        if !trace.steps().is_multiple_of(stride) {
            return Err(Error::MeshMismatch(format!(
                "inverse step {dt} does not divide the horizon"
            )));
        }
        return Ok(stride);
    }
    let target = if run.sigma > 0.0 {
        run.noisy_dt_factor * run.sigma.sqrt() / trace.dt
    } else {
        DEFAULT_COARSENING as f64
    };
    Ok(nearest_divisor(trace.steps(), target))
}

/// Subsamples to the inverse mesh and adds the configured noise.
pub fn observed_trace(run: &RunOptions, trace: &BoundaryTrace<f64>) -> Result<BoundaryTrace<f64>> {
    let coarse = trace.subsample(inverse_stride(run, trace)?)?;
    Ok(add_noise(&coarse, &NoiseSpec::new(run.sigma, run.seed)?))
}

pub fn invert_inflow(
    s: &Scenario<f64>,
    run: &RunOptions,
    trace: &BoundaryTrace<f64>,
) -> Result<(BoundaryTrace<f64>, Reconstruction<f64>)> {
    let observed = observed_trace(run, trace)?;
    let rec = reconstruct(&observed, s, run.method, run.tol, run.max_iter)?;
    Ok((observed, rec))
}

/// Distribution recovery with `dx = v_max dt` unless `n_x` is set.
pub fn invert_distribution(
    s: &Scenario<f64>,
    run: &RunOptions,
    trace: &BoundaryTrace<f64>,
) -> Result<(BoundaryTrace<f64>, DistributionRecovery<f64>)> {
    let observed = observed_trace(run, trace)?;
    let n_x = run.n_x.unwrap_or(observed.steps());
    let rec = recover_distribution(&observed, s, n_x)?;
    Ok((observed, rec))
}

/// Accuracy of a recovered distribution on the interior of the reachable interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PhiError {
    /// `max |phi_hat - phi|` over `x` in `[0.05, 0.95] xi(T)`.
    pub sup_interior: f64,
    /// `dx sum phi_hat`.
    pub mass: f64,
    pub reachable: f64,
    pub nodes: usize,
    pub excluded: usize,
}

/// Fraction of the reachable interval trimmed at each end before measuring.
pub const INTERIOR_MARGIN: f64 = 0.05;

pub fn phi_error(rec: &DistributionRecovery<f64>, s: &Scenario<f64>) -> PhiError {
    let reachable = rec.x().last().copied().unwrap_or(0.0);
    let (lo, hi) = (
        INTERIOR_MARGIN * reachable,
        (1.0 - INTERIOR_MARGIN) * reachable,
    );
    let sup_interior = rec
        .x()
        .iter()
        .zip(&rec.phi)
        .filter(|(x, _)| **x >= lo && **x <= hi)
        .map(|(x, p)| (p - s.distribution.density(0.0, *x)).abs())
        .fold(0.0, f64::max);
    PhiError {
        sup_interior,
        mass: rec.mass(),
        reachable,
        nodes: rec.phi.len(),
        excluded: rec.nodes.excluded,
    }
}

/// [`f_error`] against the scenario's own inflow rate.
pub fn inflow_error(rec: &Reconstruction<f64>, s: &Scenario<f64>) -> FError {
    f_error(rec, &s.inflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_rounding() {
        assert_eq!(nearest_divisor(8000, 10.0), 10);
        assert_eq!(nearest_divisor(8000, 31.6), 32);
        assert_eq!(nearest_divisor(80000, 1000.0), 1000);
        assert_eq!(nearest_divisor(7, 2.0), 1);
        assert_eq!(nearest_divisor(7, 5.0), 7);
    }

    #[test]
    fn stride_rules() {
        let trace = BoundaryTrace::new(1e-4, vec![0.0; 80_001]).unwrap();
        let mut run = RunOptions::default();
        assert_eq!(inverse_stride(&run, &trace).unwrap(), 10);
        run.sigma = 1e-4;
        // 10 sqrt(1e-4) = 0.1
        assert_eq!(inverse_stride(&run, &trace).unwrap(), 1000);
        run.inverse_dt = Some(1e-3);
        assert_eq!(inverse_stride(&run, &trace).unwrap(), 10);
        run.inverse_dt = Some(1.5e-4);
        assert!(inverse_stride(&run, &trace).is_err());
    }
}
