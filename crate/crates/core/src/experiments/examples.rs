//! Built-in scenarios with their default meshes, and the scripted pipeline
//! that runs them end to end.

use std::fmt;
use std::str::FromStr;

use super::pipeline::{invert_distribution, invert_inflow, observed_trace, phi_error};
use super::report::{
    status_of, Comparison, ExperimentReport, ForwardSummary, ReportCheck, RunReport,
};
use super::{f_error, forward_oracle, sup_distance, ForwardMesh, NoiseSpec, Oracle};
use crate::inverse::{cumulative_inflow, reconstruct, Method, Reconstruction};
use crate::io::{
    quantize, reconstruction_csv, recovery_csv, trace_csv, Artifact, Config, RunOptions,
};
use crate::{
    validate, Error, InflowDistribution, InflowRate, InitialDensity, Result, Scenario,
    VelocityFunction,
};

/// Scripted examples. The string ids are the names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleName {
    /// Constant inflow, uniform trip lengths, horizon 8.
    ConstantInflow,
    /// As [`ExampleName::ConstantInflow`] with horizon 16, long enough for the
    /// first trips to finish.
    ConstantInflowLong,
    /// Periodic inflow `0.2 (1 + sin 2 pi t)` into an empty network.
    PeriodicInflow,
    /// Periodic inflow on top of a Gaussian bump of initial trips.
    PeriodicInflowLoaded,
    /// Periodic inflow with a drifting Gaussian trip-length profile.
    PeriodicInflowDrifting,
    /// Recovery of the uniform trip-length density, horizon 8.
    UniformProfile,
    /// Recovery of the uniform trip-length density, horizon 16.
    UniformProfileLong,
}

impl ExampleName {
    pub const ALL: [ExampleName; 7] = [
        ExampleName::ConstantInflow,
        ExampleName::ConstantInflowLong,
        ExampleName::PeriodicInflow,
        ExampleName::PeriodicInflowLoaded,
        ExampleName::PeriodicInflowDrifting,
        ExampleName::UniformProfile,
        ExampleName::UniformProfileLong,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExampleName::ConstantInflow => "5.1a",
            ExampleName::ConstantInflowLong => "5.1b",
            ExampleName::PeriodicInflow => "5.2a",
            ExampleName::PeriodicInflowLoaded => "5.2b",
            ExampleName::PeriodicInflowDrifting => "5.2c",
            ExampleName::UniformProfile => "5.4a",
            ExampleName::UniformProfileLong => "5.4b",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExampleName::ConstantInflow => "constant inflow 0.15, uniform phi on [0, 10], T = 8",
            ExampleName::ConstantInflowLong => "constant inflow 0.15, uniform phi on [0, 10], T = 16",
            ExampleName::PeriodicInflow => "inflow 0.2 (1 + sin 2 pi t), uniform phi, empty network, T = 8",
            ExampleName::PeriodicInflowLoaded => {
                "inflow 0.2 (1 + sin 2 pi t), uniform phi, initial bump 0.1 exp(-10 (x - 5)^2), T = 8"
            }
            ExampleName::PeriodicInflowDrifting => {
                "inflow 0.2 (1 + sin 2 pi t), Gaussian phi of width 0.4 centred at 3 + t / 2, T = 8"
            }
            ExampleName::UniformProfile => "recover uniform phi = 0.1 from constant inflow 0.15, T = 8",
            ExampleName::UniformProfileLong => "recover uniform phi = 0.1 from constant inflow 0.15, T = 16",
        }
    }

    /// Whether the example recovers `phi` rather than `f`.
    pub fn recovers_distribution(self) -> bool {
        matches!(
            self,
            ExampleName::UniformProfile | ExampleName::UniformProfileLong
        )
    }

    pub fn scenario(self) -> Scenario<f64> {
        let length = 10.0;
        let horizon = match self {
            ExampleName::ConstantInflowLong | ExampleName::UniformProfileLong => 16.0,
            _ => 8.0,
        };
        let periodic = InflowRate::sinusoidal(0.2, 2.0 * std::f64::consts::PI);
        let (inflow, distribution, initial) = match self {
            ExampleName::PeriodicInflow => (
                periodic,
                InflowDistribution::uniform(length),
                InitialDensity::Zero,
            ),
            ExampleName::PeriodicInflowLoaded => (
                periodic,
                InflowDistribution::uniform(length),
                InitialDensity::gaussian_bump(0.1, 10.0, 5.0),
            ),
            ExampleName::PeriodicInflowDrifting => (
                periodic,
                InflowDistribution::gaussian(0.4, 5.0 - horizon / 4.0, 0.5),
                InitialDensity::Zero,
            ),
            _ => (
                InflowRate::constant(0.15),
                InflowDistribution::uniform(length),
                InitialDensity::Zero,
            ),
        };
        Scenario {
            length,
            horizon,
            velocity: VelocityFunction::greenshields(1.0, 1.0),
            inflow,
            distribution,
            initial,
        }
    }

    /// Scenario plus the default meshes and noise level.
    pub fn config(self) -> Config {
        let periodic = matches!(
            self,
            ExampleName::PeriodicInflow
                | ExampleName::PeriodicInflowLoaded
                | ExampleName::PeriodicInflowDrifting
        );
        let run = if periodic {
            RunOptions {
                dt: 5e-4,
                richardson: true,
                sigma: 1e-5,
                exact_dt: Some(1e-3),
                ..RunOptions::default()
            }
        } else {
            RunOptions {
                dt: 1e-4,
                sigma: 1e-4,
                exact_dt: Some(1e-3),
                ..RunOptions::default()
            }
        };
        Config::new(self.scenario(), run)
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleName::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ExampleName::ALL.iter().map(|e| e.id()).collect();
                Error::Config(format!(
                    "unknown example `{s}`; valid names: {}",
                    names.join(", ")
                ))
            })
    }
}

/// Report, files and forward oracle of one example run.
#[derive(Clone, Debug)]
pub struct ExampleRun {
    pub report: ExperimentReport,
    /// Written in this order; `report.toml` comes last.
    pub artifacts: Vec<Artifact>,
    pub oracle: Oracle,
}

impl ExampleRun {
    pub fn artifact(&self, path: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.path == path)
    }
}

pub fn run_example(name: ExampleName) -> Result<ExampleRun> {
    run_example_with(name, &name.config())
}

/// Runs an example with a custom scenario or meshes.
///
/// The forward oracle trace is written to `trace.csv` and the inverse runs
/// read that quantised trace, so feeding the file to the CLI reproduces
/// them exactly. Each example performs a noisy run with the configured
/// noise and an exact-data run at `exact_dt`. Inverse failures are recorded
/// in the report instead of aborting the run.
pub fn run_example_with(name: ExampleName, config: &Config) -> Result<ExampleRun> {
    let (s, run) = (&config.scenario, &config.run);
    s.check()?;
    run.check()?;
    let mesh = ForwardMesh::new(s, run.dt, run.dx, run.richardson);
    let oracle = forward_oracle(s, mesh)?;
    let trace = quantize(&oracle.trace)?;
    let mut report = ExperimentReport::new(
        name.id(),
        name.description(),
        NoiseSpec::new(run.sigma, run.seed)?,
        ForwardSummary::new(&mesh, oracle.trace.steps()),
    );
    report.validation = (&validate(s)).into();
    let mut artifacts = vec![Artifact::new("trace.csv", trace_csv(&trace))];

    let exact = RunOptions {
        sigma: 0.0,
        inverse_dt: run.exact_dt.or(run.inverse_dt),
        ..run.clone()
    };
    let plans = [("noisy", run, ""), ("exact", &exact, "_exact")];
    if name.recovers_distribution() {
        for (label, opts, suffix) in plans {
            let entry = match invert_distribution(s, opts, &trace) {
                Ok((observed, rec)) => {
                    artifacts.push(Artifact::new(
                        format!("recovery{suffix}.csv"),
                        recovery_csv(&rec, Some(&s.distribution)),
                    ));
                    RunReport {
                        label: label.into(),
                        status: "ok".into(),
                        method: "triangular".into(),
                        inverse_dt: observed.dt,
                        sigma: opts.sigma,
                        seed: opts.seed,
                        phi_error: Some(phi_error(&rec, s)),
                        ..Default::default()
                    }
                }
                Err(e) => RunReport::failed(label, "triangular", &e),
            };
            report.runs.push(entry);
        }
    } else {
        for (label, opts, suffix) in plans {
            let entry = match invert_inflow(s, opts, &trace) {
                Ok((_, rec)) => {
                    artifacts.push(Artifact::new(
                        format!("reconstruction{suffix}.csv"),
                        reconstruction_csv(&rec, Some(&s.inflow)),
                    ));
                    inflow_run(label, opts, &rec, s, &oracle)
                }
                Err(e) => RunReport::failed(label, opts.method.name(), &e),
            };
            report.runs.push(entry);
        }
        let cross = match name {
            ExampleName::ConstantInflowLong => Some(Method::UniformRecursion),
            ExampleName::ConstantInflow | ExampleName::PeriodicInflowDrifting => {
                Some(Method::Successive)
            }
            _ => None,
        };
        if let Some(method) = cross {
            report.comparisons.push(compare(s, &exact, &trace, method));
        }
    }
    report.checks = checks(name, &report, s);
    artifacts.push(Artifact::new("report.toml", report.to_toml()?));
    Ok(ExampleRun {
        report,
        artifacts,
        oracle,
    })
}

fn inflow_run(
    label: &str,
    opts: &RunOptions,
    rec: &Reconstruction<f64>,
    s: &Scenario<f64>,
    oracle: &Oracle,
) -> RunReport {
    let delta_sup = oracle
        .mass_at(rec.dt)
        .ok()
        .map(|m| sup_distance(&rec.delta, &m.delta));
    RunReport {
        label: label.into(),
        status: "ok".into(),
        method: rec.method.name().into(),
        inverse_dt: rec.dt,
        sigma: opts.sigma,
        seed: opts.seed,
        iterations: (rec.method != Method::Explicit).then_some(rec.diagnostics.iterations),
        delta_sup,
        total_inflow: cumulative_inflow(rec).last().copied(),
        true_total_inflow: Some(s.inflow.integral(0.0, s.horizon)),
        f_error: Some(f_error(rec, &s.inflow)),
        ..Default::default()
    }
}

/// `candidate` against the explicit scheme on the exact-data trace.
fn compare(
    s: &Scenario<f64>,
    exact: &RunOptions,
    trace: &crate::BoundaryTrace<f64>,
    candidate: Method,
) -> Comparison {
    let mut c = Comparison {
        name: format!("{}-vs-explicit", candidate.name()),
        reference: Method::Explicit.name().into(),
        candidate: candidate.name().into(),
        dt: f64::NAN,
        status: "ok".into(),
        sup_delta_diff: None,
        iterations: None,
    };
    let outcome = observed_trace(exact, trace).and_then(|observed| {
        c.dt = observed.dt;
        let reference = reconstruct(&observed, s, Method::Explicit, exact.tol, exact.max_iter)?;
        let other = reconstruct(&observed, s, candidate, exact.tol, exact.max_iter)?;
        Ok((reference, other))
    });
    match outcome {
        Ok((reference, other)) => {
            c.sup_delta_diff = Some(sup_distance(&reference.delta, &other.delta));
            c.iterations = Some(other.diagnostics.iterations);
        }
        Err(e) => c.status = status_of(&e),
    }
    c
}

/// Per-example thresholds, tuned from round-trip runs.
fn checks(name: ExampleName, report: &ExperimentReport, s: &Scenario<f64>) -> Vec<ReportCheck> {
    let f_err = |label: &str| report.run(label).and_then(|r| r.f_error);
    let phi_err = |label: &str| report.run(label).and_then(|r| r.phi_error);
    let f_sup = s.inflow.sup_norm();
    let phi_sup = s.distribution.sup_norm();
    match name {
        ExampleName::ConstantInflow => vec![ReportCheck::at_most(
            "exact_f_relative_sup_error",
            f_err("exact").map(|e| e.sup / f_sup),
            0.05,
        )],
        ExampleName::ConstantInflowLong => vec![
            ReportCheck::at_most(
                "exact_f_sup_error_bounded",
                f_err("exact").map(|e| e.sup),
                2.0 * f_sup,
            ),
            ReportCheck::at_most(
                "noisy_f_sup_error_bounded",
                f_err("noisy").map(|e| e.sup),
                2.0 * f_sup,
            ),
        ],
        ExampleName::PeriodicInflow => vec![ReportCheck::at_most(
            "exact_f_relative_l2_error",
            f_err("exact").map(|e| e.rel_l2),
            0.05,
        )],
        ExampleName::PeriodicInflowLoaded | ExampleName::PeriodicInflowDrifting => {
            vec![ReportCheck::at_most(
                "exact_f_relative_l2_error",
                f_err("exact").map(|e| e.rel_l2),
                0.05,
            )]
        }
        ExampleName::UniformProfile => vec![
            ReportCheck::at_most(
                "exact_phi_interior_sup_error",
                phi_err("exact").map(|e| e.sup_interior),
                0.05 * phi_sup,
            ),
            ReportCheck::at_most(
                "noisy_phi_interior_sup_error",
                phi_err("noisy").map(|e| e.sup_interior),
                0.02,
            ),
        ],
        ExampleName::UniformProfileLong => vec![ReportCheck::at_most(
            "noisy_phi_interior_sup_error_bounded",
            phi_err("noisy").map(|e| e.sup_interior),
            2.0 * phi_sup,
        )],
    }
}
