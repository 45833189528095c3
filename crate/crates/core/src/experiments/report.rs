use serde::Serialize;

use super::{FError, ForwardMesh, NoiseSpec, PhiError, RateFit, RNG_ALGORITHM};
use crate::{Error, Result, ValidationReport};

/// Outcome of one inverse run inside an experiment.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub label: String,
    /// `ok`, or the error category followed by its message.
    pub status: String,
    pub method: String,
    pub inverse_dt: f64,
    pub sigma: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// `sup_n |delta_n - delta(t_n)|` against the forward mass curve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_sup: Option<f64>,
    /// Reconstructed `F(T) = dt sum f_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_inflow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_total_inflow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_error: Option<FError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_error: Option<PhiError>,
}

impl RunReport {
    pub fn failed(label: &str, method: &str, e: &Error) -> Self {
        RunReport {
            label: label.into(),
            status: status_of(e),
            method: method.into(),
            ..Default::default()
        }
    }

    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// `category: message` of an error.
pub fn status_of(e: &Error) -> String {
    format!("{}: {e}", e.category().name())
}

/// Two solvers applied to the same trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub reference: String,
    pub candidate: String,
    pub dt: f64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_delta_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

/// A numeric threshold evaluated on the run. All thresholds are tuned from
/// round-trip runs against the forward solver.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl ReportCheck {
    /// Passes when `value <= threshold`; a missing value fails.
    pub fn at_most(name: &str, value: Option<f64>, threshold: f64) -> Self {
        let value = value.unwrap_or(f64::NAN);
        ReportCheck {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub admissible: bool,
    pub failed: Vec<String>,
    pub warnings: Vec<String>,
}

impl From<&ValidationReport> for ValidationSummary {
    fn from(r: &ValidationReport) -> Self {
        ValidationSummary {
            admissible: r.is_admissible(),
            failed: r
                .failures()
                .map(|c| format!("{} ({})", c.name, c.assumption))
                .collect(),
            warnings: r.warnings.clone(),
        }
    }
}

/// Everything an experiment measured, in the config dialect. Wall-clock
/// time is left out so reruns are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub example: String,
    pub description: String,
    pub rng: String,
    pub noise: NoiseSpec,
    pub forward: ForwardSummary,
    pub validation: ValidationSummary,
    pub runs: Vec<RunReport>,
    pub comparisons: Vec<Comparison>,
    pub checks: Vec<ReportCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ForwardSummary {
    pub dt: f64,
    pub dx: f64,
    pub richardson: bool,
    pub trace_dt: f64,
    pub steps: usize,
}

impl ForwardSummary {
    pub fn new(mesh: &ForwardMesh, steps: usize) -> Self {
        ForwardSummary {
            dt: mesh.dt,
            dx: mesh.dx,
            richardson: mesh.richardson,
            trace_dt: mesh.trace_dt(),
            steps,
        }
    }
}

impl ExperimentReport {
    pub fn new(
        example: &str,
        description: &str,
        noise: NoiseSpec,
        forward: ForwardSummary,
    ) -> Self {
        ExperimentReport {
            example: example.into(),
            description: description.into(),
            rng: RNG_ALGORITHM.into(),
            noise,
            forward,
            validation: ValidationSummary::default(),
            runs: Vec::new(),
            comparisons: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn run(&self, label: &str) -> Option<&RunReport> {
        self.runs.iter().find(|r| r.label == label)
    }

    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&ReportCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_toml(&self) -> Result<String> {
        to_toml(self)
    }
}

/// Summary of a refinement or noise study.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyReport {
    pub study: String,
    pub method: String,
    pub rng: String,
    pub forward: ForwardSummary,
    pub fit: RateFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_fit: Option<RateFit>,
    pub warnings: Vec<String>,
}

impl StudyReport {
    pub fn to_toml(&self) -> Result<String> {
        to_toml(self)
    }
}

pub(crate) fn to_toml<S: Serialize>(value: &S) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Config(format!("cannot serialise report: {e}")))
}
