//! Noise injection, error metrics, rate studies and the scripted examples.
//!
//! Everything here works in `f64`.

mod examples;
mod metrics;
mod noise;
mod oracle;
mod pipeline;
mod rate;
mod report;
mod studies;

pub use examples::{run_example, run_example_with, ExampleName, ExampleRun};
pub use metrics::{f_error, f_error_on, interval_means, sup_distance, FError};
pub use noise::{add_noise, NoiseSpec, RNG_ALGORITHM};
pub use oracle::{forward_oracle, forward_run, ForwardMesh, Oracle};
pub use pipeline::{
    inflow_error, inverse_stride, invert_distribution, invert_inflow, nearest_divisor,
    observed_trace, phi_error, PhiError, DEFAULT_COARSENING, INTERIOR_MARGIN,
};
pub use rate::{fit, RateFit};
pub use report::{
    status_of, Comparison, ExperimentReport, ForwardSummary, ReportCheck, RunReport, StudyReport,
    ValidationSummary,
};
pub use studies::{
    convergence_study, noise_scaling_study, ConvergenceStudy, NoiseStudy, SolverSettings,
};
