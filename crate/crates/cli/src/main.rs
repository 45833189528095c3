//! `bathtub`: forward runs, inverse reconstructions and scripted examples
//! from TOML configs, writing CSV artifacts plus a hashed manifest.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bathtub::experiments::{
    convergence_study, forward_oracle, forward_run, invert_distribution, invert_inflow,
    noise_scaling_study, run_example_with, ExampleName, ForwardMesh, ForwardSummary,
    SolverSettings, StudyReport, RNG_ALGORITHM,
};
use bathtub::io::{
    convergence_csv, emit_config, field_csv, noise_csv, parse_config, parse_config_str,
    parse_override, read_trace, reconstruction_csv, recovery_csv, trace_csv, Artifact, Config,
    Manifest,
};
use bathtub::{validate, Error, Result};
use clap::{Args, Parser, Subcommand};

/// Spatial nodes per row kept in `field.csv`.
const FIELD_NODES: usize = 500;
/// Stored time levels in `field.csv`.
const FIELD_SNAPSHOTS: usize = 100;

#[derive(Parser, Debug)]
#[command(
    name = "bathtub",
    version,
    about = "Bathtub model of network trip flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the forward problem; writes trace.csv and field.csv.
    Forward(Common),
    /// Reconstruct the inflow rate from a trace; writes reconstruction.csv.
    InvertInflow {
        #[command(flatten)]
        common: Common,
        /// Boundary trace (`t,k0`); defaults to <out>/trace.csv.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Recover a time-independent inflow distribution; writes recovery.csv.
    InvertDistribution {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exact-data refinement study; writes convergence.csv and report.toml.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Inverse time steps.
        #[arg(long, value_delimiter = ',', default_values_t = [4e-3, 2e-3, 1e-3])]
        dts: Vec<f64>,
    },
    /// Noise study with inverse step factor * sqrt(sigma); writes noise_scaling.csv and report.toml.
    NoiseScaling {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-4, 1e-6])]
        sigmas: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        factor: f64,
    },
    /// Run a built-in example (5.1a, 5.1b, 5.2a, 5.2b, 5.2c, 5.4a, 5.4b).
    Example {
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print which modelling assumptions the scenario satisfies.
    Validate(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario and run options (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Forward time step (run.dt).
    #[arg(long)]
    dt: Option<f64>,
    /// Forward space step (run.dx).
    #[arg(long)]
    dx: Option<f64>,
    /// Noise level (run.sigma).
    #[arg(long)]
    sigma: Option<f64>,
    /// Noise seed (run.seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Override any config key, e.g. `--set T=16` or `--set run.method=successive`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self) -> Result<Vec<(String, toml::Value)>> {
        let mut out = self
            .set
            .iter()
            .map(|s| parse_override(s))
            .collect::<Result<Vec<_>>>()?;
        let mut flag = |key: &str, v: Option<toml::Value>| {
            if let Some(v) = v {
                out.push((key.to_string(), v));
            }
        };
        flag("run.dt", self.dt.map(toml::Value::Float));
        flag("run.dx", self.dx.map(toml::Value::Float));
        flag("run.sigma", self.sigma.map(toml::Value::Float));
        flag(
            "run.seed",
            self.seed.map(|s| toml::Value::Integer(s as i64)),
        );
        Ok(out)
    }

    fn load(&self) -> Result<Config> {
        let path = self
            .config
            .as_deref()
            .ok_or_else(|| Error::Config("--config is required".into()))?;
        parse_config(path, &self.overrides()?)
    }

    /// The file given by `--config`, or `fallback` re-parsed with the overrides.
    fn load_or(&self, fallback: &Config) -> Result<Config> {
        match &self.config {
            Some(path) => parse_config(path, &self.overrides()?),
            None => parse_config_str(&emit_config(fallback)?, &self.overrides()?),
        }
    }
}

fn warn_assumptions(config: &Config) {
    let report = validate(&config.scenario);
    for c in report.failures() {
        eprintln!(
            "warning: {} does not hold ({}): {}",
            c.name, c.assumption, c.detail
        );
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn mesh(config: &Config) -> ForwardMesh {
    let run = &config.run;
    ForwardMesh::new(&config.scenario, run.dt, run.dx, run.richardson)
}

fn trace_path(out: &Path, trace: &Option<PathBuf>) -> PathBuf {
    trace.clone().unwrap_or_else(|| out.join("trace.csv"))
}

fn write(out: &Path, artifacts: &[Artifact]) -> Result<()> {
    let manifest = Manifest::update(out, artifacts)?;
    for e in &manifest.entries {
        println!("{}", out.join(&e.path).display());
    }
    Ok(())
}

fn solver(config: &Config) -> SolverSettings {
    SolverSettings {
        method: config.run.method,
        tol: config.run.tol,
        max_iter: config.run.max_iter,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Forward(common) => {
            let config = common.load()?;
            warn_assumptions(&config);
            let (oracle, field) = forward_run(&config.scenario, mesh(&config), FIELD_SNAPSHOTS)?;
            write(
                &common.out,
                &[
                    Artifact::new("trace.csv", trace_csv(&oracle.trace)),
                    Artifact::new("field.csv", field_csv(&field, FIELD_NODES)),
                ],
            )
        }
        Command::InvertInflow { common, trace } => {
            let config = common.load()?;
            let observed = read_trace(&trace_path(&common.out, &trace))?;
            let (_, rec) = invert_inflow(&config.scenario, &config.run, &observed)?;
            let csv = reconstruction_csv(&rec, Some(&config.scenario.inflow));
            write(&common.out, &[Artifact::new("reconstruction.csv", csv)])
        }
        Command::InvertDistribution { common, trace } => {
            let config = common.load()?;
            let observed = read_trace(&trace_path(&common.out, &trace))?;
            let (_, rec) = invert_distribution(&config.scenario, &config.run, &observed)?;
            let csv = recovery_csv(&rec, Some(&config.scenario.distribution));
            write(&common.out, &[Artifact::new("recovery.csv", csv)])
        }
        Command::Convergence { common, dts } => {
            let config = common.load()?;
            let mesh = mesh(&config);
            let oracle = forward_oracle(&config.scenario, mesh)?;
            let study = convergence_study(&config.scenario, &dts, &oracle, solver(&config))?;
            let report = StudyReport {
                study: "convergence".into(),
                method: config.run.method.name().into(),
                rng: RNG_ALGORITHM.into(),
                forward: ForwardSummary::new(&mesh, oracle.trace.steps()),
                fit: study.fit.clone(),
                delta_fit: study.delta_fit.clone(),
                warnings: Vec::new(),
            };
            write(
                &common.out,
                &[
                    Artifact::new("convergence.csv", convergence_csv(&study)),
                    Artifact::new("report.toml", report.to_toml()?),
                ],
            )
        }
        Command::NoiseScaling {
            common,
            sigmas,
            factor,
        } => {
            let config = common.load()?;
            let mesh = mesh(&config);
            let oracle = forward_oracle(&config.scenario, mesh)?;
            let study = noise_scaling_study(
                &config.scenario,
                &sigmas,
                &oracle,
                config.run.seed,
                factor,
                solver(&config),
            )?;
            for w in &study.warnings {
                eprintln!("warning: {w}");
            }
            let report = StudyReport {
                study: "noise-scaling".into(),
                method: config.run.method.name().into(),
                rng: RNG_ALGORITHM.into(),
                forward: ForwardSummary::new(&mesh, oracle.trace.steps()),
                fit: study.fit.clone(),
                delta_fit: None,
                warnings: study.warnings.clone(),
            };
            write(
                &common.out,
                &[
                    Artifact::new("noise_scaling.csv", noise_csv(&study)),
                    Artifact::new("report.toml", report.to_toml()?),
                ],
            )
        }
        Command::Example { name, common } => {
            let name: ExampleName = name.parse()?;
            let config = common.load_or(&name.config())?;
            let example = run_example_with(name, &config)?;
            write(&common.out, &example.artifacts)
        }
        Command::Validate(common) => {
            let config = common.load()?;
            let report = validate(&config.scenario);
            print!("{report}");
            report.into_result().map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let category = e.category();
            eprintln!("error[{}]: {e}", category.name());
            ExitCode::from(category.exit_code() as u8)
        }
    }
}
