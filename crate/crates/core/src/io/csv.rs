use std::path::Path;

use crate::experiments::{interval_means, ConvergenceStudy, NoiseStudy};
use crate::forward::{BoundaryTrace, DensityField};
use crate::inverse::distribution::DistributionRecovery;
use crate::inverse::Reconstruction;
use crate::{Error, InflowDistribution, InflowRate, Result};

pub const TRACE_HEADER: &str = "t,k0";
pub const FIELD_HEADER: &str = "t,x,k";
pub const RECONSTRUCTION_HEADER: &str = "t,xi,delta,f_hat";
pub const RECOVERY_HEADER: &str = "x,phi_hat";
pub const CONVERGENCE_HEADER: &str = "dt,f_error,delta_error";
pub const NOISE_HEADER: &str = "sigma,dt,f_error";

/// Relative slack when inferring a uniform time step from a trace file.
const STEP_TOL: f64 = 1e-6;

/// `%.12g`: twelve significant digits, trailing zeros removed.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The trace exactly as a reader of its CSV file sees it.
pub fn quantize(trace: &BoundaryTrace<f64>) -> Result<BoundaryTrace<f64>> {
    let mut q = parse_trace(&trace_csv(trace))?;
    q.sigma = trace.sigma;
    q.seed = trace.seed;
    Ok(q)
}

pub fn trace_csv(trace: &BoundaryTrace<f64>) -> String {
    let mut out = String::with_capacity(trace.values.len() * 32);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (n, v) in trace.values.iter().enumerate() {
        out.push_str(&format!(
            "{},{}\n",
            format_g12(trace.time(n)),
            format_g12(*v)
        ));
    }
    out
}

/// Field snapshots, thinned to at most `max_nodes` spatial nodes per row.
pub fn field_csv(field: &DensityField<f64>, max_nodes: usize) -> String {
    let stride = field.grid.cells.div_ceil(max_nodes.max(1)).max(1);
    let mut out = String::new();
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for snap in &field.snapshots {
        let t = format_g12(field.grid.time(snap.step));
        for (j, k) in snap.values.iter().enumerate().step_by(stride) {
            out.push_str(&format!(
                "{t},{},{}\n",
                format_g12(field.grid.node(j)),
                format_g12(*k)
            ));
        }
    }
    out
}

/// `t, xi, delta, f_hat[, f_true_mean]` with `N + 1` rows; `f_hat` (and the
/// truth column) are empty on the last row since `f_n` lives on `[t_n, t_{n+1})`.
pub fn reconstruction_csv(rec: &Reconstruction<f64>, truth: Option<&InflowRate<f64>>) -> String {
    let means = truth.map(|f| interval_means(f, rec.dt, rec.steps()));
    let mut out = String::new();
    out.push_str(RECONSTRUCTION_HEADER);
    if means.is_some() {
        out.push_str(",f_true_mean");
    }
    out.push('\n');
    for n in 0..rec.delta.len() {
        out.push_str(&format!(
            "{},{},{},",
            format_g12(rec.time(n)),
            format_g12(rec.xi[n]),
            format_g12(rec.delta[n])
        ));
        if let Some(f) = rec.f.get(n) {
            out.push_str(&format_g12(*f));
        }
        if let Some(m) = &means {
            out.push(',');
            if let Some(v) = m.get(n) {
                out.push_str(&format_g12(*v));
            }
        }
        out.push('\n');
    }
    out
}

pub fn recovery_csv(
    rec: &DistributionRecovery<f64>,
    truth: Option<&InflowDistribution<f64>>,
) -> String {
    let mut out = String::new();
    out.push_str(RECOVERY_HEADER);
    if truth.is_some() {
        out.push_str(",phi_true");
    }
    out.push('\n');
    for (x, p) in rec.x().iter().zip(&rec.phi) {
        out.push_str(&format!("{},{}", format_g12(*x), format_g12(*p)));
        if let Some(phi) = truth {
            out.push_str(&format!(",{}", format_g12(phi.density(0.0, *x))));
        }
        out.push('\n');
    }
    out
}

pub fn convergence_csv(study: &ConvergenceStudy) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for ((dt, f), d) in study
        .dts
        .iter()
        .zip(&study.f_errors)
        .zip(&study.delta_errors)
    {
        out.push_str(&format!(
            "{},{},{}\n",
            format_g12(*dt),
            format_g12(*f),
            format_g12(*d)
        ));
    }
    out
}

pub fn noise_csv(study: &NoiseStudy) -> String {
    let mut out = format!("{NOISE_HEADER}\n");
    for ((sigma, dt), e) in study.sigmas.iter().zip(&study.dts).zip(&study.errors) {
        out.push_str(&format!(
            "{},{},{}\n",
            format_g12(*sigma),
            format_g12(*dt),
            format_g12(*e)
        ));
    }
    out
}

/// Reads a `t,k0` file with a uniform time mesh starting at zero.
pub fn read_trace(path: &Path) -> Result<BoundaryTrace<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_trace(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub(crate) fn parse_trace(text: &str) -> Result<BoundaryTrace<f64>> {
    let mut reader = ::csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != TRACE_HEADER {
        return Err(Error::Parse(format!(
            "expected header `{TRACE_HEADER}`, found `{header}`"
        )));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let field = |c: usize| -> Result<f64> {
            row.get(c)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("row {}: bad column {c}", i + 2)))
        };
        times.push(field(0)?);
        values.push(field(1)?);
    }
    if times.len() < 2 {
        return Err(Error::Parse("trace needs at least two rows".into()));
    }
    let n = times.len() - 1;
    let dt = (times[n] - times[0]) / n as f64;
    if times[0].abs() > STEP_TOL * dt {
        return Err(Error::Parse(format!(
            "trace must start at t = 0, found {}",
            times[0]
        )));
    }
    for (i, t) in times.iter().enumerate() {
        if (t - i as f64 * dt).abs() > STEP_TOL * dt {
            return Err(Error::Parse(format!(
                "row {}: time {t} is off the uniform mesh",
                i + 2
            )));
        }
    }
    BoundaryTrace::new(times[n] / n as f64, values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsvKind {
    Trace,
    Field,
    Reconstruction,
    Recovery,
    Convergence,
    Noise,
}

impl CsvKind {
    fn columns(self, header: &str) -> Option<usize> {
        let (base, optional) = match self {
            CsvKind::Trace => (TRACE_HEADER, None),
            CsvKind::Field => (FIELD_HEADER, None),
            CsvKind::Reconstruction => (RECONSTRUCTION_HEADER, Some("f_true_mean")),
            CsvKind::Recovery => (RECOVERY_HEADER, Some("phi_true")),
            CsvKind::Convergence => (CONVERGENCE_HEADER, None),
            CsvKind::Noise => (NOISE_HEADER, None),
        };
        if header == base {
            return Some(base.split(',').count());
        }
        let extra = optional?;
        (header == format!("{base},{extra}")).then(|| base.split(',').count() + 1)
    }
}

impl CsvKind {
    /// Kind of an artifact from its file name, for the files the pipelines write.
    pub fn of_path(path: &str) -> Option<Self> {
        let stem = path.rsplit('/').next()?.strip_suffix(".csv")?;
        Some(match stem {
            "trace" => CsvKind::Trace,
            "field" => CsvKind::Field,
            s if s.starts_with("reconstruction") => CsvKind::Reconstruction,
            s if s.starts_with("recovery") => CsvKind::Recovery,
            "convergence" => CsvKind::Convergence,
            "noise_scaling" => CsvKind::Noise,
            _ => return None,
        })
    }
}

/// Checks a CSV against its documented header and column count, requiring
/// every non-empty cell to parse as a number. Returns the number of data rows.
pub fn check_csv(text: &str, kind: CsvKind) -> Result<usize> {
    if text.contains('\r') {
        return Err(Error::Parse("CSV must use LF line endings".into()));
    }
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let width = kind
        .columns(header)
        .ok_or_else(|| Error::Parse(format!("unexpected header `{header}` for {kind:?}")))?;
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != width {
            return Err(Error::Parse(format!(
                "row {}: {} columns, expected {width}",
                i + 2,
                cells.len()
            )));
        }
        for c in cells.iter().filter(|c| !c.is_empty()) {
            c.parse::<f64>()
                .map_err(|_| Error::Parse(format!("row {}: `{c}` is not a number", i + 2)))?;
        }
        rows += 1;
    }
    Ok(rows)
}
