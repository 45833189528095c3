//! Configuration files, CSV artifacts and manifests.
//!
//! Everything here works on `f64`; the solvers stay generic.

mod config;
mod csv;
mod manifest;

pub use self::config::{
    emit_config, parse_config, parse_config_str, parse_override, Config, RunOptions,
};
pub use self::csv::{
    check_csv, convergence_csv, field_csv, format_g12, noise_csv, quantize, read_trace,
    reconstruction_csv, recovery_csv, trace_csv, CsvKind, CONVERGENCE_HEADER, FIELD_HEADER,
    NOISE_HEADER, RECONSTRUCTION_HEADER, RECOVERY_HEADER, TRACE_HEADER,
};
pub use self::manifest::{sha256_hex, Artifact, Manifest, ManifestEntry};
