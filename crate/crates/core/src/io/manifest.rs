use std::path::Path;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A file produced by a pipeline, held in memory until written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub path: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(path: impl Into<String>, contents: String) -> Self {
        Artifact {
            path: path.into(),
            contents,
        }
    }

    /// Data rows: lines after the header for CSV files, all lines otherwise.
    pub fn rows(&self) -> usize {
        let lines = self.contents.lines().count();
        if self.path.ends_with(".csv") {
            lines.saturating_sub(1)
        } else {
            lines
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub rows: usize,
}

/// One `relative-path,sha256,rows` line per artifact, no header.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub const FILE_NAME: &'static str = "manifest.csv";

    pub fn from_artifacts(artifacts: &[Artifact]) -> Self {
        Manifest {
            entries: artifacts
                .iter()
                .map(|a| ManifestEntry {
                    path: a.path.clone(),
                    sha256: sha256_hex(a.contents.as_bytes()),
                    rows: a.rows(),
                })
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{},{},{}\n", e.path, e.sha256, e.rows))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .enumerate()
            .map(|(i, line)| {
                let mut parts = line.split(',');
                match (parts.next(), parts.next(), parts.next(), parts.next()) {
                    (Some(p), Some(h), Some(r), None) if h.len() == 64 => Ok(ManifestEntry {
                        path: p.to_string(),
                        sha256: h.to_string(),
                        rows: r.parse().map_err(|_| {
                            Error::Parse(format!("manifest line {}: bad row count", i + 1))
                        })?,
                    }),
                    _ => Err(Error::Parse(format!("manifest line {}: malformed", i + 1))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Manifest { entries })
    }

    pub fn get(&self, path: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.path == path)
    }

    /// Writes every artifact under `dir` followed by the manifest itself.
    pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        for a in artifacts {
            let path = dir.join(&a.path);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, &a.contents)?;
        }
        let manifest = Manifest::from_artifacts(artifacts);
        std::fs::write(dir.join(Self::FILE_NAME), manifest.render())?;
        Ok(manifest)
    }

    /// Like [`Manifest::write_all`], but keeps entries of an existing
    /// manifest in `dir` for files not rewritten here.
    pub fn update(dir: &Path, artifacts: &[Artifact]) -> Result<Self> {
        let previous = match std::fs::read_to_string(dir.join(Self::FILE_NAME)) {
            Ok(text) => Manifest::parse(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Manifest::default(),
            Err(e) => return Err(e.into()),
        };
        Manifest::write_all(dir, artifacts)?;
        let mut manifest = Manifest::from_artifacts(artifacts);
        let kept: Vec<ManifestEntry> = previous
            .entries
            .into_iter()
            .filter(|e| manifest.get(&e.path).is_none() && dir.join(&e.path).is_file())
            .collect();
        manifest.entries.splice(0..0, kept);
        std::fs::write(dir.join(Self::FILE_NAME), manifest.render())?;
        Ok(manifest)
    }

    /// Recomputes every hash under `dir`; returns the paths that differ.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for e in &self.entries {
            let bytes = std::fs::read(dir.join(&e.path))?;
            if sha256_hex(&bytes) != e.sha256 {
                bad.push(e.path.clone());
            }
        }
        Ok(bad)
    }
}
