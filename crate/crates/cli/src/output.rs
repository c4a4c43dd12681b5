use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use hanoi_core::decomposition::TREEWIDTH_CAP;
use hanoi_core::pegsets::PEGSET_CAP;
use hanoi_core::separators::{BRUTE_FORCE_CAP, EXPANSION_CAP};
use hanoi_core::setfamilies::EDGE_CAP;
use hanoi_core::state_space::DEFAULT_CAP;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hanoi_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hanoi_core::Error::Capacity { .. }) => 3,
            _ => 2,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Everything a command produces. Nothing is written until the command
/// finishes, so a failed command leaves no partial files.
#[derive(Default)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, Vec<u8>)>,
    /// Verification or acceptance failure (exit code 1).
    pub failed: bool,
}

impl Output {
    pub fn file(&mut self, path: PathBuf, bytes: impl Into<Vec<u8>>) {
        self.files.push((path, bytes.into()));
    }
}

#[derive(Serialize)]
pub struct Digest256 {
    pub path: String,
    pub sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_outputs(out: &Output) -> CliResult<Vec<Digest256>> {
    let mut digests = Vec::new();
    for (path, bytes) in &out.files {
        std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
        digests.push(Digest256 {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }
    if !out.stdout.is_empty() {
        let mut lock = std::io::stdout().lock();
        lock.write_all(out.stdout.as_bytes())
            .map_err(|e| CliError::io(Path::new("-"), e))?;
        digests.push(Digest256 {
            path: "-".into(),
            sha256: sha256_hex(out.stdout.as_bytes()),
        });
    }
    Ok(digests)
}

#[derive(Serialize)]
struct Caps {
    materialized_vertices: u128,
    pegset_vertices: u128,
    subset_edges: u128,
    treewidth_vertices: usize,
    brute_force_vertices: usize,
    expansion_vertices: usize,
}

#[derive(Serialize)]
pub struct Manifest {
    command: String,
    parameters: Vec<String>,
    seed: u64,
    threads: usize,
    caps: Caps,
    wall_time_ms: u128,
    outputs: Vec<Digest256>,
}

impl Manifest {
    pub fn new(cli: &Cli, elapsed: Duration, outputs: Vec<Digest256>) -> Manifest {
        let mut args = std::env::args().skip(1);
        let mut parameters = Vec::new();
        // Drop the manifest path itself so reruns with another path compare equal.
        while let Some(a) = args.next() {
            if a == "--manifest" {
                args.next();
            } else if !a.starts_with("--manifest=") {
                parameters.push(a);
            }
        }
        let command = format!("{:?}", cli.command)
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default()
            .to_lowercase();
        Manifest {
            command,
            parameters,
            seed: cli.seed,
            threads: rayon::current_num_threads(),
            caps: Caps {
                materialized_vertices: DEFAULT_CAP,
                pegset_vertices: PEGSET_CAP,
                subset_edges: EDGE_CAP,
                treewidth_vertices: TREEWIDTH_CAP,
                brute_force_vertices: BRUTE_FORCE_CAP,
                expansion_vertices: EXPANSION_CAP,
            },
            wall_time_ms: elapsed.as_millis(),
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }
}
