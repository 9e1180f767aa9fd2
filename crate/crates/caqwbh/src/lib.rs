//! Std companion to `caqwbh-core`: parameter configuration, key files,
//! structured reports, golden test vectors, and a thread-pool trial runner.
//! The `caqwbh` binary is a thin front end over these modules.

pub mod config;
pub mod keyfile;
pub mod parallel;
pub mod report;
pub mod vectors;

use std::io;

pub use caqwbh_core as core;

/// Errors surfaced by the CLI, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Params(#[from] caqwbh_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("acceptance check failed:\n  {}", .0.join("\n  "))]
    Assertion(Vec<String>),
    #[error("{} test vector(s) mismatched:\n  {}", .0.len(), .0.join("\n  "))]
    VectorMismatch(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Params(_) | CliError::Usage(_) => 2,
            CliError::Assertion(_) => 3,
            CliError::VectorMismatch(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Shortest-free formatting used everywhere a binary64 is echoed: 17
/// significant digits, which round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("not a decimal number: {s:?}")))
}

pub fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn hex_decode(s: &str) -> Result<Vec<u8>> {
    caqwbh_core::Digest::from_hex(s)
        .map(|d| d.into_bytes())
        .map_err(|_| CliError::Usage(format!("invalid hex string: {s:?}")))
}
