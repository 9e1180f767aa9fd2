//! Turning command-line parameter flags into validated [`HashParams`].

use std::path::PathBuf;

use caqwbh_core::hash::{default_theta1, default_theta2};
use caqwbh_core::HashParams;
use sha2::{Digest as _, Sha256};

use crate::{keyfile, parse_f64, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Instance {
    /// N = 32, k = 8 (256-bit digests).
    #[value(name = "caqwbh-256")]
    Caqwbh256,
    /// N = 64, k = 8 (512-bit digests).
    #[value(name = "caqwbh-512")]
    Caqwbh512,
    /// Requires --q and --k.
    #[value(name = "custom")]
    Custom,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ParamArgs {
    /// Named parameter set.
    #[arg(long, value_enum, default_value = "caqwbh-256", global = true)]
    pub instance: Instance,
    /// Position bits (N = 2^q).
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Digest bits per position.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// First coin angle in radians, as a decimal string.
    #[arg(long, global = true)]
    pub theta1: Option<String>,
    /// Second coin angle in radians, as a decimal string.
    #[arg(long, global = true)]
    pub theta2: Option<String>,
    /// Key file whose `key1` amplitudes replace the default initial state.
    #[arg(long, global = true)]
    pub alpha_file: Option<PathBuf>,
}

impl Default for ParamArgs {
    fn default() -> Self {
        ParamArgs {
            instance: Instance::Caqwbh256,
            q: None,
            k: None,
            theta1: None,
            theta2: None,
            alpha_file: None,
        }
    }
}

impl ParamArgs {
    pub fn build(&self) -> Result<HashParams> {
        let (q, k) = match self.instance {
            Instance::Caqwbh256 => (5, 8),
            Instance::Caqwbh512 => (6, 8),
            Instance::Custom => match (self.q, self.k) {
                (Some(q), Some(k)) => (q, k),
                _ => return Err(CliError::Usage("--instance custom requires --q and --k".into())),
            },
        };
        let q = self.q.unwrap_or(q);
        let k = self.k.unwrap_or(k);
        let theta1 = self.theta1.as_deref().map(parse_f64).transpose()?.unwrap_or_else(default_theta1);
        let theta2 = self.theta2.as_deref().map(parse_f64).transpose()?.unwrap_or_else(default_theta2);
        let params = HashParams::new(q, k, theta1, theta2)?;
        match &self.alpha_file {
            Some(path) => {
                let alpha = keyfile::KeyFile::load(path)?.key1()?;
                Ok(params.with_alpha(alpha)?)
            }
            None => Ok(params),
        }
    }
}

/// `caqwbh-256`, `caqwbh-512` or `custom`.
pub fn instance_name(params: &HashParams) -> &'static str {
    if *params == HashParams::caqwbh256() {
        "caqwbh-256"
    } else if *params == HashParams::caqwbh512() {
        "caqwbh-512"
    } else {
        "custom"
    }
}

/// Short hash of the exact binary64 parameter values.
pub fn fingerprint(params: &HashParams) -> String {
    let mut h = Sha256::new();
    h.update(b"caqwbh/v1");
    h.update(params.q().to_be_bytes());
    h.update(params.k().to_be_bytes());
    h.update(params.theta1().to_bits().to_be_bytes());
    h.update(params.theta2().to_bits().to_be_bytes());
    for a in params.alpha() {
        h.update(a.re.to_bits().to_be_bytes());
        h.update(a.im.to_bits().to_be_bytes());
    }
    crate::hex_encode(&h.finalize()[..16])
}
