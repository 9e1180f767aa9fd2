//! Key file format (TOML).
//!
//! ```toml
//! [params]
//! q = 5
//! k = 8
//! theta1 = "9.2729521800161230e-1"
//! theta2 = "1.0808390005411683e0"
//!
//! [key]
//! # (re, im) pairs, ascending position, 17 significant digits
//! key1 = [["1.0000000000000000e0", "0.0000000000000000e0"], ...]
//! key2 = "00000000"
//! key2_bits = 32
//! ```
//!
//! `key2` is optional when the file only supplies an initial state
//! (`--alpha-file`). Normalization is re-checked on load.

use std::fs;
use std::path::Path;

use caqwbh_core::bits::{pack_msb, unpack_msb};
use caqwbh_core::{Amplitude, HashParams, MacKey};
use serde::{Deserialize, Serialize};

use crate::{fmt_f64, hex_decode, hex_encode, parse_f64, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsSection {
    pub q: u32,
    pub k: u32,
    pub theta1: String,
    pub theta2: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeySection {
    pub key1: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key2_bits: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyFile {
    pub params: ParamsSection,
    pub key: KeySection,
}

pub fn encode_amplitudes(amps: &[Amplitude]) -> Vec<[String; 2]> {
    amps.iter().map(|a| [fmt_f64(a.re), fmt_f64(a.im)]).collect()
}

pub fn decode_amplitudes(pairs: &[[String; 2]]) -> Result<Vec<Amplitude>> {
    pairs
        .iter()
        .map(|[re, im]| Ok(Amplitude::new(parse_f64(re)?, parse_f64(im)?)))
        .collect()
}

impl KeyFile {
    pub fn new(params: &HashParams, key1: &[Amplitude], key2: Option<&[bool]>) -> Self {
        KeyFile {
            params: ParamsSection {
                q: params.q(),
                k: params.k(),
                theta1: fmt_f64(params.theta1()),
                theta2: fmt_f64(params.theta2()),
            },
            key: KeySection {
                key1: encode_amplitudes(key1),
                key2: key2.map(|bits| hex_encode(&pack_msb(bits))),
                key2_bits: key2.map(<[bool]>::len),
            },
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("malformed key file: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("key file serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml())?;
        Ok(())
    }

    /// Hash parameters with `key1` as the initial state.
    pub fn params(&self) -> Result<HashParams> {
        let p = &self.params;
        let params = HashParams::new(p.q, p.k, parse_f64(&p.theta1)?, parse_f64(&p.theta2)?)?;
        Ok(params.with_alpha(self.key1()?)?)
    }

    pub fn key1(&self) -> Result<Vec<Amplitude>> {
        decode_amplitudes(&self.key.key1)
    }

    pub fn key2(&self) -> Result<Vec<bool>> {
        let hex = self
            .key
            .key2
            .as_deref()
            .ok_or_else(|| CliError::Usage("key file has no key2".into()))?;
        let mut bits = unpack_msb(&hex_decode(hex)?);
        let len = self.key.key2_bits.unwrap_or(bits.len());
        if len > bits.len() {
            return Err(CliError::Usage("key2_bits exceeds the key2 hex length".into()));
        }
        bits.truncate(len);
        Ok(bits)
    }

    pub fn mac_key(&self) -> Result<(HashParams, MacKey)> {
        let n = 1usize << self.params.q;
        let key = MacKey::new(self.key1()?, self.key2()?, n)?;
        let p = &self.params;
        let params = HashParams::new(p.q, p.k, parse_f64(&p.theta1)?, parse_f64(&p.theta2)?)?;
        Ok((params, key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use caqwbh_core::hash::unit_alpha;

    #[test]
    fn round_trip_is_exact() {
        let params = HashParams::caqwbh256();
        let r = 0.6f64;
        let mut key1 = vec![Amplitude::ZERO; 32];
        key1[3] = Amplitude::new(r, 0.0);
        key1[7] = Amplitude::new(0.0, -0.8);
        let key2: Vec<bool> = (0..45).map(|i| i % 3 == 1).collect();
        let file = KeyFile::new(&params, &key1, Some(&key2));
        let back = KeyFile::from_toml(&file.to_toml()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.key1().unwrap(), key1);
        assert_eq!(back.key2().unwrap(), key2);
        let (p, key) = back.mac_key().unwrap();
        assert_eq!(p, params);
        assert_eq!(key.key2(), &key2[..]);
        assert_eq!(back.params().unwrap().alpha(), &key1[..]);
    }

    #[test]
    fn unnormalized_key_is_rejected() {
        let params = HashParams::caqwbh256();
        let file = KeyFile::new(&params, &vec![Amplitude::real(0.5); 32], Some(&[false; 32]));
        assert_eq!(file.mac_key().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn alpha_only_file() {
        let params = HashParams::caqwbh256();
        let file = KeyFile::new(&params, &unit_alpha(32), None);
        assert!(!file.to_toml().contains("key2"));
        assert!(file.key2().is_err());
        assert_eq!(file.params().unwrap(), params);
    }

    #[test]
    fn malformed_text() {
        assert!(KeyFile::from_toml("not = [toml").is_err());
    }
}
