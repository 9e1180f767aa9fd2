//! Golden test vectors: a fixed message corpus, its digests, and a JSON file
//! format that can be verified on another machine.

use std::fs;
use std::path::Path;

use caqwbh_core::bits::{pack_msb, unpack_msb};
use caqwbh_core::{hash, HashParams, TrialRng};
use serde::{Deserialize, Serialize};

use crate::config::fingerprint;
use crate::report::ParamsDoc;
use crate::{hex_decode, hex_encode, CliError, Result};

pub const FORMAT: &str = "caqwbh-vectors/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    pub name: String,
    pub message_bits: usize,
    /// Message bits packed MSB first, zero padded to a whole byte.
    pub message_hex: String,
    pub digest: String,
}

impl Vector {
    pub fn message(&self) -> Result<Vec<bool>> {
        let mut bits = unpack_msb(&hex_decode(&self.message_hex)?);
        if self.message_bits > bits.len() || bits.len() - self.message_bits >= 8 {
            return Err(CliError::Usage(format!(
                "vector {}: message_bits does not match message_hex",
                self.name
            )));
        }
        bits.truncate(self.message_bits);
        Ok(bits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFile {
    pub format: String,
    pub params: ParamsDoc,
    pub vectors: Vec<Vector>,
}

fn ascii(s: &str) -> Vec<bool> {
    unpack_msb(s.as_bytes())
}

fn random(tag: u64, len: usize) -> Vec<bool> {
    TrialRng::new(0x7665_6374, tag).bits(len)
}

/// Named messages covering empty, sub-block, block-aligned and padded
/// lengths for a block width of `n` bits.
pub fn corpus(n: usize) -> Vec<(String, Vec<bool>)> {
    let mut out: Vec<(String, Vec<bool>)> = vec![
        ("empty".into(), vec![]),
        ("bit-0".into(), vec![false]),
        ("bit-1".into(), vec![true]),
        ("bits-101".into(), vec![true, false, true]),
        ("byte-00".into(), vec![false; 8]),
        ("byte-ff".into(), vec![true; 8]),
        ("ascii-abc".into(), ascii("abc")),
    ];
    let lengths = [
        ("half-block", n / 2),
        ("block-minus-1", n - 1),
        ("block", n),
        ("block-plus-1", n + 1),
        ("two-blocks-minus-1", 2 * n - 1),
        ("two-blocks", 2 * n),
        ("two-blocks-plus-1", 2 * n + 1),
        ("three-blocks-plus-5", 3 * n + 5),
        ("bits-1000", 1000),
        ("bits-1024", 1024),
    ];
    for (i, (name, len)) in lengths.into_iter().enumerate() {
        out.push((format!("random-{name}"), random(i as u64, len)));
    }
    out.push(("zeros-block".into(), vec![false; n]));
    out.push(("ones-block".into(), vec![true; n]));
    out.push(("alternating-5-blocks".into(), (0..5 * n).map(|i| i % 2 == 0).collect()));
    out.push(("zeros-1024".into(), vec![false; 1024]));
    out.push((
        "ascii-fox".into(),
        ascii("The quick brown fox jumps over the lazy dog"),
    ));
    out.push(("random-bits-4099".into(), random(100, 4099)));
    out
}

pub fn generate(params: &HashParams) -> Result<VectorFile> {
    let vectors = corpus(params.positions())
        .into_iter()
        .map(|(name, msg)| {
            Ok(Vector {
                name,
                message_bits: msg.len(),
                message_hex: hex_encode(&pack_msb(&msg)),
                digest: hash(params, &msg)?.to_hex(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorFile {
        format: FORMAT.into(),
        params: ParamsDoc::new(params),
        vectors,
    })
}

/// Recomputes every digest. Returns the number of vectors checked, or
/// [`CliError::VectorMismatch`] naming each offending entry.
pub fn verify(file: &VectorFile) -> Result<usize> {
    if file.format != FORMAT {
        return Err(CliError::Usage(format!("unknown vector format {:?}", file.format)));
    }
    let params = file.params.to_params()?;
    let mut bad = Vec::new();
    let fp = fingerprint(&params);
    if fp != file.params.fingerprint {
        bad.push(format!("params: fingerprint {fp}, file says {}", file.params.fingerprint));
    }
    for v in &file.vectors {
        let got = hash(&params, &v.message()?)?.to_hex();
        if !got.eq_ignore_ascii_case(&v.digest) {
            bad.push(format!("{}: expected {}, got {got}", v.name, v.digest));
        }
    }
    if bad.is_empty() {
        Ok(file.vectors.len())
    } else {
        Err(CliError::VectorMismatch(bad))
    }
}

impl VectorFile {
    pub fn to_json(&self) -> String {
        crate::report::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed vector file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }
}
