use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits;
use crate::error::{Error, Result};

/// An `N·k`-bit hash value. `N·k` is always a multiple of 8, so the digest is
/// stored as bytes; bit `j` of the digest is bit `7 − j % 8` of byte `j / 8`.
///
/// The canonical text form is lowercase hex with no separators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digest {
    bytes: Vec<u8>,
}

impl Digest {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Digest { bytes }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() % 8 != 0 {
            return Err(Error::InvalidSize("digest bit length must be a multiple of 8"));
        }
        Ok(Digest {
            bytes: bits::pack_msb(bits),
        })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn bit_len(&self) -> usize {
        self.bytes.len() * 8
    }

    pub fn bits(&self) -> Vec<bool> {
        bits::unpack_msb(&self.bytes)
    }

    pub fn bit(&self, j: usize) -> bool {
        (self.bytes[j / 8] >> (7 - j % 8)) & 1 == 1
    }

    /// Number of differing bit positions.
    pub fn hamming(&self, other: &Digest) -> Result<u32> {
        if self.bytes.len() != other.bytes.len() {
            return Err(Error::SizeMismatch {
                expected: self.bytes.len(),
                found: other.bytes.len(),
            });
        }
        Ok(self
            .bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum())
    }

    pub fn to_hex(&self) -> String {
        use fmt::Write;
        let mut s = String::with_capacity(self.bytes.len() * 2);
        for b in &self.bytes {
            let _ = write!(s, "{b:02x}");
        }
        s
    }

    /// Accepts upper- or lowercase hex with an even number of digits.
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() % 2 != 0 {
            return Err(Error::Parse("odd number of hex digits"));
        }
        let raw = s.as_bytes();
        let nibble = |c: u8| -> Result<u8> {
            match c {
                b'0'..=b'9' => Ok(c - b'0'),
                b'a'..=b'f' => Ok(c - b'a' + 10),
                b'A'..=b'F' => Ok(c - b'A' + 10),
                _ => Err(Error::Parse("invalid hex digit")),
            }
        };
        let bytes = raw
            .chunks_exact(2)
            .map(|p| Ok((nibble(p[0])? << 4) | nibble(p[1])?))
            .collect::<Result<Vec<u8>>>()?;
        Ok(Digest { bytes })
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}
