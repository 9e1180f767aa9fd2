//! Bit/byte conversions. Bytes are always unpacked most-significant bit first.

use alloc::vec::Vec;

/// Expands bytes into bits, MSB first.
pub fn unpack_msb(bytes: &[u8]) -> Vec<bool> {
    let mut out = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        for j in (0..8).rev() {
            out.push((b >> j) & 1 == 1);
        }
    }
    out
}

/// Packs bits MSB first; a trailing partial byte is zero-filled on the right.
pub fn pack_msb(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (j, &b)| acc | ((b as u8) << (7 - j)))
        })
        .collect()
}

/// Appends the low `width` bits of `value`, most-significant first.
pub fn push_group(out: &mut Vec<bool>, value: u64, width: u32) {
    for j in (0..width).rev() {
        out.push((value >> j) & 1 == 1);
    }
}

/// Parses a string of `'0'`/`'1'` characters.
pub fn parse_bit_string(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}
