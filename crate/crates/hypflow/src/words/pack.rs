//! Compact bit packings of short words used as hash keys.

use super::{Letter, Word};

/// Letters packed 4 bits each, length in the top nibble. Holds up to 15
/// letters over alphabets of at most 16 letters.
pub const MAX_PACKED_U64: usize = 15;

pub fn pack_u64(letters: &[Letter]) -> u64 {
    debug_assert!(letters.len() <= MAX_PACKED_U64);
    let mut v = (letters.len() as u64) << 60;
    for (i, l) in letters.iter().enumerate() {
        v |= (l.0 as u64) << (4 * i);
    }
    v
}

pub fn unpack_u64(v: u64) -> Word {
    let n = (v >> 60) as usize;
    let mut letters = Vec::with_capacity(n);
    for i in 0..n {
        letters.push(Letter(((v >> (4 * i)) & 0xf) as u8));
    }
    Word(letters)
}

/// Packs up to 30 letters into a `u128`, length in the top byte.
pub const MAX_PACKED_U128: usize = 30;

pub fn pack_u128(letters: &[Letter]) -> u128 {
    debug_assert!(letters.len() <= MAX_PACKED_U128);
    let mut v = (letters.len() as u128) << 120;
    for (i, l) in letters.iter().enumerate() {
        v |= (l.0 as u128) << (4 * i);
    }
    v
}
