//! Four signed 8-bit lanes packed in a `u32`.
//!
//! Lane 0 is the least significant byte. Additions and subtractions wrap
//! within each lane (two's complement) and never carry into a neighbour,
//! matching the semantics of the Cortex-M4 `sadd8`/`ssub8` instructions.

/// Lanes per 32-bit word.
pub const LANES: usize = 4;

const HIGH: u32 = 0x8080_8080;

/// Lane-wise wrapping addition.
#[inline(always)]
pub fn packed_add_lanes(x: u32, y: u32) -> u32 {
    // add the low 7 bits of every lane, then patch the top bit in with xor
    ((x & !HIGH).wrapping_add(y & !HIGH)) ^ ((x ^ y) & HIGH)
}

/// Lane-wise wrapping subtraction.
#[inline(always)]
pub fn packed_sub_lanes(x: u32, y: u32) -> u32 {
    // the forced high bits absorb every borrow
    ((x | HIGH).wrapping_sub(y & !HIGH)) ^ ((x ^ !y) & HIGH)
}

#[inline]
pub fn pack_lanes(lanes: [i8; LANES]) -> u32 {
    u32::from_le_bytes(lanes.map(|v| v as u8))
}

#[inline]
pub fn unpack_lanes(word: u32) -> [i8; LANES] {
    word.to_le_bytes().map(|v| v as i8)
}
