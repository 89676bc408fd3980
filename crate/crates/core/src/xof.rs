//! SHAKE-128 / SHAKE-256 extendable-output functions over Keccak-f[1600].
//!
//! A sponge accepts any number of `absorb` calls, then switches to
//! squeezing on the first `squeeze`. The output is a single stream: the
//! way it is split into `squeeze` calls does not change the bytes.

use crate::error::{Error, Result};

const ROUND_CONSTANTS: [u64; 24] = [
    0x0000_0000_0000_0001,
    0x0000_0000_0000_8082,
    0x8000_0000_0000_808a,
    0x8000_0000_8000_8000,
    0x0000_0000_0000_808b,
    0x0000_0000_8000_0001,
    0x8000_0000_8000_8081,
    0x8000_0000_0000_8009,
    0x0000_0000_0000_008a,
    0x0000_0000_0000_0088,
    0x0000_0000_8000_8009,
    0x0000_0000_8000_000a,
    0x0000_0000_8000_808b,
    0x8000_0000_0000_008b,
    0x8000_0000_0000_8089,
    0x8000_0000_0000_8003,
    0x8000_0000_0000_8002,
    0x8000_0000_0000_0080,
    0x0000_0000_0000_800a,
    0x8000_0000_8000_000a,
    0x8000_0000_8000_8081,
    0x8000_0000_0000_8080,
    0x0000_0000_8000_0001,
    0x8000_0000_8000_8008,
];

// rho offsets and pi destinations, walked along the pi cycle starting at lane 1
const RHO: [u32; 24] = [
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44,
];
const PI: [usize; 24] = [
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1,
];

/// The Keccak-f[1600] permutation.
pub fn keccak_f1600(a: &mut [u64; 25]) {
    for rc in ROUND_CONSTANTS {
        // theta
        let mut c = [0u64; 5];
        for x in 0..5 {
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        }
        for x in 0..5 {
            let d = c[(x + 4) % 5] ^ c[(x + 1) % 5].rotate_left(1);
            for y in (0..25).step_by(5) {
                a[y + x] ^= d;
            }
        }
        // rho + pi
        let mut last = a[1];
        for i in 0..24 {
            let j = PI[i];
            let tmp = a[j];
            a[j] = last.rotate_left(RHO[i]);
            last = tmp;
        }
        // chi
        for y in (0..25).step_by(5) {
            let row = [a[y], a[y + 1], a[y + 2], a[y + 3], a[y + 4]];
            for x in 0..5 {
                a[y + x] = row[x] ^ (!row[(x + 1) % 5] & row[(x + 2) % 5]);
            }
        }
        // iota
        a[0] ^= rc;
    }
}

/// Which SHAKE instance a sponge implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XofVariant {
    Shake128,
    Shake256,
}

impl XofVariant {
    /// Block size in bytes.
    pub const fn rate(self) -> usize {
        match self {
            XofVariant::Shake128 => 168,
            XofVariant::Shake256 => 136,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Absorbing,
    Squeezing,
}

/// Incremental SHAKE sponge.
#[derive(Clone)]
pub struct XofState {
    variant: XofVariant,
    sponge: [u64; 25],
    position: usize,
    phase: Phase,
    squeezed: u64,
}

impl core::fmt::Debug for XofState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("XofState")
            .field("variant", &self.variant)
            .field("position", &self.position)
            .field("phase", &self.phase)
            .finish_non_exhaustive()
    }
}

impl XofState {
    pub fn new(variant: XofVariant) -> Self {
        Self {
            variant,
            sponge: [0; 25],
            position: 0,
            phase: Phase::Absorbing,
            squeezed: 0,
        }
    }

    pub fn shake128() -> Self {
        Self::new(XofVariant::Shake128)
    }

    pub fn shake256() -> Self {
        Self::new(XofVariant::Shake256)
    }

    pub fn variant(&self) -> XofVariant {
        self.variant
    }

    pub fn rate(&self) -> usize {
        self.variant.rate()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// Total bytes produced by `squeeze` so far.
    pub fn squeezed_bytes(&self) -> u64 {
        self.squeezed
    }

    #[inline]
    fn xor_byte(&mut self, index: usize, byte: u8) {
        self.sponge[index / 8] ^= u64::from(byte) << (8 * (index % 8));
    }

    #[inline]
    fn byte(&self, index: usize) -> u8 {
        (self.sponge[index / 8] >> (8 * (index % 8))) as u8
    }

    pub fn absorb(&mut self, data: &[u8]) -> Result<()> {
        if self.phase != Phase::Absorbing {
            return Err(Error::AbsorbAfterSqueeze);
        }
        let rate = self.rate();
        for &b in data {
            self.xor_byte(self.position, b);
            self.position += 1;
            if self.position == rate {
                keccak_f1600(&mut self.sponge);
                self.position = 0;
            }
        }
        Ok(())
    }

    /// Absorbs and returns `self`, for building a sponge in one expression.
    pub fn chain(mut self, data: &[u8]) -> Result<Self> {
        self.absorb(data)?;
        Ok(self)
    }

    fn finalize(&mut self) {
        let rate = self.rate();
        self.xor_byte(self.position, 0x1f);
        self.xor_byte(rate - 1, 0x80);
        keccak_f1600(&mut self.sponge);
        self.position = 0;
        self.phase = Phase::Squeezing;
    }

    /// Fills `out` with the next bytes of the output stream.
    pub fn squeeze(&mut self, out: &mut [u8]) {
        if self.phase == Phase::Absorbing {
            self.finalize();
        }
        let rate = self.rate();
        for o in out.iter_mut() {
            if self.position == rate {
                keccak_f1600(&mut self.sponge);
                self.position = 0;
            }
            *o = self.byte(self.position);
            self.position += 1;
        }
        self.squeezed += out.len() as u64;
        // keep position < rate between calls
        if self.position == rate {
            keccak_f1600(&mut self.sponge);
            self.position = 0;
        }
    }

    pub fn squeeze_vec(&mut self, count: usize) -> Vec<u8> {
        let mut out = vec![0; count];
        self.squeeze(&mut out);
        out
    }

    pub fn squeeze_array<const L: usize>(&mut self) -> [u8; L] {
        let mut out = [0; L];
        self.squeeze(&mut out);
        out
    }
}

/// One-shot SHAKE-256 over the concatenation of `parts`.
pub fn shake256<const L: usize>(parts: &[&[u8]]) -> [u8; L] {
    let mut xof = XofState::shake256();
    for part in parts {
        xof.absorb(part).expect("fresh sponge");
    }
    xof.squeeze_array()
}
