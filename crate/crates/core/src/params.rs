//! Dilithium parameter sets (round-3 constants).
//!
//! The modulus and ring degree are shared by every level. The per-level
//! rows of `A`, mask range and hint weight are the round-3 values; `eta`,
//! `tau` and `beta` are the ones the sparse multiplier depends on.

use crate::error::{Error, Result};

/// The prime modulus q = 2^23 - 2^13 + 1.
pub const Q: i32 = 8380417;

/// Ring degree.
pub const N: usize = 256;

/// Dropped bits in `t`.
pub const D: u32 = 13;

/// Seed, `tr` and `c̃` width in bytes.
pub const SEED_BYTES: usize = 32;

/// `µ` and `ρ′` width in bytes.
pub const CRH_BYTES: usize = 64;

/// Packed size of one `t1` polynomial (10-bit coefficients).
pub const POLY_T1_PACKED_BYTES: usize = 320;

/// Packed size of one `t0` polynomial (13-bit coefficients).
pub const POLY_T0_PACKED_BYTES: usize = 416;

/// Largest `tau` across all levels; bounds the challenge index list.
pub const MAX_TAU: usize = 60;

/// A NIST security level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Two,
    Three,
    Five,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Two, Level::Three, Level::Five];

    pub fn from_number(level: u8) -> Result<Self> {
        match level {
            2 => Ok(Level::Two),
            3 => Ok(Level::Three),
            5 => Ok(Level::Five),
            other => Err(Error::UnsupportedLevel(other)),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Level::Two => 2,
            Level::Three => 3,
            Level::Five => 5,
        }
    }

    pub fn params(self) -> &'static ParameterSet {
        match self {
            Level::Two => &DILITHIUM2,
            Level::Three => &DILITHIUM3,
            Level::Five => &DILITHIUM5,
        }
    }
}

impl core::fmt::Display for Level {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Dilithium{}", self.number())
    }
}

/// All scheme constants for one security level.
///
/// Instances only exist as the three frozen statics below; there is no
/// constructor, so an inconsistent `(eta, tau)` pair cannot be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub struct ParameterSet {
    pub level: Level,
    pub q: i32,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub eta: i32,
    pub tau: usize,
    pub gamma1: i32,
    pub gamma2: i32,
    pub beta: i32,
    pub omega: usize,
    pub d: u32,
}

pub static DILITHIUM2: ParameterSet = ParameterSet {
    level: Level::Two,
    q: Q,
    n: N,
    k: 4,
    l: 4,
    eta: 2,
    tau: 39,
    gamma1: 1 << 17,
    gamma2: (Q - 1) / 88,
    beta: 78,
    omega: 80,
    d: D,
};

pub static DILITHIUM3: ParameterSet = ParameterSet {
    level: Level::Three,
    q: Q,
    n: N,
    k: 6,
    l: 5,
    eta: 4,
    tau: 49,
    gamma1: 1 << 19,
    gamma2: (Q - 1) / 32,
    beta: 196,
    omega: 55,
    d: D,
};

pub static DILITHIUM5: ParameterSet = ParameterSet {
    level: Level::Five,
    q: Q,
    n: N,
    k: 8,
    l: 7,
    eta: 2,
    tau: 60,
    gamma1: 1 << 19,
    gamma2: (Q - 1) / 32,
    beta: 120,
    omega: 75,
    d: D,
};

/// Looks up the frozen parameter set for level 2, 3 or 5.
pub fn param_set(level: u8) -> Result<&'static ParameterSet> {
    Level::from_number(level).map(Level::params)
}

impl ParameterSet {
    /// Bits per packed secret coefficient.
    pub const fn eta_bits(&self) -> u32 {
        if self.eta == 2 {
            3
        } else {
            4
        }
    }

    /// Bits per packed `z` coefficient.
    pub const fn gamma1_bits(&self) -> u32 {
        if self.gamma1 == 1 << 17 {
            18
        } else {
            20
        }
    }

    /// Bits per packed `w1` coefficient.
    pub const fn w1_bits(&self) -> u32 {
        if self.gamma2 == (Q - 1) / 88 {
            6
        } else {
            4
        }
    }

    pub const fn poly_eta_packed_bytes(&self) -> usize {
        N * self.eta_bits() as usize / 8
    }

    pub const fn poly_z_packed_bytes(&self) -> usize {
        N * self.gamma1_bits() as usize / 8
    }

    pub const fn poly_w1_packed_bytes(&self) -> usize {
        N * self.w1_bits() as usize / 8
    }

    pub const fn public_key_bytes(&self) -> usize {
        SEED_BYTES + self.k * POLY_T1_PACKED_BYTES
    }

    pub const fn secret_key_bytes(&self) -> usize {
        3 * SEED_BYTES
            + (self.k + self.l) * self.poly_eta_packed_bytes()
            + self.k * POLY_T0_PACKED_BYTES
    }

    pub const fn signature_bytes(&self) -> usize {
        SEED_BYTES + self.l * self.poly_z_packed_bytes() + self.omega + self.k
    }

    /// Number of high-bit buckets `(q - 1) / (2 gamma2)`.
    pub const fn w1_modulus(&self) -> i32 {
        (Q - 1) / (2 * self.gamma2)
    }

    /// Whether every coefficient of `c·s` is guaranteed to fit an `i8`.
    pub const fn product_fits_i8(&self) -> bool {
        self.beta <= i8::MAX as i32
    }
}
