//! Multiplication by the sparse challenge `c ∈ B_τ` without the NTT.
//!
//! The challenge is encoded as a list of positions ([`ChallengeIndexList`])
//! and the secret as the 512-byte array `(-s, s)` ([`ExtendedSecret`]).
//! Coefficient `i` of `c·s` is then
//!
//! ```text
//!     Σ_{k : c_k = +1} ext[256 + i - k]  -  Σ_{k : c_k = -1} ext[256 + i - k]
//! ```
//!
//! because `ext[256 + i - k]` is `s_{i-k}` for `i ≥ k` and `-s_{256+i-k}`
//! otherwise, which is exactly the negacyclic wrap. Each challenge position
//! therefore contributes one contiguous 256-byte window, and the sums are
//! evaluated in packed 8-bit lanes ([`swar`]).

mod challenge;
mod fused;
mod mul;
pub mod swar;

pub use challenge::{decode_challenge, encode_challenge, ChallengeIndexList};
pub use fused::{compute_then_check_r0, compute_then_check_z, fused_r0, fused_z};
pub use mul::{
    exact_product, sparse_mul_branchless, sparse_mul_branchless_metered, sparse_mul_indexed,
    BATCH_LANES,
};

use crate::error::{Error, Result};
use crate::params::{N, Q};
use crate::ring::reduce::reduce_i64;
use crate::ring::Poly;

/// A polynomial with 8-bit signed coefficients (secrets and challenges).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallPoly {
    pub coeffs: [i8; N],
}

impl core::fmt::Debug for SmallPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "SmallPoly({:?}..)", &self.coeffs[..16])
    }
}

impl Default for SmallPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl SmallPoly {
    pub const fn zero() -> Self {
        Self { coeffs: [0; N] }
    }

    /// Lifts into R_q with coefficients in [0, q).
    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (o, &c) in p.coeffs.iter_mut().zip(&self.coeffs) {
            *o = reduce_i64(i64::from(c));
        }
        p
    }

    /// Number of nonzero coefficients.
    pub fn hamming_weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn max_abs(&self) -> i32 {
        self.coeffs.iter().map(|&c| i32::from(c).abs()).max().unwrap_or(0)
    }

    /// Errors unless every |coefficient| ≤ `bound`.
    pub fn check_bound(&self, bound: i32) -> Result<()> {
        match self.coeffs.iter().position(|&c| i32::from(c).abs() > bound) {
            None => Ok(()),
            Some(index) => Err(Error::CoefficientOutOfRange {
                index,
                value: i64::from(self.coeffs[index]),
                min: -i64::from(bound),
                max: i64::from(bound),
            }),
        }
    }

    /// Whether this is an element of B_τ.
    pub fn is_in_ball(&self, tau: usize) -> bool {
        self.coeffs.iter().all(|&c| (-1..=1).contains(&c)) && self.hamming_weight() == tau
    }
}

/// The secret laid out as `(-s_0, …, -s_255, s_0, …, s_255)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtendedSecret {
    ext: [i8; 2 * N],
}

impl core::fmt::Debug for ExtendedSecret {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("ExtendedSecret(..)")
    }
}

impl ExtendedSecret {
    /// Builds the extended layout, checking |s_j| ≤ `eta`.
    pub fn new(s: &SmallPoly, eta: i32) -> Result<Self> {
        s.check_bound(eta)?;
        Ok(Self::from_small_unchecked(s))
    }

    pub(crate) fn from_small_unchecked(s: &SmallPoly) -> Self {
        let mut ext = [0i8; 2 * N];
        let (neg, pos) = ext.split_at_mut(N);
        for ((n, p), &c) in neg.iter_mut().zip(pos.iter_mut()).zip(&s.coeffs) {
            *n = -c;
            *p = c;
        }
        Self { ext }
    }

    pub fn as_bytes(&self) -> &[i8; 2 * N] {
        &self.ext
    }

    /// The original secret (upper half).
    pub fn secret(&self) -> SmallPoly {
        let mut s = SmallPoly::zero();
        s.coeffs.copy_from_slice(&self.ext[N..]);
        s
    }

    /// Whether `ext[j] + ext[256 + j] = 0` and |ext[j]| ≤ `eta` for all j.
    pub fn check_layout(&self, eta: i32) -> bool {
        (0..N).all(|j| {
            i16::from(self.ext[j]) + i16::from(self.ext[N + j]) == 0 && i32::from(self.ext[j]).abs() <= eta
        })
    }

    /// Four consecutive bytes starting at any (unaligned) offset.
    #[inline(always)]
    pub(crate) fn load_word(&self, offset: usize) -> u32 {
        let b = &self.ext[offset..offset + 4];
        u32::from_le_bytes([b[0] as u8, b[1] as u8, b[2] as u8, b[3] as u8])
    }
}

/// `c·s` held in wrapping 8-bit lanes.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct ProductPoly8 {
    pub coeffs: [i8; N],
}

impl core::fmt::Debug for ProductPoly8 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "ProductPoly8({:?}..)", &self.coeffs[..16])
    }
}

impl ProductPoly8 {
    /// Lifts into R_q with coefficients in [0, q).
    pub fn lift(&self) -> Poly {
        let mut p = Poly::zero();
        for (o, &c) in p.coeffs.iter_mut().zip(&self.coeffs) {
            *o = i32::from(c) + ((i32::from(c) >> 31) & Q);
        }
        p
    }

    /// Signed centered coefficients.
    pub fn to_centered(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.map(i32::from))
    }

    /// Number of coefficients that differ from the exact product, i.e. that
    /// wrapped around the 8-bit range.
    pub fn wrapped_lanes(&self, exact: &[i32; N]) -> usize {
        self.coeffs
            .iter()
            .zip(exact)
            .filter(|(&a, &b)| i32::from(a) != b)
            .count()
    }
}
