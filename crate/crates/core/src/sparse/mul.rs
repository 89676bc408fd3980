use crate::error::{Error, Result};
use crate::meter::Meter;
use crate::params::N;
use crate::ring::reduce::reduce_i64;
use crate::ring::{Domain, Poly};

use super::swar::{packed_add_lanes, packed_sub_lanes, unpack_lanes, LANES};
use super::{ChallengeIndexList, ExtendedSecret, ProductPoly8, SmallPoly};

/// Coefficients produced per accumulation step: four 4-lane words.
pub const BATCH_LANES: usize = 16;

const WORDS: usize = BATCH_LANES / LANES;

/// Index-based product `c·a` for any ternary `c`: accumulate shifted copies
/// of `a` into a 2n-entry buffer, then fold the upper half back with a
/// sign flip.
pub fn sparse_mul_indexed(c: &SmallPoly, a: &Poly) -> Result<Poly> {
    if a.domain() != Domain::Standard {
        return Err(Error::DomainMismatch {
            expected: Domain::Standard,
            found: a.domain(),
        });
    }
    if let Some(index) = c.coeffs.iter().position(|v| !(-1..=1).contains(v)) {
        return Err(Error::CoefficientOutOfRange {
            index,
            value: i64::from(c.coeffs[index]),
            min: -1,
            max: 1,
        });
    }
    let mut w = [0i64; 2 * N];
    for (i, &ci) in c.coeffs.iter().enumerate() {
        if ci == 1 {
            for (j, &aj) in a.coeffs.iter().enumerate() {
                w[i + j] += i64::from(aj);
            }
        }
        if ci == -1 {
            for (j, &aj) in a.coeffs.iter().enumerate() {
                w[i + j] -= i64::from(aj);
            }
        }
    }
    let mut u = Poly::zero();
    for (i, o) in u.coeffs.iter_mut().enumerate() {
        *o = reduce_i64(w[i] - w[i + N]);
    }
    Ok(u)
}

/// One batch of 16 product coefficients starting at `start`.
///
/// Trip counts depend only on `poscnt` and τ. Every challenge slot costs
/// one step regardless of its sign.
#[inline(always)]
pub(crate) fn product_batch(
    idx: &ChallengeIndexList,
    ext: &ExtendedSecret,
    start: usize,
    meter: &mut impl Meter,
) -> [u32; WORDS] {
    let mut acc = [0u32; WORDS];
    for &k in idx.positives() {
        let base = N + start - usize::from(k);
        for (w, a) in acc.iter_mut().enumerate() {
            *a = packed_add_lanes(*a, ext.load_word(base + LANES * w));
        }
    }
    for &k in idx.negatives() {
        let base = N + start - usize::from(k);
        for (w, a) in acc.iter_mut().enumerate() {
            *a = packed_sub_lanes(*a, ext.load_word(base + LANES * w));
        }
    }
    meter.lane_steps(idx.tau() as u64);
    acc
}

#[inline(always)]
pub(crate) fn batch_lanes(words: [u32; WORDS]) -> [i8; BATCH_LANES] {
    let mut out = [0i8; BATCH_LANES];
    for (chunk, w) in out.chunks_exact_mut(LANES).zip(words) {
        chunk.copy_from_slice(&unpack_lanes(w));
    }
    out
}

/// Branchless `c·s` in wrapping 8-bit lanes.
///
/// Exact whenever τ·η ≤ 127; otherwise a coefficient whose true value leaves
/// [-128, 127] wraps silently.
pub fn sparse_mul_branchless(idx: &ChallengeIndexList, ext: &ExtendedSecret) -> ProductPoly8 {
    sparse_mul_branchless_metered(idx, ext, &mut ())
}

pub fn sparse_mul_branchless_metered(
    idx: &ChallengeIndexList,
    ext: &ExtendedSecret,
    meter: &mut impl Meter,
) -> ProductPoly8 {
    let mut coeffs = [0i8; N];
    for (b, out) in coeffs.chunks_exact_mut(BATCH_LANES).enumerate() {
        let words = product_batch(idx, ext, b * BATCH_LANES, meter);
        out.copy_from_slice(&batch_lanes(words));
    }
    ProductPoly8 { coeffs }
}

/// The same window sums as [`sparse_mul_branchless`] in full-width integers.
/// Used to detect 8-bit wraps.
pub fn exact_product(idx: &ChallengeIndexList, ext: &ExtendedSecret) -> [i32; N] {
    let bytes = ext.as_bytes();
    let mut out = [0i32; N];
    for (i, o) in out.iter_mut().enumerate() {
        let pos: i32 = idx.positives().iter().map(|&k| i32::from(bytes[N + i - usize::from(k)])).sum();
        let neg: i32 = idx.negatives().iter().map(|&k| i32::from(bytes[N + i - usize::from(k)])).sum();
        *o = pos - neg;
    }
    out
}
