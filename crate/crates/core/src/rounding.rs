//! Power-of-two rounding, high/low-bit decomposition, hints and norm checks.
//!
//! All of these are written without data-dependent branches on `r`, since
//! during signing `r` derives from the secret mask.

use crate::params::{D, N, Q};
use crate::ring::reduce::{center, reduce_i64};
use crate::ring::{Poly, PolyVec};

/// Splits r ∈ [0, q) as r = r1·2^d + r0 with r0 ∈ (-2^(d-1), 2^(d-1)].
#[inline]
pub fn power2round(r: i32) -> (i32, i32) {
    let r1 = (r + (1 << (D - 1)) - 1) >> D;
    (r1, r - (r1 << D))
}

/// Splits r ∈ [0, q) as r ≡ r1·α + r0 (mod q) with r0 ∈ (-α/2, α/2].
///
/// `r0` is `r mod± α`. When `r - r0 = q - 1` the high part would equal
/// (q-1)/α, which is folded to `r1 = 0` with `r0` decremented, so that
/// r1 ∈ [0, (q-1)/α).
#[inline]
pub fn decompose(r: i32, alpha: i32) -> (i32, i32) {
    let mut r0 = r % alpha;
    r0 -= ((alpha / 2 - r0) >> 31) & alpha;
    let t = r - r0;
    let top = -i32::from(t == Q - 1);
    let r1 = (t / alpha) & !top;
    (r1, r0 - (top & 1))
}

#[inline]
pub fn high_bits(r: i32, alpha: i32) -> i32 {
    decompose(r, alpha).0
}

#[inline]
pub fn low_bits(r: i32, alpha: i32) -> i32 {
    decompose(r, alpha).1
}

/// Whether adding `z` to `r` changes the high bits.
///
/// `r` is in [0, q); `z` may be any small signed value.
#[inline]
pub fn make_hint(z: i32, r: i32, alpha: i32) -> bool {
    let shifted = reduce_i64(i64::from(r) + i64::from(z));
    high_bits(r, alpha) != high_bits(shifted, alpha)
}

/// Recovers `HighBits(r + z)` from `r` and the hint `make_hint(z, r)`,
/// provided |z| ≤ α/2.
#[inline]
pub fn use_hint(hint: bool, r: i32, alpha: i32) -> i32 {
    let m = (Q - 1) / alpha;
    let (r1, r0) = decompose(r, alpha);
    if !hint {
        r1
    } else if r0 > 0 {
        (r1 + 1) % m
    } else {
        (r1 - 1 + m) % m
    }
}

/// Infinity norm of one coefficient given in any representative.
#[inline]
pub fn coeff_norm(c: i32) -> i32 {
    center(reduce_i64(i64::from(c))).abs()
}

/// True iff some coefficient has centered magnitude ≥ `bound`.
pub fn poly_norm_exceeds(p: &Poly, bound: i32) -> bool {
    // accumulate instead of short-circuiting; the scan is over secret data
    p.coeffs.iter().fold(false, |acc, &c| acc | (coeff_norm(c) >= bound))
}

/// True iff some coefficient of `v` has centered magnitude ≥ `bound`.
pub fn norm_inf_exceeds(v: &PolyVec, bound: i32) -> bool {
    v.iter().any(|p| poly_norm_exceeds(p, bound))
}

/// Largest centered magnitude in `v`.
pub fn norm_inf(v: &PolyVec) -> i32 {
    v.iter()
        .flat_map(|p| p.coeffs.iter())
        .map(|&c| coeff_norm(c))
        .max()
        .unwrap_or(0)
}

/// `k × 256` hint flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HintVec {
    rows: Vec<[bool; N]>,
}

impl HintVec {
    pub fn zero(k: usize) -> Self {
        Self {
            rows: vec![[false; N]; k],
        }
    }

    pub fn from_rows(rows: Vec<[bool; N]>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[[bool; N]] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [[bool; N]] {
        &mut self.rows
    }

    /// Number of set flags.
    pub fn weight(&self) -> usize {
        self.rows.iter().flatten().filter(|&&b| b).count()
    }

    /// Hints for `(z, r)` pairs drawn coefficient-wise from two vectors.
    pub fn make(z: &PolyVec, r: &PolyVec, alpha: i32) -> Self {
        let rows = z
            .iter()
            .zip(r.iter())
            .map(|(zp, rp)| {
                let mut row = [false; N];
                for (i, h) in row.iter_mut().enumerate() {
                    *h = make_hint(zp.coeffs[i], rp.coeffs[i], alpha);
                }
                row
            })
            .collect();
        Self { rows }
    }

    /// Applies the hints to `r`, returning the corrected high bits.
    pub fn apply(&self, r: &PolyVec, alpha: i32) -> PolyVec {
        let polys = self
            .rows
            .iter()
            .zip(r.iter())
            .map(|(row, rp)| {
                let mut out = Poly::zero();
                for i in 0..N {
                    out.coeffs[i] = use_hint(row[i], rp.coeffs[i], alpha);
                }
                out
            })
            .collect::<Vec<_>>();
        PolyVec::from(polys)
    }
}
