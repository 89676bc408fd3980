//! Multiply-and-check in one pass: the product `c·s` is produced 16
//! coefficients at a time and each batch is range-checked before the next
//! one is computed, so a doomed iteration is abandoned as early as possible.
//!
//! The only data-dependent branch is the reject decision itself, which the
//! unfused signer leaks as well (a restart is observable either way).

use crate::meter::Meter;
use crate::params::N;
use crate::ring::reduce::caddq;
use crate::ring::{Poly, PolyVec};
use crate::rounding::{low_bits, norm_inf_exceeds};

use super::mul::{batch_lanes, product_batch, sparse_mul_indexed, BATCH_LANES};
use super::{decode_challenge, ChallengeIndexList, ExtendedSecret};

/// `z = y + c·s1`, rejecting at the first batch with some `|z_i| ≥ bound`.
///
/// `y` holds centered coefficients; so does the returned `z`. `None` means
/// rejected.
pub fn fused_z(
    idx: &ChallengeIndexList,
    s1_ext: &[ExtendedSecret],
    y: &PolyVec,
    bound: i32,
    meter: &mut impl Meter,
) -> Option<PolyVec> {
    debug_assert_eq!(s1_ext.len(), y.len());
    let mut z = Vec::with_capacity(y.len());
    for (ext, yp) in s1_ext.iter().zip(y.iter()) {
        let mut out = Poly::zero();
        for start in (0..N).step_by(BATCH_LANES) {
            let cs = batch_lanes(product_batch(idx, ext, start, meter));
            let mut over = false;
            for j in 0..BATCH_LANES {
                let v = yp.coeffs[start + j] + i32::from(cs[j]);
                out.coeffs[start + j] = v;
                over |= v.abs() >= bound;
            }
            if over {
                return None;
            }
        }
        z.push(out);
    }
    Some(PolyVec::from(z))
}

/// Checks `r0 = LowBits(w - c·s2, 2γ2)` batch by batch, rejecting at the
/// first `|r0_i| ≥ bound`. On acceptance returns `c·s2` lifted to [0, q).
///
/// `w` must be reduced to [0, q).
pub fn fused_r0(
    idx: &ChallengeIndexList,
    s2_ext: &[ExtendedSecret],
    w: &PolyVec,
    gamma2: i32,
    bound: i32,
    meter: &mut impl Meter,
) -> Option<PolyVec> {
    debug_assert_eq!(s2_ext.len(), w.len());
    let alpha = 2 * gamma2;
    let mut cs2 = Vec::with_capacity(w.len());
    for (ext, wp) in s2_ext.iter().zip(w.iter()) {
        let mut out = Poly::zero();
        for start in (0..N).step_by(BATCH_LANES) {
            let cs = batch_lanes(product_batch(idx, ext, start, meter));
            let mut over = false;
            for j in 0..BATCH_LANES {
                let c = i32::from(cs[j]);
                // w - c lies in (-128, q + 128); bring it into [0, q)
                let v = caddq(caddq(wp.coeffs[start + j] - c) - crate::params::Q);
                over |= low_bits(v, alpha).abs() >= bound;
                out.coeffs[start + j] = caddq(c);
            }
            if over {
                return None;
            }
        }
        cs2.push(out);
    }
    Some(PolyVec::from(cs2))
}

/// Unfused reference for [`fused_z`]: full exact products first, then one
/// norm check over the whole vector.
pub fn compute_then_check_z(
    idx: &ChallengeIndexList,
    s1_ext: &[ExtendedSecret],
    y: &PolyVec,
    bound: i32,
) -> Option<PolyVec> {
    let c = decode_challenge(idx);
    let z: Vec<Poly> = s1_ext
        .iter()
        .zip(y.iter())
        .map(|(ext, yp)| {
            let cs = sparse_mul_indexed(&c, &ext.secret().to_poly()).expect("ternary challenge");
            let mut z = Poly::zero();
            for ((o, &a), &b) in z.coeffs.iter_mut().zip(&yp.coeffs).zip(&cs.centered().coeffs) {
                *o = a + b;
            }
            z
        })
        .collect();
    let z = PolyVec::from(z);
    (!norm_inf_exceeds(&z, bound)).then_some(z)
}

/// Unfused reference for [`fused_r0`].
pub fn compute_then_check_r0(
    idx: &ChallengeIndexList,
    s2_ext: &[ExtendedSecret],
    w: &PolyVec,
    gamma2: i32,
    bound: i32,
) -> Option<PolyVec> {
    let c = decode_challenge(idx);
    let cs2: Vec<Poly> = s2_ext
        .iter()
        .map(|ext| sparse_mul_indexed(&c, &ext.secret().to_poly()).expect("ternary challenge"))
        .collect();
    let cs2 = PolyVec::from(cs2);
    let r0 = w.sub(&cs2).ok()?.map(|p| {
        let mut r = Poly::zero();
        for (o, &v) in r.coeffs.iter_mut().zip(&p.coeffs) {
            *o = low_bits(v, 2 * gamma2);
        }
        r
    });
    (!norm_inf_exceeds(&r0, bound)).then_some(cs2)
}
