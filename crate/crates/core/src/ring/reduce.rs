//! Scalar reductions modulo q.

use crate::params::Q;

/// q^-1 mod 2^32.
pub const QINV: i32 = 58728449;

/// 2^32 mod q.
pub const MONT: i32 = 4193792;

/// Montgomery reduction: for |a| ≤ 2^31·q returns r ≡ a·2^-32 (mod q)
/// with -q < r < q.
#[inline]
pub fn montgomery_reduce(a: i64) -> i32 {
    let t = (a as i32).wrapping_mul(QINV);
    ((a - i64::from(t) * i64::from(Q)) >> 32) as i32
}

/// For a ≤ 2^31 - 2^22 - 1 returns r ≡ a (mod q) with -6283008 ≤ r ≤ 6283008.
#[inline]
pub fn reduce32(a: i32) -> i32 {
    let t = (a + (1 << 22)) >> 23;
    a - t * Q
}

/// Adds q if `a` is negative.
#[inline]
pub fn caddq(a: i32) -> i32 {
    a + ((a >> 31) & Q)
}

/// Full reduction into [0, q) for a ≤ 2^31 - 2^22 - 1.
#[inline]
pub fn freeze(a: i32) -> i32 {
    caddq(reduce32(a))
}

/// Canonical representative in [0, q) of any 64-bit integer.
#[inline]
pub fn reduce_i64(a: i64) -> i32 {
    a.rem_euclid(i64::from(Q)) as i32
}

/// Centered representative in [-(q-1)/2, (q-1)/2] of a value in [0, q).
#[inline]
pub fn center(a: i32) -> i32 {
    a - (((Q - 1) / 2 - a) >> 31 & Q)
}

/// Multiplication mod q of canonical operands, result in [0, q).
#[inline]
pub fn mul_mod(a: i32, b: i32) -> i32 {
    reduce_i64(i64::from(a) * i64::from(b))
}

pub const fn pow_mod(base: i64, mut exp: u64) -> i64 {
    let q = Q as i64;
    let mut acc = 1i64;
    let mut b = base.rem_euclid(q);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        exp >>= 1;
    }
    acc
}
