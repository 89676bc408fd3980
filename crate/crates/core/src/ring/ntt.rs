//! Negacyclic NTT over Z_q[x]/(x^256 + 1).
//!
//! Twiddles are powers of ζ = 1753, a primitive 512th root of unity mod q,
//! stored in Montgomery form and bit-reversed order. The table is built once
//! on first use.

use std::sync::OnceLock;

use super::reduce::{montgomery_reduce, pow_mod, MONT};
use crate::meter::Meter;
use crate::params::{N, Q};

/// Primitive 512th root of unity modulo q.
pub const ROOT_OF_UNITY: i32 = 1753;

/// Butterfly multiplications per forward transform.
pub const FORWARD_MULS: u64 = (N as u64 / 2) * 8;

/// Butterfly multiplications plus final scaling per inverse transform.
pub const INVERSE_MULS: u64 = (N as u64 / 2) * 8 + N as u64;

/// mont · 256^-1 mod q: one Montgomery reduction by this removes both the
/// 2^32 factor and the transform length.
const INV_SCALE: i32 = {
    let q = Q as i64;
    let inv256 = pow_mod(256, (Q - 2) as u64);
    (MONT as i64 * inv256 % q) as i32
};

fn bit_reverse8(i: usize) -> usize {
    (i as u8).reverse_bits() as usize
}

/// Montgomery-form twiddles, centered, in bit-reversed order.
pub fn zetas() -> &'static [i32; N] {
    static ZETAS: OnceLock<[i32; N]> = OnceLock::new();
    ZETAS.get_or_init(|| {
        let q = i64::from(Q);
        let mut table = [0i32; N];
        for (i, z) in table.iter_mut().enumerate().skip(1) {
            let v = pow_mod(i64::from(ROOT_OF_UNITY), bit_reverse8(i) as u64) * i64::from(MONT) % q;
            *z = if v > q / 2 { (v - q) as i32 } else { v as i32 };
        }
        table
    })
}

/// In-place forward transform. Input |a_i| < q; output |a_i| < 9q.
pub(crate) fn forward(a: &mut [i32; N], meter: &mut impl Meter) {
    let zetas = zetas();
    let mut k = 0;
    let mut len = 128;
    while len > 0 {
        let mut start = 0;
        while start < N {
            k += 1;
            let zeta = i64::from(zetas[k]);
            for j in start..start + len {
                let t = montgomery_reduce(zeta * i64::from(a[j + len]));
                a[j + len] = a[j] - t;
                a[j] += t;
            }
            start += 2 * len;
        }
        len >>= 1;
    }
    meter.modmul(FORWARD_MULS);
}

/// In-place inverse transform including the 1/256 scaling.
/// Input |a_i| < q; output |a_i| < q.
pub(crate) fn inverse(a: &mut [i32; N], meter: &mut impl Meter) {
    let zetas = zetas();
    let mut k = N;
    let mut len = 1;
    while len < N {
        let mut start = 0;
        while start < N {
            k -= 1;
            let zeta = -i64::from(zetas[k]);
            for j in start..start + len {
                let t = a[j];
                a[j] = t + a[j + len];
                a[j + len] = t - a[j + len];
                a[j + len] = montgomery_reduce(zeta * i64::from(a[j + len]));
            }
            start += 2 * len;
        }
        len <<= 1;
    }
    for c in a.iter_mut() {
        *c = montgomery_reduce(i64::from(INV_SCALE) * i64::from(*c));
    }
    meter.modmul(INVERSE_MULS);
}
