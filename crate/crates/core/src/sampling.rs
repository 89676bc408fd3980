//! Expansion of seeds into the matrix, secrets, masks and challenge.
//!
//! Stream framing follows the round-3 reference: SHAKE-128 for `A`,
//! SHAKE-256 for everything else, 2-byte little-endian nonces.

use crate::codec::unpack_z;
use crate::meter::Meter;
use crate::params::{ParameterSet, CRH_BYTES, N, Q, SEED_BYTES};
use crate::ring::{Matrix, Poly, PolyVec};
use crate::sparse::SmallPoly;
use crate::xof::XofState;

fn seeded(mut xof: XofState, seed: &[u8], nonce: u16) -> XofState {
    xof.absorb(seed).expect("fresh sponge");
    xof.absorb(&nonce.to_le_bytes()).expect("fresh sponge");
    xof
}

/// Squeezes one rate-sized block at a time.
struct Blocks<'m, M: Meter> {
    xof: XofState,
    buf: Vec<u8>,
    pos: usize,
    meter: &'m mut M,
}

impl<'m, M: Meter> Blocks<'m, M> {
    fn new(xof: XofState, meter: &'m mut M) -> Self {
        Self {
            xof,
            buf: Vec::new(),
            pos: 0,
            meter,
        }
    }

    fn refill(&mut self) {
        let rate = self.xof.rate();
        self.buf.resize(rate, 0);
        self.xof.squeeze(&mut self.buf);
        self.meter.xof_bytes(rate as u64);
        self.pos = 0;
    }

    fn next_byte(&mut self) -> u8 {
        if self.pos == self.buf.len() {
            self.refill();
        }
        self.pos += 1;
        self.buf[self.pos - 1]
    }
}

/// Uniform polynomial over [0, q) from 23-bit rejection sampling, tagged as
/// NTT-domain (it is used directly as `Â`).
pub fn uniform_poly(rho: &[u8; SEED_BYTES], nonce: u16, meter: &mut impl Meter) -> Poly {
    let mut stream = Blocks::new(seeded(XofState::shake128(), rho, nonce), meter);
    let mut coeffs = [0i32; N];
    let mut ctr = 0;
    while ctr < N {
        let b = [stream.next_byte(), stream.next_byte(), stream.next_byte()];
        let t = (i32::from(b[0]) | i32::from(b[1]) << 8 | i32::from(b[2]) << 16) & 0x7F_FFFF;
        if t < Q {
            coeffs[ctr] = t;
            ctr += 1;
        }
    }
    Poly::from_ntt_coeffs(coeffs)
}

/// `Â ∈ R_q^{k×ℓ}`; entry `(i, j)` uses nonce `256·i + j`.
pub fn expand_a(rho: &[u8; SEED_BYTES], p: &ParameterSet) -> Matrix {
    expand_a_metered(rho, p, &mut ())
}

pub fn expand_a_metered(rho: &[u8; SEED_BYTES], p: &ParameterSet, meter: &mut impl Meter) -> Matrix {
    (0..p.k)
        .map(|i| (0..p.l).map(|j| uniform_poly(rho, ((i << 8) + j) as u16, meter)).collect())
        .collect()
}

/// Coefficients uniform on [-η, η] by nibble rejection, low nibble first.
pub fn eta_poly(seed: &[u8; CRH_BYTES], nonce: u16, eta: i32, meter: &mut impl Meter) -> SmallPoly {
    let mut stream = Blocks::new(seeded(XofState::shake256(), seed, nonce), meter);
    let mut s = SmallPoly::zero();
    let mut ctr = 0;
    while ctr < N {
        let b = stream.next_byte();
        for t in [u32::from(b & 0x0F), u32::from(b >> 4)] {
            if ctr == N {
                break;
            }
            if eta == 2 && t < 15 {
                // t mod 5 without a division
                let t = t - ((205 * t) >> 10) * 5;
                s.coeffs[ctr] = (2 - t as i32) as i8;
                ctr += 1;
            } else if eta == 4 && t < 9 {
                s.coeffs[ctr] = (4 - t as i32) as i8;
                ctr += 1;
            }
        }
    }
    s
}

/// `(s1, s2)`; nonces `0..ℓ` for `s1` and `ℓ..ℓ+k` for `s2`.
pub fn expand_s(rho_prime: &[u8; CRH_BYTES], p: &ParameterSet) -> (Vec<SmallPoly>, Vec<SmallPoly>) {
    let mut meter = ();
    let s1 = (0..p.l).map(|i| eta_poly(rho_prime, i as u16, p.eta, &mut meter)).collect();
    let s2 = (0..p.k).map(|i| eta_poly(rho_prime, (p.l + i) as u16, p.eta, &mut meter)).collect();
    (s1, s2)
}

/// `y` with centered coefficients in (-γ1, γ1]; entry `i` uses nonce `κ + i`.
pub fn expand_mask(rho_prime: &[u8; CRH_BYTES], kappa: u16, p: &ParameterSet) -> PolyVec {
    expand_mask_metered(rho_prime, kappa, p, &mut ())
}

pub fn expand_mask_metered(
    rho_prime: &[u8; CRH_BYTES],
    kappa: u16,
    p: &ParameterSet,
    meter: &mut impl Meter,
) -> PolyVec {
    let polys = (0..p.l)
        .map(|i| {
            let mut xof = seeded(XofState::shake256(), rho_prime, kappa.wrapping_add(i as u16));
            let bytes = xof.squeeze_vec(p.poly_z_packed_bytes());
            meter.xof_bytes(bytes.len() as u64);
            unpack_z(&bytes, p).expect("exact length")
        })
        .collect::<Vec<_>>();
    PolyVec::from(polys)
}

/// The challenge `c ∈ B_τ`.
///
/// The first 8 stream bytes are a little-endian word of sign bits, consumed
/// LSB first; later bytes drive the inside-out shuffle.
pub fn sample_in_ball(seed: &[u8], tau: usize) -> SmallPoly {
    sample_in_ball_metered(seed, tau, &mut ())
}

pub fn sample_in_ball_metered(seed: &[u8], tau: usize, meter: &mut impl Meter) -> SmallPoly {
    let mut xof = XofState::shake256();
    xof.absorb(seed).expect("fresh sponge");
    let mut stream = Blocks::new(xof, meter);
    let mut signs = u64::from_le_bytes(core::array::from_fn(|_| stream.next_byte()));
    let mut c = SmallPoly::zero();
    for i in N - tau..N {
        let j = loop {
            let b = usize::from(stream.next_byte());
            if b <= i {
                break b;
            }
        };
        c.coeffs[i] = c.coeffs[j];
        c.coeffs[j] = 1 - 2 * (signs & 1) as i8;
        signs >>= 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meter::OpCounts;
    use crate::params::{DILITHIUM2, DILITHIUM3, DILITHIUM5};
    use crate::sparse::{decode_challenge, encode_challenge};

    const ALL: [&ParameterSet; 3] = [&DILITHIUM2, &DILITHIUM3, &DILITHIUM5];

    fn seed64(i: u64) -> [u8; 64] {
        let mut s = [0u8; 64];
        s[..8].copy_from_slice(&i.to_le_bytes());
        s
    }

    #[test]
    fn matrix_is_deterministic_and_in_range() {
        let p = &DILITHIUM3;
        let a = expand_a(&[0; 32], p);
        assert_eq!(a, expand_a(&[0; 32], p));
        for s in 0..20u8 {
            let a = expand_a(&[s; 32], p);
            let mut seen = std::collections::HashSet::new();
            for row in &a {
                for poly in row {
                    assert!(poly.coeffs.iter().all(|&c| (0..Q).contains(&c)));
                    assert!(seen.insert(poly.coeffs.to_vec()));
                }
            }
        }
    }

    #[test]
    fn secrets_in_range() {
        for p in ALL {
            for i in 0..30 {
                let (s1, s2) = expand_s(&seed64(i), p);
                assert_eq!((s1.len(), s2.len()), (p.l, p.k));
                for s in s1.iter().chain(&s2) {
                    assert!(s.max_abs() <= p.eta);
                }
                assert_eq!(expand_s(&seed64(i), p), (s1, s2));
            }
        }
    }

    #[test]
    fn secret_values_are_uniform() {
        // 10^6 coefficients, each value within 4σ of its expected count
        for eta in [2, 4] {
            let values = (2 * eta + 1) as usize;
            let mut counts = vec![0u64; values];
            let polys = 1_000_000 / N + 1;
            for i in 0..polys {
                let s = eta_poly(&seed64(7), i as u16, eta, &mut ());
                for &c in &s.coeffs {
                    counts[(i32::from(c) + eta) as usize] += 1;
                }
            }
            let total = (polys * N) as f64;
            let expected = total / values as f64;
            let sigma = (total * (1.0 / values as f64) * (1.0 - 1.0 / values as f64)).sqrt();
            for (v, &c) in counts.iter().enumerate() {
                assert!((c as f64 - expected).abs() < 4.0 * sigma, "eta={eta} value={v} count={c}");
            }
        }
    }

    #[test]
    fn masks_in_range_and_nonce_sensitive() {
        for p in ALL {
            for kappa in 0..30u16 {
                let y = expand_mask(&seed64(1), kappa * p.l as u16, p);
                assert!(y.iter().flat_map(|q| q.coeffs.iter()).all(|&c| c > -p.gamma1 && c <= p.gamma1));
            }
            let a = expand_mask(&seed64(1), 0, p);
            assert_eq!(a, expand_mask(&seed64(1), 0, p));
            assert_ne!(a, expand_mask(&seed64(1), p.l as u16, p));
            // entry i is keyed by κ + i alone, hence κ advancing by ℓ
            assert_eq!(a[p.l - 1], expand_mask(&seed64(1), 1, p)[p.l - 2]);
        }
    }

    #[test]
    fn challenge_is_in_ball_and_roundtrips() {
        for p in ALL {
            for i in 0..3000u32 {
                let c = sample_in_ball(&i.to_le_bytes(), p.tau);
                assert!(c.is_in_ball(p.tau));
                let idx = encode_challenge(&c, p.tau).unwrap();
                assert_eq!(decode_challenge(&idx), c);
            }
        }
        assert_eq!(sample_in_ball(b"seed", 39), sample_in_ball(b"seed", 39));
    }

    #[test]
    fn xof_bytes_are_counted() {
        let mut m = OpCounts::default();
        expand_mask_metered(&seed64(0), 0, &DILITHIUM2, &mut m);
        assert_eq!(m.xof_bytes, 4 * 576);
        let mut m = OpCounts::default();
        sample_in_ball_metered(&[0; 32], 39, &mut m);
        assert_eq!(m.xof_bytes % 136, 0);
        assert!(m.xof_bytes > 0);
    }
}
