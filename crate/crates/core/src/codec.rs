//! Byte encodings of keys, signatures and packed polynomials.
//!
//! Fields are packed little-endian, least significant bit first, exactly as
//! in the round-3 reference so published known-answer data lines up.
//! Secret keys additionally decode straight into the working form used by
//! the signer: `(-s, s)` byte arrays for `s1`/`s2` and 16-bit `t0`.

use crate::error::{Error, Result};
use crate::meter::Meter;
use crate::params::{
    Level, ParameterSet, D, N, POLY_T0_PACKED_BYTES, POLY_T1_PACKED_BYTES, SEED_BYTES,
};
use crate::ring::reduce::reduce_i64;
use crate::ring::{Poly, PolyVec};
use crate::rounding::HintVec;
use crate::sparse::{ExtendedSecret, SmallPoly};

/// Packs `values` as consecutive `bits`-wide fields.
///
/// Callers guarantee every value fits in `bits`.
pub fn pack_bits(values: &[u32], bits: u32) -> Vec<u8> {
    debug_assert!((1..=32).contains(&bits));
    let mut out = Vec::with_capacity((values.len() * bits as usize).div_ceil(8));
    let mut acc = 0u64;
    let mut filled = 0u32;
    for &v in values {
        debug_assert!(bits == 32 || v >> bits == 0);
        acc |= u64::from(v) << filled;
        filled += bits;
        while filled >= 8 {
            out.push(acc as u8);
            acc >>= 8;
            filled -= 8;
        }
    }
    if filled > 0 {
        out.push(acc as u8);
    }
    out
}

/// Reads `count` consecutive `bits`-wide fields. `bytes` must hold at least
/// `count * bits` bits.
pub fn unpack_bits(bytes: &[u8], bits: u32, count: usize) -> Vec<u32> {
    let mask = if bits == 32 { u64::from(u32::MAX) } else { (1u64 << bits) - 1 };
    let mut out = Vec::with_capacity(count);
    let mut acc = 0u64;
    let mut filled = 0u32;
    let mut src = bytes.iter();
    for _ in 0..count {
        while filled < bits {
            acc |= u64::from(*src.next().expect("short input")) << filled;
            filled += 8;
        }
        out.push((acc & mask) as u32);
        acc >>= bits;
        filled -= bits;
    }
    out
}

fn check_len(bytes: &[u8], expected: usize) -> Result<()> {
    if bytes.len() == expected {
        Ok(())
    } else {
        Err(Error::InvalidLength {
            expected,
            found: bytes.len(),
        })
    }
}

/// Maps each coefficient through `f`, which must land in [0, 2^bits).
fn pack_fields(coeffs: impl Iterator<Item = i64>, bits: u32, min: i64, max: i64, f: impl Fn(i64) -> i64) -> Result<Vec<u8>> {
    let mut fields = Vec::with_capacity(N);
    for (index, value) in coeffs.enumerate() {
        if value < min || value > max {
            return Err(Error::CoefficientOutOfRange { index, value, min, max });
        }
        fields.push(f(value) as u32);
    }
    Ok(pack_bits(&fields, bits))
}

/// `t1` coefficients in [0, 2^10).
pub fn pack_t1(p: &Poly) -> Result<Vec<u8>> {
    pack_fields(p.coeffs.iter().map(|&c| i64::from(c)), 10, 0, 1023, |c| c)
}

pub fn unpack_t1(bytes: &[u8]) -> Result<Poly> {
    check_len(bytes, POLY_T1_PACKED_BYTES)?;
    let mut p = Poly::zero();
    for (o, v) in p.coeffs.iter_mut().zip(unpack_bits(bytes, 10, N)) {
        *o = v as i32;
    }
    Ok(p)
}

const T0_HALF: i64 = 1 << (D - 1);

/// `t0` coefficients in (-2^12, 2^12], stored as 2^12 - c.
pub fn pack_t0(p: &Poly) -> Result<Vec<u8>> {
    pack_fields(p.coeffs.iter().map(|&c| i64::from(c)), D, 1 - T0_HALF, T0_HALF, |c| T0_HALF - c)
}

/// Centered `t0` coefficients.
pub fn unpack_t0(bytes: &[u8]) -> Result<Poly> {
    let t0 = unpack_t0_i16(bytes)?;
    Ok(Poly::from_coeffs(t0.map(i32::from)))
}

/// Centered `t0` coefficients as 16-bit integers.
pub fn unpack_t0_i16(bytes: &[u8]) -> Result<[i16; N]> {
    check_len(bytes, POLY_T0_PACKED_BYTES)?;
    let mut out = [0i16; N];
    for (o, v) in out.iter_mut().zip(unpack_bits(bytes, D, N)) {
        // every 13-bit field is a valid value
        *o = (T0_HALF - i64::from(v)) as i16;
    }
    Ok(out)
}

/// Secret coefficients in [-η, η], stored as η - c.
pub fn pack_eta(s: &SmallPoly, p: &ParameterSet) -> Result<Vec<u8>> {
    let eta = i64::from(p.eta);
    pack_fields(s.coeffs.iter().map(|&c| i64::from(c)), p.eta_bits(), -eta, eta, |c| eta - c)
}

/// Rejects fields outside [0, 2η]; those can't come from [`pack_eta`].
pub fn unpack_eta(bytes: &[u8], p: &ParameterSet) -> Result<SmallPoly> {
    check_len(bytes, p.poly_eta_packed_bytes())?;
    let mut s = SmallPoly::zero();
    for (o, v) in s.coeffs.iter_mut().zip(unpack_bits(bytes, p.eta_bits(), N)) {
        let v = v as i32;
        if v > 2 * p.eta {
            return Err(Error::Malformed("secret coefficient out of range"));
        }
        *o = (p.eta - v) as i8;
    }
    Ok(s)
}

/// Mask/response coefficients in (-γ1, γ1], given centered; stored as γ1 - c.
pub fn pack_z(z: &Poly, p: &ParameterSet) -> Result<Vec<u8>> {
    let g = i64::from(p.gamma1);
    pack_fields(z.coeffs.iter().map(|&c| i64::from(c)), p.gamma1_bits(), 1 - g, g, |c| g - c)
}

/// Centered coefficients in (-γ1, γ1].
pub fn unpack_z(bytes: &[u8], p: &ParameterSet) -> Result<Poly> {
    check_len(bytes, p.poly_z_packed_bytes())?;
    let mut z = Poly::zero();
    for (o, v) in z.coeffs.iter_mut().zip(unpack_bits(bytes, p.gamma1_bits(), N)) {
        *o = p.gamma1 - v as i32;
    }
    Ok(z)
}

/// High bits in [0, (q-1)/2γ2).
pub fn pack_w1(w1: &Poly, p: &ParameterSet) -> Result<Vec<u8>> {
    let max = i64::from(p.w1_modulus()) - 1;
    pack_fields(w1.coeffs.iter().map(|&c| i64::from(c)), p.w1_bits(), 0, max, |c| c)
}

/// Packs a whole `w1` vector (the challenge hash input).
pub fn pack_w1_vec(w1: &PolyVec, p: &ParameterSet) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(w1.len() * p.poly_w1_packed_bytes());
    for poly in w1.iter() {
        out.extend(pack_w1(poly, p)?);
    }
    Ok(out)
}

/// Hint flags as `ω` position bytes followed by `k` running totals.
pub fn encode_hint(h: &HintVec, p: &ParameterSet) -> Result<Vec<u8>> {
    if h.rows().len() != p.k {
        return Err(Error::InvalidLength {
            expected: p.k,
            found: h.rows().len(),
        });
    }
    if h.weight() > p.omega {
        return Err(Error::Malformed("hint weight exceeds omega"));
    }
    let mut out = vec![0u8; p.omega + p.k];
    let mut count = 0;
    for (i, row) in h.rows().iter().enumerate() {
        for (j, _) in row.iter().enumerate().filter(|(_, &b)| b) {
            out[count] = j as u8;
            count += 1;
        }
        out[p.omega + i] = count as u8;
    }
    Ok(out)
}

/// Strict inverse of [`encode_hint`]: any byte string it could not have
/// produced is rejected.
pub fn decode_hint(bytes: &[u8], p: &ParameterSet) -> Result<HintVec> {
    check_len(bytes, p.omega + p.k)?;
    let mut h = HintVec::zero(p.k);
    let mut prev = 0usize;
    for (i, row) in h.rows_mut().iter_mut().enumerate() {
        let end = usize::from(bytes[p.omega + i]);
        if end < prev || end > p.omega {
            return Err(Error::Malformed("hint count out of order"));
        }
        for j in prev..end {
            if j > prev && bytes[j] <= bytes[j - 1] {
                return Err(Error::Malformed("hint positions not increasing"));
            }
            row[usize::from(bytes[j])] = true;
        }
        prev = end;
    }
    if bytes[prev..p.omega].iter().any(|&b| b != 0) {
        return Err(Error::Malformed("nonzero hint padding"));
    }
    Ok(h)
}

macro_rules! key_bytes {
    ($name:ident, $len:ident, $what:literal) => {
        #[doc = concat!("An encoded ", $what, " of fixed per-level length.")]
        #[derive(Clone, PartialEq, Eq, Hash)]
        pub struct $name {
            level: Level,
            bytes: Vec<u8>,
        }

        impl $name {
            /// Infers the level from the length (lengths are distinct per level).
            pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
                Level::ALL
                    .into_iter()
                    .find(|l| l.params().$len() == bytes.len())
                    .map(|level| Self {
                        level,
                        bytes: bytes.to_vec(),
                    })
                    .ok_or(Error::Malformed(concat!("no level has this ", $what, " length")))
            }

            pub fn with_level(level: Level, bytes: &[u8]) -> Result<Self> {
                check_len(bytes, level.params().$len())?;
                Ok(Self {
                    level,
                    bytes: bytes.to_vec(),
                })
            }

            pub fn level(&self) -> Level {
                self.level
            }

            pub fn params(&self) -> &'static ParameterSet {
                self.level.params()
            }

            pub fn as_bytes(&self) -> &[u8] {
                &self.bytes
            }

            pub fn into_bytes(self) -> Vec<u8> {
                self.bytes
            }
        }

        impl AsRef<[u8]> for $name {
            fn as_ref(&self) -> &[u8] {
                &self.bytes
            }
        }

        impl core::fmt::Debug for $name {
            fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
                write!(f, "{}({}, {} bytes)", stringify!($name), self.level, self.bytes.len())
            }
        }
    };
}

key_bytes!(PublicKeyBytes, public_key_bytes, "public key");
key_bytes!(SecretKeyBytes, secret_key_bytes, "secret key");
key_bytes!(SignatureBytes, signature_bytes, "signature");

pub fn pk_encode(p: &ParameterSet, rho: &[u8; SEED_BYTES], t1: &PolyVec) -> Result<PublicKeyBytes> {
    check_count(t1.len(), p.k)?;
    let mut out = rho.to_vec();
    for poly in t1.iter() {
        out.extend(pack_t1(poly)?);
    }
    PublicKeyBytes::with_level(p.level, &out)
}

pub fn pk_decode(pk: &PublicKeyBytes) -> Result<([u8; SEED_BYTES], PolyVec)> {
    let (rho, rest) = pk.as_bytes().split_at(SEED_BYTES);
    let t1 = rest
        .chunks_exact(POLY_T1_PACKED_BYTES)
        .map(unpack_t1)
        .collect::<Result<Vec<_>>>()?;
    Ok((rho.try_into().expect("seed width"), PolyVec::from(t1)))
}

fn check_count(found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::InvalidLength { expected, found })
    }
}

/// The fields of a secret key in their plain form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SecretKeyParts {
    pub rho: [u8; SEED_BYTES],
    pub key: [u8; SEED_BYTES],
    pub tr: [u8; SEED_BYTES],
    pub s1: Vec<SmallPoly>,
    pub s2: Vec<SmallPoly>,
    /// Centered.
    pub t0: PolyVec,
}

pub fn sk_encode(p: &ParameterSet, parts: &SecretKeyParts) -> Result<SecretKeyBytes> {
    check_count(parts.s1.len(), p.l)?;
    check_count(parts.s2.len(), p.k)?;
    check_count(parts.t0.len(), p.k)?;
    let mut out = Vec::with_capacity(p.secret_key_bytes());
    out.extend_from_slice(&parts.rho);
    out.extend_from_slice(&parts.key);
    out.extend_from_slice(&parts.tr);
    for s in parts.s1.iter().chain(&parts.s2) {
        out.extend(pack_eta(s, p)?);
    }
    for t in parts.t0.iter() {
        out.extend(pack_t0(t)?);
    }
    SecretKeyBytes::with_level(p.level, &out)
}

fn split_sk(sk: &SecretKeyBytes) -> (&[u8], &[u8], &[u8], &[u8]) {
    let p = sk.params();
    let (seeds, rest) = sk.as_bytes().split_at(3 * SEED_BYTES);
    let (s1, rest) = rest.split_at(p.l * p.poly_eta_packed_bytes());
    let (s2, t0) = rest.split_at(p.k * p.poly_eta_packed_bytes());
    (seeds, s1, s2, t0)
}

fn seed(bytes: &[u8], i: usize) -> [u8; SEED_BYTES] {
    bytes[i * SEED_BYTES..(i + 1) * SEED_BYTES].try_into().expect("seed width")
}

/// Plain decode, for tests and tooling. The signer uses
/// [`sk_decode_extended`].
pub fn sk_decode(sk: &SecretKeyBytes) -> Result<SecretKeyParts> {
    let p = sk.params();
    let (seeds, s1, s2, t0) = split_sk(sk);
    let eta = |b: &[u8]| -> Result<Vec<SmallPoly>> {
        b.chunks_exact(p.poly_eta_packed_bytes()).map(|c| unpack_eta(c, p)).collect()
    };
    Ok(SecretKeyParts {
        rho: seed(seeds, 0),
        key: seed(seeds, 1),
        tr: seed(seeds, 2),
        s1: eta(s1)?,
        s2: eta(s2)?,
        t0: PolyVec::from(t0.chunks_exact(POLY_T0_PACKED_BYTES).map(unpack_t0).collect::<Result<Vec<_>>>()?),
    })
}

/// A secret key in the signer's working representation. Built once per
/// signing call; restarts reuse it untouched.
#[derive(Clone, PartialEq, Eq)]
pub struct DecodedSecret {
    pub level: Level,
    pub rho: [u8; SEED_BYTES],
    pub key: [u8; SEED_BYTES],
    pub tr: [u8; SEED_BYTES],
    pub s1_ext: Vec<ExtendedSecret>,
    pub s2_ext: Vec<ExtendedSecret>,
    pub t0: Vec<[i16; N]>,
}

impl core::fmt::Debug for DecodedSecret {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "DecodedSecret({})", self.level)
    }
}

impl DecodedSecret {
    pub fn params(&self) -> &'static ParameterSet {
        self.level.params()
    }

    /// `t0` lifted to [0, q).
    pub fn t0_polys(&self) -> PolyVec {
        PolyVec::from(
            self.t0
                .iter()
                .map(|t| Poly::from_coeffs(t.map(|c| reduce_i64(i64::from(c)))))
                .collect::<Vec<_>>(),
        )
    }
}

/// Decodes `s1`/`s2` directly into the `(-s, s)` layout and `t0` into
/// 16-bit integers.
pub fn sk_decode_extended(sk: &SecretKeyBytes) -> Result<DecodedSecret> {
    sk_decode_extended_metered(sk, &mut ())
}

pub fn sk_decode_extended_metered(sk: &SecretKeyBytes, meter: &mut impl Meter) -> Result<DecodedSecret> {
    meter.sk_decode();
    let p = sk.params();
    let (seeds, s1, s2, t0) = split_sk(sk);
    let ext = |b: &[u8]| -> Result<Vec<ExtendedSecret>> {
        b.chunks_exact(p.poly_eta_packed_bytes())
            .map(|c| unpack_eta(c, p).map(|s| ExtendedSecret::from_small_unchecked(&s)))
            .collect()
    };
    Ok(DecodedSecret {
        level: p.level,
        rho: seed(seeds, 0),
        key: seed(seeds, 1),
        tr: seed(seeds, 2),
        s1_ext: ext(s1)?,
        s2_ext: ext(s2)?,
        t0: t0.chunks_exact(POLY_T0_PACKED_BYTES).map(unpack_t0_i16).collect::<Result<_>>()?,
    })
}

/// A decoded signature `(c̃, z, h)`; `z` is centered.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignatureBundle {
    pub c_tilde: [u8; SEED_BYTES],
    pub z: PolyVec,
    pub h: HintVec,
}

pub fn sig_encode(p: &ParameterSet, sig: &SignatureBundle) -> Result<SignatureBytes> {
    check_count(sig.z.len(), p.l)?;
    let mut out = Vec::with_capacity(p.signature_bytes());
    out.extend_from_slice(&sig.c_tilde);
    for z in sig.z.iter() {
        out.extend(pack_z(z, p)?);
    }
    out.extend(encode_hint(&sig.h, p)?);
    SignatureBytes::with_level(p.level, &out)
}

pub fn sig_decode(sig: &SignatureBytes) -> Result<SignatureBundle> {
    let p = sig.params();
    let (c_tilde, rest) = sig.as_bytes().split_at(SEED_BYTES);
    let (z, h) = rest.split_at(p.l * p.poly_z_packed_bytes());
    Ok(SignatureBundle {
        c_tilde: c_tilde.try_into().expect("seed width"),
        z: PolyVec::from(z.chunks_exact(p.poly_z_packed_bytes()).map(|c| unpack_z(c, p)).collect::<Result<Vec<_>>>()?),
        h: decode_hint(h, p)?,
    })
}
