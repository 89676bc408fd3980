//! Key generation, signing and verification.
//!
//! Signing supports three ways of forming `c·s1` and `c·s2`:
//!
//! * [`Backend::Ntt`]: `NTT⁻¹(ĉ ∘ ŝ)`, the reference route;
//! * [`Backend::Sparse`]: the branchless 8-bit windowed product, then the
//!   usual checks (`z` first, then `r0`);
//! * [`Backend::SparseFused`]: products fused with their norm checks, `r0`
//!   checked before `z`.
//!
//! All three produce the same signature; `c·t0` always goes through the NTT
//! because `t0` does not fit in 8 bits.

use std::str::FromStr;

use crate::codec::{
    pack_w1_vec, pk_decode, pk_encode, sig_decode, sig_encode, sk_decode_extended_metered, sk_encode,
    DecodedSecret, PublicKeyBytes, SecretKeyBytes, SecretKeyParts, SignatureBundle, SignatureBytes,
};
use crate::error::{Error, Result};
use crate::meter::{Meter, OpCounts};
use crate::params::{Level, ParameterSet, CRH_BYTES, D, N, SEED_BYTES};
use crate::ring::reduce::{center, reduce_i64};
use crate::ring::{matrix_mul_ntt, Matrix, Poly, PolyVec};
use crate::rounding::{decompose, high_bits, norm_inf, norm_inf_exceeds, power2round, HintVec};
use crate::sampling::{expand_a_metered, expand_mask_metered, expand_s, sample_in_ball_metered};
use crate::sparse::{
    encode_challenge, exact_product, fused_r0, fused_z, sparse_mul_branchless, sparse_mul_branchless_metered,
    ChallengeIndexList, ExtendedSecret, SmallPoly,
};
use crate::xof::{shake256, XofState};

/// How the signer multiplies the challenge by the secret vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Ntt,
    Sparse,
    SparseFused,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Ntt, Backend::Sparse, Backend::SparseFused];

    /// Sparse-fused where products provably fit in 8 bits; NTT for level 3,
    /// where a wrap is possible (if astronomically rare).
    pub fn default_for(level: Level) -> Backend {
        match level {
            Level::Three => Backend::Ntt,
            Level::Two | Level::Five => Backend::SparseFused,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Ntt => "ntt",
            Backend::Sparse => "sparse",
            Backend::SparseFused => "sparse-fused",
        }
    }
}

impl core::fmt::Display for Backend {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ntt" => Ok(Backend::Ntt),
            "sparse" => Ok(Backend::Sparse),
            "sparse-fused" | "sparse_fused" | "fused" => Ok(Backend::SparseFused),
            other => Err(format!("unknown backend `{other}` (expected ntt, sparse or sparse-fused)")),
        }
    }
}

fn lift(v: &PolyVec) -> PolyVec {
    v.map(Poly::reduce)
}

fn small_to_vec(s: &[SmallPoly]) -> PolyVec {
    PolyVec::from(s.iter().map(SmallPoly::to_poly).collect::<Vec<_>>())
}

/// `A·v` for a standard-domain `v` with any representatives; result in [0, q).
fn mat_vec(a: &Matrix, v: &PolyVec, meter: &mut impl Meter) -> PolyVec {
    let v_hat = lift(v).ntt_metered(meter).expect("standard domain");
    matrix_mul_ntt(a, &v_hat, meter)
        .and_then(|t| t.inv_ntt_metered(meter))
        .expect("matching shapes")
}

/// Deterministic key generation from a 32-byte seed `ζ`.
pub fn keygen(level: Level, zeta: &[u8; SEED_BYTES]) -> (PublicKeyBytes, SecretKeyBytes) {
    keygen_metered(level, zeta, &mut ())
}

pub fn keygen_metered(
    level: Level,
    zeta: &[u8; SEED_BYTES],
    meter: &mut impl Meter,
) -> (PublicKeyBytes, SecretKeyBytes) {
    let p = level.params();
    let seeds: [u8; 2 * SEED_BYTES + CRH_BYTES] = shake256(&[zeta]);
    let rho: [u8; SEED_BYTES] = seeds[..SEED_BYTES].try_into().expect("width");
    let rho_prime: [u8; CRH_BYTES] = seeds[SEED_BYTES..SEED_BYTES + CRH_BYTES].try_into().expect("width");
    let key: [u8; SEED_BYTES] = seeds[SEED_BYTES + CRH_BYTES..].try_into().expect("width");
    meter.xof_bytes(seeds.len() as u64);

    let a = expand_a_metered(&rho, p, meter);
    let (s1, s2) = expand_s(&rho_prime, p);
    let t = mat_vec(&a, &small_to_vec(&s1), meter)
        .add(&small_to_vec(&s2))
        .expect("matching shapes");

    let mut t1 = PolyVec::zero(p.k);
    let mut t0 = PolyVec::zero(p.k);
    for i in 0..p.k {
        for j in 0..N {
            let (hi, lo) = power2round(t[i].coeffs[j]);
            t1[i].coeffs[j] = hi;
            t0[i].coeffs[j] = lo;
        }
    }
    let pk = pk_encode(p, &rho, &t1).expect("t1 in range");
    let tr: [u8; SEED_BYTES] = shake256(&[pk.as_bytes()]);
    let sk = sk_encode(
        p,
        &SecretKeyParts {
            rho,
            key,
            tr,
            s1,
            s2,
            t0,
        },
    )
    .expect("secret in range");
    (pk, sk)
}

/// Signing configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignOptions {
    pub backend: Backend,
    /// Replaces `ρ′ = H(K‖µ)` with caller-supplied randomness.
    pub randomness: Option<[u8; CRH_BYTES]>,
    /// Recompute every 8-bit product in full width and count wrapped lanes.
    pub wrap_check: bool,
}

impl SignOptions {
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            randomness: None,
            wrap_check: false,
        }
    }
}

/// A rejection test in the signing loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// `‖z‖∞ < γ1 - β`
    Z,
    /// `‖r0‖∞ < γ2 - β`
    R0,
    /// `‖c·t0‖∞ < γ2`
    Ct0,
    /// hint weight ≤ ω
    HintWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckRecord {
    pub iteration: u32,
    pub check: Check,
    pub passed: bool,
}

/// Intermediate values of the accepted iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accepted {
    /// Centered.
    pub z: PolyVec,
    pub h: HintVec,
    /// `c·s1`, `c·s2` in [0, q).
    pub cs1: PolyVec,
    pub cs2: PolyVec,
    pub z_norm: i32,
    pub r0_norm: i32,
}

/// What one signing call did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTrace {
    pub backend: Backend,
    pub iterations: u32,
    pub checks: Vec<CheckRecord>,
    /// Work spent forming `c·s1` and `c·s2` (including fused checks).
    pub cs_ops: OpCounts,
    /// Everything else.
    pub other_ops: OpCounts,
    /// Lanes whose 8-bit product differed from the exact one (only counted
    /// with [`SignOptions::wrap_check`]).
    pub wraps: usize,
    pub accepted: Option<Accepted>,
}

impl SignTrace {
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            iterations: 0,
            checks: Vec::new(),
            cs_ops: OpCounts::default(),
            other_ops: OpCounts::default(),
            wraps: 0,
            accepted: None,
        }
    }

    pub fn sk_decodes(&self) -> u64 {
        self.cs_ops.sk_decodes + self.other_ops.sk_decodes
    }

    pub fn total_ops(&self) -> OpCounts {
        let mut t = self.cs_ops;
        t += self.other_ops;
        t
    }

    /// Checks executed in `iteration`, in order.
    pub fn checks_in(&self, iteration: u32) -> Vec<Check> {
        self.checks.iter().filter(|r| r.iteration == iteration).map(|r| r.check).collect()
    }

    fn record(&mut self, check: Check, passed: bool) -> bool {
        self.checks.push(CheckRecord {
            iteration: self.iterations,
            check,
            passed,
        });
        passed
    }
}

/// A secret key decoded once and ready for any number of signing
/// iterations.
pub struct PreparedSigner {
    backend: Backend,
    secret: DecodedSecret,
    a_hat: Matrix,
    t0_hat: PolyVec,
    /// Only for the NTT backend.
    s_hat: Option<(PolyVec, PolyVec)>,
}

impl core::fmt::Debug for PreparedSigner {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "PreparedSigner({}, {})", self.secret.level, self.backend)
    }
}

fn ext_to_vec(ext: &[ExtendedSecret]) -> PolyVec {
    PolyVec::from(ext.iter().map(|e| e.secret().to_poly()).collect::<Vec<_>>())
}

impl PreparedSigner {
    /// Decodes `sk` (the only decode of the signing call).
    pub fn new(sk: &SecretKeyBytes, backend: Backend, meter: &mut impl Meter) -> Result<Self> {
        let secret = sk_decode_extended_metered(sk, meter)?;
        let p = secret.params();
        let a_hat = expand_a_metered(&secret.rho, p, meter);
        let t0_hat = secret.t0_polys().ntt_metered(meter)?;
        let s_hat = match backend {
            Backend::Ntt => Some((
                ext_to_vec(&secret.s1_ext).ntt_metered(meter)?,
                ext_to_vec(&secret.s2_ext).ntt_metered(meter)?,
            )),
            Backend::Sparse | Backend::SparseFused => None,
        };
        Ok(Self {
            backend,
            secret,
            a_hat,
            t0_hat,
            s_hat,
        })
    }

    pub fn params(&self) -> &'static ParameterSet {
        self.secret.params()
    }

    pub fn secret(&self) -> &DecodedSecret {
        &self.secret
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// `c·s` for every entry via the branchless kernel, lifted to [0, q).
    fn sparse_products(
        idx: &ChallengeIndexList,
        ext: &[ExtendedSecret],
        meter: &mut impl Meter,
    ) -> PolyVec {
        PolyVec::from(
            ext.iter()
                .map(|e| sparse_mul_branchless_metered(idx, e, meter).lift())
                .collect::<Vec<_>>(),
        )
    }

    fn count_wraps(idx: &ChallengeIndexList, ext: &[ExtendedSecret]) -> usize {
        ext.iter()
            .map(|e| sparse_mul_branchless(idx, e).wrapped_lanes(&exact_product(idx, e)))
            .sum()
    }

    /// Runs the rejection tests of one iteration for challenge `c`, mask `y`
    /// (centered) and `w = A·y` (in [0, q)). Returns the accepted values or
    /// `None` on rejection; every check that runs is appended to `trace`.
    pub fn attempt(
        &self,
        c: &SmallPoly,
        y: &PolyVec,
        w: &PolyVec,
        trace: &mut SignTrace,
        wrap_check: bool,
    ) -> Result<Option<Accepted>> {
        let p = self.params();
        let alpha = 2 * p.gamma2;
        let z_bound = p.gamma1 - p.beta;
        let r0_bound = p.gamma2 - p.beta;
        let c_hat = c.to_poly().ntt_metered(&mut trace.other_ops)?;

        let low = |v: &PolyVec| v.map(|q| Poly::from_coeffs(q.coeffs.map(|x| decompose(x, alpha).1)));

        let (z, cs1, cs2, r0) = match self.backend {
            Backend::Ntt | Backend::Sparse => {
                let idx = match self.backend {
                    Backend::Sparse => Some(encode_challenge(c, p.tau)?),
                    _ => None,
                };
                if let (Some(idx), true) = (&idx, wrap_check) {
                    trace.wraps += Self::count_wraps(idx, &self.secret.s1_ext) + Self::count_wraps(idx, &self.secret.s2_ext);
                }
                let product = |which: usize, trace: &mut SignTrace| -> Result<PolyVec> {
                    match (&idx, &self.s_hat) {
                        (Some(idx), _) => {
                            let ext = if which == 1 { &self.secret.s1_ext } else { &self.secret.s2_ext };
                            Ok(Self::sparse_products(idx, ext, &mut trace.cs_ops))
                        }
                        (None, Some((s1, s2))) => {
                            let s = if which == 1 { s1 } else { s2 };
                            s.scale_ntt_metered(&c_hat, &mut trace.cs_ops)?.inv_ntt_metered(&mut trace.cs_ops)
                        }
                        (None, None) => unreachable!("ntt backend keeps ŝ"),
                    }
                };
                let cs1 = product(1, trace)?;
                let z = centered_sum(y, &cs1);
                if !trace.record(Check::Z, !norm_inf_exceeds(&z, z_bound)) {
                    return Ok(None);
                }
                let cs2 = product(2, trace)?;
                let r0 = low(&w.sub(&cs2)?);
                if !trace.record(Check::R0, !norm_inf_exceeds(&r0, r0_bound)) {
                    return Ok(None);
                }
                (z, cs1, cs2, r0)
            }
            Backend::SparseFused => {
                let idx = encode_challenge(c, p.tau)?;
                if wrap_check {
                    trace.wraps += Self::count_wraps(&idx, &self.secret.s1_ext) + Self::count_wraps(&idx, &self.secret.s2_ext);
                }
                let Some(cs2) = fused_r0(&idx, &self.secret.s2_ext, w, p.gamma2, r0_bound, &mut trace.cs_ops) else {
                    trace.record(Check::R0, false);
                    return Ok(None);
                };
                trace.record(Check::R0, true);
                let Some(z) = fused_z(&idx, &self.secret.s1_ext, y, z_bound, &mut trace.cs_ops) else {
                    trace.record(Check::Z, false);
                    return Ok(None);
                };
                trace.record(Check::Z, true);
                let cs1 = lift(&z.sub(y)?);
                let r0 = low(&w.sub(&cs2)?);
                (z, cs1, cs2, r0)
            }
        };

        let ct0 = self
            .t0_hat
            .scale_ntt_metered(&c_hat, &mut trace.other_ops)?
            .inv_ntt_metered(&mut trace.other_ops)?;
        if !trace.record(Check::Ct0, !norm_inf_exceeds(&ct0, p.gamma2)) {
            return Ok(None);
        }
        // MakeHint(-ct0, w - cs2 + ct0)
        let r = w.sub(&cs2)?.add(&ct0)?;
        let h = HintVec::make(&ct0.map(Poly::neg), &r, alpha);
        if !trace.record(Check::HintWeight, h.weight() <= p.omega) {
            return Ok(None);
        }
        Ok(Some(Accepted {
            z_norm: norm_inf(&z),
            r0_norm: norm_inf(&r0),
            z,
            h,
            cs1,
            cs2,
        }))
    }
}

/// `y + centered(v)` with centered `y`.
fn centered_sum(y: &PolyVec, v: &PolyVec) -> PolyVec {
    PolyVec::from(
        y.iter()
            .zip(v.iter())
            .map(|(a, b)| {
                let mut out = Poly::zero();
                for i in 0..N {
                    out.coeffs[i] = a.coeffs[i] + center(b.coeffs[i]);
                }
                out
            })
            .collect::<Vec<_>>(),
    )
}

/// Signs `msg`; deterministic unless `opts.randomness` is set.
pub fn sign(sk: &SecretKeyBytes, msg: &[u8], opts: &SignOptions) -> Result<SignatureBytes> {
    sign_traced(sk, msg, opts).map(|(sig, _)| sig)
}

pub fn sign_traced(sk: &SecretKeyBytes, msg: &[u8], opts: &SignOptions) -> Result<(SignatureBytes, SignTrace)> {
    let mut trace = SignTrace::new(opts.backend);
    let signer = PreparedSigner::new(sk, opts.backend, &mut trace.other_ops)?;
    let p = signer.params();
    let secret = signer.secret();

    let mu: [u8; CRH_BYTES] = shake256(&[&secret.tr, msg]);
    let rho_prime: [u8; CRH_BYTES] = opts.randomness.unwrap_or_else(|| shake256(&[&secret.key, &mu]));
    trace.other_ops.xof_bytes(2 * CRH_BYTES as u64);

    let mut kappa: u16 = 0;
    loop {
        trace.iterations += 1;
        let y = expand_mask_metered(&rho_prime, kappa, p, &mut trace.other_ops);
        kappa = kappa.checked_add(p.l as u16).ok_or(Error::Malformed("mask nonce exhausted"))?;

        let w = mat_vec(&signer.a_hat, &y, &mut trace.other_ops);
        let w1 = w.map(|q| Poly::from_coeffs(q.coeffs.map(|x| high_bits(x, 2 * p.gamma2))));
        let mut h = XofState::shake256();
        h.absorb(&mu)?;
        h.absorb(&pack_w1_vec(&w1, p)?)?;
        let c_tilde: [u8; SEED_BYTES] = h.squeeze_array();
        trace.other_ops.xof_bytes(SEED_BYTES as u64);
        let c = sample_in_ball_metered(&c_tilde, p.tau, &mut trace.other_ops);

        if let Some(acc) = signer.attempt(&c, &y, &w, &mut trace, opts.wrap_check)? {
            let sig = sig_encode(
                p,
                &SignatureBundle {
                    c_tilde,
                    z: acc.z.clone(),
                    h: acc.h.clone(),
                },
            )?;
            trace.accepted = Some(acc);
            return Ok((sig, trace));
        }
    }
}

/// True iff `sig` is a valid signature of `msg` under `pk`. Never errors:
/// anything malformed is simply rejected.
pub fn verify(pk: &PublicKeyBytes, msg: &[u8], sig: &SignatureBytes) -> bool {
    verify_metered(pk, msg, sig, &mut ())
}

pub fn verify_metered(pk: &PublicKeyBytes, msg: &[u8], sig: &SignatureBytes, meter: &mut impl Meter) -> bool {
    verify_inner(pk, msg, sig, meter).unwrap_or(false)
}

fn verify_inner(pk: &PublicKeyBytes, msg: &[u8], sig: &SignatureBytes, meter: &mut impl Meter) -> Result<bool> {
    if pk.level() != sig.level() {
        return Ok(false);
    }
    let p = pk.params();
    let SignatureBundle { c_tilde, z, h } = sig_decode(sig)?;
    if norm_inf_exceeds(&z, p.gamma1 - p.beta) || h.weight() > p.omega {
        return Ok(false);
    }
    let (rho, t1) = pk_decode(pk)?;
    let tr: [u8; SEED_BYTES] = shake256(&[pk.as_bytes()]);
    let mu: [u8; CRH_BYTES] = shake256(&[&tr, msg]);
    meter.xof_bytes((SEED_BYTES + CRH_BYTES) as u64);

    let c = sample_in_ball_metered(&c_tilde, p.tau, meter);
    let c_hat = c.to_poly().ntt_metered(meter)?;
    let a_hat = expand_a_metered(&rho, p, meter);
    let az = matrix_mul_ntt(&a_hat, &lift(&z).ntt_metered(meter)?, meter)?;
    let t1_scaled = t1.map(|q| Poly::from_coeffs(q.coeffs.map(|x| reduce_i64(i64::from(x) << D))));
    let ct1 = t1_scaled.ntt_metered(meter)?.scale_ntt_metered(&c_hat, meter)?;
    let w_approx = az.sub(&ct1)?.inv_ntt_metered(meter)?;
    let w1 = h.apply(&w_approx, 2 * p.gamma2);

    let mut xof = XofState::shake256();
    xof.absorb(&mu)?;
    xof.absorb(&pack_w1_vec(&w1, p)?)?;
    let expected: [u8; SEED_BYTES] = xof.squeeze_array();
    meter.xof_bytes(SEED_BYTES as u64);
    Ok(expected == c_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{sk_decode, sk_decode_extended};
    use crate::params::{DILITHIUM2, DILITHIUM3};
    use crate::sampling::expand_a;

    #[test]
    fn backend_names_roundtrip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert_eq!("sparse_fused".parse::<Backend>().unwrap(), Backend::SparseFused);
        assert!("fft".parse::<Backend>().is_err());
        assert_eq!(Backend::default_for(Level::Three), Backend::Ntt);
        assert_eq!(Backend::default_for(Level::Five), Backend::SparseFused);
    }

    #[test]
    fn keygen_is_deterministic_and_consistent() {
        for level in Level::ALL {
            let p = level.params();
            let (pk, sk) = keygen(level, &[0; 32]);
            assert_eq!(keygen(level, &[0; 32]), (pk.clone(), sk.clone()));
            assert_eq!(pk.as_bytes().len(), p.public_key_bytes());
            assert_eq!(sk.as_bytes().len(), p.secret_key_bytes());

            // t1·2^d + t0 = A·s1 + s2
            let parts = sk_decode(&sk).unwrap();
            let (rho, t1) = pk_decode(&pk).unwrap();
            assert_eq!(rho, parts.rho);
            let a = expand_a(&rho, p);
            let t = mat_vec(&a, &small_to_vec(&parts.s1), &mut ()).add(&small_to_vec(&parts.s2)).unwrap();
            for i in 0..p.k {
                for j in 0..N {
                    let rebuilt = (t1[i].coeffs[j] << D) + parts.t0[i].coeffs[j];
                    assert_eq!(rebuilt, t[i].coeffs[j]);
                }
            }
            let dec = sk_decode_extended(&sk).unwrap();
            assert!(dec.s1_ext.iter().chain(&dec.s2_ext).all(|e| e.check_layout(p.eta)));
            assert_eq!(dec.s1_ext.iter().map(ExtendedSecret::secret).collect::<Vec<_>>(), parts.s1);
        }
    }

    #[test]
    fn sign_verify_all_backends() {
        for level in Level::ALL {
            let (pk, sk) = keygen(level, &[level.number(); 32]);
            let msg = b"attack at dawn";
            let mut sigs = Vec::new();
            for backend in Backend::ALL {
                let (sig, trace) = sign_traced(&sk, msg, &SignOptions::new(backend)).unwrap();
                assert!(verify(&pk, msg, &sig), "{level} {backend}");
                assert!(!verify(&pk, b"attack at dusk", &sig));
                assert_eq!(trace.sk_decodes(), 1);
                sigs.push(sig);
            }
            assert!(sigs.windows(2).all(|w| w[0] == w[1]), "{level}");
        }
    }

    #[test]
    fn randomized_signing_differs_but_verifies() {
        let (pk, sk) = keygen(Level::Two, &[9; 32]);
        let mut opts = SignOptions::new(Backend::SparseFused);
        opts.randomness = Some([1; 64]);
        let a = sign(&sk, b"m", &opts).unwrap();
        opts.randomness = Some([2; 64]);
        let b = sign(&sk, b"m", &opts).unwrap();
        assert_ne!(a, b);
        assert!(verify(&pk, b"m", &a) && verify(&pk, b"m", &b));
    }

    #[test]
    fn fused_checks_r0_first() {
        let p = &DILITHIUM2;
        let (_, sk) = keygen(Level::Two, &[3; 32]);
        let c = crate::sampling::sample_in_ball(&[0; 32], p.tau);
        // y = γ1 everywhere fails the z test, w = γ2 everywhere fails r0
        let y = PolyVec::from(vec![Poly::from_coeffs([p.gamma1; N]); p.l]);
        let w = PolyVec::from(vec![Poly::from_coeffs([p.gamma2; N]); p.k]);
        for (backend, first) in [(Backend::SparseFused, Check::R0), (Backend::Sparse, Check::Z), (Backend::Ntt, Check::Z)] {
            let signer = PreparedSigner::new(&sk, backend, &mut ()).unwrap();
            let mut trace = SignTrace::new(backend);
            assert!(signer.attempt(&c, &y, &w, &mut trace, false).unwrap().is_none());
            assert_eq!(trace.checks_in(0), vec![first], "{backend}");
        }
    }

    #[test]
    fn sparse_backends_do_no_modmul_for_products() {
        let (_, sk) = keygen(Level::Three, &[4; 32]);
        for backend in Backend::ALL {
            let (_, trace) = sign_traced(&sk, b"count", &SignOptions::new(backend)).unwrap();
            match backend {
                Backend::Ntt => assert!(trace.cs_ops.modmul > 0 && trace.cs_ops.lane_steps == 0),
                _ => assert!(trace.cs_ops.modmul == 0 && trace.cs_ops.lane_steps > 0),
            }
            let acc = trace.accepted.unwrap();
            assert!(acc.z_norm < DILITHIUM3.gamma1 - DILITHIUM3.beta);
            assert!(acc.r0_norm < DILITHIUM3.gamma2 - DILITHIUM3.beta);
        }
    }

    #[test]
    fn corrupted_signature_rejected() {
        let (pk, sk) = keygen(Level::Five, &[5; 32]);
        let sig = sign(&sk, b"x", &SignOptions::new(Backend::SparseFused)).unwrap();
        let mut bytes = sig.clone().into_bytes();
        bytes[0] ^= 1;
        assert!(!verify(&pk, b"x", &SignatureBytes::from_bytes(&bytes).unwrap()));
        let (pk2, _) = keygen(Level::Two, &[5; 32]);
        assert!(!verify(&pk2, b"x", &sig));
    }
}
