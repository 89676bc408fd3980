//! Arithmetic in R_q = Z_q[x]/(x^256 + 1).
//!
//! Every multiplication route in the crate is checked against
//! [`schoolbook_negacyclic`].

pub mod ntt;
pub mod reduce;

use core::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::meter::Meter;
use crate::params::{N, Q};
use reduce::{caddq, center, freeze, mul_mod, reduce_i64};

/// Which representation a polynomial's coefficients are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Standard,
    Ntt,
}

/// A ring element with 32-bit signed coefficients.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: [i32; N],
    domain: Domain,
}

impl core::fmt::Debug for Poly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Poly({:?}, {:?}..)", self.domain, &self.coeffs[..8])
    }
}

impl Default for Poly {
    fn default() -> Self {
        Self::zero()
    }
}

fn check_domain(found: Domain, expected: Domain) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::DomainMismatch { expected, found })
    }
}

impl Poly {
    pub const fn zero() -> Self {
        Self {
            coeffs: [0; N],
            domain: Domain::Standard,
        }
    }

    pub const fn from_coeffs(coeffs: [i32; N]) -> Self {
        Self {
            coeffs,
            domain: Domain::Standard,
        }
    }

    pub const fn from_ntt_coeffs(coeffs: [i32; N]) -> Self {
        Self {
            coeffs,
            domain: Domain::Ntt,
        }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `value · x^degree`, with `value` reduced into [0, q).
    pub fn monomial(degree: usize, value: i32) -> Self {
        let mut p = Self::zero();
        p.coeffs[degree] = reduce_i64(i64::from(value));
        p
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ntt(&self) -> Result<Poly> {
        self.ntt_metered(&mut ())
    }

    /// Forward transform of a standard-domain polynomial whose coefficients
    /// satisfy |a_i| < q. Output coefficients are in [0, q).
    pub fn ntt_metered(&self, meter: &mut impl Meter) -> Result<Poly> {
        check_domain(self.domain, Domain::Standard)?;
        let mut coeffs = self.coeffs;
        ntt::forward(&mut coeffs, meter);
        coeffs.iter_mut().for_each(|c| *c = freeze(*c));
        Ok(Self::from_ntt_coeffs(coeffs))
    }

    pub fn inv_ntt(&self) -> Result<Poly> {
        self.inv_ntt_metered(&mut ())
    }

    /// Inverse transform. Input coefficients must satisfy |a_i| < q; output
    /// coefficients are in [0, q).
    pub fn inv_ntt_metered(&self, meter: &mut impl Meter) -> Result<Poly> {
        check_domain(self.domain, Domain::Ntt)?;
        let mut coeffs = self.coeffs;
        ntt::inverse(&mut coeffs, meter);
        coeffs.iter_mut().for_each(|c| *c = caddq(*c));
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn pointwise_mul(&self, other: &Poly) -> Result<Poly> {
        self.pointwise_mul_metered(other, &mut ())
    }

    /// Coefficient-wise product mod q of two NTT-domain polynomials, so that
    /// `inv_ntt(pointwise_mul(ntt(a), ntt(b))) = a·b`.
    pub fn pointwise_mul_metered(&self, other: &Poly, meter: &mut impl Meter) -> Result<Poly> {
        check_domain(self.domain, Domain::Ntt)?;
        check_domain(other.domain, Domain::Ntt)?;
        let mut out = Self::from_ntt_coeffs([0; N]);
        for ((o, a), b) in out.coeffs.iter_mut().zip(&self.coeffs).zip(&other.coeffs) {
            *o = mul_mod(*a, *b);
        }
        meter.modmul(N as u64);
        Ok(out)
    }

    fn zip_with(&self, other: &Poly, f: impl Fn(i64, i64) -> i64) -> Result<Poly> {
        check_domain(other.domain, self.domain)?;
        let mut out = *self;
        for (o, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o = reduce_i64(f(i64::from(*o), i64::from(*b)));
        }
        Ok(out)
    }

    /// Coefficient-wise sum, reduced into [0, q).
    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Coefficient-wise difference, reduced into [0, q).
    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Negation, reduced into [0, q).
    pub fn neg(&self) -> Poly {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c = reduce_i64(-i64::from(*c)));
        out
    }

    /// Full reduction of every coefficient into [0, q).
    ///
    /// Valid for coefficients a ≤ 2^31 - 2^22 - 1 (any negative value is
    /// accepted).
    pub fn reduce(&self) -> Poly {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c = freeze(*c));
        out
    }

    /// Maps negative representatives in (-q, 0) to [0, q).
    pub fn caddq(&self) -> Poly {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c = caddq(*c));
        out
    }

    /// Centered representatives in [-(q-1)/2, (q-1)/2].
    pub fn centered(&self) -> Poly {
        let mut out = self.reduce();
        out.coeffs.iter_mut().for_each(|c| *c = center(*c));
        out
    }

    /// Multiplies by `x^shift` (negacyclically).
    pub fn rotate(&self, shift: usize) -> Poly {
        let mut out = Poly::zero();
        out.domain = self.domain;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = i + shift % (2 * N);
            let (j, negate) = ((j % N), (j / N) % 2 == 1);
            out.coeffs[j] = if negate { reduce_i64(-i64::from(c)) } else { reduce_i64(i64::from(c)) };
        }
        out
    }

    /// True if every coefficient is in [0, q).
    pub fn is_reduced(&self) -> bool {
        self.coeffs.iter().all(|c| (0..Q).contains(c))
    }
}

/// Exact O(n^2) negacyclic product of the integer coefficients, reduced into
/// [0, q). Domain tags are ignored; the result is standard-domain.
pub fn schoolbook_negacyclic(a: &Poly, b: &Poly) -> Poly {
    let mut acc = [0i64; N];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        let ai = i64::from(ai);
        for (j, &bj) in b.coeffs.iter().enumerate() {
            let prod = ai * i64::from(bj);
            if i + j < N {
                acc[i + j] += prod;
            } else {
                acc[i + j - N] -= prod;
            }
        }
        // keep the accumulator far from overflow for unreduced inputs
        if i % 64 == 63 {
            acc.iter_mut().for_each(|v| *v %= i64::from(Q));
        }
    }
    let mut out = Poly::zero();
    for (o, v) in out.coeffs.iter_mut().zip(acc) {
        *o = reduce_i64(v);
    }
    out
}

/// A vector of polynomials sharing one domain.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PolyVec {
    polys: Vec<Poly>,
}

impl PolyVec {
    pub fn zero(len: usize) -> Self {
        Self {
            polys: vec![Poly::zero(); len],
        }
    }

    pub fn new(polys: Vec<Poly>) -> Result<Self> {
        if let Some(first) = polys.first() {
            for p in &polys[1..] {
                check_domain(p.domain, first.domain)?;
            }
        }
        Ok(Self { polys })
    }

    pub fn domain(&self) -> Option<Domain> {
        self.polys.first().map(|p| p.domain)
    }

    pub fn into_inner(self) -> Vec<Poly> {
        self.polys
    }

    pub fn ntt_metered(&self, meter: &mut impl Meter) -> Result<PolyVec> {
        let polys = self.iter().map(|p| p.ntt_metered(meter)).collect::<Result<_>>()?;
        Ok(Self { polys })
    }

    pub fn ntt(&self) -> Result<PolyVec> {
        self.ntt_metered(&mut ())
    }

    pub fn inv_ntt_metered(&self, meter: &mut impl Meter) -> Result<PolyVec> {
        let polys = self.iter().map(|p| p.inv_ntt_metered(meter)).collect::<Result<_>>()?;
        Ok(Self { polys })
    }

    pub fn inv_ntt(&self) -> Result<PolyVec> {
        self.inv_ntt_metered(&mut ())
    }

    pub fn add(&self, other: &PolyVec) -> Result<PolyVec> {
        self.check_len(other)?;
        let polys = self.iter().zip(other.iter()).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Self { polys })
    }

    pub fn sub(&self, other: &PolyVec) -> Result<PolyVec> {
        self.check_len(other)?;
        let polys = self.iter().zip(other.iter()).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(Self { polys })
    }

    /// Every entry multiplied (in the NTT domain) by the same polynomial.
    pub fn scale_ntt_metered(&self, c: &Poly, meter: &mut impl Meter) -> Result<PolyVec> {
        let polys = self.iter().map(|p| c.pointwise_mul_metered(p, meter)).collect::<Result<_>>()?;
        Ok(Self { polys })
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyVec {
        Self {
            polys: self.iter().map(f).collect(),
        }
    }

    fn check_len(&self, other: &PolyVec) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::InvalidLength {
                expected: self.len(),
                found: other.len(),
            })
        }
    }
}

impl From<Vec<Poly>> for PolyVec {
    /// Panics if the entries are in mixed domains.
    fn from(polys: Vec<Poly>) -> Self {
        Self::new(polys).expect("mixed domains in PolyVec")
    }
}

impl Deref for PolyVec {
    type Target = [Poly];

    fn deref(&self) -> &[Poly] {
        &self.polys
    }
}

impl DerefMut for PolyVec {
    fn deref_mut(&mut self) -> &mut [Poly] {
        &mut self.polys
    }
}

/// `k × ℓ` matrix of NTT-domain polynomials.
pub type Matrix = Vec<Vec<Poly>>;

/// Matrix-vector product in the NTT domain: `out_i = Σ_j a_ij ∘ v_j`.
pub fn matrix_mul_ntt(a: &Matrix, v: &PolyVec, meter: &mut impl Meter) -> Result<PolyVec> {
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        if row.len() != v.len() {
            return Err(Error::InvalidLength {
                expected: row.len(),
                found: v.len(),
            });
        }
        let mut acc = Poly::from_ntt_coeffs([0; N]);
        for (aij, vj) in row.iter().zip(v.iter()) {
            acc = acc.add(&aij.pointwise_mul_metered(vj, meter)?)?;
        }
        out.push(acc);
    }
    PolyVec::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut impl Rng) -> Poly {
        let mut p = Poly::zero();
        p.coeffs.iter_mut().for_each(|c| *c = rng.gen_range(0..Q));
        p
    }

    #[test]
    fn ntt_of_zero_is_zero() {
        assert_eq!(Poly::zero().ntt().unwrap().coeffs, [0; N]);
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let p = random_poly(&mut rng);
            let back = p.ntt().unwrap().inv_ntt().unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn roundtrip_basis_vectors() {
        for i in 0..N {
            let x = Poly::monomial(i, 1);
            assert_eq!(x.ntt().unwrap().inv_ntt().unwrap(), x);
        }
    }

    #[test]
    fn inverse_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = random_poly(&mut rng).ntt().unwrap();
            let b = random_poly(&mut rng).ntt().unwrap();
            let lhs = a.add(&b).unwrap().inv_ntt().unwrap();
            let rhs = a.inv_ntt().unwrap().add(&b.inv_ntt().unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn domain_errors() {
        let p = Poly::zero();
        assert_eq!(
            p.inv_ntt(),
            Err(Error::DomainMismatch {
                expected: Domain::Ntt,
                found: Domain::Standard
            })
        );
        let h = p.ntt().unwrap();
        assert!(h.ntt().is_err());
        assert!(h.pointwise_mul(&p).is_err());
        assert!(p.add(&h).is_err());
        assert!(PolyVec::new(vec![p, h]).is_err());
    }

    #[test]
    fn multiply_by_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let one = Poly::one().ntt().unwrap();
        for _ in 0..20 {
            let a = random_poly(&mut rng);
            let prod = a.ntt().unwrap().pointwise_mul(&one).unwrap().inv_ntt().unwrap();
            assert_eq!(prod, a);
        }
    }

    #[test]
    fn negacyclic_wrap() {
        let x = Poly::monomial(1, 1);
        let x255 = Poly::monomial(255, 1);
        let minus_one = Poly::monomial(0, -1);
        let via_ntt = x
            .ntt()
            .unwrap()
            .pointwise_mul(&x255.ntt().unwrap())
            .unwrap()
            .inv_ntt()
            .unwrap();
        assert_eq!(via_ntt, minus_one);
        assert_eq!(schoolbook_negacyclic(&x, &x255), minus_one);
    }

    #[test]
    fn ntt_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let via_ntt = a
                .ntt()
                .unwrap()
                .pointwise_mul(&b.ntt().unwrap())
                .unwrap()
                .inv_ntt()
                .unwrap();
            assert_eq!(via_ntt, schoolbook_negacyclic(&a, &b));
        }
    }

    #[test]
    fn schoolbook_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            assert_eq!(schoolbook_negacyclic(&a, &Poly::one()), a);
            assert_eq!(schoolbook_negacyclic(&a, &Poly::monomial(1, 1)), a.rotate(1));
            assert_eq!(schoolbook_negacyclic(&a, &b), schoolbook_negacyclic(&b, &a));
        }
    }

    #[test]
    fn add_sub_helpers() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_poly(&mut rng);
        assert_eq!(a.add(&Poly::zero()).unwrap(), a);
        assert_eq!(a.sub(&a).unwrap(), Poly::zero());
        assert_eq!(a.add(&a.neg()).unwrap(), Poly::zero());
        let mut neg = Poly::zero();
        neg.coeffs[0] = -5;
        assert_eq!(neg.caddq().coeffs[0], Q - 5);
    }

    #[test]
    fn reduce_range_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let max = i32::MAX - (1 << 22);
        for _ in 0..2000 {
            let mut p = Poly::zero();
            p.coeffs.iter_mut().for_each(|c| *c = rng.gen_range(i32::MIN..=max));
            let r = p.reduce();
            assert!(r.is_reduced());
            for (x, y) in p.coeffs.iter().zip(&r.coeffs) {
                assert_eq!(i64::from(*y), i64::from(*x).rem_euclid(i64::from(Q)));
            }
        }
    }
}
