//! Exact overflow probabilities for 8-bit `c·s` lanes.
//!
//! A coefficient of `c·s` is a signed sum of τ secret coefficients, each
//! uniform on [-η, η] (the signs from `c` do not change the distribution),
//! so its law is the τ-fold convolution of the uniform law — a discrete
//! Irwin–Hall distribution. Counts are kept as big integers out of
//! (2η+1)^τ outcomes and every probability is an exact rational until the
//! final conversion.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exact law of the sum of τ independent uniforms on [-η, η].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffDistribution {
    eta: u32,
    tau: u32,
    /// `counts[i]` is the number of outcomes with sum `i - τη`.
    counts: Vec<BigUint>,
}

pub fn exact_sum_distribution(eta: u32, tau: u32) -> Result<CoeffDistribution> {
    if eta == 0 || tau == 0 {
        return Err(Error::Malformed("eta and tau must be positive"));
    }
    let width = 2 * eta as usize + 1;
    let mut counts = vec![BigUint::one()];
    for _ in 0..tau {
        // convolve with the all-ones kernel of length 2η+1 via a running sum
        let mut next = vec![BigUint::zero(); counts.len() + width - 1];
        let mut window = BigUint::zero();
        for (i, slot) in next.iter_mut().enumerate() {
            if i < counts.len() {
                window += &counts[i];
            }
            if i >= width {
                window -= &counts[i - width];
            }
            *slot = window.clone();
        }
        counts = next;
    }
    Ok(CoeffDistribution { eta, tau, counts })
}

impl CoeffDistribution {
    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// Largest attainable |u| = τη.
    pub fn max_abs(&self) -> i64 {
        i64::from(self.eta) * i64::from(self.tau)
    }

    /// Outcomes with sum `value` (zero outside the support).
    pub fn count(&self, value: i64) -> BigUint {
        let i = value + self.max_abs();
        if i < 0 || i as usize >= self.counts.len() {
            BigUint::zero()
        } else {
            self.counts[i as usize].clone()
        }
    }

    /// `(value, count)` over the support, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        let off = self.max_abs();
        self.counts.iter().enumerate().map(move |(i, c)| (i as i64 - off, c))
    }

    /// (2η+1)^τ.
    pub fn total(&self) -> BigUint {
        BigUint::from(2 * self.eta + 1).pow(self.tau)
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().eq(self.counts.iter().rev())
    }

    pub fn probability(&self, value: i64) -> BigRational {
        self.ratio(self.count(value))
    }

    /// Probability that `pred(u)` holds.
    pub fn probability_where(&self, pred: impl Fn(i64) -> bool) -> BigRational {
        let hits = self.iter().filter(|(v, _)| pred(*v)).fold(BigUint::zero(), |acc, (_, c)| acc + c);
        self.ratio(hits)
    }

    fn ratio(&self, hits: BigUint) -> BigRational {
        BigRational::new(BigInt::from(hits), BigInt::from(self.total()))
    }
}

/// An exact probability together with its nearest `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Probability {
    pub exact: BigRational,
    pub value: f64,
}

impl Probability {
    /// Rounds to the nearest `f64` (ties to even).
    pub fn from_exact(exact: BigRational) -> Self {
        let value = exact.to_f64().unwrap_or(f64::NAN);
        Self { exact, value }
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    /// `numerator/denominator` in lowest terms.
    pub fn ratio_string(&self) -> String {
        format!("{}/{}", self.exact.numer(), self.exact.denom())
    }

    /// Scientific notation with `digits` significant digits, rounded half
    /// up from the exact value.
    pub fn decimal_string(&self, digits: usize) -> String {
        decimal_string(&self.exact, digits)
    }
}

/// P(|u| > bound).
pub fn tail_probability(dist: &CoeffDistribution, bound: u64) -> Probability {
    let bound = i64::try_from(bound).unwrap_or(i64::MAX);
    Probability::from_exact(dist.probability_where(|v| v.abs() > bound))
}

/// P(|u| ≥ bound).
pub fn tail_probability_at_least(dist: &CoeffDistribution, bound: u64) -> Probability {
    let bound = i64::try_from(bound).unwrap_or(i64::MAX);
    Probability::from_exact(dist.probability_where(|v| v.abs() >= bound))
}

/// P(u ∉ [-128, 127]): the event that an 8-bit two's-complement lane wraps.
pub fn int8_overflow_probability(dist: &CoeffDistribution) -> Probability {
    Probability::from_exact(dist.probability_where(|v| !(-128..=127).contains(&v)))
}

/// `1 - (1 - p)^count` evaluated as `-expm1(count · ln_1p(-p))`, accurate
/// for tiny `p` where the direct form cancels catastrophically.
pub fn signature_failure_probability<F: Float>(p: F, count: u32) -> F {
    let n = F::from(count).expect("count fits");
    F::zero() - (n * (-p).ln_1p()).exp_m1()
}

/// `1 - (1 - p)^count` evaluated literally. For p near 1e-14 this loses
/// about four significant digits to cancellation.
pub fn signature_failure_probability_literal<F: Float>(p: F, count: u32) -> F {
    let count = i32::try_from(count).expect("count fits");
    F::one() - (F::one() - p).powi(count)
}

/// `1 - (1 - p)^count` exactly.
pub fn signature_failure_probability_exact(p: &BigRational, count: u32) -> Probability {
    let one = BigRational::one();
    let q = &one - p;
    Probability::from_exact(&one - num_traits::pow(q, count as usize))
}

/// Runs `trials` draws of a τ-term sum of uniforms on [-η, η] and counts
/// those with |u| > bound.
pub fn monte_carlo_overflow(eta: u32, tau: u32, bound: u64, trials: u64, seed: u64) -> u64 {
    let mut hist = monte_carlo_histogram(eta, tau, trials, seed);
    let max = i64::from(eta) * i64::from(tau);
    let bound = i64::try_from(bound).unwrap_or(i64::MAX);
    hist.iter_mut()
        .enumerate()
        .filter(|(i, _)| (*i as i64 - max).abs() > bound)
        .map(|(_, c)| *c)
        .sum()
}

/// Observed counts per value `i - τη`, same indexing as the exact law.
pub fn monte_carlo_histogram(eta: u32, tau: u32, trials: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = eta as i32;
    let max = eta as usize * tau as usize;
    let mut hist = vec![0u64; 2 * max + 1];
    for _ in 0..trials {
        let u: i32 = (0..tau).map(|_| rng.gen_range(-eta..=eta)).sum();
        hist[(u + max as i32) as usize] += 1;
    }
    hist
}

/// All overflow figures for one `(η, τ)` and bound.
#[derive(Debug, Clone, PartialEq)]
pub struct OverflowReport {
    pub eta: u32,
    pub tau: u32,
    pub bound: u64,
    /// P(|u| > bound).
    pub tail: Probability,
    /// P(|u| ≥ bound).
    pub tail_at_least: Probability,
    /// P(u ∉ [-128, 127]).
    pub int8_overflow: Probability,
    /// Per polynomial (256 coefficients), from P(|u| ≥ bound).
    pub per_poly_exact: Probability,
    pub per_poly_stable: f64,
    pub per_poly_literal: f64,
    /// Supplementary: over `polys` polynomials at once.
    pub polys: u32,
    pub per_vector: f64,
}

impl OverflowReport {
    pub fn new(eta: u32, tau: u32, bound: u64, polys: u32) -> Result<Self> {
        let dist = exact_sum_distribution(eta, tau)?;
        let tail_at_least = tail_probability_at_least(&dist, bound);
        let p = tail_at_least.value;
        Ok(Self {
            eta,
            tau,
            bound,
            tail: tail_probability(&dist, bound),
            per_poly_exact: signature_failure_probability_exact(&tail_at_least.exact, 256),
            per_poly_stable: signature_failure_probability(p, 256),
            per_poly_literal: signature_failure_probability_literal(p, 256),
            per_vector: signature_failure_probability(p, 256 * polys),
            int8_overflow: int8_overflow_probability(&dist),
            tail_at_least,
            polys,
        })
    }
}

/// Scientific notation of a non-negative rational to `digits` significant
/// digits.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return format!("0.{}e0", "0".repeat(digits - 1));
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let r = r.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    // estimate the exponent from bit lengths, then correct
    let bits = r.numer().bits() as i64 - r.denom().bits() as i64;
    let mut exp = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            num_traits::pow(ten.clone(), e as usize)
        } else {
            num_traits::pow(ten.clone(), (-e) as usize).recip()
        }
    };
    while r >= pow10(exp + 1) {
        exp += 1;
    }
    while r < pow10(exp) {
        exp -= 1;
    }
    let scaled = &r * pow10(digits as i64 - 1 - exp);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut mantissa = (scaled + half).floor().to_integer();
    if mantissa.to_string().len() > digits {
        // rounding carried into a new digit
        mantissa /= 10;
        exp += 1;
    }
    let m = mantissa.to_string();
    let (head, tail) = m.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}
