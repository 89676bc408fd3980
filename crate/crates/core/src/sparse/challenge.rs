use crate::error::{Error, Result};
use crate::params::N;

use super::SmallPoly;

/// The τ+1 byte encoding of a challenge in B_τ.
///
/// `bytes[0]` holds the number of +1 coefficients (`poscnt`). Slots
/// `1..=poscnt` hold the +1 positions in ascending order; slots
/// `poscnt+1..=τ` hold the -1 positions, filled from slot τ downward as
/// they are found, so slot τ holds the smallest one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChallengeIndexList {
    bytes: Vec<u8>,
}

impl ChallengeIndexList {
    /// Validates a raw list for challenge weight `tau`.
    pub fn from_bytes(bytes: &[u8], tau: usize) -> Result<Self> {
        if bytes.len() != tau + 1 {
            return Err(Error::InvalidLength {
                expected: tau + 1,
                found: bytes.len(),
            });
        }
        if usize::from(bytes[0]) > tau {
            return Err(Error::InvalidChallenge("positive count exceeds tau"));
        }
        let mut seen = [false; N];
        for &i in &bytes[1..] {
            if std::mem::replace(&mut seen[usize::from(i)], true) {
                return Err(Error::InvalidChallenge("duplicate index"));
            }
        }
        Ok(Self { bytes: bytes.to_vec() })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn tau(&self) -> usize {
        self.bytes.len() - 1
    }

    pub fn poscnt(&self) -> usize {
        usize::from(self.bytes[0])
    }

    /// Positions of the +1 coefficients.
    pub fn positives(&self) -> &[u8] {
        &self.bytes[1..=self.poscnt()]
    }

    /// Positions of the -1 coefficients.
    pub fn negatives(&self) -> &[u8] {
        &self.bytes[self.poscnt() + 1..]
    }
}

/// Encodes a challenge with exactly `tau` coefficients in {-1, +1}.
pub fn encode_challenge(c: &SmallPoly, tau: usize) -> Result<ChallengeIndexList> {
    if tau == 0 || tau > N {
        return Err(Error::InvalidChallenge("tau out of range"));
    }
    let mut bytes = vec![0u8; tau + 1];
    let (mut h, mut t) = (1usize, tau);
    let mut weight = 0;
    for (i, &ci) in c.coeffs.iter().enumerate() {
        match ci {
            0 => continue,
            1 | -1 => {
                weight += 1;
                if weight > tau {
                    return Err(Error::InvalidChallenge("Hamming weight exceeds tau"));
                }
                if ci == 1 {
                    bytes[h] = i as u8;
                    h += 1;
                } else {
                    bytes[t] = i as u8;
                    t -= 1;
                }
            }
            _ => return Err(Error::InvalidChallenge("coefficient outside {-1, 0, 1}")),
        }
    }
    if weight != tau {
        return Err(Error::InvalidChallenge("Hamming weight below tau"));
    }
    bytes[0] = (h - 1) as u8;
    Ok(ChallengeIndexList { bytes })
}

/// Inverse of [`encode_challenge`].
pub fn decode_challenge(idx: &ChallengeIndexList) -> SmallPoly {
    let mut c = SmallPoly::zero();
    for &i in idx.positives() {
        c.coeffs[usize::from(i)] = 1;
    }
    for &i in idx.negatives() {
        c.coeffs[usize::from(i)] = -1;
    }
    c
}
