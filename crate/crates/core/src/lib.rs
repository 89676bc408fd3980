//! Dilithium signatures with branchless sparse challenge multiplication.
//!
//! The signer can form `c·s1` and `c·s2` either through the NTT or by
//! summing shifted windows of a precomputed `(-s, s)` byte array in packed
//! 8-bit lanes (see [`sparse`]). [`analysis`] computes the exact probability
//! that such a lane overflows for the level-3 parameters.

pub mod analysis;
pub mod codec;
pub mod error;
pub mod meter;
pub mod params;
pub mod ring;
pub mod rounding;
pub mod sampling;
pub mod scheme;
pub mod sparse;
pub mod xof;

pub use codec::{DecodedSecret, PublicKeyBytes, SecretKeyBytes, SignatureBundle, SignatureBytes};
pub use error::{Error, Result};
pub use params::{param_set, Level, ParameterSet};
pub use scheme::{keygen, sign, sign_traced, verify, Backend, SignOptions, SignTrace};
