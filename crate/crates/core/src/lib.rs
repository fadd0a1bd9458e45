//! A Bai-Galbraith style lattice-based signature scheme over module
//! lattices: Fiat-Shamir with aborts, a single response vector, and no
//! public-key compression.
//!
//! The ring is Z_q[X]/(X^256 + 1) with q = 2^23 - 2^13 + 1. Key
//! generation draws a uniform k x l matrix A and short secrets (s1, s2),
//! publishing t = A*s1 + s2. Signing commits to w = A*y for a fresh mask
//! y, derives the sparse challenge c from the high bits of w and the
//! message, answers with z = y + c*s1, and restarts unless both z and the
//! low bits of w - c*s2 stay under gamma - beta. Verification recomputes
//! the challenge from High(A*z - c*t).
//!
//! All randomness is expanded deterministically from seeds through a
//! domain-tagged XOF, so keys, signatures, and the known-answer vectors
//! in [`codec::kat`] are reproducible byte-for-byte. Nothing here is
//! constant-time; this is a reference-quality implementation.
//!
//! ```
//! use bgsig::params::ValidatedParamSet;
//! use bgsig::sampling::Seed;
//! use bgsig::scheme::{keygen, sign, verify};
//!
//! let p = ValidatedParamSet::default_set();
//! let (pk, sk) = keygen(&p, &Seed([7; 32]));
//! let sig = sign(&p, &sk, b"hello").unwrap();
//! assert!(verify(&p, &pk, b"hello", &sig));
//! ```

pub mod codec;
pub mod params;
pub mod ring;
pub mod rounding;
pub mod sampling;
pub mod scheme;

pub use params::{ParamSet, ValidatedParamSet};
pub use sampling::{CHash, Challenge, Seed};
pub use scheme::{
    keygen, sign, sign_with, verify, verify_encoded, PublicKey, SecretKey, SignError,
    SignOptions, Signature,
};
