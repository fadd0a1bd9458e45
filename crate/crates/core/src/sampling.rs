//! Deterministic randomness expansion: the uniform matrix A, bounded
//! secrets, signing masks, the Fiat-Shamir challenge hash, and the sparse
//! challenge itself.
//!
//! Everything is driven by one XOF (SHAKE-256) with a one-byte domain tag
//! prefix, so every sampler is a pure function of its seed inputs and
//! byte-identical across platforms. Out-of-range candidates are always
//! rejected and redrawn; no modulo-bias shortcuts. Multi-byte integers
//! inside XOF inputs are little-endian; nonces are two bytes.

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;
use thiserror::Error;

use crate::params::ValidatedParamSet;
use crate::ring::{from_centered, MatrixA, Poly, Q};

/// Domain tag for matrix expansion.
pub const TAG_A: u8 = 0x00;
/// Domain tag for secret sampling.
pub const TAG_S: u8 = 0x01;
/// Domain tag for signing masks.
pub const TAG_MASK: u8 = 0x02;
/// Domain tag for the challenge hash.
pub const TAG_CHALLENGE: u8 = 0x03;
/// Domain tag for expanding a challenge hash into the sparse challenge.
pub const TAG_BALL: u8 = 0x04;
/// Domain tag for deriving per-key seed material.
pub const TAG_KDF: u8 = 0x05;

/// A 32-byte seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub [u8; 32]);

/// Malformed textual seed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("seed must be exactly 64 hex digits")]
pub struct SeedError;

impl Seed {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn from_hex(s: &str) -> Result<Seed, SeedError> {
        let bytes = hex::decode(s.trim()).map_err(|_| SeedError)?;
        let arr: [u8; 32] = bytes.try_into().map_err(|_| SeedError)?;
        Ok(Seed(arr))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

/// The 32-byte Fiat-Shamir digest a signature carries; the challenge
/// polynomial is re-expanded from it on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CHash(pub [u8; 32]);

impl CHash {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

/// Sparse challenge: exactly tau positions carrying +/-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Challenge {
    entries: Vec<(u8, i8)>,
}

impl Challenge {
    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    /// (position, sign) pairs in increasing position order.
    pub fn entries(&self) -> &[(u8, i8)] {
        &self.entries
    }

    /// Dense canonical form (-1 stored as q-1).
    pub fn to_poly(&self) -> Poly {
        let mut coeffs = [0u32; crate::ring::N];
        for &(pos, sign) in &self.entries {
            coeffs[pos as usize] = if sign > 0 { 1 } else { Q - 1 };
        }
        Poly::from_canonical(coeffs)
    }
}

/// An incrementally squeezed domain-tagged SHAKE-256 stream.
pub struct XofStream {
    reader: <Shake256 as ExtendableOutput>::Reader,
}

impl XofStream {
    /// Absorbs `tag || parts[0] || parts[1] || ...` and starts squeezing.
    pub fn new(tag: u8, parts: &[&[u8]]) -> XofStream {
        let mut hasher = Shake256::default();
        hasher.update(&[tag]);
        for part in parts {
            hasher.update(part);
        }
        XofStream { reader: hasher.finalize_xof() }
    }

    pub fn read(&mut self, buf: &mut [u8]) {
        self.reader.read(buf);
    }

    pub fn read_byte(&mut self) -> u8 {
        let mut b = [0u8; 1];
        self.reader.read(&mut b);
        b[0]
    }
}

/// One-shot form of [`XofStream`]: `outlen` bytes of
/// SHAKE256(tag || input).
pub fn xof(tag: u8, input: &[u8], outlen: usize) -> Vec<u8> {
    let mut out = vec![0u8; outlen];
    XofStream::new(tag, &[input]).read(&mut out);
    out
}

/// Plain untagged SHAKE-256, used for fingerprints and KAT digests
/// (deliberately outside the tagged sampler domains).
pub fn shake256(input: &[u8], outlen: usize) -> Vec<u8> {
    let mut hasher = Shake256::default();
    hasher.update(input);
    let mut out = vec![0u8; outlen];
    hasher.finalize_xof().read(&mut out);
    out
}

/// One uniform matrix entry. Candidates are 23-bit values assembled
/// little-endian from 3-byte groups; values >= q are rejected. The entry
/// depends only on (rho, i, j), never on the matrix dimensions.
pub fn expand_a_entry(rho: &Seed, i: u16, j: u16) -> Poly {
    let mut stream = XofStream::new(
        TAG_A,
        &[rho.as_bytes(), &i.to_le_bytes(), &j.to_le_bytes()],
    );
    let mut coeffs = [0u32; crate::ring::N];
    let mut filled = 0;
    let mut buf = [0u8; 3];
    while filled < coeffs.len() {
        stream.read(&mut buf);
        let candidate =
            buf[0] as u32 | (buf[1] as u32) << 8 | ((buf[2] & 0x7f) as u32) << 16;
        if candidate < Q {
            coeffs[filled] = candidate;
            filled += 1;
        }
    }
    Poly::from_canonical(coeffs)
}

/// The public k x l matrix, uniform over R_q, derived from rho.
pub fn expand_a(rho: &Seed, p: &ValidatedParamSet) -> MatrixA {
    let rows = (0..p.k)
        .map(|i| {
            (0..p.l)
                .map(|j| expand_a_entry(rho, i as u16, j as u16))
                .collect()
        })
        .collect();
    MatrixA::new(rows)
}

/// One secret polynomial with coefficients uniform on [-eta, eta].
/// Nibbles are drawn low-half first and rejected unless < 2*eta + 1;
/// an accepted nibble u maps to eta - u.
pub fn expand_s(sigma: &Seed, nonce: u16, p: &ValidatedParamSet) -> Poly {
    assert!(2 * p.eta + 1 <= 16, "nibble sampling requires eta <= 7");
    let mut stream = XofStream::new(TAG_S, &[sigma.as_bytes(), &nonce.to_le_bytes()]);
    let bound = 2 * p.eta + 1;
    let mut coeffs = [0u32; crate::ring::N];
    let mut filled = 0;
    while filled < coeffs.len() {
        let byte = stream.read_byte();
        for nib in [byte & 0x0f, byte >> 4] {
            if (nib as u32) < bound && filled < coeffs.len() {
                coeffs[filled] = from_centered(p.eta as i64 - nib as i64);
                filled += 1;
            }
        }
    }
    Poly::from_canonical(coeffs)
}

/// One mask polynomial with coefficients uniform on [-gamma, gamma],
/// deterministic in (key seed, message, attempt, vector index). Candidates
/// are 20-bit values taken in pairs from 5-byte groups; an accepted u
/// maps to gamma - u.
pub fn expand_mask(
    key: &Seed,
    mu: &[u8],
    attempt: u16,
    j: u16,
    p: &ValidatedParamSet,
) -> Poly {
    let bound = 2 * p.gamma + 1;
    assert!(bound <= 1 << 20, "20-bit mask sampling requires gamma <= 2^19 - 1");
    let mut stream = XofStream::new(
        TAG_MASK,
        &[
            key.as_bytes(),
            mu,
            &attempt.to_le_bytes(),
            &j.to_le_bytes(),
        ],
    );
    let mut coeffs = [0u32; crate::ring::N];
    let mut filled = 0;
    let mut buf = [0u8; 5];
    while filled < coeffs.len() {
        stream.read(&mut buf);
        let lo = buf[0] as u32 | (buf[1] as u32) << 8 | ((buf[2] & 0x0f) as u32) << 16;
        let hi = (buf[2] >> 4) as u32 | (buf[3] as u32) << 4 | (buf[4] as u32) << 12;
        for candidate in [lo, hi] {
            if candidate < bound && filled < coeffs.len() {
                coeffs[filled] = from_centered(p.gamma as i64 - candidate as i64);
                filled += 1;
            }
        }
    }
    Poly::from_canonical(coeffs)
}

/// The Fiat-Shamir digest: 32 bytes of SHAKE256(tag || w1_bytes || M),
/// where `w1_bytes` is the canonical packed high-bits string.
pub fn hash_challenge(w1_bytes: &[u8], message: &[u8]) -> CHash {
    let mut out = [0u8; 32];
    XofStream::new(TAG_CHALLENGE, &[w1_bytes, message]).read(&mut out);
    CHash(out)
}

/// Expands a challenge digest into the sparse tau-weight challenge by
/// Fisher-Yates insertion: sign bits come from the first 8 stream bytes
/// (little-endian, bit b set means -1), swap indices from rejection
/// sampling on single bytes.
pub fn sample_in_ball(ch: &CHash, p: &ValidatedParamSet) -> Challenge {
    assert!(p.tau <= 64, "sign-bit buffer covers tau <= 64");
    let mut stream = XofStream::new(TAG_BALL, &[ch.as_bytes()]);
    let mut sign_bytes = [0u8; 8];
    stream.read(&mut sign_bytes);
    let signs = u64::from_le_bytes(sign_bytes);

    let n = crate::ring::N;
    let mut dense = [0i8; crate::ring::N];
    for i in (n - p.tau)..n {
        let j = loop {
            let b = stream.read_byte() as usize;
            if b <= i {
                break b;
            }
        };
        let bit = i - (n - p.tau);
        dense[i] = dense[j];
        dense[j] = if signs >> bit & 1 == 1 { -1 } else { 1 };
    }

    let entries = dense
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != 0)
        .map(|(pos, &s)| (pos as u8, s))
        .collect();
    Challenge { entries }
}
