//! Bit-exact byte encodings for keys, signatures, and the hashed
//! high-bits string, plus the known-answer-test harness in [`kat`].
//!
//! Every binary object starts with a two-byte header (magic nibble,
//! object kind, parameter-set id). Payload coefficients are packed
//! little-endian bit-first at the minimal widths the parameter set
//! derives; signed values are stored with their lower bound subtracted.
//! Decoding is strict: wrong header, wrong length, out-of-range
//! coefficient, or a set padding bit all fail.

pub mod kat;

use thiserror::Error;

use crate::params::{ParamSet, ValidatedParamSet};
use crate::ring::{from_centered, to_centered, Poly, PolyVec, N};
use crate::rounding::HighVec;
use crate::sampling::{CHash, Seed};
use crate::scheme::{PublicKey, SecretKey, Signature};

const MAGIC: u8 = 0xB0;
const KIND_PK: u8 = 0x01;
const KIND_SK: u8 = 0x02;
const KIND_SIG: u8 = 0x03;

/// Strict decoding failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("wrong length: got {got} bytes, expected {want}")]
    Length { got: usize, want: usize },
    #[error("bad object header")]
    Header,
    #[error("nonzero padding bits")]
    Padding,
    #[error("coefficient out of range")]
    OutOfRange,
}

fn paramset_id(p: &ParamSet) -> u8 {
    if *p == ParamSet::default_set() {
        0x01
    } else {
        0x00
    }
}

fn header(kind: u8, p: &ValidatedParamSet) -> [u8; 2] {
    [MAGIC | kind, paramset_id(p)]
}

fn check_header(bytes: &[u8], kind: u8, p: &ValidatedParamSet) -> Result<(), CodecError> {
    if bytes[0] != MAGIC | kind || bytes[1] != paramset_id(p) {
        return Err(CodecError::Header);
    }
    Ok(())
}

fn packed_len(count: usize, width: u32) -> usize {
    (count * width as usize + 7) / 8
}

/// Packs `values` at `width` bits each, little-endian bit order, after
/// subtracting `offset`. Trailing padding bits are zero. Every shifted
/// value must fit in `width` bits.
pub fn pack_bits(values: &[i64], width: u32, offset: i64) -> Vec<u8> {
    assert!(width >= 1 && width <= 32);
    let mut out = vec![0u8; packed_len(values.len(), width)];
    let mut bit = 0usize;
    for &v in values {
        let stored = v - offset;
        assert!(
            (0..1i64 << width).contains(&stored),
            "value {v} out of range for width {width} offset {offset}"
        );
        let stored = stored as u64;
        for b in 0..width as usize {
            if stored >> b & 1 == 1 {
                out[bit >> 3] |= 1 << (bit & 7);
            }
            bit += 1;
        }
    }
    out
}

/// Inverse of [`pack_bits`]. `span` is the number of valid stored values:
/// any stored value >= span, a length mismatch, or a set padding bit is
/// an error.
pub fn unpack_bits(
    bytes: &[u8],
    width: u32,
    offset: i64,
    count: usize,
    span: u64,
) -> Result<Vec<i64>, CodecError> {
    assert!(width >= 1 && width <= 32);
    let want = packed_len(count, width);
    if bytes.len() != want {
        return Err(CodecError::Length { got: bytes.len(), want });
    }
    let mut out = Vec::with_capacity(count);
    let mut bit = 0usize;
    for _ in 0..count {
        let mut stored = 0u64;
        for b in 0..width as usize {
            if bytes[bit >> 3] >> (bit & 7) & 1 == 1 {
                stored |= 1 << b;
            }
            bit += 1;
        }
        if stored >= span {
            return Err(CodecError::OutOfRange);
        }
        out.push(stored as i64 + offset);
    }
    while bit < bytes.len() * 8 {
        if bytes[bit >> 3] >> (bit & 7) & 1 == 1 {
            return Err(CodecError::Padding);
        }
        bit += 1;
    }
    Ok(out)
}

fn pack_polyvec_canonical(v: &PolyVec, width: u32) -> Vec<u8> {
    let values: Vec<i64> = v
        .iter()
        .flat_map(|poly| poly.coeffs().iter().map(|&c| c as i64))
        .collect();
    pack_bits(&values, width, 0)
}

fn unpack_polyvec_canonical(
    bytes: &[u8],
    width: u32,
    len: usize,
    span: u64,
) -> Result<PolyVec, CodecError> {
    let values = unpack_bits(bytes, width, 0, len * N, span)?;
    Ok(values_to_polyvec(&values, len, false))
}

fn pack_polyvec_centered(v: &PolyVec, width: u32, bound: u32) -> Vec<u8> {
    let values: Vec<i64> = v
        .iter()
        .flat_map(|poly| poly.coeffs().iter().map(|&c| to_centered(c) as i64))
        .collect();
    pack_bits(&values, width, -(bound as i64))
}

fn unpack_polyvec_centered(
    bytes: &[u8],
    width: u32,
    len: usize,
    bound: u32,
) -> Result<PolyVec, CodecError> {
    let span = 2 * bound as u64 + 1;
    let values = unpack_bits(bytes, width, -(bound as i64), len * N, span)?;
    Ok(values_to_polyvec(&values, len, true))
}

fn values_to_polyvec(values: &[i64], len: usize, centered: bool) -> PolyVec {
    let polys = (0..len)
        .map(|i| {
            let mut coeffs = [0u32; N];
            for (c, &v) in coeffs.iter_mut().zip(&values[i * N..(i + 1) * N]) {
                *c = if centered { from_centered(v) } else { v as u32 };
            }
            Poly::from_canonical(coeffs)
        })
        .collect();
    PolyVec::new(polys)
}

/// Encoded public key length: header, rho, packed t.
pub fn pk_len(p: &ValidatedParamSet) -> usize {
    2 + 32 + packed_len(p.k * N, p.bits_t)
}

/// Encoded secret key length: header, rho, k_seed, packed t, s1, s2.
pub fn sk_len(p: &ValidatedParamSet) -> usize {
    2 + 32
        + 32
        + packed_len(p.k * N, p.bits_t)
        + packed_len(p.l * N, p.bits_s)
        + packed_len(p.k * N, p.bits_s)
}

/// Encoded signature length: header, challenge digest, packed z.
pub fn sig_len(p: &ValidatedParamSet) -> usize {
    2 + 32 + packed_len(p.l * N, p.bits_z)
}

/// Packed high-bits string length.
pub fn w1_len(p: &ValidatedParamSet) -> usize {
    packed_len(p.k * N, p.bits_w1)
}

/// The canonical packed high-bits string; this exact byte string is the
/// first challenge-hash input.
pub fn encode_w1(h: &HighVec, p: &ValidatedParamSet) -> Vec<u8> {
    let values: Vec<i64> = h.iter_values().map(|v| v as i64).collect();
    pack_bits(&values, p.bits_w1, 0)
}

pub fn encode_pk(pk: &PublicKey, p: &ValidatedParamSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(pk_len(p));
    out.extend_from_slice(&header(KIND_PK, p));
    out.extend_from_slice(pk.rho.as_bytes());
    out.extend_from_slice(&pack_polyvec_canonical(&pk.t, p.bits_t));
    out
}

pub fn decode_pk(bytes: &[u8], p: &ValidatedParamSet) -> Result<PublicKey, CodecError> {
    let want = pk_len(p);
    if bytes.len() != want {
        return Err(CodecError::Length { got: bytes.len(), want });
    }
    check_header(bytes, KIND_PK, p)?;
    let rho = Seed(bytes[2..34].try_into().expect("fixed slice"));
    let t = unpack_polyvec_canonical(&bytes[34..], p.bits_t, p.k, p.q as u64)?;
    Ok(PublicKey { rho, t })
}

pub fn encode_sk(sk: &SecretKey, p: &ValidatedParamSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(sk_len(p));
    out.extend_from_slice(&header(KIND_SK, p));
    out.extend_from_slice(sk.rho.as_bytes());
    out.extend_from_slice(sk.k_seed.as_bytes());
    out.extend_from_slice(&pack_polyvec_canonical(&sk.t, p.bits_t));
    out.extend_from_slice(&pack_polyvec_centered(&sk.s1, p.bits_s, p.eta));
    out.extend_from_slice(&pack_polyvec_centered(&sk.s2, p.bits_s, p.eta));
    out
}

pub fn decode_sk(bytes: &[u8], p: &ValidatedParamSet) -> Result<SecretKey, CodecError> {
    let want = sk_len(p);
    if bytes.len() != want {
        return Err(CodecError::Length { got: bytes.len(), want });
    }
    check_header(bytes, KIND_SK, p)?;
    let rho = Seed(bytes[2..34].try_into().expect("fixed slice"));
    let k_seed = Seed(bytes[34..66].try_into().expect("fixed slice"));
    let t_bytes = packed_len(p.k * N, p.bits_t);
    let s1_bytes = packed_len(p.l * N, p.bits_s);
    let mut at = 66;
    let t = unpack_polyvec_canonical(&bytes[at..at + t_bytes], p.bits_t, p.k, p.q as u64)?;
    at += t_bytes;
    let s1 = unpack_polyvec_centered(&bytes[at..at + s1_bytes], p.bits_s, p.l, p.eta)?;
    at += s1_bytes;
    let s2 = unpack_polyvec_centered(&bytes[at..], p.bits_s, p.k, p.eta)?;
    Ok(SecretKey { rho, k_seed, t, s1, s2 })
}

pub fn encode_sig(sig: &Signature, p: &ValidatedParamSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(sig_len(p));
    out.extend_from_slice(&header(KIND_SIG, p));
    out.extend_from_slice(sig.c_hash.as_bytes());
    out.extend_from_slice(&pack_polyvec_centered(&sig.z, p.bits_z, p.z_bound()));
    out
}

pub fn decode_sig(bytes: &[u8], p: &ValidatedParamSet) -> Result<Signature, CodecError> {
    let want = sig_len(p);
    if bytes.len() != want {
        return Err(CodecError::Length { got: bytes.len(), want });
    }
    check_header(bytes, KIND_SIG, p)?;
    let c_hash = CHash(bytes[2..34].try_into().expect("fixed slice"));
    let z = unpack_polyvec_centered(&bytes[34..], p.bits_z, p.l, p.z_bound())?;
    Ok(Signature { z, c_hash })
}
