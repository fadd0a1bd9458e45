//! Known-answer-test vectors: plain-text records binding a seed to the
//! exact bytes the deterministic pipeline produces from it.
//!
//! Each record is regenerable from its seed alone: key generation, a
//! message derived from the seed, signing, and the restart count are all
//! recomputed during checking and compared byte-exactly. Records are
//! `name=value` lines (hex except the decimal `attempts`), separated by
//! blank lines.

use thiserror::Error;

use crate::codec::{encode_pk, encode_sig, encode_sk};
use crate::params::ValidatedParamSet;
use crate::sampling::{shake256, Seed};
use crate::scheme::{keygen, sign_transcript, SignError, SignOptions};

/// One frozen seed-to-bytes vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatRecord {
    pub seed: Seed,
    pub message: Vec<u8>,
    pub pk_hash: [u8; 32],
    pub sk_hash: [u8; 32],
    pub signature: Vec<u8>,
    pub attempts: u32,
}

/// Check or parse failure; `record` indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KatError {
    #[error("record {record}: {reason}")]
    Parse { record: usize, reason: String },
    #[error("record {record}: field {field:?} mismatch")]
    Mismatch { record: usize, field: &'static str },
    #[error("record {record}: signing failed: {source}")]
    Signing {
        record: usize,
        #[source]
        source: SignError,
    },
}

const FIELDS: [&str; 6] = ["seed", "message", "pk_hash", "sk_hash", "signature", "attempts"];

fn digest32(bytes: &[u8]) -> [u8; 32] {
    shake256(bytes, 32).try_into().expect("fixed digest length")
}

/// Message derived from a record seed: 1..=64 bytes of tagged XOF output.
fn derive_message(seed: &Seed) -> Vec<u8> {
    let len = 1 + (seed.0[0] as usize % 64);
    let mut input = Vec::with_capacity(33);
    input.extend_from_slice(seed.as_bytes());
    input.push(0x4d);
    shake256(&input, len)
}

/// Regenerates the full record a seed determines.
pub fn record_from_seed(
    p: &ValidatedParamSet,
    seed: &Seed,
    index: usize,
) -> Result<KatRecord, KatError> {
    let message = derive_message(seed);
    let (pk, sk) = keygen(p, seed);
    let (sig, transcript) = sign_transcript(p, &sk, &message, &SignOptions::default())
        .map_err(|source| KatError::Signing { record: index, source })?;
    Ok(KatRecord {
        seed: *seed,
        message,
        pk_hash: digest32(&encode_pk(&pk, p)),
        sk_hash: digest32(&encode_sk(&sk, p)),
        signature: encode_sig(&sig, p),
        attempts: transcript.attempt_count(),
    })
}

/// Generates `count` records; record seeds are derived from the master
/// seed and a little-endian 16-bit index.
pub fn kat_generate(
    p: &ValidatedParamSet,
    master: &Seed,
    count: usize,
) -> Result<Vec<KatRecord>, KatError> {
    (0..count)
        .map(|i| {
            let mut input = Vec::with_capacity(34);
            input.extend_from_slice(master.as_bytes());
            input.extend_from_slice(&(i as u16).to_le_bytes());
            let seed = Seed(digest32(&input));
            record_from_seed(p, &seed, i)
        })
        .collect()
}

/// Serializes records into the text format.
pub fn kat_write(records: &[KatRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("seed={}\n", r.seed.to_hex()));
        out.push_str(&format!("message={}\n", hex::encode(&r.message)));
        out.push_str(&format!("pk_hash={}\n", hex::encode(r.pk_hash)));
        out.push_str(&format!("sk_hash={}\n", hex::encode(r.sk_hash)));
        out.push_str(&format!("signature={}\n", hex::encode(&r.signature)));
        out.push_str(&format!("attempts={}\n", r.attempts));
    }
    out
}

/// Parses the text format back into records.
pub fn kat_parse(text: &str) -> Result<Vec<KatRecord>, KatError> {
    let mut records = Vec::new();
    let mut lines = text.lines().peekable();
    loop {
        while matches!(lines.peek(), Some(l) if l.trim().is_empty()) {
            lines.next();
        }
        if lines.peek().is_none() {
            break;
        }
        let record = records.len();
        let parse = |reason: String| KatError::Parse { record, reason };
        let mut raw: Vec<String> = Vec::with_capacity(FIELDS.len());
        for field in FIELDS {
            let line = lines
                .next()
                .ok_or_else(|| parse(format!("missing field {field:?}")))?;
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| parse(format!("expected {field}=...")))?;
            if name != field {
                return Err(parse(format!("expected field {field:?}, found {name:?}")));
            }
            raw.push(value.trim().to_string());
        }
        let hex_field = |i: usize| {
            hex::decode(&raw[i])
                .map_err(|_| parse(format!("field {:?} is not valid hex", FIELDS[i])))
        };
        let seed_bytes: [u8; 32] = hex_field(0)?
            .try_into()
            .map_err(|_| parse("seed must be 32 bytes".to_string()))?;
        let pk_hash: [u8; 32] = hex_field(2)?
            .try_into()
            .map_err(|_| parse("pk_hash must be 32 bytes".to_string()))?;
        let sk_hash: [u8; 32] = hex_field(3)?
            .try_into()
            .map_err(|_| parse("sk_hash must be 32 bytes".to_string()))?;
        let attempts: u32 = raw[5]
            .parse()
            .map_err(|_| parse("attempts must be a decimal integer".to_string()))?;
        records.push(KatRecord {
            seed: Seed(seed_bytes),
            message: hex_field(1)?,
            pk_hash,
            sk_hash,
            signature: hex_field(4)?,
            attempts,
        });
    }
    Ok(records)
}

/// Regenerates every record from its seed and compares byte-exactly.
/// Returns the number of records checked; the error names the first
/// mismatching field and its record index.
pub fn kat_check(p: &ValidatedParamSet, text: &str) -> Result<usize, KatError> {
    let records = kat_parse(text)?;
    for (i, given) in records.iter().enumerate() {
        let fresh = record_from_seed(p, &given.seed, i)?;
        let mismatch = |field| KatError::Mismatch { record: i, field };
        if fresh.message != given.message {
            return Err(mismatch("message"));
        }
        if fresh.pk_hash != given.pk_hash {
            return Err(mismatch("pk_hash"));
        }
        if fresh.sk_hash != given.sk_hash {
            return Err(mismatch("sk_hash"));
        }
        if fresh.signature != given.signature {
            return Err(mismatch("signature"));
        }
        if fresh.attempts != given.attempts {
            return Err(mismatch("attempts"));
        }
    }
    Ok(records.len())
}
