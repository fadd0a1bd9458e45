//! Key generation, signing with the rejection loop, and verification.
//!
//! Signing is derandomized by default: the mask vector is derived from a
//! per-key seed, the message, and the attempt counter, so identical
//! inputs give identical signatures and known-answer vectors are
//! reproducible. Mixing in a fresh salt via [`SignOptions::salt`] restores
//! randomized signing; verification is unaffected either way.

use thiserror::Error;

use crate::codec::encode_w1;
use crate::params::ValidatedParamSet;
use crate::ring::{
    intt, matvec_mul, matvec_mul_cached, ntt_forward, pointwise_mul, poly_add, poly_sub,
    MatrixA, NttPoly, PolyVec,
};
use crate::rounding::{high_bits, low_bits};
use crate::sampling::{
    expand_a, expand_mask, expand_s, hash_challenge, sample_in_ball, xof, CHash, Challenge,
    Seed, TAG_KDF,
};

/// Public key: the matrix seed and t = A*s1 + s2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub rho: Seed,
    pub t: PolyVec,
}

/// Secret key. `k_seed` derandomizes signing; `t` is retained alongside
/// the secrets so the public key can be reconstructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    pub rho: Seed,
    pub k_seed: Seed,
    pub t: PolyVec,
    pub s1: PolyVec,
    pub s2: PolyVec,
}

/// Signature: the response vector and the challenge digest it was
/// accepted under. The challenge polynomial is re-expanded from the
/// digest during verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub z: PolyVec,
    pub c_hash: CHash,
}

/// Why one signing attempt was restarted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// Some z coefficient exceeded gamma - beta.
    ZBound,
    /// Some low-bits coefficient of w - c*s2 exceeded gamma - beta.
    LowBound,
}

/// Everything one loop iteration computed, for instrumentation.
#[derive(Debug, Clone)]
pub struct AttemptRecord {
    pub w: PolyVec,
    pub c_hash: CHash,
    pub c: Challenge,
    pub z: PolyVec,
    pub z_ok: bool,
    pub low_ok: bool,
}

impl AttemptRecord {
    pub fn reject_reason(&self) -> Option<RejectReason> {
        if !self.z_ok {
            Some(RejectReason::ZBound)
        } else if !self.low_ok {
            Some(RejectReason::LowBound)
        } else {
            None
        }
    }

    pub fn accepted(&self) -> bool {
        self.z_ok && self.low_ok
    }

    /// The signature this attempt produced, if it was accepted.
    pub fn candidate(&self) -> Option<Signature> {
        self.accepted().then(|| Signature {
            z: self.z.clone(),
            c_hash: self.c_hash,
        })
    }
}

/// The restart loop laid bare: every attempt in order, the last one
/// accepted.
#[derive(Debug, Clone)]
pub struct SignTranscript {
    pub attempts: Vec<AttemptRecord>,
}

impl SignTranscript {
    pub fn attempt_count(&self) -> u32 {
        self.attempts.len() as u32
    }
}

/// Signing controls.
#[derive(Debug, Clone)]
pub struct SignOptions {
    /// Hard cap on restart attempts; exceeding it is an error, since the
    /// expected count under the default parameters is about 3.4.
    pub max_attempts: u16,
    /// Extra 32 bytes mixed into the mask derivation for randomized
    /// signing. `None` keeps signing fully deterministic.
    pub salt: Option<[u8; 32]>,
}

impl Default for SignOptions {
    fn default() -> Self {
        SignOptions { max_attempts: 512, salt: None }
    }
}

/// Signing failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("no accepted attempt after {0} restarts; parameters or implementation are faulty")]
    AttemptsExhausted(u16),
}

/// Expands a master seed into the (rho, sigma, k_seed) triple used by
/// key generation.
fn expand_key_seeds(seed: &Seed) -> (Seed, Seed, Seed) {
    let buf = xof(TAG_KDF, seed.as_bytes(), 96);
    let take = |range: std::ops::Range<usize>| {
        let mut out = [0u8; 32];
        out.copy_from_slice(&buf[range]);
        Seed(out)
    };
    (take(0..32), take(32..64), take(64..96))
}

/// Deterministic key generation from a 32-byte seed.
pub fn keygen(p: &ValidatedParamSet, seed: &Seed) -> (PublicKey, SecretKey) {
    let (rho, sigma, k_seed) = expand_key_seeds(seed);
    let a = expand_a(&rho, p);
    let s1 = PolyVec::new(
        (0..p.l).map(|j| expand_s(&sigma, j as u16, p)).collect(),
    );
    let s2 = PolyVec::new(
        (0..p.k)
            .map(|i| expand_s(&sigma, (p.l + i) as u16, p))
            .collect(),
    );
    let t = matvec_mul(&a, &s1).add(&s2);
    (
        PublicKey { rho, t: t.clone() },
        SecretKey { rho, k_seed, t, s1, s2 },
    )
}

/// Precomputed per-key state shared by all attempts of one signing call.
struct SigningContext<'a> {
    p: &'a ValidatedParamSet,
    a: MatrixA,
    s1_ntt: Vec<NttPoly>,
    s2_ntt: Vec<NttPoly>,
    mask_seed: Seed,
}

impl<'a> SigningContext<'a> {
    fn new(p: &'a ValidatedParamSet, sk: &SecretKey, opts: &SignOptions) -> Self {
        let mask_seed = match &opts.salt {
            None => sk.k_seed,
            Some(salt) => {
                let mut input = Vec::with_capacity(64);
                input.extend_from_slice(sk.k_seed.as_bytes());
                input.extend_from_slice(salt);
                let mut out = [0u8; 32];
                out.copy_from_slice(&xof(TAG_KDF, &input, 32));
                Seed(out)
            }
        };
        SigningContext {
            p,
            a: expand_a(&sk.rho, p),
            s1_ntt: sk.s1.iter().map(ntt_forward).collect(),
            s2_ntt: sk.s2.iter().map(ntt_forward).collect(),
            mask_seed,
        }
    }

    /// One loop iteration: mask, commit, challenge, respond, check.
    fn attempt(&self, message: &[u8], attempt: u16) -> AttemptRecord {
        let p = self.p;
        let bound = p.z_bound();

        let y = PolyVec::new(
            (0..p.l)
                .map(|j| expand_mask(&self.mask_seed, message, attempt, j as u16, p))
                .collect(),
        );
        let y_ntt: Vec<NttPoly> = y.iter().map(ntt_forward).collect();
        let w = matvec_mul_cached(&self.a, &y_ntt);

        let w1_bytes = encode_w1(&high_bits(&w, p), p);
        let c_hash = hash_challenge(&w1_bytes, message);
        let c = sample_in_ball(&c_hash, p);
        let c_ntt = ntt_forward(&c.to_poly());

        let z = PolyVec::new(
            y.iter()
                .zip(self.s1_ntt.iter())
                .map(|(y_j, s1_j)| poly_add(y_j, &intt(&pointwise_mul(&c_ntt, s1_j))))
                .collect(),
        );
        let z_ok = z.inf_norm() <= bound;

        let w_minus_cs2 = PolyVec::new(
            w.iter()
                .zip(self.s2_ntt.iter())
                .map(|(w_i, s2_i)| poly_sub(w_i, &intt(&pointwise_mul(&c_ntt, s2_i))))
                .collect(),
        );
        let low_ok = low_bits(&w_minus_cs2, p).inf_norm() <= bound;

        AttemptRecord { w, c_hash, c, z, z_ok, low_ok }
    }
}

/// One signing iteration in isolation; [`sign`] returns exactly the first
/// attempt whose record has no reject reason.
pub fn sign_attempt(
    p: &ValidatedParamSet,
    sk: &SecretKey,
    message: &[u8],
    attempt: u16,
) -> AttemptRecord {
    SigningContext::new(p, sk, &SignOptions::default()).attempt(message, attempt)
}

/// Derandomized signing with the default restart cap.
pub fn sign(
    p: &ValidatedParamSet,
    sk: &SecretKey,
    message: &[u8],
) -> Result<Signature, SignError> {
    sign_with(p, sk, message, &SignOptions::default())
}

/// Signing with explicit options.
pub fn sign_with(
    p: &ValidatedParamSet,
    sk: &SecretKey,
    message: &[u8],
    opts: &SignOptions,
) -> Result<Signature, SignError> {
    let ctx = SigningContext::new(p, sk, opts);
    for attempt in 0..opts.max_attempts {
        let record = ctx.attempt(message, attempt);
        if let Some(sig) = record.candidate() {
            return Ok(sig);
        }
    }
    Err(SignError::AttemptsExhausted(opts.max_attempts))
}

/// Signing that also returns the full restart transcript.
pub fn sign_transcript(
    p: &ValidatedParamSet,
    sk: &SecretKey,
    message: &[u8],
    opts: &SignOptions,
) -> Result<(Signature, SignTranscript), SignError> {
    let ctx = SigningContext::new(p, sk, opts);
    let mut attempts = Vec::new();
    for attempt in 0..opts.max_attempts {
        let record = ctx.attempt(message, attempt);
        let candidate = record.candidate();
        attempts.push(record);
        if let Some(sig) = candidate {
            return Ok((sig, SignTranscript { attempts }));
        }
    }
    Err(SignError::AttemptsExhausted(opts.max_attempts))
}

/// Verification: recompute A and the challenge, then accept iff z is
/// small and the challenge digest of High(A*z - c*t) matches. Total on
/// arbitrary decoded inputs; every failure is a plain reject.
pub fn verify(
    p: &ValidatedParamSet,
    pk: &PublicKey,
    message: &[u8],
    sig: &Signature,
) -> bool {
    if sig.z.len() != p.l || pk.t.len() != p.k {
        return false;
    }
    if sig.z.inf_norm() > p.z_bound() {
        return false;
    }
    let a = expand_a(&pk.rho, p);
    let c = sample_in_ball(&sig.c_hash, p);
    let c_ntt = ntt_forward(&c.to_poly());
    let az = matvec_mul(&a, &sig.z);
    let u = PolyVec::new(
        az.iter()
            .zip(pk.t.iter())
            .map(|(az_i, t_i)| {
                poly_sub(az_i, &intt(&pointwise_mul(&c_ntt, &ntt_forward(t_i))))
            })
            .collect(),
    );
    let w1_bytes = encode_w1(&high_bits(&u, p), p);
    hash_challenge(&w1_bytes, message) == sig.c_hash
}

/// Byte-level verification: strict decoding of both the public key and
/// the signature happens before any arithmetic, and every malformed
/// encoding is an ordinary reject.
pub fn verify_encoded(
    p: &ValidatedParamSet,
    pk_bytes: &[u8],
    message: &[u8],
    sig_bytes: &[u8],
) -> bool {
    let Ok(pk) = crate::codec::decode_pk(pk_bytes, p) else {
        return false;
    };
    let Ok(sig) = crate::codec::decode_sig(sig_bytes, p) else {
        return false;
    };
    verify(p, &pk, message, &sig)
}

/// Aggregated restart-loop measurements, fed by [`SignTranscript`]s so
/// the numbers reflect the real signing path.
#[derive(Debug, Clone, Default)]
pub struct RejectionStats {
    pub trials: u64,
    pub total_attempts: u64,
    pub z_pass: u64,
    pub low_pass: u64,
    pub accepted: u64,
    attempt_counts: Vec<u32>,
}

impl RejectionStats {
    pub fn record(&mut self, transcript: &SignTranscript) {
        self.trials += 1;
        self.total_attempts += transcript.attempts.len() as u64;
        self.attempt_counts.push(transcript.attempt_count());
        for a in &transcript.attempts {
            if a.z_ok {
                self.z_pass += 1;
            }
            if a.low_ok {
                self.low_pass += 1;
            }
            if a.accepted() {
                self.accepted += 1;
            }
        }
    }

    pub fn merge(&mut self, other: RejectionStats) {
        self.trials += other.trials;
        self.total_attempts += other.total_attempts;
        self.z_pass += other.z_pass;
        self.low_pass += other.low_pass;
        self.accepted += other.accepted;
        self.attempt_counts.extend(other.attempt_counts);
    }

    pub fn z_accept_rate(&self) -> f64 {
        self.z_pass as f64 / self.total_attempts as f64
    }

    pub fn low_accept_rate(&self) -> f64 {
        self.low_pass as f64 / self.total_attempts as f64
    }

    pub fn combined_accept_rate(&self) -> f64 {
        self.accepted as f64 / self.total_attempts as f64
    }

    pub fn mean_attempts(&self) -> f64 {
        self.total_attempts as f64 / self.trials as f64
    }

    /// Nearest-rank percentile of per-trial attempt counts.
    pub fn percentile_attempts(&self, pct: f64) -> u32 {
        let mut counts = self.attempt_counts.clone();
        counts.sort_unstable();
        if counts.is_empty() {
            return 0;
        }
        let rank = ((pct / 100.0 * counts.len() as f64).ceil() as usize).clamp(1, counts.len());
        counts[rank - 1]
    }
}

/// Signs `trials` distinct messages (`prefix || le64(offset + i)`) and
/// aggregates the transcripts. Shardable: disjoint offset ranges merge
/// into the same totals regardless of split.
pub fn gather_rejection_stats(
    p: &ValidatedParamSet,
    sk: &SecretKey,
    trials: u64,
    prefix: &[u8],
    offset: u64,
) -> Result<RejectionStats, SignError> {
    let mut stats = RejectionStats::default();
    let opts = SignOptions::default();
    for i in 0..trials {
        let mut message = prefix.to_vec();
        message.extend_from_slice(&(offset + i).to_le_bytes());
        let (_, transcript) = sign_transcript(p, sk, &message, &opts)?;
        stats.record(&transcript);
    }
    Ok(stats)
}
