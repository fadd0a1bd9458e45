//! Scheme parameters: the single source of truth for every constant the
//! other modules consume.
//!
//! Only [`ParamSet::default_set`] is a supported, tested configuration.
//! Alternate sets can be constructed (directly or from a key=value config)
//! and must pass [`ParamSet::validate`] before use.

use std::ops::Deref;

use thiserror::Error;

/// All scheme constants plus the derived bit widths used by the codec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSet {
    /// Prime modulus of the coefficient field.
    pub q: u32,
    /// Ring degree (number of coefficients per polynomial).
    pub n: usize,
    /// Rows of the public matrix A.
    pub k: usize,
    /// Columns of the public matrix A.
    pub l: usize,
    /// Infinity-norm bound on secret coefficients.
    pub eta: u32,
    /// Infinity-norm bound on mask coefficients.
    pub gamma: u32,
    /// Challenge weight (number of nonzero challenge coefficients).
    pub tau: usize,
    /// Rejection margin: maximum possible coefficient of c*s.
    pub beta: u32,
    /// High/low decomposition divisor, always 2*gamma.
    pub alpha: u32,
    /// Bits per packed t coefficient.
    pub bits_t: u32,
    /// Bits per packed z coefficient.
    pub bits_z: u32,
    /// Bits per packed secret coefficient.
    pub bits_s: u32,
    /// Bits per packed high-bits value.
    pub bits_w1: u32,
}

/// A [`ParamSet`] that has passed [`ParamSet::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidatedParamSet(ParamSet);

impl Deref for ValidatedParamSet {
    type Target = ParamSet;

    fn deref(&self) -> &ParamSet {
        &self.0
    }
}

/// First violated invariant found by [`ParamSet::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("q must be 8380417 and n must be 256")]
    RingFixed,
    #[error("k >= l >= 1 violated")]
    MatrixShape,
    #[error("tau must be 60")]
    TauFixed,
    #[error("beta must be < gamma")]
    BetaBound,
    #[error("beta must equal tau*eta")]
    BetaDerivation,
    #[error("alpha must equal 2*gamma")]
    AlphaDerivation,
    #[error("alpha does not divide q-1")]
    AlphaDivisibility,
    #[error("bits_z too small for 2(gamma-beta)+1 values")]
    BitsZ,
    #[error("bits_t too small for q values")]
    BitsT,
    #[error("bits_s too small for 2*eta+1 values")]
    BitsS,
    #[error("bits_w1 too small for (q-1)/alpha values")]
    BitsW1,
}

/// Error while reading a key=value parameter config.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("line {0}: unknown key {1:?}")]
    UnknownKey(usize, String),
    #[error("line {0}: duplicate key {1:?}")]
    DuplicateKey(usize, String),
    #[error("line {0}: invalid integer for {1:?}")]
    BadValue(usize, String),
    #[error("missing key {0:?}")]
    MissingKey(&'static str),
}

/// Maximum possible infinity norm of c*s for a weight-`tau` sign challenge
/// and secrets bounded by `eta`.
pub fn derive_beta(eta: u32, tau: u32) -> u32 {
    tau * eta
}

/// Smallest width such that `count` distinct values fit.
fn bits_for(count: u64) -> u32 {
    debug_assert!(count >= 1);
    64 - (count - 1).leading_zeros()
}

impl ParamSet {
    /// The canonical parameter set: q = 2^23 - 2^13 + 1, n = 256, k = 4,
    /// l = 3, eta = 6, tau = 60, gamma = (q-1)/16.
    pub fn default_set() -> ParamSet {
        ParamSet::derived(8380417, 256, 4, 3, 6, 523776, 60)
    }

    /// Builds a set from the seven free constants, computing beta, alpha
    /// and all packing widths. Does not validate.
    pub fn derived(
        q: u32,
        n: usize,
        k: usize,
        l: usize,
        eta: u32,
        gamma: u32,
        tau: usize,
    ) -> ParamSet {
        let beta = derive_beta(eta, tau as u32);
        let alpha = 2 * gamma;
        let span_z = 2 * (gamma.saturating_sub(beta)) as u64 + 1;
        let high_count = if alpha == 0 { 1 } else { (q as u64 - 1) / alpha as u64 };
        ParamSet {
            q,
            n,
            k,
            l,
            eta,
            gamma,
            tau,
            beta,
            alpha,
            bits_t: bits_for(q as u64),
            bits_z: bits_for(span_z),
            bits_s: bits_for(2 * eta as u64 + 1),
            bits_w1: bits_for(high_count.max(1)),
        }
    }

    /// Parses a plain-text config with exactly the keys
    /// `q,n,k,l,eta,gamma,tau` (one `key=value` per line, `#` comments and
    /// blank lines allowed). Derived fields are always recomputed.
    pub fn from_config(text: &str) -> Result<ParamSet, ConfigError> {
        const KEYS: [&str; 7] = ["q", "n", "k", "l", "eta", "gamma", "tau"];
        let mut values: [Option<u64>; 7] = [None; 7];
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax(lineno))?;
            let key = key.trim();
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| ConfigError::UnknownKey(lineno, key.to_string()))?;
            if values[slot].is_some() {
                return Err(ConfigError::DuplicateKey(lineno, key.to_string()));
            }
            let parsed: u64 = value
                .trim()
                .parse()
                .map_err(|_| ConfigError::BadValue(lineno, key.to_string()))?;
            values[slot] = Some(parsed);
        }
        let get = |i: usize| values[i].ok_or(ConfigError::MissingKey(KEYS[i]));
        Ok(ParamSet::derived(
            get(0)? as u32,
            get(1)? as usize,
            get(2)? as usize,
            get(3)? as usize,
            get(4)? as u32,
            get(5)? as u32,
            get(6)? as usize,
        ))
    }

    /// Checks every invariant, returning the set unchanged on success and
    /// the first violated invariant otherwise.
    pub fn validate(self) -> Result<ValidatedParamSet, ParamError> {
        if self.q != 8380417 || self.n != 256 {
            return Err(ParamError::RingFixed);
        }
        if self.l < 1 || self.k < self.l {
            return Err(ParamError::MatrixShape);
        }
        if self.tau != 60 {
            return Err(ParamError::TauFixed);
        }
        if self.beta >= self.gamma {
            return Err(ParamError::BetaBound);
        }
        if self.beta != derive_beta(self.eta, self.tau as u32) {
            return Err(ParamError::BetaDerivation);
        }
        if self.alpha != 2 * self.gamma {
            return Err(ParamError::AlphaDerivation);
        }
        if self.alpha == 0 || (self.q - 1) % self.alpha != 0 {
            return Err(ParamError::AlphaDivisibility);
        }
        if (2 * (self.gamma - self.beta) as u64 + 1) > 1u64 << self.bits_z {
            return Err(ParamError::BitsZ);
        }
        if self.q as u64 > 1u64 << self.bits_t {
            return Err(ParamError::BitsT);
        }
        if (2 * self.eta as u64 + 1) > 1u64 << self.bits_s {
            return Err(ParamError::BitsS);
        }
        if ((self.q - 1) / self.alpha) as u64 > 1u64 << self.bits_w1 {
            return Err(ParamError::BitsW1);
        }
        Ok(ValidatedParamSet(self))
    }
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet::default_set()
    }
}

impl ValidatedParamSet {
    /// The canonical set, already validated.
    pub fn default_set() -> ValidatedParamSet {
        ParamSet::default_set()
            .validate()
            .expect("default parameter set is valid")
    }

    /// Largest accepted signature coefficient magnitude, gamma - beta.
    pub fn z_bound(&self) -> u32 {
        self.gamma - self.beta
    }

    /// Number of distinct high-bits values, (q-1)/alpha.
    pub fn high_count(&self) -> u32 {
        (self.q - 1) / self.alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_set_matches_canonical_constants() {
        let p = ParamSet::default_set();
        assert_eq!(p.q, 8380417);
        assert_eq!(p.q, (1u32 << 23) - (1 << 13) + 1);
        assert_eq!(p.n, 256);
        assert_eq!(p.k, 4);
        assert_eq!(p.l, 3);
        assert_eq!(p.eta, 6);
        assert_eq!(p.tau, 60);
        assert_eq!(p.gamma, (p.q - 1) / 16);
        assert_eq!(p.gamma, 523776);
        assert_eq!(p.beta, 360);
        assert_eq!(p.alpha, 1047552);
        assert_eq!((p.q - 1) % p.alpha, 0);
        assert_eq!((p.q - 1) / p.alpha, 8);
        assert_eq!((p.bits_t, p.bits_z, p.bits_s, p.bits_w1), (23, 20, 4, 3));
    }

    #[test]
    fn default_set_validates() {
        let v = ParamSet::default_set().validate().unwrap();
        assert_eq!(v.z_bound(), 523416);
        assert_eq!(v.high_count(), 8);
    }

    #[test]
    fn gamma_not_dividing_is_rejected() {
        // alpha recomputed as 2*523777; 8380416 is not a multiple of it.
        let p = ParamSet::derived(8380417, 256, 4, 3, 6, 523777, 60);
        assert_eq!(p.validate(), Err(ParamError::AlphaDivisibility));
    }

    #[test]
    fn beta_equal_gamma_is_rejected() {
        let mut p = ParamSet::default_set();
        p.beta = p.gamma;
        assert_eq!(p.validate(), Err(ParamError::BetaBound));
    }

    #[test]
    fn wrong_beta_is_rejected() {
        let mut p = ParamSet::default_set();
        p.beta = 359;
        assert_eq!(p.validate(), Err(ParamError::BetaDerivation));
    }

    #[test]
    fn wrong_ring_is_rejected() {
        let p = ParamSet::derived(8380419, 256, 4, 3, 6, 523776, 60);
        assert_eq!(p.validate(), Err(ParamError::RingFixed));
        let p = ParamSet::derived(8380417, 128, 4, 3, 6, 523776, 60);
        assert_eq!(p.validate(), Err(ParamError::RingFixed));
    }

    #[test]
    fn bad_shape_and_tau_are_rejected() {
        let p = ParamSet::derived(8380417, 256, 2, 3, 6, 523776, 60);
        assert_eq!(p.validate(), Err(ParamError::MatrixShape));
        let p = ParamSet::derived(8380417, 256, 4, 3, 6, 523776, 49);
        assert_eq!(p.validate(), Err(ParamError::TauFixed));
    }

    #[test]
    fn undersized_widths_are_rejected() {
        let mut p = ParamSet::default_set();
        p.bits_z = 19;
        assert_eq!(p.validate(), Err(ParamError::BitsZ));
        let mut p = ParamSet::default_set();
        p.bits_t = 22;
        assert_eq!(p.validate(), Err(ParamError::BitsT));
        let mut p = ParamSet::default_set();
        p.bits_s = 3;
        assert_eq!(p.validate(), Err(ParamError::BitsS));
        let mut p = ParamSet::default_set();
        p.bits_w1 = 2;
        assert_eq!(p.validate(), Err(ParamError::BitsW1));
    }

    #[test]
    fn derive_beta_examples() {
        assert_eq!(derive_beta(6, 60), 360);
        assert_eq!(derive_beta(1, 60), 60);
        assert_eq!(derive_beta(0, 60), 0);
    }

    #[test]
    fn config_roundtrips_default() {
        let text = "\
# canonical set
q = 8380417
n = 256
k = 4
l = 3
eta = 6
gamma = 523776
tau = 60
";
        let p = ParamSet::from_config(text).unwrap();
        assert_eq!(p, ParamSet::default_set());
    }

    #[test]
    fn config_rejects_unknown_missing_and_bad_lines() {
        let err = ParamSet::from_config("q=1\nbeta=3").unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey(2, "beta".to_string()));

        let err = ParamSet::from_config("q=8380417").unwrap_err();
        assert_eq!(err, ConfigError::MissingKey("n"));

        let err = ParamSet::from_config("q 8380417").unwrap_err();
        assert_eq!(err, ConfigError::Syntax(1));

        let err = ParamSet::from_config("q=yes").unwrap_err();
        assert_eq!(err, ConfigError::BadValue(1, "q".to_string()));

        let err = ParamSet::from_config("q=1\nq=2").unwrap_err();
        assert_eq!(err, ConfigError::DuplicateKey(2, "q".to_string()));
    }
}
