//! High/low-bits decomposition of Z_q elements: r = high * alpha + low
//! (mod q) with low the centered residue mod alpha.
//!
//! High feeds the Fiat-Shamir hash, low drives the rejection test. The
//! split is what keeps the hash input stable when a small perturbation
//! (c*s2, bounded by beta) is subtracted: as long as the low part stays
//! below gamma - beta in magnitude, no carry into the high part occurs.

use crate::params::ValidatedParamSet;
use crate::ring::{from_centered, Poly, PolyVec, Q};

/// One coefficient split into its high and low parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    /// In [0, (q-1)/alpha).
    pub high: u32,
    /// In [-gamma, gamma].
    pub low: i32,
}

/// Core split, parameterized over the modulus so toy-scale exhaustive
/// tests can exercise the same code. Requires alpha even and
/// alpha | q - 1.
pub fn decompose_raw(q: u32, alpha: u32, r: u32) -> Decomposition {
    debug_assert!(r < q);
    debug_assert!(alpha % 2 == 0 && (q - 1) % alpha == 0);
    let half = (alpha / 2) as i64;
    let m = (r % alpha) as i64;
    // Centered residue in (-alpha/2, alpha/2].
    let mut low = if m > half { m - alpha as i64 } else { m };
    let high;
    if r as i64 - low == (q - 1) as i64 {
        // The top block wraps to high 0 so high stays in [0, (q-1)/alpha).
        high = 0;
        low -= 1;
    } else {
        high = ((r as i64 - low) / alpha as i64) as u32;
    }
    Decomposition { high, low: low as i32 }
}

/// Splits a canonical coefficient under the given parameter set.
pub fn decompose(r: u32, p: &ValidatedParamSet) -> Decomposition {
    decompose_raw(Q, p.alpha, r)
}

/// High parts of every coefficient of a vector; each value is in
/// [0, (q-1)/alpha).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighVec {
    values: Vec<[u8; crate::ring::N]>,
}

impl HighVec {
    pub fn zero(len: usize) -> HighVec {
        HighVec { values: vec![[0u8; crate::ring::N]; len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn poly_values(&self, i: usize) -> &[u8; crate::ring::N] {
        &self.values[i]
    }

    /// Flat iterator over all high values, row-major.
    pub fn iter_values(&self) -> impl Iterator<Item = u8> + '_ {
        self.values.iter().flat_map(|v| v.iter().copied())
    }
}

/// Coefficient-wise high parts of a vector.
pub fn high_bits(v: &PolyVec, p: &ValidatedParamSet) -> HighVec {
    let values = v
        .iter()
        .map(|poly| {
            let mut out = [0u8; crate::ring::N];
            for (o, &c) in out.iter_mut().zip(poly.coeffs().iter()) {
                *o = decompose(c, p).high as u8;
            }
            out
        })
        .collect();
    HighVec { values }
}

/// Coefficient-wise low parts, re-canonicalized into Poly form.
pub fn low_bits(v: &PolyVec, p: &ValidatedParamSet) -> PolyVec {
    PolyVec::new(
        v.iter()
            .map(|poly| {
                let mut out = [0u32; crate::ring::N];
                for (o, &c) in out.iter_mut().zip(poly.coeffs().iter()) {
                    *o = from_centered(decompose(c, p).low as i64);
                }
                Poly::from_canonical(out)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ValidatedParamSet;
    use crate::ring::{from_centered, to_centered, N};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    const GAMMA: i32 = 523776;

    /// Independent oracle: enumerate every (high, low) pair in range and
    /// keep the ones that reconstruct r. At most two fit (the low = +/-gamma
    /// tie); the canonical answer is the one with low != -gamma, except in
    /// the tie-free wrap block where a single candidate exists.
    fn oracle(q: u32, alpha: u32, r: u32) -> Decomposition {
        let gamma = (alpha / 2) as i64;
        let high_count = ((q - 1) / alpha) as i64;
        let mut found = Vec::new();
        for high in 0..high_count {
            for low in -gamma..=gamma {
                if (high * alpha as i64 + low).rem_euclid(q as i64) == r as i64 {
                    found.push(Decomposition { high: high as u32, low: low as i32 });
                }
            }
        }
        assert!(
            found.len() == 1 || found.len() == 2,
            "r={} has {} candidates",
            r,
            found.len()
        );
        if found.len() == 1 {
            found[0]
        } else {
            *found
                .iter()
                .find(|d| d.low != -(gamma as i32))
                .expect("tie must contain a +gamma candidate")
        }
    }

    #[test]
    fn frozen_examples() {
        let p = ValidatedParamSet::default_set();
        assert_eq!(decompose(0, &p), Decomposition { high: 0, low: 0 });
        assert_eq!(
            decompose(523776, &p),
            Decomposition { high: 0, low: 523776 }
        );
        assert_eq!(
            decompose(523777, &p),
            Decomposition { high: 1, low: -523775 }
        );
        assert_eq!(decompose(Q - 1, &p), Decomposition { high: 0, low: -1 });
        // Bottom of the wrap wedge maps to low = -gamma exactly.
        assert_eq!(
            decompose(Q - 523776, &p),
            Decomposition { high: 0, low: -GAMMA }
        );
    }

    #[test]
    fn exhaustive_reconstruction_ranges_and_wrap_count() {
        let p = ValidatedParamSet::default_set();
        let alpha = p.alpha as i64;
        let mut wrap_count = 0u64;
        for r in 0..Q {
            let d = decompose(r, &p);
            assert!(d.high < 8);
            assert!(-GAMMA <= d.low && d.low <= GAMMA);
            let recon = (d.high as i64 * alpha + d.low as i64).rem_euclid(Q as i64);
            assert_eq!(recon, r as i64, "reconstruction failed at r={r}");
            // The wrap rule fires exactly on the wedge (q-1-gamma, q-1].
            if r > Q - 1 - GAMMA as u32 {
                wrap_count += 1;
                assert_eq!(d.high, 0);
            }
        }
        assert_eq!(wrap_count, GAMMA as u64);
    }

    #[test]
    fn matches_brute_force_oracle_on_sample() {
        let p = ValidatedParamSet::default_set();
        let mut rng = ChaCha20Rng::seed_from_u64(30);
        // Ties sit at h*alpha + gamma; hit each explicitly plus the wrap
        // wedge edges plus random points.
        let mut points: Vec<u32> = (0..7).map(|h| h * p.alpha + p.gamma).collect();
        points.extend([0, 1, Q - 1, Q - 2, Q - p.gamma, Q - p.gamma - 1, p.gamma, p.gamma + 1]);
        for _ in 0..200 {
            points.push(rng.gen_range(0..Q));
        }
        for r in points {
            assert_eq!(decompose(r, &p), oracle(Q, p.alpha, r), "r={r}");
        }
    }

    #[test]
    fn toy_modulus_exhaustive_against_oracle() {
        // q = 97, alpha = 16, gamma = 8: high in [0, 6).
        let (q, alpha) = (97u32, 16u32);
        for r in 0..q {
            let d = decompose_raw(q, alpha, r);
            assert!(d.high < 6);
            assert!(-8 <= d.low && d.low <= 8);
            assert_eq!(d, oracle(q, alpha, r), "r={r}");
        }
    }

    #[test]
    fn toy_modulus_carry_stability_exhaustive() {
        // gamma = 8, beta = 2: whenever |low(r - e)| < gamma - beta, the
        // high part is immune to the perturbation.
        let (q, alpha) = (97u32, 16u32);
        let (gamma, beta) = (8i32, 2i32);
        for r in 0..q {
            for e in -beta..=beta {
                let shifted = (r as i64 - e as i64).rem_euclid(q as i64) as u32;
                let d_shifted = decompose_raw(q, alpha, shifted);
                if d_shifted.low.abs() < gamma - beta {
                    let d = decompose_raw(q, alpha, r);
                    assert_eq!(
                        d.high, d_shifted.high,
                        "carry at r={r}, e={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn carry_stability_randomized_sweep() {
        let p = ValidatedParamSet::default_set();
        let bound = p.z_bound() as i32;
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let mut hits = 0u64;
        for _ in 0..1_000_000 {
            let r = rng.gen_range(0..Q);
            let e = rng.gen_range(-(p.beta as i64)..=p.beta as i64);
            let shifted = (r as i64 - e).rem_euclid(Q as i64) as u32;
            let d_shifted = decompose(shifted, &p);
            if d_shifted.low.abs() < bound {
                hits += 1;
                assert_eq!(decompose(r, &p).high, d_shifted.high);
            }
        }
        // Nearly every pair satisfies the hypothesis; make sure the sweep
        // actually exercised it.
        assert!(hits > 990_000);
    }

    #[test]
    fn high_bits_of_zero_vector() {
        let p = ValidatedParamSet::default_set();
        let h = high_bits(&PolyVec::zero(4), &p);
        assert!(h.iter_values().all(|v| v == 0));
    }

    #[test]
    fn high_bits_of_gamma_plus_one_constants() {
        let p = ValidatedParamSet::default_set();
        let poly = Poly::from_canonical([p.gamma + 1; N]);
        let h = high_bits(&PolyVec::new(vec![poly; 4]), &p);
        assert!(h.iter_values().all(|v| v == 1));
    }

    #[test]
    fn per_coefficient_contract_on_random_vector() {
        let p = ValidatedParamSet::default_set();
        let mut rng = ChaCha20Rng::seed_from_u64(32);
        let mut coeffs = [0u32; N];
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(0..Q);
        }
        let v = PolyVec::new(vec![Poly::from_canonical(coeffs)]);
        let highs = high_bits(&v, &p);
        let lows = low_bits(&v, &p);
        for i in 0..N {
            let high = highs.poly_values(0)[i] as i64;
            let low = to_centered(lows.poly(0).coeff(i)) as i64;
            assert!(low.abs() <= p.gamma as i64);
            assert_eq!(
                (high * p.alpha as i64 + low).rem_euclid(Q as i64),
                coeffs[i] as i64
            );
        }
    }

    #[test]
    fn low_bits_recanonicalizes() {
        let p = ValidatedParamSet::default_set();
        let v = PolyVec::new(vec![Poly::from_canonical([Q - 1; N])]);
        let lows = low_bits(&v, &p);
        // low(q-1) = -1, stored canonically.
        assert_eq!(lows.poly(0).coeff(0), from_centered(-1));
    }
}
