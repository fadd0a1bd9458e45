//! Number-theoretic transform over Z_q for the negacyclic ring
//! Z_q[X]/(X^256 + 1).
//!
//! q - 1 = 2^13 * 1023, so a primitive 512th root of unity exists; 1753
//! is the usual choice for this modulus. The forward transform leaves
//! evaluations in bit-reversed order, which pointwise multiplication and
//! the inverse transform both expect.

use std::sync::OnceLock;

use super::{add_mod, mul_mod, sub_mod, Poly, N, Q};

/// Primitive 512th root of unity modulo q.
const ZETA: u32 = 1753;

/// A polynomial in NTT (evaluation) representation.
#[derive(Clone, PartialEq, Eq)]
pub struct NttPoly {
    pub(crate) evals: [u32; N],
}

impl NttPoly {
    pub fn evals(&self) -> &[u32; N] {
        &self.evals
    }

    /// In-place elementwise sum, used to accumulate matrix rows.
    pub fn accumulate(&mut self, other: &NttPoly) {
        for (a, b) in self.evals.iter_mut().zip(other.evals.iter()) {
            *a = add_mod(*a, *b);
        }
    }
}

impl std::fmt::Debug for NttPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NttPoly[{}, {}, ...]", self.evals[0], self.evals[1])
    }
}

fn pow_mod(mut base: u32, mut exp: u32) -> u32 {
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Twiddle factors in bit-reversed order: zetas[i] = ZETA^bitrev8(i).
fn zetas() -> &'static [u32; N] {
    static TABLE: OnceLock<[u32; N]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u32; N];
        for (i, z) in t.iter_mut().enumerate() {
            *z = pow_mod(ZETA, (i as u8).reverse_bits() as u32);
        }
        t
    })
}

fn inv_n() -> u32 {
    static INV: OnceLock<u32> = OnceLock::new();
    *INV.get_or_init(|| pow_mod(N as u32, Q - 2))
}

/// Forward transform (Cooley-Tukey butterflies).
pub fn ntt(p: &Poly) -> NttPoly {
    let zetas = zetas();
    let mut a = p.coeffs;
    let mut k = 0usize;
    let mut len = N / 2;
    while len >= 1 {
        let mut start = 0;
        while start < N {
            k += 1;
            let zeta = zetas[k];
            for j in start..start + len {
                let t = mul_mod(zeta, a[j + len]);
                a[j + len] = sub_mod(a[j], t);
                a[j] = add_mod(a[j], t);
            }
            start += 2 * len;
        }
        len >>= 1;
    }
    NttPoly { evals: a }
}

/// Inverse transform (Gentleman-Sande butterflies plus the 1/n scale).
pub fn intt(p: &NttPoly) -> Poly {
    let zetas = zetas();
    let mut a = p.evals;
    let mut k = N;
    let mut len = 1;
    while len < N {
        let mut start = 0;
        while start < N {
            k -= 1;
            let neg_zeta = Q - zetas[k];
            for j in start..start + len {
                let t = a[j];
                a[j] = add_mod(t, a[j + len]);
                a[j + len] = mul_mod(neg_zeta, sub_mod(t, a[j + len]));
            }
            start += 2 * len;
        }
        len <<= 1;
    }
    let scale = inv_n();
    for x in a.iter_mut() {
        *x = mul_mod(*x, scale);
    }
    Poly { coeffs: a }
}

/// Elementwise product of two NTT-domain polynomials; equals `poly_mul`
/// of the originals after [`intt`].
pub fn pointwise_mul(a: &NttPoly, b: &NttPoly) -> NttPoly {
    let mut out = [0u32; N];
    for i in 0..N {
        out[i] = mul_mod(a.evals[i], b.evals[i]);
    }
    NttPoly { evals: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::schoolbook_mul;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn zeta_has_order_512() {
        assert_eq!(pow_mod(ZETA, 256), Q - 1);
        assert_eq!(pow_mod(ZETA, 512), 1);
    }

    #[test]
    fn ntt_of_zero_is_zero() {
        let z = ntt(&Poly::zero());
        assert!(z.evals.iter().all(|&e| e == 0));
    }

    #[test]
    fn ntt_is_linear() {
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        let mut coeffs_a = [0u32; N];
        let mut coeffs_b = [0u32; N];
        for i in 0..N {
            coeffs_a[i] = rng.gen_range(0..Q);
            coeffs_b[i] = rng.gen_range(0..Q);
        }
        let a = Poly::from_canonical(coeffs_a);
        let b = Poly::from_canonical(coeffs_b);
        let sum = crate::ring::poly_add(&a, &b);
        let lhs = ntt(&sum);
        let (fa, fb) = (ntt(&a), ntt(&b));
        for i in 0..N {
            assert_eq!(lhs.evals[i], add_mod(fa.evals[i], fb.evals[i]));
        }
    }

    #[test]
    fn pointwise_product_matches_schoolbook() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for _ in 0..100 {
            let mut ca = [0u32; N];
            let mut cb = [0u32; N];
            for i in 0..N {
                ca[i] = rng.gen_range(0..Q);
                cb[i] = rng.gen_range(0..Q);
            }
            let a = Poly::from_canonical(ca);
            let b = Poly::from_canonical(cb);
            let via_ntt = intt(&pointwise_mul(&ntt(&a), &ntt(&b)));
            assert_eq!(via_ntt, schoolbook_mul(&a, &b));
        }
    }
}
