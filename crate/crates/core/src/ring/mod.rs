//! Arithmetic in R_q = Z_q[X]/(X^256 + 1) with q = 8380417.
//!
//! Coefficients are stored canonically in [0, q) at every API boundary;
//! the centered view (-q/2, q/2] exists only for norms and packing.
//! Multiplication goes through the NTT ([`ntt`]); [`schoolbook_mul`] is the
//! permanent in-tree oracle it is cross-checked against. None of this code
//! is constant-time.

pub mod ntt;

pub use ntt::{intt, ntt as ntt_forward, pointwise_mul, NttPoly};

/// The prime modulus, 2^23 - 2^13 + 1.
pub const Q: u32 = 8380417;

/// The ring degree.
pub const N: usize = 256;

#[inline]
pub(crate) fn add_mod(a: u32, b: u32) -> u32 {
    let s = a + b;
    if s >= Q {
        s - Q
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + Q - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32) -> u32 {
    // Q is a compile-time constant, so the u64 remainder lowers to a
    // multiply-shift sequence rather than a hardware divide.
    ((a as u64 * b as u64) % Q as u64) as u32
}

/// Centered representative of a canonical value, in (-q/2, q/2].
#[inline]
pub fn to_centered(value: u32) -> i32 {
    debug_assert!(value < Q);
    if value <= (Q - 1) / 2 {
        value as i32
    } else {
        value as i32 - Q as i32
    }
}

/// Canonical form of any signed representative.
#[inline]
pub fn from_centered(value: i64) -> u32 {
    let q = Q as i64;
    (value.rem_euclid(q)) as u32
}

/// A dense degree-255 polynomial with canonical coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub(crate) coeffs: [u32; N],
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: [0; N] }
    }

    /// Constant polynomial `value` (canonical).
    pub fn constant(value: u32) -> Poly {
        debug_assert!(value < Q);
        let mut p = Poly::zero();
        p.coeffs[0] = value;
        p
    }

    /// The monomial X^degree.
    pub fn monomial(degree: usize) -> Poly {
        let mut p = Poly::zero();
        p.coeffs[degree] = 1;
        p
    }

    /// Builds a polynomial from canonical coefficients.
    ///
    /// Panics if any coefficient is out of range; constructors are the only
    /// place range enforcement happens.
    pub fn from_canonical(coeffs: [u32; N]) -> Poly {
        assert!(coeffs.iter().all(|&c| c < Q), "coefficient out of range");
        Poly { coeffs }
    }

    /// Builds a polynomial from centered (signed) coefficients.
    pub fn from_centered(coeffs: &[i64; N]) -> Poly {
        let mut out = [0u32; N];
        for (o, &c) in out.iter_mut().zip(coeffs.iter()) {
            *o = from_centered(c);
        }
        Poly { coeffs: out }
    }

    pub fn coeffs(&self) -> &[u32; N] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly[{}, {}, {}, ...]", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

/// Coefficient-wise sum in R_q.
pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = [0u32; N];
    for i in 0..N {
        out[i] = add_mod(a.coeffs[i], b.coeffs[i]);
    }
    Poly { coeffs: out }
}

/// Coefficient-wise difference in R_q.
pub fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = [0u32; N];
    for i in 0..N {
        out[i] = sub_mod(a.coeffs[i], b.coeffs[i]);
    }
    Poly { coeffs: out }
}

/// Negacyclic product in R_q, computed through the NTT. Value-exact:
/// agrees with [`schoolbook_mul`] on every input.
pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    intt(&pointwise_mul(&ntt_forward(a), &ntt_forward(b)))
}

/// O(n^2) negacyclic convolution, the permanent multiplication oracle:
/// c_k = sum_{i+j=k} a_i b_j - sum_{i+j=k+n} a_i b_j (mod q).
pub fn schoolbook_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = [0u32; N];
    for (k, o) in out.iter_mut().enumerate() {
        // Partial sums stay below 256 * (q-1)^2 < 2^63.
        let mut plus = 0u64;
        let mut minus = 0u64;
        for i in 0..N {
            let term = a.coeffs[i] as u64 * b.coeffs[(k + N - i) % N] as u64;
            if i <= k {
                plus += term;
            } else {
                minus += term;
            }
        }
        let q = Q as u64;
        *o = ((plus % q + q - minus % q) % q) as u32;
    }
    Poly { coeffs: out }
}

/// Infinity norm over centered representatives.
pub fn poly_inf_norm(p: &Poly) -> u32 {
    p.coeffs
        .iter()
        .map(|&c| to_centered(c).unsigned_abs())
        .max()
        .unwrap_or(0)
}

/// A homogeneous vector of polynomials; its length is fixed at
/// construction (k or l depending on role).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec {
    polys: Vec<Poly>,
}

impl PolyVec {
    pub fn new(polys: Vec<Poly>) -> PolyVec {
        assert!(!polys.is_empty(), "empty PolyVec");
        PolyVec { polys }
    }

    pub fn zero(len: usize) -> PolyVec {
        PolyVec::new(vec![Poly::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn poly(&self, i: usize) -> &Poly {
        &self.polys[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Poly> {
        self.polys.iter()
    }

    pub fn add(&self, other: &PolyVec) -> PolyVec {
        assert_eq!(self.len(), other.len(), "PolyVec length mismatch");
        PolyVec::new(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| poly_add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &PolyVec) -> PolyVec {
        assert_eq!(self.len(), other.len(), "PolyVec length mismatch");
        PolyVec::new(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| poly_sub(a, b))
                .collect(),
        )
    }

    /// Max infinity norm across all entries.
    pub fn inf_norm(&self) -> u32 {
        self.iter().map(poly_inf_norm).max().unwrap_or(0)
    }
}

/// The public k x l matrix over R_q. Rows are kept both in coefficient
/// form and in the NTT domain so repeated matrix-vector products skip the
/// forward transforms of A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixA {
    rows: Vec<Vec<Poly>>,
    rows_ntt: Vec<Vec<NttPoly>>,
}

impl MatrixA {
    /// Builds a matrix from its rows; every row must have the same length.
    pub fn new(rows: Vec<Vec<Poly>>) -> MatrixA {
        assert!(!rows.is_empty(), "empty matrix");
        let cols = rows[0].len();
        assert!(cols >= 1, "empty matrix row");
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged matrix rows"
        );
        let rows_ntt = rows
            .iter()
            .map(|row| row.iter().map(ntt_forward).collect())
            .collect();
        MatrixA { rows, rows_ntt }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    /// k = l identity matrix, for tests.
    pub fn identity(dim: usize) -> MatrixA {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Poly::constant(1) } else { Poly::zero() })
                    .collect()
            })
            .collect();
        MatrixA::new(rows)
    }
}

/// Matrix-vector product over R_q: row i of the result is
/// sum_j A[i][j] * v[j]. Accumulation happens in the NTT domain, one
/// inverse transform per row.
pub fn matvec_mul(a: &MatrixA, v: &PolyVec) -> PolyVec {
    assert_eq!(v.len(), a.ncols(), "matrix-vector dimension mismatch");
    let v_ntt: Vec<NttPoly> = v.iter().map(ntt_forward).collect();
    matvec_mul_cached(a, &v_ntt)
}

/// Same as [`matvec_mul`] for a vector already in the NTT domain.
pub fn matvec_mul_cached(a: &MatrixA, v_ntt: &[NttPoly]) -> PolyVec {
    assert_eq!(v_ntt.len(), a.ncols(), "matrix-vector dimension mismatch");
    let rows = a
        .rows_ntt
        .iter()
        .map(|row| {
            let mut acc = pointwise_mul(&row[0], &v_ntt[0]);
            for j in 1..row.len() {
                acc.accumulate(&pointwise_mul(&row[j], &v_ntt[j]));
            }
            intt(&acc)
        })
        .collect();
    PolyVec::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn random_poly(rng: &mut ChaCha20Rng) -> Poly {
        let mut coeffs = [0u32; N];
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(0..Q);
        }
        Poly { coeffs }
    }

    fn assert_canonical(p: &Poly) {
        assert!(p.coeffs.iter().all(|&c| c < Q));
    }

    #[test]
    fn add_of_inverses_is_zero() {
        let one = Poly::constant(1);
        let qm1 = Poly::constant(Q - 1);
        assert_eq!(poly_add(&one, &qm1), Poly::zero());
    }

    #[test]
    fn sub_of_self_is_zero() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let p = random_poly(&mut rng);
        assert_eq!(poly_sub(&p, &p), Poly::zero());
    }

    #[test]
    fn add_matches_wide_integer_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let s = poly_add(&a, &b);
            assert_canonical(&s);
            for i in 0..N {
                let expect = (a.coeffs[i] as u64 + b.coeffs[i] as u64) % Q as u64;
                assert_eq!(s.coeffs[i] as u64, expect);
            }
        }
    }

    #[test]
    fn negacyclic_wraparound() {
        // X^255 * X = X^256 = -1.
        let p = poly_mul(&Poly::monomial(255), &Poly::monomial(1));
        assert_eq!(p, Poly::constant(Q - 1));
    }

    #[test]
    fn constant_product() {
        let p = poly_mul(&Poly::constant(3), &Poly::constant(5));
        assert_eq!(p, Poly::constant(15));
    }

    #[test]
    fn schoolbook_identity_and_monomials() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let p = random_poly(&mut rng);
        assert_eq!(schoolbook_mul(&p, &Poly::constant(1)), p);

        assert_eq!(
            schoolbook_mul(&Poly::monomial(10), &Poly::monomial(20)),
            Poly::monomial(30)
        );
        // i + j >= 256 wraps with a sign flip.
        let wrapped = schoolbook_mul(&Poly::monomial(200), &Poly::monomial(100));
        let mut expect = Poly::zero();
        expect.coeffs[44] = Q - 1;
        assert_eq!(wrapped, expect);
    }

    #[test]
    fn ntt_mul_matches_schoolbook_on_random_pairs() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..100 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let fast = poly_mul(&a, &b);
            assert_canonical(&fast);
            assert_eq!(fast, schoolbook_mul(&a, &b));
        }
    }

    #[test]
    fn ntt_intt_roundtrip() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = random_poly(&mut rng);
            assert_eq!(intt(&ntt_forward(&p)), p);
        }
        assert_eq!(intt(&ntt_forward(&Poly::zero())), Poly::zero());
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let one = Poly::constant(1);
        let neg_one = Poly::constant(Q - 1);
        for _ in 0..1000 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let c = random_poly(&mut rng);
            assert_eq!(poly_add(&a, &b), poly_add(&b, &a));
            assert_eq!(
                poly_add(&poly_add(&a, &b), &c),
                poly_add(&a, &poly_add(&b, &c))
            );
            assert_eq!(poly_mul(&a, &b), poly_mul(&b, &a));
            assert_eq!(
                poly_mul(&poly_mul(&a, &b), &c),
                poly_mul(&a, &poly_mul(&b, &c))
            );
            assert_eq!(
                poly_mul(&a, &poly_add(&b, &c)),
                poly_add(&poly_mul(&a, &b), &poly_mul(&a, &c))
            );
            assert_eq!(poly_mul(&a, &one), a);
            assert_eq!(poly_add(&poly_mul(&a, &neg_one), &a), Poly::zero());
        }
    }

    #[test]
    fn centered_view_and_norms() {
        assert_eq!(to_centered(Q - 1), -1);
        assert_eq!(poly_inf_norm(&Poly::constant(Q - 1)), 1);
        assert_eq!(poly_inf_norm(&Poly::zero()), 0);
        assert_eq!(to_centered((Q - 1) / 2), 4190208);
        assert_eq!(poly_inf_norm(&Poly::constant((Q - 1) / 2)), 4190208);
        assert_eq!(from_centered(-1), Q - 1);
        assert_eq!(from_centered(-(Q as i64)), 0);
    }

    #[test]
    fn inf_norm_triangle_inequality() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let lhs = poly_inf_norm(&poly_add(&a, &b)) as u64;
            let rhs = poly_inf_norm(&a) as u64 + poly_inf_norm(&b) as u64;
            assert!(lhs <= rhs);
        }
    }

    #[test]
    fn matvec_zero_vector() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let rows = (0..4)
            .map(|_| (0..3).map(|_| random_poly(&mut rng)).collect())
            .collect();
        let a = MatrixA::new(rows);
        let out = matvec_mul(&a, &PolyVec::zero(3));
        assert_eq!(out, PolyVec::zero(4));
    }

    #[test]
    fn matvec_identity() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let a = MatrixA::identity(3);
        let v = PolyVec::new((0..3).map(|_| random_poly(&mut rng)).collect());
        assert_eq!(matvec_mul(&a, &v), v);
    }

    #[test]
    fn matvec_matches_schoolbook_entries() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let rows: Vec<Vec<Poly>> = (0..4)
            .map(|_| (0..3).map(|_| random_poly(&mut rng)).collect())
            .collect();
        let a = MatrixA::new(rows.clone());
        let v = PolyVec::new((0..3).map(|_| random_poly(&mut rng)).collect());
        let got = matvec_mul(&a, &v);
        for i in 0..4 {
            let mut expect = Poly::zero();
            for j in 0..3 {
                expect = poly_add(&expect, &schoolbook_mul(&rows[i][j], v.poly(j)));
            }
            assert_eq!(got.poly(i), &expect);
        }
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn matvec_rejects_bad_dimensions() {
        let a = MatrixA::identity(3);
        matvec_mul(&a, &PolyVec::zero(4));
    }

    #[test]
    #[should_panic(expected = "ragged")]
    fn matrix_rejects_ragged_rows() {
        MatrixA::new(vec![vec![Poly::zero(); 2], vec![Poly::zero(); 3]]);
    }
}
