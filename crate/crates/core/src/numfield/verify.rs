//! Exact check that `alpha` is an eigenvalue of a sum of permutation matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::factor::{is_prime, mul_mod};
use crate::algebra::linalg::{rref, FieldElement};

use super::perron::permutation_sum;
use super::quad::QuadInt;

/// Largest size for which the determinant is also eliminated over `K`.
pub const FIELD_ELIMINATION_BOUND: usize = 24;

/// `a + b sqrt m` with rational `a, b`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRat {
    m: i64,
    a: BigRational,
    b: BigRational,
}

impl QuadRat {
    pub fn from_quad(z: &QuadInt) -> Self {
        let (a, b) = z.embedding(0);
        Self { m: z.field.m(), a, b }
    }

    fn new(m: i64, a: BigRational, b: BigRational) -> Self {
        Self { m, a, b }
    }
}

impl FieldElement for QuadRat {
    fn zero_like(&self) -> Self {
        Self::new(self.m, BigRational::zero(), BigRational::zero())
    }
    fn one_like(&self) -> Self {
        Self::new(self.m, BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, o: &Self) -> Self {
        Self::new(self.m, &self.a + &o.a, &self.b + &o.b)
    }
    fn sub(&self, o: &Self) -> Self {
        Self::new(self.m, &self.a - &o.a, &self.b - &o.b)
    }
    fn mul(&self, o: &Self) -> Self {
        let m = BigRational::from_integer(self.m.into());
        Self::new(self.m, &self.a * &o.a + m * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
    fn div(&self, o: &Self) -> Self {
        let m = BigRational::from_integer(self.m.into());
        let n = &o.a * &o.a - m * &o.b * &o.b;
        let inv = Self::new(self.m, &o.a / &n, -&o.b / &n);
        self.mul(&inv)
    }
}

fn singular_over_field(a: &[Vec<u64>], alpha: &QuadInt) -> bool {
    let al = QuadRat::from_quad(alpha);
    let zero = al.zero_like();
    let mut m: Vec<Vec<QuadRat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let e = QuadRat::new(al.m, BigRational::from_integer(v.into()), BigRational::zero());
                    if i == j { e.sub(&al) } else { e.add(&zero) }
                })
                .collect()
        })
        .collect();
    rref(&mut m).len() < a.len()
}

/// `det B = 0` for an integer matrix, by determinants modulo primes whose
/// product exceeds the Hadamard bound.
pub fn integer_det_is_zero(b: &[Vec<BigInt>]) -> bool {
    let n = b.len();
    let bits: f64 = b
        .iter()
        .map(|row| {
            let s: f64 = row.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum();
            0.5 * s.max(1.0).log2()
        })
        .sum::<f64>()
        + 2.0;
    let mut covered = 0.0;
    let mut p = (1u64 << 61) - 1;
    while covered <= bits {
        while !is_prime(p) {
            p -= 2;
        }
        let reduced: Vec<Vec<u64>> = b
            .iter()
            .map(|row| row.iter().map(|x| (x % BigInt::from(p) + BigInt::from(p)).to_u64().unwrap() % p).collect())
            .collect();
        if det_mod(reduced, p) != 0 {
            return false;
        }
        covered += 60.0;
        p -= 2;
    }
    n > 0
}

fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[col][col], p);
        let inv = crate::algebra::factor::pow_mod(m[col][col], p - 2, p);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = mul_mod(m[r][col], inv, p);
            for c in col..n {
                let sub = mul_mod(f, m[col][c], p);
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
    }
    det
}

/// `det(sum_i P_i - alpha I) = 0` for `n - 1` permutations in the
/// `perm[l] = k` convention. For irrational `alpha` this is decided through
/// `det(A^2 - T A + N I) = 0` over `Z`, with `T`, `N` the trace and norm;
/// small sizes are also eliminated over `K` and must agree.
pub fn verify_numfield_certificate(alpha: &QuadInt, n: usize, perms: &[Vec<usize>]) -> bool {
    if n < 2 || perms.len() != n - 1 {
        return false;
    }
    let Ok(a) = permutation_sum(perms) else {
        return false;
    };
    if perms.iter().any(|p| p.len() != a.size()) {
        return false;
    }
    let size = a.size();
    let big = |v: i128| BigInt::from(v);
    let b: Vec<Vec<BigInt>> = if alpha.is_rational() {
        (0..size)
            .map(|i| (0..size).map(|j| big(a.rows()[i][j] as i128 - if i == j { alpha.x as i128 } else { 0 })).collect())
            .collect()
    } else {
        let (t, nm) = (alpha.trace(), alpha.norm());
        let rows = a.rows();
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        let sq: i128 = (0..size).map(|k| rows[i][k] as i128 * rows[k][j] as i128).sum();
                        let mut v = sq - t * rows[i][j] as i128;
                        if i == j {
                            v += nm;
                        }
                        big(v)
                    })
                    .collect()
            })
            .collect()
    };
    let modular = integer_det_is_zero(&b);
    if size <= FIELD_ELIMINATION_BOUND {
        assert_eq!(modular, singular_over_field(a.rows(), alpha), "determinant routes disagree");
    }
    modular
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::quad::QuadField;
    use proptest::prelude::*;

    #[test]
    fn certificate_examples() {
        let q = QuadField::rationals();
        assert!(verify_numfield_certificate(&q.int(2), 3, &[vec![0, 1], vec![0, 1]]));
        assert!(!verify_numfield_certificate(&q.int(3), 3, &[vec![0, 1], vec![1, 0]]));
        assert!(verify_numfield_certificate(&q.int(0), 3, &[vec![0, 1], vec![1, 0]]));
        assert!(!verify_numfield_certificate(&q.int(2), 4, &[vec![0, 1], vec![0, 1]]));
        assert!(!verify_numfield_certificate(&q.int(2), 3, &[vec![0, 0], vec![0, 1]]));
    }

    #[test]
    fn rotations_carry_roots_of_unity() {
        // C_6 + C_6^{-1} has eigenvalues 2 cos(2 pi k / 6): 2, 1, -1, -2
        let rot: Vec<usize> = (0..6).map(|l| (l + 1) % 6).collect();
        let inv: Vec<usize> = (0..6).map(|l| (l + 5) % 6).collect();
        let q = QuadField::rationals();
        for (k, expect) in [(1, true), (0, false), (-1, true), (2, true), (3, false)] {
            assert_eq!(verify_numfield_certificate(&q.int(k), 3, &[rot.clone(), inv.clone()]), expect, "{k}");
        }
        // C_4 + id has eigenvalues 1 + i^k, so 1 + i but not 1 + 2i
        let c4: Vec<usize> = (0..4).map(|l| (l + 1) % 4).collect();
        let id: Vec<usize> = (0..4).collect();
        let g = QuadField::new(-1).unwrap();
        assert!(verify_numfield_certificate(&g.elem(1, 1).unwrap(), 3, &[c4.clone(), id.clone()]));
        assert!(verify_numfield_certificate(&g.elem(1, -1).unwrap(), 3, &[c4.clone(), id.clone()]));
        assert!(!verify_numfield_certificate(&g.elem(1, 2).unwrap(), 3, &[c4, id]));
    }

    proptest! {
        #[test]
        fn modular_determinant_matches_exact(rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 4)) {
            let b: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let exact = crate::algebra::linalg::bareiss_det(&b).unwrap();
            prop_assert_eq!(integer_det_is_zero(&b), exact.is_zero());
        }
    }
}
