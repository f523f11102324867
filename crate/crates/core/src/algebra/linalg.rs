//! Exact linear algebra over fields and integral domains.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::ratfunc::RatFunc;

/// Field operations needed by Gaussian elimination. Constructors take a
/// template element because some fields carry runtime parameters.
pub trait FieldElement: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Division by a nonzero element.
    fn div(&self, other: &Self) -> Self;
}

impl FieldElement for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn div(&self, other: &Self) -> Self {
        RatFunc::div(self, other).expect("division by nonzero pivot")
    }
}

impl FieldElement for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Reduces `m` (rows x cols) to reduced row echelon form in place and
/// returns the pivot column of each nonzero row.
pub fn rref<F: FieldElement>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv_lead = m[r][c].one_like().div(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv_lead);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let delta = factor.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
pub fn nullspace<F: FieldElement>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = m.first().map_or(0, Vec::len);
    if cols == 0 {
        return Vec::new();
    }
    let template = m[0][0].clone();
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![template.zero_like(); cols];
        v[free] = template.one_like();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = template.zero_like().sub(&work[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// A nonzero vector in the kernel of a square matrix over F_q(t), or `None`
/// when the matrix is nonsingular. The returned vector is the sum of the
/// echelon-form kernel basis, so every free coordinate equals 1.
pub fn ff_kernel(m: &[Vec<RatFunc>]) -> Option<Vec<RatFunc>> {
    let basis = nullspace(m);
    let mut it = basis.into_iter();
    let first = it.next()?;
    Some(it.fold(first, |acc, v| acc.iter().zip(&v).map(|(a, b)| a.add(b)).collect()))
}

/// Exact-division ring operations for fraction-free elimination.
pub trait IntegralDomain: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, other: &Self) -> Self;
}

impl IntegralDomain for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Poly::one(self.field())
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Self {
        Poly::div_exact(self, other).expect("Bareiss division is exact")
    }
}

impl IntegralDomain for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_det<R: IntegralDomain>(matrix: &[Vec<R>]) -> Option<R> {
    let n = matrix.len();
    let template = matrix.first()?.first()?.clone();
    let mut m = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = template.one_like();
    for k in 0..n {
        if m[k][k].is_zero() {
            let p = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match p {
                Some(p) => {
                    m.swap(k, p);
                    sign_flip = !sign_flip;
                }
                None => return Some(template.zero_like()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if sign_flip { det.neg() } else { det })
}

/// Converts a rational vector into a primitive integer vector with the same
/// direction (positive leading nonzero entry).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if Zero::is_zero(&g) {
        return ints;
    }
    let sign = ints.iter().find(|x| !Zero::is_zero(*x)).map_or(BigInt::one(), |x| x.signum());
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
