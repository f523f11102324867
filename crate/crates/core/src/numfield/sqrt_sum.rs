//! Exact signs of rational combinations of square roots.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::integer_factor;

/// `sum_s c_s sqrt(s)` over squarefree `s >= 1` with rational `c_s`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SqrtSum {
    terms: BTreeMap<u128, BigRational>,
}

/// Splits `v = k^2 s` with `s` squarefree.
fn square_part(v: u128) -> (u128, u128) {
    if v <= 1 {
        return (1, v);
    }
    let f = integer_factor(v).expect("radicand factors within the supported range");
    let (mut k, mut s) = (1u128, 1u128);
    for &(p, e) in &f.factors {
        k *= (p as u128).pow(e / 2);
        if e % 2 == 1 {
            s *= p as u128;
        }
    }
    (k, s)
}

fn to_u128(v: &BigInt) -> u128 {
    v.to_u128().expect("radicand exceeds 128 bits")
}

impl SqrtSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::rational_sqrt(r, 1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(v.into()))
    }

    /// `c sqrt(v)` for an integer `v >= 0`.
    pub fn rational_sqrt(c: BigRational, v: u128) -> Self {
        let mut out = Self::zero();
        if v == 0 || c.is_zero() {
            return out;
        }
        let (k, s) = square_part(v);
        out.terms.insert(s, c * BigRational::from_integer(BigInt::from(k)));
        out
    }

    /// `sqrt(r)` for rational `r >= 0`.
    pub fn sqrt_of(r: BigRational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        let den = r.denom().clone();
        let v = to_u128(&(r.numer() * &den));
        Self::rational_sqrt(BigRational::new(BigInt::one(), den), v)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, s: u128, c: BigRational) {
        let e = self.terms.entry(s).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&s, c) in &other.terms {
            out.insert(s, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&s, c)| (s, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&s, c)| (s, c * r)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&s1, c1) in &self.terms {
            for (&s2, c2) in &other.terms {
                let g = s1.gcd(&s2);
                let k = BigRational::from_integer(BigInt::from(g));
                out.insert((s1 / g) * (s2 / g), c1 * c2 * k);
            }
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(&s, c)| c.to_f64().unwrap_or(f64::NAN) * (s as f64).sqrt()).sum()
    }

    /// Exact sign, by splitting off one prime `p` at a time as
    /// `P + Q sqrt(p)` and comparing `P^2` with `p Q^2` when the parts disagree.
    pub fn sign(&self) -> Ordering {
        let p = self.terms.keys().filter(|&&s| s > 1).map(|&s| largest_prime(s)).max();
        let Some(p) = p else {
            return self.terms.get(&1).map_or(Ordering::Equal, |c| c.cmp(&BigRational::zero()));
        };
        let (mut base, mut coef) = (Self::zero(), Self::zero());
        for (&s, c) in &self.terms {
            if s % p == 0 {
                coef.insert(s / p, c.clone());
            } else {
                base.insert(s, c.clone());
            }
        }
        let (sp, sq) = (base.sign(), coef.sign());
        match (sp, sq) {
            (_, Ordering::Equal) => sp,
            (Ordering::Equal, _) => sq,
            _ if sp == sq => sp,
            _ => {
                let pp = SqrtSum::from_integer(1).scale(&BigRational::from_integer(BigInt::from(p)));
                let diff = base.mul(&base).sub(&pp.mul(&coef).mul(&coef));
                match diff.sign() {
                    Ordering::Equal => Ordering::Equal,
                    d if sp == Ordering::Greater => d,
                    d => d.reverse(),
                }
            }
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

fn largest_prime(s: u128) -> u128 {
    integer_factor(s)
        .expect("squarefree radicand factors")
        .primes()
        .max()
        .expect("s > 1") as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(SqrtSum::sqrt_of(q(8, 1)), SqrtSum::rational_sqrt(q(2, 1), 2));
        assert_eq!(SqrtSum::sqrt_of(q(1, 2)), SqrtSum::rational_sqrt(q(1, 2), 2));
        assert_eq!(SqrtSum::sqrt_of(q(9, 4)), SqrtSum::from_rational(q(3, 2)));
        let r2 = SqrtSum::sqrt_of(q(2, 1));
        assert_eq!(r2.mul(&r2), SqrtSum::from_integer(2));
        let r6 = SqrtSum::sqrt_of(q(6, 1));
        assert_eq!(r2.mul(&r6), SqrtSum::rational_sqrt(q(2, 1), 3));
    }

    #[test]
    fn exact_signs() {
        let s = |v: i64| SqrtSum::sqrt_of(q(v, 1));
        // sqrt 2 + sqrt 3 vs sqrt 10 (3.146 vs 3.162)
        assert_eq!(s(2).add(&s(3)).cmp_exact(&s(10)), Ordering::Less);
        // sqrt 2 + sqrt 8 = sqrt 18
        assert_eq!(s(2).add(&s(8)).cmp_exact(&s(18)), Ordering::Equal);
        // 1 + sqrt 2 + sqrt 3 + sqrt 6 = (1 + sqrt 2)(1 + sqrt 3)
        let lhs = SqrtSum::from_integer(1).add(&s(2)).add(&s(3)).add(&s(6));
        let rhs = SqrtSum::from_integer(1).add(&s(2)).mul(&SqrtSum::from_integer(1).add(&s(3)));
        assert_eq!(lhs.cmp_exact(&rhs), Ordering::Equal);
        // golden ratio squared is golden ratio plus one
        let phi = SqrtSum::from_rational(q(1, 2)).add(&SqrtSum::rational_sqrt(q(1, 2), 5));
        assert_eq!(phi.mul(&phi).cmp_exact(&phi.add(&SqrtSum::from_integer(1))), Ordering::Equal);
    }

    proptest! {
        #[test]
        fn sign_matches_floating_point(cs in prop::collection::vec(-20i64..20, 4), rs in prop::collection::vec(1u64..40, 4)) {
            let mut v = SqrtSum::zero();
            for (c, r) in cs.iter().zip(&rs) {
                v = v.add(&SqrtSum::rational_sqrt(q(*c, 1), *r as u128));
            }
            let f = v.to_f64();
            prop_assume!(f.abs() > 1e-9);
            prop_assert_eq!(v.sign(), f.partial_cmp(&0.0).unwrap());
        }

        #[test]
        fn squares_of_sums_are_consistent(a in 1u64..50, b in 1u64..50) {
            // (sqrt a + sqrt b)^2 = a + b + 2 sqrt(ab)
            let x = SqrtSum::sqrt_of(q(a as i64, 1)).add(&SqrtSum::sqrt_of(q(b as i64, 1)));
            let y = SqrtSum::from_integer((a + b) as i64).add(&SqrtSum::rational_sqrt(q(2, 1), (a * b) as u128));
            prop_assert_eq!(x.mul(&x), y);
        }
    }
}
