//! Residue classes in F_q[t]/(c).

use std::fmt;

use super::factor::integer_factor;
use super::irreducible::is_irreducible;
use super::poly::Poly;
use super::AlgebraError;

/// A residue modulo a monic, nonconstant polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModElement {
    residue: Poly,
    modulus: Poly,
}

impl ModElement {
    /// Reduces `residue` modulo `modulus` (made monic).
    pub fn new(residue: &Poly, modulus: &Poly) -> Result<Self, AlgebraError> {
        match modulus.deg() {
            None => return Err(AlgebraError::DivisionByZero),
            Some(0) => return Err(AlgebraError::ConstantPolynomial),
            Some(_) => {}
        }
        let modulus = modulus.monic();
        Ok(Self { residue: residue.rem(&modulus)?, modulus })
    }

    pub fn residue(&self) -> &Poly {
        &self.residue
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue.is_one()
    }

    fn with(&self, residue: Poly) -> Self {
        Self { residue, modulus: self.modulus.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus, "residues modulo different polynomials");
        self.with(self.residue.mul(&other.residue).rem(&self.modulus).expect("nonzero modulus"))
    }

    pub fn neg(&self) -> Self {
        self.with(self.residue.neg())
    }

    pub fn pow(&self, exp: u128) -> Self {
        self.with(self.residue.pow_mod(exp, &self.modulus).expect("nonzero modulus"))
    }

    /// Multiplicative inverse; fails with the nontrivial gcd for non-units.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.residue.is_zero() {
            return Err(AlgebraError::NotInvertible { gcd: self.modulus.clone() });
        }
        let (g, s, _) = self.residue.ext_gcd(&self.modulus)?;
        if !g.is_one() {
            return Err(AlgebraError::NotInvertible { gcd: g });
        }
        Ok(self.with(s.rem(&self.modulus)?))
    }

    /// Order of the unit group when the modulus is irreducible: `q^deg - 1`.
    pub fn field_group_order(&self) -> Result<u128, AlgebraError> {
        let d = self.modulus.deg().expect("nonconstant modulus") as u32;
        (self.modulus.q() as u128)
            .checked_pow(d)
            .map(|n| n - 1)
            .ok_or(AlgebraError::TooLarge { value: u128::MAX, bound: u128::MAX })
    }

    /// Multiplicative order in `(F_q[t]/c)^*` for irreducible `c`, computed by
    /// stripping prime factors from the group order `q^deg(c) - 1`.
    pub fn order(&self) -> Result<u128, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroElement);
        }
        if !is_irreducible(&self.modulus)? {
            return Err(AlgebraError::ReducibleModulus);
        }
        let group = self.field_group_order()?;
        let factors = integer_factor(group)?;
        let mut order = group;
        for p in factors.primes() {
            let p = p as u128;
            while order % p == 0 && self.pow(order / p).is_one() {
                order /= p;
            }
        }
        Ok(order)
    }
}

impl fmt::Debug for ModElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod ({})", self.residue, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldParams;
    use proptest::prelude::*;

    fn p(q: u64, s: &str) -> Poly {
        Poly::parse(FieldParams::new(q).unwrap(), s).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let c = p(2, "t^2+t+1");
        let t = ModElement::new(&p(2, "t"), &c).unwrap();
        assert_eq!(t.inverse().unwrap().residue(), &p(2, "t+1"));
        let one = ModElement::new(&p(2, "1"), &c).unwrap();
        assert_eq!(one.inverse().unwrap().residue(), &p(2, "1"));
        let bad = ModElement::new(&p(2, "t"), &p(2, "t^2+t")).unwrap();
        assert_eq!(bad.inverse(), Err(AlgebraError::NotInvertible { gcd: p(2, "t") }));
    }

    #[test]
    fn order_examples() {
        let c = p(2, "t^2+t+1");
        let el = |s| ModElement::new(&p(2, s), &c).unwrap();
        assert_eq!(el("t").order().unwrap(), 3);
        assert_eq!(el("1").order().unwrap(), 1);
        assert_eq!(el("t+1").order().unwrap(), 3);
        assert_eq!(el("0").order(), Err(AlgebraError::ZeroElement));
        let red = ModElement::new(&p(2, "t"), &p(2, "t^2+1")).unwrap();
        assert_eq!(red.order(), Err(AlgebraError::ReducibleModulus));
    }

    /// Direct powering oracle for the order.
    fn brute_order(u: &ModElement) -> u128 {
        let mut x = u.clone();
        let mut k = 1;
        while !x.is_one() {
            x = x.mul(u);
            k += 1;
        }
        k
    }

    #[test]
    fn order_matches_brute_force_for_small_fields() {
        let f = FieldParams::new(3).unwrap();
        let c = Poly::parse(f, "t^3+2*t+1").unwrap();
        for i in 1..27 {
            let u = ModElement::new(&Poly::from_index(f, i), &c).unwrap();
            let ord = u.order().unwrap();
            assert_eq!(ord, brute_order(&u));
            assert_eq!(26 % ord, 0);
        }
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(idx in 1u64..(5u64.pow(4))) {
            let f = FieldParams::new(5).unwrap();
            let c = Poly::parse(f, "t^4+2").unwrap(); // irreducible over F_5
            let u = ModElement::new(&Poly::from_index(f, idx), &c).unwrap();
            prop_assert!(u.mul(&u.inverse().unwrap()).is_one());
            let ord = u.order().unwrap();
            prop_assert!(u.pow(ord).is_one());
            for l in integer_factor(ord).unwrap().primes() {
                prop_assert!(!u.pow(ord / l as u128).is_one());
            }
        }
    }
}
