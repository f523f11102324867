use std::fmt;

use super::field::FieldParams;
use super::poly::Poly;
use super::AlgebraError;

/// An element of F_q(t) in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let lead_inv = den.field().inv(den.leading()).expect("nonzero leading coefficient");
        Ok(Self { num: num.scale(lead_inv), den: den.scale(lead_inv) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field();
        Self { num: p, den: Poly::one(f) }
    }

    pub fn zero(field: FieldParams) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: FieldParams) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> FieldParams {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[F_{}]({})", self.num.q(), self)
    }
}
