//! Dense univariate polynomials over a prime field.

use std::cmp::Ordering;
use std::fmt;

use super::field::FieldParams;
use super::{AlgebraError, ParseError};

/// Degree of a polynomial. The zero polynomial has degree `NegInfinity`,
/// which orders below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// An element of F_q[t]: residues in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldParams,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero(field: FieldParams) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldParams) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: FieldParams, c: u64) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The polynomial `t`.
    pub fn t(field: FieldParams) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: FieldParams, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(field, coeffs)
    }

    /// Builds a polynomial from ascending coefficients, reducing mod q.
    pub fn from_coeffs(field: FieldParams, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.q();
        }
        let mut p = Self { field, coeffs };
        p.trim();
        p
    }

    pub fn from_signed(field: FieldParams, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.reduce_signed(c)).collect())
    }

    /// Decodes the canonical index `sum c_k q^k` back into a polynomial.
    pub fn from_index(field: FieldParams, mut index: u64) -> Self {
        let q = field.q();
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(index % q);
            index /= q;
        }
        Self::from_coeffs(field, coeffs)
    }

    /// Canonical index: the coefficient vector read as a base-q number with
    /// the coefficient of `t^k` as digit `k`.
    pub fn to_index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.field.q() + c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn field(&self) -> FieldParams {
        self.field
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// True for nonzero constants, the units of F_q[t].
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as an option, `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly { field: f, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c % f.q())).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Euclidean division: `self = quotient * divisor + remainder` with
    /// `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        self.check_field(divisor);
        let Some(db) = divisor.deg() else {
            return Err(AlgebraError::DivisionByZero);
        };
        let f = self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut quot = vec![0u64; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + db], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, AlgebraError> {
        self.divmod(divisor).map(|(_, r)| r)
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        match self.divmod(divisor) {
            Ok((qt, r)) if r.is_zero() => Some(qt),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_field(other);
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended Euclid: returns `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly), AlgebraError> {
        self.check_field(other);
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::GcdOfZeros);
        }
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut u0, mut u1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.divmod(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let u = u0.sub(&qt.mul(&u1));
            u0 = std::mem::replace(&mut u1, u);
        }
        let inv = f.inv(r0.leading()).expect("nonzero gcd");
        Ok((r0.scale(inv), s0.scale(inv), u0.scale(inv)))
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &Poly) -> Result<Poly, AlgebraError> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.field).rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Parses the text format: terms `c*t^k` joined by `+` or `-`, in any
    /// order, e.g. `t^2+t+1`, `1 + 1*t^2`, `2*t - 1`.
    pub fn parse(field: FieldParams, text: &str) -> Result<Poly, ParseError> {
        Parser { field, src: text.as_bytes(), pos: 0 }.parse()
    }

    /// Number of polynomials of degree `< n`.
    pub fn count_below(field: FieldParams, n: u32) -> Option<u64> {
        field.q().checked_pow(n)
    }

    /// All polynomials of degree `< n` in canonical index order.
    pub fn all_below(field: FieldParams, n: u32) -> impl Iterator<Item = Poly> {
        let count = Self::count_below(field, n).expect("box size fits in u64");
        (0..count).map(move |i| Poly::from_index(field, i))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then by canonical index.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .q()
            .cmp(&other.field.q())
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, c) => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.q(), self)
    }
}

struct Parser<'a> {
    field: FieldParams,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<u64>().map_err(|_| ParseError {
            position: start,
            message: format!("number {text} out of range"),
        })
    }

    fn parse(mut self) -> Result<Poly, ParseError> {
        let f = self.field;
        let mut coeffs: Vec<u64> = Vec::new();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                None if !first => break,
                None => return Err(self.err("expected a term")),
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    negative = true;
                    self.pos += 1;
                }
                Some(_) if first => {}
                Some(c) => return Err(self.err(format!("unexpected character '{}'", c as char))),
            }
            first = false;
            let (c, k) = self.term()?;
            let c = c % f.q();
            let c = if negative { f.neg(c) } else { c };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = f.add(coeffs[k], c);
        }
        Ok(Poly::from_coeffs(f, coeffs))
    }

    fn term(&mut self) -> Result<(u64, usize), ParseError> {
        match self.peek() {
            Some(b't') => Ok((1, self.power()?)),
            Some(c) if c.is_ascii_digit() => {
                let c = self.number()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() != Some(b't') {
                        return Err(self.err("expected 't' after '*'"));
                    }
                    Ok((c, self.power()?))
                } else if self.peek() == Some(b't') {
                    Ok((c, self.power()?))
                } else {
                    Ok((c, 0))
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("expected a term")),
        }
    }

    fn power(&mut self) -> Result<usize, ParseError> {
        // at 't'
        self.pos += 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.number()?;
            usize::try_from(k)
                .ok()
                .filter(|&k| k <= 1 << 20)
                .ok_or_else(|| self.err("exponent too large"))
        } else {
            Ok(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> FieldParams {
        FieldParams::new(q).unwrap()
    }

    fn p(q: u64, s: &str) -> Poly {
        Poly::parse(f(q), s).unwrap()
    }

    #[test]
    fn divmod_examples() {
        let (qt, r) = p(2, "t^2+t+1").divmod(&p(2, "t")).unwrap();
        assert_eq!((qt, r), (p(2, "t+1"), p(2, "1")));
        let (qt, r) = p(2, "t").divmod(&p(2, "t^2+t+1")).unwrap();
        assert_eq!((qt, r), (p(2, "0"), p(2, "t")));
        let (qt, r) = p(3, "t^2").divmod(&p(3, "t^2")).unwrap();
        assert_eq!((qt, r), (p(3, "1"), p(3, "0")));
        assert_eq!(
            p(2, "t").divmod(&Poly::zero(f(2))),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(2, "t^2+t").gcd(&p(2, "t^2+1")).unwrap(), p(2, "t+1"));
        assert_eq!(p(2, "t").gcd(&p(2, "t+1")).unwrap(), p(2, "1"));
        assert_eq!(p(5, "2*t+4").gcd(&Poly::zero(f(5))).unwrap(), p(5, "t+2"));
        assert_eq!(
            Poly::zero(f(3)).gcd(&Poly::zero(f(3))),
            Err(AlgebraError::GcdOfZeros)
        );
    }

    #[test]
    fn degree_sentinel_orders_below_everything() {
        assert_eq!(Poly::zero(f(2)).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(p(3, "2").degree(), Degree::Finite(0));
    }

    #[test]
    fn text_format() {
        assert_eq!(p(2, "t^2+t+1").to_string(), "t^2+t+1");
        assert_eq!(p(2, "1+t+t^2").to_string(), "t^2+t+1");
        assert_eq!(p(2, "1*t^2 + 0*t + 1").to_string(), "t^2+1");
        assert_eq!(p(3, "2*t^3+t").to_string(), "2*t^3+t");
        assert_eq!(p(3, "t-1").to_string(), "t+2");
        assert_eq!(p(5, "0").to_string(), "0");
        assert_eq!(p(5, "3t").to_string(), "3*t");
        assert_eq!(p(2, "t+t").to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = Poly::parse(f(2), "").unwrap_err();
        assert_eq!(e.position, 0);
        let e = Poly::parse(f(2), "t+").unwrap_err();
        assert_eq!(e.position, 2);
        let e = Poly::parse(f(2), "t^2+x").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(Poly::parse(f(2), "2*").is_err());
    }

    #[test]
    fn index_round_trip() {
        let fl = f(3);
        for i in 0..81 {
            assert_eq!(Poly::from_index(fl, i).to_index(), i);
        }
        assert_eq!(Poly::from_index(fl, 5), p(3, "t+2"));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(5, "t^3+2*t+1");
        let b = p(5, "t^2+4");
        let (g, s, u) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&u.mul(&b)), g);
    }

    fn poly_strategy(q: u64, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q, 0..max_len).prop_map(move |c| Poly::from_coeffs(f(q), c))
    }

    proptest! {
        #[test]
        fn divmod_reconstructs((a, b) in prop::sample::select(vec![2u64, 3, 5, 7, 101])
            .prop_flat_map(|q| (poly_strategy(q, 9), poly_strategy(q, 6)))) {
            if !b.is_zero() {
                let (qt, r) = a.divmod(&b).unwrap();
                prop_assert_eq!(qt.mul(&b).add(&r), a.clone());
                prop_assert!(r.degree() < b.degree());
            }
        }

        #[test]
        fn gcd_divides_and_is_euclidean(a in poly_strategy(3, 8), b in poly_strategy(3, 8)) {
            if a.is_zero() && b.is_zero() {
                return Ok(());
            }
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(g.divides(&a));
            prop_assert!(g.divides(&b));
            if !b.is_zero() {
                let r = a.rem(&b).unwrap();
                prop_assert_eq!(g, b.gcd(&r).unwrap());
            }
        }

        #[test]
        fn text_round_trip(a in poly_strategy(7, 8)) {
            prop_assert_eq!(Poly::parse(a.field(), &a.to_string()).unwrap(), a);
        }
    }
}
