//! Quadratic fields `Q(sqrt m)` and their rings of integers `Z[w]`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::factor::integer_factor;
use crate::algebra::ParseError;
use crate::balanced::RingElem;

use super::sqrt_sum::SqrtSum;
use super::NumFieldError;

/// `Q(sqrt m)` for squarefree `m != 0, 1`; `m = 1` stands for `Q` itself.
///
/// The ring generator `w` is `sqrt m` when `m = 2, 3 (mod 4)` and
/// `(1 + sqrt m)/2` when `m = 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self, NumFieldError> {
        if m == 0 || !is_squarefree(m) {
            return Err(NumFieldError::NotSquarefree(m));
        }
        Ok(Self { m })
    }

    pub fn rationals() -> Self {
        Self { m: 1 }
    }

    pub fn m(self) -> i64 {
        self.m
    }

    pub fn is_rational(self) -> bool {
        self.m == 1
    }

    pub fn is_imaginary(self) -> bool {
        self.m < 0
    }

    /// True when `w = (1 + sqrt m)/2`.
    pub fn half_omega(self) -> bool {
        self.m != 1 && self.m.rem_euclid(4) == 1
    }

    /// Archimedean places: 1 for Q and imaginary fields, 2 for real fields.
    pub fn place_count(self) -> usize {
        if self.m > 1 {
            2
        } else {
            1
        }
    }

    /// `|disc K|`, the conductor of the field.
    pub fn conductor(self) -> u64 {
        match self.m {
            1 => 1,
            m if self.half_omega() => m.unsigned_abs(),
            m => 4 * m.unsigned_abs(),
        }
    }

    pub fn int(self, x: i64) -> QuadInt {
        QuadInt { field: self, x, y: 0 }
    }

    pub fn elem(self, x: i64, y: i64) -> Result<QuadInt, NumFieldError> {
        if self.is_rational() && y != 0 {
            return Err(NumFieldError::Field("Q has no generator w".into()));
        }
        Ok(QuadInt { field: self, x, y })
    }

    pub fn omega(self) -> QuadInt {
        QuadInt { field: self, x: 0, y: 1 }
    }

    pub fn header(self) -> serde_json::Value {
        serde_json::json!({"m": self.m, "omega": if self.half_omega() { "half" } else { "sqrt" }})
    }
}

fn is_squarefree(m: i64) -> bool {
    if m.unsigned_abs() == 1 {
        return true;
    }
    integer_factor(m.unsigned_abs() as u128)
        .map(|f| f.factors.iter().all(|&(_, e)| e == 1))
        .unwrap_or(false)
}

/// `x + y w` in the ring of integers of a [`QuadField`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    pub field: QuadField,
    pub x: i64,
    pub y: i64,
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("quadratic integer coefficient overflow")
}

impl QuadInt {
    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_rational(&self) -> bool {
        self.y == 0
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.field, other.field, "elements of different quadratic fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self { field: self.field, x: narrow(self.x as i128 + other.x as i128), y: narrow(self.y as i128 + other.y as i128) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { field: self.field, x: -self.x, y: -self.y }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { field: self.field, x: narrow(self.x as i128 * k as i128), y: narrow(self.y as i128 * k as i128) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let (x1, y1, x2, y2) = (self.x as i128, self.y as i128, other.x as i128, other.y as i128);
        let m = self.field.m as i128;
        let (x, y) = if self.field.half_omega() {
            let k = (m - 1) / 4;
            (x1 * x2 + k * y1 * y2, x1 * y2 + x2 * y1 + y1 * y2)
        } else {
            (x1 * x2 + m * y1 * y2, x1 * y2 + x2 * y1)
        };
        Self { field: self.field, x: narrow(x), y: narrow(y) }
    }

    pub fn conj(&self) -> Self {
        if self.field.half_omega() {
            Self { field: self.field, x: self.x + self.y, y: -self.y }
        } else {
            Self { field: self.field, x: self.x, y: -self.y }
        }
    }

    /// `N(z) = z * conj(z)`.
    pub fn norm(&self) -> i128 {
        let (x, y, m) = (self.x as i128, self.y as i128, self.field.m as i128);
        if self.field.is_rational() {
            x * x
        } else if self.field.half_omega() {
            x * x + x * y - (m - 1) / 4 * y * y
        } else {
            x * x - m * y * y
        }
    }

    pub fn trace(&self) -> i128 {
        if self.field.is_rational() {
            self.x as i128
        } else if self.field.half_omega() {
            2 * self.x as i128 + self.y as i128
        } else {
            2 * self.x as i128
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs() == 1
    }

    /// `self / d` when the quotient is integral.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check(d);
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let num = self.mul(&d.conj());
        if self.field.is_rational() {
            return (num.x as i128 % n == 0).then(|| self.field.int(narrow(num.x as i128 / n)));
        }
        let (x, y) = (num.x as i128, num.y as i128);
        (x % n == 0 && y % n == 0).then(|| Self { field: self.field, x: narrow(x / n), y: narrow(y / n) })
    }

    /// The image under archimedean place `place` as `u + v sqrt m` with
    /// rational `u, v`; place 1 of a real field sends `sqrt m` to `-sqrt m`.
    pub fn embedding(&self, place: usize) -> (BigRational, BigRational) {
        let sign = if place == 1 { -1 } else { 1 };
        let two = BigInt::from(2);
        if self.field.half_omega() {
            (
                BigRational::new(BigInt::from(2 * self.x as i128 + self.y as i128), two.clone()),
                BigRational::new(BigInt::from(sign * self.y), two),
            )
        } else {
            (BigRational::from_integer(self.x.into()), BigRational::from_integer((sign * self.y).into()))
        }
    }

    /// `|z|_place` as an exact sum of square roots. Imaginary fields use
    /// the complex modulus `sqrt N(z)`.
    pub fn abs_at(&self, place: usize) -> SqrtSum {
        if self.field.is_imaginary() {
            return SqrtSum::sqrt_of(BigRational::from_integer(self.norm().into()));
        }
        let (u, v) = self.embedding(place);
        let value = SqrtSum::from_rational(u).add(&SqrtSum::rational_sqrt(v, self.field.m.max(1) as u128));
        match value.sign() {
            Ordering::Less => value.neg(),
            _ => value,
        }
    }

    /// Complex value under the principal embedding (place 0).
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.m as f64;
        let (re_w, im_w) = match (self.field.is_rational(), self.field.half_omega(), self.field.m < 0) {
            (true, _, _) => (0.0, 0.0),
            (_, true, false) => ((1.0 + m.sqrt()) / 2.0, 0.0),
            (_, true, true) => (0.5, (-m).sqrt() / 2.0),
            (_, false, false) => (m.sqrt(), 0.0),
            (_, false, true) => (0.0, (-m).sqrt()),
        };
        (self.x as f64 + self.y as f64 * re_w, self.y as f64 * im_w)
    }

    /// Parses `x`, `y*w`, `x+y*w`, `x-w` and similar forms.
    pub fn parse(field: QuadField, text: &str) -> Result<Self, NumFieldError> {
        let err = |position: usize, message: &str| NumFieldError::Parse(ParseError { position, message: message.into() });
        let s: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err(0, "empty element"));
        }
        let (mut x, mut y) = (0i64, 0i64);
        let mut i = 0;
        while i < s.len() {
            let start = s[i].0;
            let mut sign = 1i64;
            if s[i].1 == '+' || s[i].1 == '-' {
                sign = if s[i].1 == '-' { -1 } else { 1 };
                i += 1;
            } else if i > 0 {
                return Err(err(start, "expected '+' or '-'"));
            }
            let digits_start = i;
            while i < s.len() && s[i].1.is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<i64> = if i > digits_start {
                let txt: String = s[digits_start..i].iter().map(|p| p.1).collect();
                Some(txt.parse().map_err(|_| err(s[digits_start].0, "integer out of range"))?)
            } else {
                None
            };
            let mut is_w = false;
            if i < s.len() && s[i].1 == '*' {
                if coeff.is_none() {
                    return Err(err(s[i].0, "'*' needs a coefficient"));
                }
                i += 1;
                if i >= s.len() || s[i].1 != 'w' {
                    return Err(err(s.get(i).map_or(text.len(), |p| p.0), "expected 'w'"));
                }
            }
            if i < s.len() && s[i].1 == 'w' {
                is_w = true;
                i += 1;
            }
            let value = match (coeff, is_w) {
                (None, false) => return Err(err(s.get(i).map_or(text.len(), |p| p.0), "expected a term")),
                (Some(c), _) => sign * c,
                (None, true) => sign,
            };
            if is_w {
                y += value;
            } else {
                x += value;
            }
        }
        field.elem(x, y).map_err(|_| err(0, "w is not available over Q"))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.y {
            0 => String::new(),
            1 => "w".to_string(),
            -1 => "-w".to_string(),
            y => format!("{y}*w"),
        };
        match (self.x, w.is_empty()) {
            (x, true) => write!(f, "{x}"),
            (0, false) => write!(f, "{w}"),
            (x, false) if self.y > 0 => write!(f, "{x}+{w}"),
            (x, false) => write!(f, "{x}{w}"),
        }
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in Q(sqrt {})", self.field.m)
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(x, y)`.
impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.m, self.x, self.y).cmp(&(other.field.m, other.x, other.y))
    }
}

impl RingElem for QuadInt {
    fn is_zero(&self) -> bool {
        QuadInt::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        self.field.int(0)
    }
    fn add(&self, other: &Self) -> Self {
        QuadInt::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        QuadInt::mul(self, other)
    }
}

/// Parses a `;`-separated list of elements.
pub fn parse_tuple(field: QuadField, text: &str) -> Result<Vec<QuadInt>, NumFieldError> {
    text.split(';').map(|s| QuadInt::parse(field, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_validation() {
        assert!(QuadField::new(-15).unwrap().half_omega());
        assert!(!QuadField::new(-1).unwrap().half_omega());
        assert_eq!(QuadField::new(-4), Err(NumFieldError::NotSquarefree(-4)));
        assert_eq!(QuadField::new(0), Err(NumFieldError::NotSquarefree(0)));
        assert_eq!(QuadField::new(-7).unwrap().conductor(), 7);
        assert_eq!(QuadField::new(2).unwrap().conductor(), 8);
        assert_eq!(QuadField::new(5).unwrap().place_count(), 2);
    }

    #[test]
    fn arithmetic() {
        let k = QuadField::new(-7).unwrap();
        let a = k.omega();
        assert_eq!(a.norm(), 2);
        assert_eq!(a.trace(), 1);
        // w^2 = w - 2
        assert_eq!(a.mul(&a), k.elem(-2, 1).unwrap());
        assert_eq!(a.mul(&a.conj()), k.int(2));
        let g = QuadField::new(-1).unwrap();
        let one_i = g.elem(1, 1).unwrap();
        assert_eq!(one_i.norm(), 2);
        assert_eq!(g.int(2).div_exact(&one_i), Some(g.elem(1, -1).unwrap()));
        assert_eq!(g.int(1).div_exact(&one_i), None);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let k = QuadField::new(-15).unwrap();
        for s in ["0", "w", "-w", "1+w", "3-2*w", "-4", "5*w"] {
            assert_eq!(QuadInt::parse(k, s).unwrap().to_string(), s);
        }
        assert_eq!(QuadInt::parse(k, " 1 + 1*w ").unwrap(), k.elem(1, 1).unwrap());
        assert!(matches!(QuadInt::parse(k, "1+"), Err(NumFieldError::Parse(_))));
        assert!(matches!(QuadInt::parse(k, "x"), Err(NumFieldError::Parse(ParseError { position: 0, .. }))));
        assert!(QuadInt::parse(QuadField::rationals(), "w").is_err());
    }

    #[test]
    fn absolute_values() {
        let k = QuadField::new(-15).unwrap();
        assert_eq!(k.omega().abs_at(0), SqrtSum::from_integer(2));
        let r = QuadField::new(5).unwrap();
        // w = golden ratio; conjugate is (1 - sqrt 5)/2 < 0
        let w = r.omega();
        let expected = SqrtSum::rational_sqrt(BigRational::new(1.into(), 2.into()), 5)
            .add(&SqrtSum::from_rational(BigRational::new((-1).into(), 2.into())));
        assert_eq!(w.abs_at(1), expected);
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(m in prop::sample::select(vec![-15i64, -7, -2, -1, 2, 3, 5, 13]),
                                  a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let k = QuadField::new(m).unwrap();
            let u = k.elem(a, b).unwrap();
            let v = k.elem(c, d).unwrap();
            prop_assert_eq!(u.mul(&v).norm(), u.norm() * v.norm());
            prop_assert_eq!(u.mul(&v).conj(), u.conj().mul(&v.conj()));
            if !v.is_zero() {
                prop_assert_eq!(u.mul(&v).div_exact(&v), Some(u));
            }
            let (re, im) = u.mul(&v).to_complex();
            let (ur, ui) = u.to_complex();
            let (vr, vi) = v.to_complex();
            prop_assert!((re - (ur * vr - ui * vi)).abs() < 1e-6 * (1.0 + re.abs()));
            prop_assert!((im - (ur * vi + ui * vr)).abs() < 1e-6 * (1.0 + im.abs()));
        }
    }
}
