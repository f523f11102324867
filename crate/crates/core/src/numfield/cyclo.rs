//! Cyclotomic integers `Z[zeta_m]` and an exact zero test for integer
//! polynomials evaluated at a primitive root of unity.

use std::fmt;

use num_integer::Integer;

use crate::algebra::factor::{is_prime, mul_mod, pow_mod};
use crate::algebra::integer_factor;
use crate::balanced::RingElem;

use super::NumFieldError;

/// `Phi_m` with ascending integer coefficients.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            r[k + i] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// An element of `Z[zeta_m]`, stored as its remainder modulo `Phi_m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloInt {
    order: u64,
    coeffs: Vec<i64>,
}

impl CycloInt {
    fn reduce(order: u64, mut c: Vec<i64>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        for k in (deg..c.len()).rev() {
            let top = c[k];
            if top != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    c[k - deg + i] = c[k - deg + i].checked_sub(top * p).expect("cyclotomic coefficient overflow");
                }
            }
        }
        c.resize(deg, 0);
        Self { order, coeffs: c }
    }

    pub fn from_int(order: u64, v: i64) -> Self {
        Self::reduce(order, vec![v])
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut c = vec![0i64; e + 1];
        c[e] = 1;
        Self::reduce(order, c)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.checked_add(*b).expect("overflow")).collect();
        Self { order: self.order, coeffs: c }
    }

    pub fn neg(&self) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].checked_add(a.checked_mul(*b).expect("overflow")).expect("overflow");
            }
        }
        Self::reduce(self.order, c)
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev().filter(|(_, c)| **c != 0) {
            let mono = match k {
                0 => String::new(),
                1 => "z".into(),
                k => format!("z^{k}"),
            };
            let body = match (c.abs(), mono.is_empty()) {
                (a, true) => a.to_string(),
                (1, false) => mono,
                (a, false) => format!("{a}*{mono}"),
            };
            let sign = if c < 0 { "-" } else if terms.is_empty() { "" } else { "+" };
            terms.push(format!("{sign}{body}"));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.concat())
        }
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (z = zeta_{})", self.order)
    }
}

impl RingElem for CycloInt {
    fn is_zero(&self) -> bool {
        CycloInt::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        CycloInt::from_int(self.order, 0)
    }
    fn add(&self, other: &Self) -> Self {
        CycloInt::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CycloInt::mul(self, other)
    }
}

/// Largest prime tried by [`vanishes_at_root_of_unity`].
pub const PRIME_CEILING: u64 = 1 << 62;

/// Decides `f(zeta_w) = 0` exactly for `f` given by its coefficients.
///
/// With a prime `p = 1 (mod w)` above the height `H = sum |f_k|`: if `f(r) = 0
/// (mod p)` at every primitive `w`-th root `r` mod `p`, then `p^phi(w)` divides
/// the norm of `f(zeta_w)`, which is at most `H^phi(w)` in absolute value.
pub fn vanishes_at_root_of_unity(f: &[i128], w: u64) -> Result<bool, NumFieldError> {
    let height: u128 = f.iter().map(|c| c.unsigned_abs()).sum();
    if height == 0 {
        return Ok(true);
    }
    let p = prime_above(height, w)?;
    let r0 = primitive_root_of_unity(p, w);
    let fp: Vec<u64> = f.iter().map(|&c| c.rem_euclid(p as i128) as u64).collect();
    for k in (1..=w).filter(|&k| k.gcd(&w) == 1) {
        let r = pow_mod(r0, k, p);
        // Horner
        let v = fp.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, r, p) + c) % p);
        if v != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_above(height: u128, w: u64) -> Result<u64, NumFieldError> {
    let mut k = (height / w as u128) as u64 + 1;
    loop {
        let p = k.checked_mul(w).and_then(|v| v.checked_add(1)).filter(|&p| p < PRIME_CEILING);
        match p {
            None => return Err(NumFieldError::Undecidable(format!("no prime 1 mod {w} above {height} below 2^62"))),
            Some(p) if is_prime(p) => return Ok(p),
            _ => k += 1,
        }
    }
}

fn primitive_root_of_unity(p: u64, w: u64) -> u64 {
    let primes: Vec<u64> = integer_factor(w as u128).expect("small order").primes().collect();
    (2..p)
        .map(|x| pow_mod(x, (p - 1) / w, p))
        .find(|&r| primes.iter().all(|&l| pow_mod(r, w / l, p) != 1))
        .expect("p = 1 mod w has primitive roots of unity")
}

/// `sqrt m` as an integer combination of powers of `zeta_w`, reduced modulo
/// `x^w - 1`; `w` must be a multiple of the conductor of `Q(sqrt m)`.
/// Odd primes enter through quadratic Gauss sums `sqrt(p*)`; the remaining
/// factor is one of `sqrt(+-1)`, `sqrt(+-2)`.
pub fn sqrt_in_cyclotomic(m: i64, w: u64) -> Vec<i128> {
    let wu = w as usize;
    let mut acc = vec![0i128; wu];
    acc[0] = 1;
    let mut residual = m.signum();
    let f = integer_factor(m.unsigned_abs() as u128).expect("field discriminant factors");
    for (p, _) in f.factors {
        if p == 2 {
            residual *= 2;
            continue;
        }
        if p % 4 == 3 {
            residual = -residual;
        }
        assert_eq!(w % p, 0, "conductor must divide the cyclotomic order");
        let step = w / p;
        let mut gauss = vec![0i128; wu];
        for k in 1..p {
            let leg = if pow_mod(k, (p - 1) / 2, p) == 1 { 1 } else { -1 };
            gauss[(k * step) as usize] += leg;
        }
        acc = cyclic_mul(&acc, &gauss);
    }
    let unit = |e: u64| -> usize { (e % w) as usize };
    let tail: Vec<(usize, i128)> = match residual {
        1 => vec![(0, 1)],
        -1 => vec![(unit(w / 4), 1)],
        2 => vec![(unit(w / 8), 1), (unit(7 * w / 8), 1)],
        -2 => vec![(unit(w / 8), 1), (unit(3 * w / 8), 1)],
        r => unreachable!("residual {r}"),
    };
    if residual.abs() == 2 {
        assert_eq!(w % 8, 0);
    } else if residual == -1 {
        assert_eq!(w % 4, 0);
    }
    let mut t = vec![0i128; wu];
    for (k, c) in tail {
        t[k] += c;
    }
    cyclic_mul(&acc, &t)
}

/// Product in `Z[x]/(x^w - 1)`.
pub fn cyclic_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let w = a.len();
    let mut out = vec![0i128; w];
    for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
        for (j, &y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
            out[(i + j) % w] += x * y;
        }
    }
    out
}
