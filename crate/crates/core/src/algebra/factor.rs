//! Integer primality and factorization for word-sized integers.
//!
//! Trial division strips small primes, then Brent's variant of Pollard rho
//! splits whatever composite cofactor remains. Primality is decided by a
//! Miller-Rabin test with a base set that is deterministic below 2^64.

use super::AlgebraError;

/// Default ceiling for [`integer_factor`]: inputs must be below 2^64.
pub const DEFAULT_FACTOR_BOUND: u128 = 1 << 64;

const TRIAL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// A prime factorization as `(prime, exponent)` pairs in ascending prime order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    /// Euler's totient of the factored integer.
    pub fn totient(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128 - 1) * (p as u128).pow(e - 1))
            .product()
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Deterministic Miller-Rabin for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &TRIAL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n` (Brent's cycle detection).
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Exact prime factorization of `m`, which must satisfy `1 <= m < 2^64`.
pub fn integer_factor(m: u128) -> Result<Factorization, AlgebraError> {
    integer_factor_bounded(m, DEFAULT_FACTOR_BOUND)
}

pub fn integer_factor_bounded(m: u128, bound: u128) -> Result<Factorization, AlgebraError> {
    let bound = bound.min(DEFAULT_FACTOR_BOUND);
    if m == 0 {
        return Err(AlgebraError::ZeroElement);
    }
    if m >= bound {
        return Err(AlgebraError::TooLarge { value: m, bound });
    }
    let mut n = m as u64;
    let mut primes = Vec::new();
    for &p in &TRIAL_PRIMES {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    split_into(n, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { factors })
}

/// Multiplicative order of `u` modulo `m`, given the factored group order
/// (any multiple of the true order works, typically phi(m)).
pub fn order_mod(u: u64, m: u64, group_order: u64, group: &Factorization) -> u64 {
    let mut order = group_order;
    for p in group.primes() {
        while order % p == 0 && pow_mod(u, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// Sieve of Eratosthenes returning all primes `<= limit`.
pub fn primes_up_to(limit: usize) -> Vec<usize> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Modular inverse via the extended Euclidean algorithm.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// The Moebius function, for small arguments.
pub fn moebius(n: u64) -> i64 {
    let f = integer_factor(n as u128).expect("moebius of positive word");
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}
