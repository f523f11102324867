use serde::{Deserialize, Serialize};

use super::factor::{is_prime, pow_mod};
use super::AlgebraError;

/// Parameters of a prime field F_q.
///
/// `q` is restricted to primes below 2^32 so that products of two residues
/// fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    q: u64,
}

impl FieldParams {
    pub const MAX_MODULUS: u64 = 1 << 32;

    pub fn new(q: u64) -> Result<Self, AlgebraError> {
        if q >= Self::MAX_MODULUS || !is_prime(q) {
            return Err(AlgebraError::NotPrime(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn q(self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    /// Inverse of a nonzero residue (Fermat).
    pub fn inv(self, a: u64) -> Option<u64> {
        (a % self.q != 0).then(|| pow_mod(a, self.q - 2, self.q))
    }

    /// Reduces a signed integer into `[0, q)`.
    pub fn reduce_signed(self, a: i64) -> u64 {
        a.rem_euclid(self.q as i64) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_large() {
        assert!(FieldParams::new(4).is_err());
        assert!(FieldParams::new(1).is_err());
        assert!(FieldParams::new(4_294_967_311).is_err());
        assert!(FieldParams::new(4_294_967_291).is_ok());
    }

    #[test]
    fn inverses() {
        let f = FieldParams::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
        assert_eq!(f.reduce_signed(-1), 6);
    }
}
