//! Exact arithmetic: prime fields, F_q[t], F_q(t), residue rings, integer
//! factoring and linear algebra.

pub mod factor;
pub mod field;
pub mod irreducible;
pub mod linalg;
pub mod modring;
pub mod poly;
pub mod ratfunc;

use thiserror::Error;

pub use factor::{integer_factor, Factorization};
pub use field::FieldParams;
pub use irreducible::{is_irreducible, monic_irreducibles, random_irreducible};
pub use linalg::ff_kernel;
pub use modring::ModElement;
pub use poly::{Degree, Poly};
pub use ratfunc::RatFunc;

/// A text-format error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("element is not invertible; gcd with the modulus is {gcd}")]
    NotInvertible { gcd: Poly },
    #[error("operation needs a nonconstant polynomial")]
    ConstantPolynomial,
    #[error("operation is undefined for zero")]
    ZeroElement,
    #[error("modulus is reducible; only irreducible moduli are supported")]
    ReducibleModulus,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("value {value} exceeds the supported bound {bound}")]
    TooLarge { value: u128, bound: u128 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}
