//! Exact decision procedures for linear relations among Galois conjugates.
//!
//! The crate decides whether a coefficient tuple over F_q[t], Z or a
//! quadratic ring of integers can appear in a relation `sum a_i x_i = 0`
//! among conjugates, and emits certificates that can be re-checked without
//! the generating state: balanced multisets, permutation-matrix witnesses,
//! multiplicative-order lower bounds and number-field constructions.

pub mod algebra;
pub mod balanced;
pub mod bounds;
pub mod certfile;
pub mod engine;
pub mod heuristic;
pub mod numfield;
pub mod par;

pub use par::Jobs;
