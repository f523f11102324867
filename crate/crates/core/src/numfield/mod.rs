//! Quadratic number fields: strong criteria, root-of-unity relations and the
//! eigenvalue construction that turns `(1, ..., 1, -alpha)` into a singular
//! sum of permutation matrices.

mod criteria;
mod cyclo;
mod lattice;
mod perron;
mod quad;
mod rou;
mod sqrt_sum;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::ParseError;
use crate::balanced::BalanceError;

pub use criteria::{
    strong_criteria_check, unimodular_extract, ArchimedeanResult, FiniteStatus, PlaceStatus, StrongReport,
    UnimodularExtract, Verdict,
};
pub use cyclo::{cyclotomic_poly, sqrt_in_cyclotomic, vanishes_at_root_of_unity, CycloInt};
pub use lattice::{speyer_step1, Step1, BALL_BUDGET};
pub use perron::{
    birkhoff_decompose, permutation_sum, perron_bridge, Bridge, BridgeStrategy, IntMatrix, DEFAULT_BRIDGE_BUDGET,
};
pub use quad::{parse_tuple, QuadField, QuadInt};
pub use rou::{
    rou_relation_search, rou_twist, verify_rou_relation, RouRelation, RouSearch, Twisted, DEFAULT_MAX_ORDER,
    DEFAULT_ROU_BUDGET, MAX_TWIST_ORDER, ORDER_CEILING,
};
pub use sqrt_sum::SqrtSum;
pub use verify::{integer_det_is_zero, verify_numfield_certificate, QuadRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumFieldError {
    #[error("{0} is not a squarefree integer other than 0")]
    NotSquarefree(i64),
    #[error("field mismatch: {0}")]
    Field(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("need at least 3 coefficients, got {0}")]
    TooFewCoefficients(usize),
    #[error("coefficient {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("search needs {required} candidates, over the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("undecided: {0}")]
    Undecidable(String),
    #[error("no coordinate attains archimedean equality at this place")]
    EqualityHypothesis,
    #[error("alpha must have every archimedean absolute value below n - 1 = {}", .n - 1)]
    AlphaTooLarge { n: usize },
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("no verified doubly regular matrix within budget (input has size {})", .matrix.size())]
    NoBridge { matrix: IntMatrix },
    #[error(transparent)]
    Balance(#[from] BalanceError),
}

/// Output of the full construction for `(1, ..., 1, -alpha)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumFieldCertificate {
    pub field: QuadField,
    pub alpha: QuadInt,
    pub n: usize,
    pub ball_size: usize,
    pub strategy: BridgeStrategy,
    pub matrix: IntMatrix,
    pub eigenvector: Vec<String>,
    /// `perm[l] = k`, 0-based.
    pub permutations: Vec<Vec<usize>>,
    pub verified: bool,
}

/// Lattice rounding, regularization, decomposition and the determinant check.
pub fn construct_certificate(alpha: &QuadInt, n: usize, budget: usize) -> Result<NumFieldCertificate, NumFieldError> {
    let s = speyer_step1(alpha, n)?;
    let bridge = perron_bridge(&s.matrix, alpha, &s.points, budget)?;
    let permutations = birkhoff_decompose(&bridge.matrix)?;
    let verified = verify_numfield_certificate(alpha, n, &permutations);
    Ok(NumFieldCertificate {
        field: alpha.field,
        alpha: *alpha,
        n,
        ball_size: s.points.len(),
        strategy: bridge.strategy,
        matrix: bridge.matrix,
        eigenvector: bridge.eigenvector.iter().map(ToString::to_string).collect(),
        permutations,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_examples() {
        let cases = [(-7, 0, 1), (-2, 0, 1), (-1, 1, 1), (-1, 0, 1), (-1, 1, 0), (-3, 0, 1)];
        for (m, x, y) in cases {
            let k = QuadField::new(m).unwrap();
            let alpha = k.elem(x, y).unwrap();
            let c = construct_certificate(&alpha, 3, DEFAULT_BRIDGE_BUDGET).unwrap();
            assert!(c.verified, "{alpha:?}");
            assert_eq!(c.permutations.len(), 2);
            assert_eq!(permutation_sum(&c.permutations).unwrap(), c.matrix);
        }
    }

    #[test]
    fn negative_control() {
        let k = QuadField::new(-15).unwrap();
        let a = vec![k.int(1), k.int(1), k.omega()];
        assert_eq!(strong_criteria_check(&a).unwrap().verdict, Verdict::Fail);
        assert_eq!(rou_relation_search(&a, &RouSearch::default()).unwrap(), None);
    }
}
