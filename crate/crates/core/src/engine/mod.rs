//! Linear relations among conjugates over F_q(t): the criteria check,
//! solution enumeration in boxes `V_N`, fiber counts, balanced multisets and
//! permutation certificates.

mod certificate;
mod enumerate;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldParams, Poly};
use crate::balanced::BalanceError;

pub use certificate::{balanced_from_certificate, verify_certificate, DEFAULT_DET_CHECK_BOUND};
pub use enumerate::{
    balanced_multiset, enumerate_solutions, fiber_count, fiber_table, SearchConfig, SolutionSet,
    DEFAULT_BUDGET,
};

pub use crate::balanced::{certificate_from_balanced, is_balanced, BalancedMultiset, PermutationCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("n = 2 is not supported: pairs are outside the scope of the F_q(t) criteria")]
    PairRejected,
    #[error("need at least 3 coefficients, got {0}")]
    TooFewCoefficients(usize),
    #[error("coefficient {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("coefficients share the common factor {gcd}; they must generate the unit ideal")]
    NotCoprime { gcd: Poly },
    #[error("coefficient {index} lives over a different field")]
    FieldMismatch { index: usize },
    #[error("enumeration needs {required} candidates, over the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("box exponent N = {n_box} is below the height d = {height}")]
    BoxTooSmall { n_box: usize, height: usize },
    #[error("coordinate index {0} is out of range")]
    BadCoordinate(usize),
    #[error("value {0} is not in the box V_N")]
    OutsideBox(Poly),
    #[error("not a Smyth tuple: the absolute value criteria fail ({0})")]
    NotSmythTuple(String),
    #[error("no relation from these permutations: the combination is nonsingular")]
    Nonsingular,
    #[error(transparent)]
    Balance(#[from] BalanceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A coprime tuple of nonzero polynomials, `n >= 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffTuple {
    field: FieldParams,
    coeffs: Vec<Poly>,
    height: usize,
}

impl CoeffTuple {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self, EngineError> {
        let (field, height) = Self::validate_shape(&coeffs)?;
        let g = content(&coeffs);
        if !g.is_one() {
            return Err(EngineError::NotCoprime { gcd: g });
        }
        Ok(Self { field, coeffs, height })
    }

    /// Divides out the common factor, giving the coprime representative of
    /// the projective point.
    pub fn normalized(coeffs: Vec<Poly>) -> Result<Self, EngineError> {
        Self::validate_shape(&coeffs)?;
        let g = content(&coeffs);
        let coeffs = coeffs
            .iter()
            .map(|a| a.div_exact(&g).expect("gcd divides every entry"))
            .collect();
        Self::new(coeffs)
    }

    /// Parses `;`-separated polynomials, e.g. `"1;t;t+1"`.
    pub fn parse(field: FieldParams, text: &str) -> Result<Self, EngineError> {
        let coeffs = text
            .split(';')
            .map(|s| Poly::parse(field, s.trim()).map_err(AlgebraError::from))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coeffs)
    }

    fn validate_shape(coeffs: &[Poly]) -> Result<(FieldParams, usize), EngineError> {
        match coeffs.len() {
            2 => return Err(EngineError::PairRejected),
            n if n < 3 => return Err(EngineError::TooFewCoefficients(n)),
            _ => {}
        }
        let field = coeffs[0].field();
        let mut height = 0;
        for (index, a) in coeffs.iter().enumerate() {
            if a.field() != field {
                return Err(EngineError::FieldMismatch { index });
            }
            match a.deg() {
                None => return Err(EngineError::ZeroCoefficient { index }),
                Some(d) => height = height.max(d),
            }
        }
        Ok((field, height))
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// `max_i deg(a_i)`.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Semicolon-joined text form, the inverse of [`CoeffTuple::parse`].
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
    }
}

fn content(coeffs: &[Poly]) -> Poly {
    coeffs
        .iter()
        .skip(1)
        .try_fold(coeffs[0].monic(), |g, a| g.gcd(a))
        .expect("nonzero entries")
}

/// Why a tuple fails the criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "place", rename_all = "snake_case")]
pub enum CriteriaWitness {
    /// The maximum degree is attained only at `index`.
    Infinite { index: usize },
    /// `divisor` divides every coefficient except the one at `index`.
    Finite { index: usize, divisor: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub passes: bool,
    pub infinite_place_ok: bool,
    pub finite_places_ok: bool,
    pub witness: Option<CriteriaWitness>,
}

/// The absolute value criteria. The infinite place needs the maximum degree
/// twice; each finite place is checked through `gcd_{j != i} a_j` being a unit.
pub fn check_criteria(a: &CoeffTuple) -> CriteriaReport {
    let degs: Vec<usize> = a.coeffs.iter().map(|c| c.deg().expect("nonzero")).collect();
    let top: Vec<usize> = (0..degs.len()).filter(|&i| degs[i] == a.height).collect();
    let infinite_place_ok = top.len() >= 2;
    let mut witness = (!infinite_place_ok).then(|| CriteriaWitness::Infinite { index: top[0] });

    let mut finite_places_ok = true;
    for i in 0..a.n() {
        let others: Vec<Poly> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| c.clone())
            .collect();
        let g = content(&others);
        if !g.is_unit() {
            finite_places_ok = false;
            if witness.is_none() {
                witness = Some(CriteriaWitness::Finite { index: i, divisor: g.to_string() });
            }
            break;
        }
    }
    CriteriaReport {
        passes: infinite_place_ok && finite_places_ok,
        infinite_place_ok,
        finite_places_ok,
        witness,
    }
}
