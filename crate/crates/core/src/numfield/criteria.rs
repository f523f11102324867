//! Strong absolute value criteria over quadratic fields and the reduction
//! to balanced multisets with unimodular coordinates.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebra::factor::gcd_i64;
use crate::balanced::BalancedMultiset;

use super::quad::{QuadField, QuadInt};
use super::sqrt_sum::SqrtSum;
use super::NumFieldError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceStatus {
    Strict,
    /// `|a_i| = sum_{j != i} |a_j|` for the recorded index.
    Equal,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArchimedeanResult {
    pub place: usize,
    pub status: PlaceStatus,
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FiniteStatus {
    Pass,
    Fail { index: usize, divisor: i64 },
    Unsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongReport {
    pub verdict: Verdict,
    pub archimedean: Vec<ArchimedeanResult>,
    pub finite: FiniteStatus,
}

pub(crate) fn validate(a: &[QuadInt]) -> Result<QuadField, NumFieldError> {
    if a.len() < 3 {
        return Err(NumFieldError::TooFewCoefficients(a.len()));
    }
    let field = a[0].field;
    for (index, x) in a.iter().enumerate() {
        if x.field != field {
            return Err(NumFieldError::Field(format!("coefficient {index} lies in another field")));
        }
        if x.is_zero() {
            return Err(NumFieldError::ZeroCoefficient { index });
        }
    }
    Ok(field)
}

/// Compares `|a_i|` with `sum_{j != i} |a_j|` at one place.
fn place_status(a: &[QuadInt], place: usize) -> ArchimedeanResult {
    let abs: Vec<SqrtSum> = a.iter().map(|x| x.abs_at(place)).collect();
    let total = abs.iter().fold(SqrtSum::zero(), |s, v| s.add(v));
    let mut out = ArchimedeanResult { place, status: PlaceStatus::Strict, index: None };
    for (i, v) in abs.iter().enumerate() {
        match v.add(v).cmp_exact(&total) {
            Ordering::Less => {}
            Ordering::Equal if out.status == PlaceStatus::Strict => {
                out = ArchimedeanResult { place, status: PlaceStatus::Equal, index: Some(i) };
            }
            Ordering::Equal => {}
            Ordering::Greater => return ArchimedeanResult { place, status: PlaceStatus::Violated, index: Some(i) },
        }
    }
    out
}

fn finite_status(a: &[QuadInt]) -> FiniteStatus {
    if a.iter().all(QuadInt::is_rational) {
        let g = a.iter().fold(0, |g, x| gcd_i64(g, x.x));
        let v: Vec<i64> = a.iter().map(|x| x.x / g).collect();
        for i in 0..v.len() {
            let d = v.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |g, (_, &x)| gcd_i64(g, x));
            if d != 1 {
                return FiniteStatus::Fail { index: i, divisor: d };
            }
        }
        return FiniteStatus::Pass;
    }
    if a.iter().filter(|x| x.is_unit()).count() >= 2 {
        FiniteStatus::Pass
    } else {
        FiniteStatus::Unsupported
    }
}

/// Strict triangle inequalities at every archimedean place, decided exactly,
/// and the ultrametric condition where it is supported.
pub fn strong_criteria_check(a: &[QuadInt]) -> Result<StrongReport, NumFieldError> {
    let field = validate(a)?;
    let archimedean: Vec<ArchimedeanResult> = (0..field.place_count()).map(|p| place_status(a, p)).collect();
    let finite = finite_status(a);
    let verdict = if archimedean.iter().any(|r| r.status != PlaceStatus::Strict)
        || matches!(finite, FiniteStatus::Fail { .. })
    {
        Verdict::Fail
    } else if finite == FiniteStatus::Unsupported {
        Verdict::Unsupported
    } else {
        Verdict::Pass
    };
    Ok(StrongReport { verdict, archimedean, finite })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularExtract {
    /// Tuples whose coordinates all have the maximal absolute value.
    pub sub_multiset: BalancedMultiset<QuadInt>,
    /// A coordinate value of maximal absolute value.
    pub scale: QuadInt,
    /// `sub_multiset / scale`, when that division stays in the ring.
    pub normalized: Option<BalancedMultiset<QuadInt>>,
}

/// Keeps the tuples attaining the maximal absolute value at `place` and
/// rescales them to absolute value 1 when possible. Needs archimedean
/// equality at `place` for some coordinate.
pub fn unimodular_extract(
    a: &[QuadInt],
    tuples: &[Vec<QuadInt>],
    place: usize,
) -> Result<UnimodularExtract, NumFieldError> {
    let field = validate(a)?;
    if place >= field.place_count() {
        return Err(NumFieldError::Parameter(format!("place {place} does not exist")));
    }
    let b = BalancedMultiset::new(a, tuples.to_vec())?;
    let status = place_status(a, place);
    let i = match (status.status, status.index) {
        (PlaceStatus::Equal, Some(i)) => i,
        _ => return Err(NumFieldError::EqualityHypothesis),
    };
    let abs: Vec<SqrtSum> = b.tuples().iter().map(|t| t[i].abs_at(place)).collect();
    let max = abs
        .iter()
        .skip(1)
        .fold(abs[0].clone(), |m, v| if v.cmp_exact(&m) == Ordering::Greater { v.clone() } else { m });
    let kept: Vec<Vec<QuadInt>> = b
        .tuples()
        .iter()
        .zip(&abs)
        .filter(|(_, v)| v.cmp_exact(&max) == Ordering::Equal)
        .map(|(t, _)| t.clone())
        .collect();
    let sub_multiset = BalancedMultiset::new(a, kept)?;
    let divides_all = |d: &QuadInt| {
        sub_multiset
            .tuples()
            .iter()
            .map(|t| t.iter().map(|x| x.div_exact(d)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
    };
    let mut candidates: Vec<QuadInt> = sub_multiset.tuples().iter().flatten().copied().collect();
    candidates.sort();
    candidates.dedup();
    let scale = candidates[0];
    let normalized = candidates
        .iter()
        .find_map(|d| divides_all(d))
        .map(|rows| BalancedMultiset::new(a, rows))
        .transpose()?;
    if let Some(n) = &normalized {
        let one = SqrtSum::from_integer(1);
        debug_assert!(n.tuples().iter().flatten().all(|x| x.abs_at(place) == one));
    }
    Ok(UnimodularExtract { sub_multiset, scale, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::quad::parse_tuple;

    fn tup(m: i64, s: &str) -> Vec<QuadInt> {
        let k = if m == 1 { QuadField::rationals() } else { QuadField::new(m).unwrap() };
        parse_tuple(k, s).unwrap()
    }

    /// Balanced for (1, 1, -1): every column is {1, 1, -1, -1, 2, -2}.
    pub(crate) fn hexagon() -> Vec<Vec<QuadInt>> {
        ["1;1;2", "-1;-1;-2", "2;-1;1", "-2;1;-1", "-1;2;1", "1;-2;-1"].iter().map(|s| tup(1, s)).collect()
    }

    #[test]
    fn strong_examples() {
        let r = strong_criteria_check(&tup(-15, "1;1;w")).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.archimedean[0].status, PlaceStatus::Equal);
        assert_eq!(r.archimedean[0].index, Some(2));
        assert_eq!(r.finite, FiniteStatus::Pass);

        let r = strong_criteria_check(&tup(-7, "1;1;w")).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);

        let r = strong_criteria_check(&tup(1, "2;3;-5")).unwrap();
        assert_eq!(r.archimedean[0].status, PlaceStatus::Equal);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn strong_edge_cases() {
        let r = strong_criteria_check(&tup(1, "1;1;3")).unwrap();
        assert_eq!(r.archimedean[0].status, PlaceStatus::Violated);
        // 2 divides all but the first
        let r = strong_criteria_check(&tup(1, "3;2;4;2")).unwrap();
        assert_eq!(r.finite, FiniteStatus::Fail { index: 0, divisor: 2 });
        // no unit pair: unsupported, never a silent pass
        let r = strong_criteria_check(&tup(-1, "1+w;1-w;2")).unwrap();
        assert_eq!(r.finite, FiniteStatus::Unsupported);
        assert_eq!(r.verdict, Verdict::Unsupported);
        // real field: w = golden ratio, conjugate place gives |1 - phi| < 1
        let r = strong_criteria_check(&tup(5, "1;1;w")).unwrap();
        assert_eq!(r.archimedean.len(), 2);
        assert_eq!(r.archimedean[0].status, PlaceStatus::Strict);
        assert_eq!(r.archimedean[1].status, PlaceStatus::Strict);
        assert!(matches!(strong_criteria_check(&tup(1, "1;0;1")), Err(NumFieldError::ZeroCoefficient { index: 1 })));
    }

    #[test]
    fn unimodular_examples() {
        let a = tup(1, "1;1;-2");
        let b = vec![tup(1, "1;1;1"), tup(1, "2;2;2")];
        let r = unimodular_extract(&a, &b, 0).unwrap();
        assert_eq!(r.sub_multiset.tuples(), &[tup(1, "2;2;2")]);
        assert_eq!(r.normalized.unwrap().tuples(), &[tup(1, "1;1;1")]);

        let r = unimodular_extract(&a, &[tup(1, "1;1;1")], 0).unwrap();
        assert_eq!(r.sub_multiset.tuples(), &[tup(1, "1;1;1")]);

        let bad = vec![tup(1, "1;1;1"), tup(1, "1;-1;1")];
        assert!(matches!(unimodular_extract(&a, &bad, 0), Err(NumFieldError::Balance(_))));

        let strict = tup(1, "1;1;-1");
        assert_eq!(
            unimodular_extract(&strict, &hexagon(), 0),
            Err(NumFieldError::EqualityHypothesis)
        );
    }

    #[test]
    fn unimodular_over_gaussian_integers() {
        let a = tup(-1, "1;1;-2");
        let b = vec![tup(-1, "w;w;w"), tup(-1, "1;1;1"), tup(-1, "2*w;2*w;2*w")];
        let r = unimodular_extract(&a, &b, 0).unwrap();
        assert_eq!(r.sub_multiset.size(), 1);
        let n = r.normalized.unwrap();
        assert!(n.tuples()[0].iter().all(|x| x.is_unit()));
    }
}
