//! Relations `sum a_i w_i = 0` with roots of unity `w_i`, and twisting
//! balanced multisets by a root of unity.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_integer::Integer;
use serde::Serialize;

use crate::balanced::BalancedMultiset;
use crate::par::{map_indexed, Jobs};

use super::cyclo::{sqrt_in_cyclotomic, vanishes_at_root_of_unity, CycloInt};
use super::quad::QuadInt;
use super::NumFieldError;

pub const DEFAULT_MAX_ORDER: u64 = 360;
pub const DEFAULT_ROU_BUDGET: u64 = 1 << 28;
pub const ORDER_CEILING: u64 = 4096;
/// Largest twisting order accepted by [`rou_twist`].
pub const MAX_TWIST_ORDER: u64 = 24;

/// `sum a_i zeta_L^{e_i} = 0` with `e_1 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouRelation {
    /// Multiplicative order of each `zeta_L^{e_i}`.
    pub orders: Vec<u64>,
    pub exponents: Vec<u64>,
    pub common_order: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct RouSearch {
    pub max_order: u64,
    pub budget: u64,
    pub jobs: Jobs,
}

impl Default for RouSearch {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, budget: DEFAULT_ROU_BUDGET, jobs: Jobs::SERIAL }
    }
}

/// `2 a = A + B sqrt m` as the integer pair `(A, B)`.
fn doubled(a: &QuadInt) -> (i128, i128) {
    let (x, y) = (a.x as i128, a.y as i128);
    if a.field.half_omega() {
        (2 * x + y, y)
    } else {
        (2 * x, 2 * y)
    }
}

struct Level {
    l: u64,
    w: u64,
    sqrt_m: Vec<i128>,
    coeffs: Vec<(f64, f64)>,
    roots: Vec<(f64, f64)>,
    tolerance: f64,
}

impl Level {
    fn new(a: &[QuadInt], l: u64) -> Self {
        let field = a[0].field;
        let w = l.lcm(&field.conductor());
        let sqrt_m = if field.is_rational() { Vec::new() } else { sqrt_in_cyclotomic(field.m(), w) };
        let (sr, si) = sqrt_m.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &c)| {
            let t = std::f64::consts::TAU * k as f64 / w as f64;
            (re + c as f64 * t.cos(), im + c as f64 * t.sin())
        });
        let coeffs: Vec<(f64, f64)> = a
            .iter()
            .map(|x| {
                let (p, q) = doubled(x);
                ((p as f64 + q as f64 * sr) / 2.0, q as f64 * si / 2.0)
            })
            .collect();
        let scale: f64 = coeffs.iter().map(|c| c.0.hypot(c.1)).sum();
        let roots = (0..l)
            .map(|e| {
                let t = std::f64::consts::TAU * e as f64 / l as f64;
                (t.cos(), t.sin())
            })
            .collect();
        Self { l, w, sqrt_m, coeffs, roots, tolerance: 1e-6 * (1.0 + scale) }
    }

    fn near_zero(&self, e: &[u64]) -> bool {
        let (mut re, mut im) = (0.0, 0.0);
        for (c, &k) in self.coeffs.iter().zip(e) {
            let r = self.roots[k as usize];
            re += c.0 * r.0 - c.1 * r.1;
            im += c.0 * r.1 + c.1 * r.0;
        }
        re.hypot(im) < self.tolerance
    }

    fn exact_zero(&self, a: &[QuadInt], e: &[u64]) -> Result<bool, NumFieldError> {
        let wu = self.w as usize;
        let step = self.w / self.l;
        let mut f = vec![0i128; wu];
        for (x, &k) in a.iter().zip(e) {
            let pos = (k * step) as usize % wu;
            let (p, q) = doubled(x);
            f[pos] += p;
            if q != 0 {
                for (j, &s) in self.sqrt_m.iter().enumerate().filter(|(_, s)| **s != 0) {
                    f[(pos + j) % wu] += q * s;
                }
            }
        }
        vanishes_at_root_of_unity(&f, self.w)
    }
}

/// Searches common orders `L = 1..=max_order` and exponent tuples
/// `(0, e_2, ..., e_n)` in lexicographic order; returns the first relation.
/// Candidates pass a floating-point filter first and are then decided exactly.
pub fn rou_relation_search(a: &[QuadInt], opts: &RouSearch) -> Result<Option<RouRelation>, NumFieldError> {
    if a.len() < 2 {
        return Err(NumFieldError::TooFewCoefficients(a.len()));
    }
    for (index, x) in a.iter().enumerate() {
        if x.is_zero() {
            return Err(NumFieldError::ZeroCoefficient { index });
        }
        if x.field != a[0].field {
            return Err(NumFieldError::Field(format!("coefficient {index} lies in another field")));
        }
    }
    if opts.max_order == 0 || opts.max_order > ORDER_CEILING {
        return Err(NumFieldError::Parameter(format!("order bound {} outside 1..={ORDER_CEILING}", opts.max_order)));
    }
    let n = a.len();
    let required: u128 = (1..=opts.max_order as u128).map(|l| l.pow(n as u32 - 1)).sum();
    if required > opts.budget as u128 {
        return Err(NumFieldError::BudgetExceeded { required, budget: opts.budget });
    }
    for l in 1..=opts.max_order {
        let level = Level::new(a, l);
        let found = AtomicUsize::new(usize::MAX);
        let strata = map_indexed(l as usize, opts.jobs, |e2| -> Result<Option<Vec<u64>>, NumFieldError> {
            let mut e = vec![0u64; n];
            e[1] = e2 as u64;
            loop {
                if found.load(AtomicOrdering::Relaxed) < e2 {
                    return Ok(None);
                }
                if level.near_zero(&e) && level.exact_zero(a, &e)? {
                    found.fetch_min(e2, AtomicOrdering::Relaxed);
                    return Ok(Some(e));
                }
                let mut k = n - 1;
                loop {
                    if k < 2 {
                        return Ok(None);
                    }
                    e[k] += 1;
                    if e[k] < l {
                        break;
                    }
                    e[k] = 0;
                    k -= 1;
                }
            }
        });
        for s in strata {
            if let Some(e) = s? {
                let orders = e.iter().map(|&k| l / l.gcd(&k)).collect();
                return Ok(Some(RouRelation { orders, exponents: e, common_order: l }));
            }
        }
    }
    Ok(None)
}

/// Checks `relation` against `a` exactly.
pub fn verify_rou_relation(a: &[QuadInt], relation: &RouRelation) -> Result<bool, NumFieldError> {
    if relation.exponents.len() != a.len() || relation.common_order == 0 {
        return Ok(false);
    }
    let level = Level::new(a, relation.common_order);
    let e: Vec<u64> = relation.exponents.iter().map(|k| k % relation.common_order).collect();
    level.exact_zero(a, &e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twisted {
    pub coeffs: Vec<CycloInt>,
    pub multiset: BalancedMultiset<CycloInt>,
}

/// Replaces `a_j` by `w a_j` (`w = zeta_m`) and each tuple `x` by the `m`
/// tuples `w^k x` with coordinate `j` scaled by `w^(k-1)` instead.
pub fn rou_twist(a: &[i64], tuples: &[Vec<i64>], j: usize, m: u64) -> Result<Twisted, NumFieldError> {
    if m == 0 || m > MAX_TWIST_ORDER {
        return Err(NumFieldError::Parameter(format!("twist order {m} outside 1..={MAX_TWIST_ORDER}")));
    }
    if j >= a.len() {
        return Err(NumFieldError::Parameter(format!("coordinate {j} out of range")));
    }
    let b = BalancedMultiset::new(a, tuples.to_vec())?;
    let lift = |v: i64| CycloInt::from_int(m, v);
    let coeffs: Vec<CycloInt> = a
        .iter()
        .enumerate()
        .map(|(i, &c)| if i == j { CycloInt::zeta_pow(m, 1).mul(&lift(c)) } else { lift(c) })
        .collect();
    let mut out = Vec::with_capacity(b.size() * m as usize);
    for k in 0..m as i64 {
        for t in b.tuples() {
            out.push(
                t.iter()
                    .enumerate()
                    .map(|(i, &x)| CycloInt::zeta_pow(m, if i == j { k - 1 } else { k }).mul(&lift(x)))
                    .collect(),
            );
        }
    }
    let multiset = BalancedMultiset::new(&coeffs, out)?;
    Ok(Twisted { coeffs, multiset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::quad::{parse_tuple, QuadField};
    use proptest::prelude::*;

    fn hexagon() -> Vec<Vec<i64>> {
        vec![vec![1, 1, 2], vec![-1, -1, -2], vec![2, -1, 1], vec![-2, 1, -1], vec![-1, 2, 1], vec![1, -2, -1]]
    }

    fn tup(m: i64, s: &str) -> Vec<QuadInt> {
        parse_tuple(QuadField::new(m).unwrap(), s).unwrap()
    }

    #[test]
    fn relation_examples() {
        let r = rou_relation_search(&tup(1, "2;3;-5"), &RouSearch::default()).unwrap().unwrap();
        assert_eq!(r.common_order, 1);
        assert_eq!(r.exponents, vec![0, 0, 0]);

        let opts = RouSearch { max_order: 3, ..Default::default() };
        let r = rou_relation_search(&tup(1, "1;1;1"), &opts).unwrap().unwrap();
        assert_eq!((r.common_order, r.exponents.clone(), r.orders.clone()), (3, vec![0, 1, 2], vec![1, 3, 3]));
        assert!(verify_rou_relation(&tup(1, "1;1;1"), &r).unwrap());

        // 1 + i * i = 0
        let r = rou_relation_search(&tup(-1, "1;w"), &RouSearch::default()).unwrap().unwrap();
        assert_eq!((r.common_order, r.exponents.clone()), (4, vec![0, 1]));
    }

    #[test]
    fn negative_control() {
        let opts = RouSearch { jobs: Jobs::all_cores(), ..Default::default() };
        assert_eq!(rou_relation_search(&tup(-15, "1;1;w"), &opts).unwrap(), None);
    }

    #[test]
    fn eisenstein_and_golden_relations() {
        // w = zeta_6, and 1 + zeta_6 zeta_3 = 0
        let r = rou_relation_search(&tup(-3, "1;w"), &RouSearch::default()).unwrap().unwrap();
        assert!(verify_rou_relation(&tup(-3, "1;w"), &r).unwrap());
        assert_eq!((r.common_order, r.exponents.clone()), (3, vec![0, 1]));
        // |1 + zeta_5^2| = 2 cos(2 pi / 5) = w - 1
        let r = rou_relation_search(&tup(5, "1;1;1-w"), &RouSearch::default()).unwrap().unwrap();
        assert!(verify_rou_relation(&tup(5, "1;1;1-w"), &r).unwrap());
    }

    #[test]
    fn twist_examples() {
        let t = rou_twist(&[1, 1, -2], &[vec![1, 1, 1]], 0, 2).unwrap();
        let show = |v: &[CycloInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(show(&t.coeffs), "-1,1,-2");
        let rows: Vec<String> = t.multiset.tuples().iter().map(|r| show(r)).collect();
        assert_eq!(rows, vec!["-1,1,1", "1,-1,-1"]);

        let t = rou_twist(&[1, 1, -2], &[vec![1, 1, 1]], 1, 2).unwrap();
        assert_eq!(show(&t.coeffs), "1,-1,-2");
        let rows: Vec<String> = t.multiset.tuples().iter().map(|r| show(r)).collect();
        assert_eq!(rows, vec!["1,-1,1", "-1,1,-1"]);

        let t = rou_twist(&[1, 1, -1], &hexagon(), 2, 1).unwrap();
        let rows: Vec<Vec<i64>> = t.multiset.tuples().iter().map(|r| r.iter().map(|c| c.coeffs()[0]).collect()).collect();
        assert_eq!(rows, hexagon());

        assert!(rou_twist(&[1, 1, -2], &[vec![1, 1, 1]], 0, 25).is_err());
        assert!(rou_twist(&[1, 1, -2], &[vec![1, 2, 1]], 0, 2).is_err());
    }

    proptest! {
        #[test]
        fn twists_stay_balanced(m in 1u64..=6, j in 0usize..3, scale in 1i64..4) {
            let b: Vec<Vec<i64>> = hexagon().iter().map(|r| r.iter().map(|x| x * scale).collect()).collect();
            let t = rou_twist(&[1, 1, -1], &b, j, m).unwrap();
            prop_assert_eq!(t.multiset.size(), 6 * m as usize);
            prop_assert!(crate::balanced::is_balanced(&t.coeffs, t.multiset.tuples()).unwrap());
        }

        #[test]
        fn search_is_independent_of_jobs(a in -3i64..4, b in -3i64..4) {
            prop_assume!(a != 0 && b != 0);
            let k = QuadField::new(-3).unwrap();
            let coeffs = vec![k.int(1), k.elem(a, b).unwrap(), k.int(1)];
            let serial = rou_relation_search(&coeffs, &RouSearch { max_order: 12, ..Default::default() }).unwrap();
            let par = rou_relation_search(&coeffs, &RouSearch { max_order: 12, jobs: Jobs::new(4), ..Default::default() }).unwrap();
            if let Some(r) = &serial {
                prop_assert!(verify_rou_relation(&coeffs, r).unwrap());
            }
            prop_assert_eq!(serial, par);
        }
    }
}
