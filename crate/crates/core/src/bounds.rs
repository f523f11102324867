//! Lower bounds on balanced multiset sizes via multiplicative orders,
//! extremal triples attaining them, and an exhaustive minimality oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::factor::{gcd_i64, integer_factor, inv_mod, order_mod, pow_mod, primes_up_to};
use crate::algebra::irreducible::monic_of_degree;
use crate::algebra::{is_irreducible, random_irreducible, AlgebraError, FieldParams, ModElement, Poly};
use crate::balanced::{BalanceError, BalancedMultiset, RingElem};
use crate::engine::{check_criteria, enumerate_solutions, CoeffTuple, EngineError, SearchConfig};
use crate::par::{map_indexed, Jobs};

/// Default upper limit for the prime sieve behind [`construct_extremal_int`].
pub const SIEVE_BOUND: u64 = 10_000_000;

/// Groups at most this large are swept exhaustively for a generator.
const EXHAUSTIVE_GENERATOR_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("b is not invertible modulo c")]
    NotInvertible,
    #[error("modulus c must be irreducible")]
    ReducibleModulus,
    #[error("modulus c must be at least 2, got {0}")]
    ModulusTooSmall(i64),
    #[error("target height must be at least 1")]
    ZeroHeight,
    #[error("e^{degree} exceeds the sieve bound {bound}")]
    SieveBound { degree: usize, bound: u64 },
    #[error("search visits {required} sub-multisets, over the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("multiplicity must be 1 or 2, got {0}")]
    Multiplicity(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Balance(#[from] BalanceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The order of `u = -a/b` modulo `c`, with `u` and the ambient group order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderBoundCertificate<T> {
    pub triple: [T; 3],
    pub element: T,
    pub order: u128,
    pub group_order: u128,
    pub generator_flag: bool,
}

impl OrderBoundCertificate<Poly> {
    /// Recomputes `u`, checks `u^order = 1`, `u^(order/l) != 1` for primes
    /// `l | order`, `order | group_order` and the generator flag.
    pub fn verify(&self) -> Result<bool, BoundsError> {
        let [a, b, c] = &self.triple;
        let u = neg_ratio_mod(a, b, c)?;
        if u.residue() != &self.element {
            return Ok(false);
        }
        let group = u.field_group_order()?;
        let order_ok = u.pow(self.order).is_one()
            && integer_factor(self.order)?.primes().all(|l| !u.pow(self.order / l as u128).is_one());
        Ok(order_ok
            && group == self.group_order
            && self.group_order % self.order == 0
            && self.generator_flag == (self.order == self.group_order))
    }
}

impl OrderBoundCertificate<i64> {
    pub fn verify(&self) -> Result<bool, BoundsError> {
        let [a, b, c] = self.triple;
        let u = neg_ratio_int(a, b, c)?;
        if u as i64 != self.element {
            return Ok(false);
        }
        let m = c as u64;
        let group = integer_factor(m as u128)?.totient();
        let order = u64::try_from(self.order).map_err(|_| AlgebraError::TooLarge { value: self.order, bound: u64::MAX as u128 })?;
        let order_ok = pow_mod(u, order, m) == 1 % m
            && integer_factor(self.order)?.primes().all(|l| pow_mod(u, order / l, m) != 1 % m);
        Ok(order_ok
            && group == self.group_order
            && self.group_order % self.order == 0
            && self.generator_flag == (self.order == self.group_order))
    }
}

fn neg_ratio_mod(a: &Poly, b: &Poly, c: &Poly) -> Result<ModElement, BoundsError> {
    if !is_irreducible(c)? {
        return Err(BoundsError::ReducibleModulus);
    }
    let b_inv = ModElement::new(b, c)?.inverse().map_err(|_| BoundsError::NotInvertible)?;
    Ok(ModElement::new(a, c)?.neg().mul(&b_inv))
}

fn neg_ratio_int(a: i64, b: i64, c: i64) -> Result<u64, BoundsError> {
    if c < 2 {
        return Err(BoundsError::ModulusTooSmall(c));
    }
    let b_inv = inv_mod(b as i128, c as i128).ok_or(BoundsError::NotInvertible)?;
    Ok((-(a as i128) * b_inv).rem_euclid(c as i128) as u64)
}

/// Order of `-a/b` in `(F_q[t]/c)^*` for irreducible `c`; every balanced
/// multiset for `(a, b, c)` has at least this many members.
pub fn order_bound_fqt(a: &Poly, b: &Poly, c: &Poly) -> Result<OrderBoundCertificate<Poly>, BoundsError> {
    let u = neg_ratio_mod(a, b, c)?;
    let group_order = u.field_group_order()?;
    let order = u.order()?;
    Ok(OrderBoundCertificate {
        triple: [a.clone(), b.clone(), c.clone()],
        element: u.residue().clone(),
        order,
        group_order,
        generator_flag: order == group_order,
    })
}

/// Order of `-a/b` in `(Z/cZ)^*`; the group order recorded is `phi(c)`.
pub fn order_bound_int(a: i64, b: i64, c: i64) -> Result<OrderBoundCertificate<i64>, BoundsError> {
    let u = neg_ratio_int(a, b, c)?;
    let m = c as u64;
    let phi = integer_factor(m as u128)?.totient();
    let group = integer_factor(phi)?;
    let order = if m == 2 { 1 } else { order_mod(u, m, phi as u64, &group) };
    Ok(OrderBoundCertificate {
        triple: [a, b, c],
        element: u as i64,
        order: order as u128,
        group_order: phi,
        generator_flag: order as u128 == phi,
    })
}

/// A triple attaining the order bound at height `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalInstance<T> {
    pub triple: [T; 3],
    pub degree: usize,
    pub claimed_min: u128,
    pub certificate: OrderBoundCertificate<T>,
    /// The minimality claim holds only if the conjecture over Q is true.
    pub conditional: bool,
    /// Set when `degree` is too small for the construction to be meaningful.
    pub degenerate: bool,
}

impl ExtremalInstance<Poly> {
    pub fn coeff_tuple(&self) -> CoeffTuple {
        CoeffTuple::new(self.triple.to_vec()).expect("extremal triples are coprime")
    }
}

/// A generator of `(F_q[t]/c)^*`: the smallest by index for small groups,
/// else the first seeded random residue of full order.
fn generator_mod(c: &Poly, seed: u64) -> Result<ModElement, BoundsError> {
    let field = c.field();
    let group = ModElement::new(&Poly::one(field), c)?.field_group_order()?;
    let is_gen = |u: &ModElement| u.order().map(|o| o == group);
    if group <= EXHAUSTIVE_GENERATOR_LIMIT {
        for i in 1..=group as u64 {
            let u = ModElement::new(&Poly::from_index(field, i), c)?;
            if is_gen(&u)? {
                return Ok(u);
            }
        }
        unreachable!("finite fields have cyclic unit groups");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = c.deg().expect("nonconstant");
    loop {
        let coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..field.q())).collect();
        let u = ModElement::new(&Poly::from_coeffs(field, coeffs), c)?;
        if !u.is_zero() && is_gen(&u)? {
            return Ok(u);
        }
    }
}

/// An extremal triple `(a, b, c)` over F_q[t] with `c` irreducible of degree
/// `degree`, `deg b = degree`, `deg a < degree` and `-a/b` generating
/// `(F_q[t]/c)^*`, so that `claimed_min = q^degree - 1`.
///
/// `b` is preferably irreducible and different from `c`; when no such `b`
/// works (q = 2, degree 2) every degree-`degree` polynomial coprime to `c`
/// is tried in index order.
pub fn construct_extremal_fqt(q: u64, degree: usize, seed: u64) -> Result<ExtremalInstance<Poly>, BoundsError> {
    if degree == 0 {
        return Err(BoundsError::ZeroHeight);
    }
    let field = FieldParams::new(q)?;
    let c = random_irreducible(field, degree, seed);
    let g = generator_mod(&c, seed)?;

    let attempt = |b: &Poly| -> Result<Option<Poly>, BoundsError> {
        if !b.gcd(&c)?.is_one() {
            return Ok(None);
        }
        let a = ModElement::new(b, &c)?.mul(&g).neg().residue().clone();
        Ok((!a.is_zero() && a.gcd(b)?.is_one()).then_some(a))
    };

    let irreducible_count = monic_irreducible_count(q, degree);
    let mut chosen = None;
    if irreducible_count > 1 {
        let mut k = 1u64;
        while chosen.is_none() {
            let b = random_irreducible(field, degree, seed.wrapping_add(k.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
            k += 1;
            if b != c {
                chosen = attempt(&b)?.map(|a| (a, b));
            }
        }
    } else {
        for b in monic_of_degree(field, degree) {
            if let Some(a) = attempt(&b)? {
                chosen = Some((a, b));
                break;
            }
        }
    }
    let (a, b) = chosen.expect("some b of the target degree works");
    let certificate = order_bound_fqt(&a, &b, &c)?;
    debug_assert!(certificate.generator_flag);
    debug_assert!(check_criteria(&CoeffTuple::new(vec![a.clone(), b.clone(), c.clone()])?).passes);
    Ok(ExtremalInstance {
        triple: [a, b, c],
        degree,
        claimed_min: certificate.group_order,
        certificate,
        conditional: false,
        degenerate: false,
    })
}

/// Number of monic irreducibles of degree `d` over F_q, saturating.
fn monic_irreducible_count(q: u64, d: usize) -> u128 {
    let mut s: i128 = 0;
    for e in (1..=d).filter(|e| d % e == 0) {
        let mu = crate::algebra::factor::moebius(e as u64) as i128;
        let term = (q as i128).checked_pow((d / e) as u32).unwrap_or(i128::MAX / 4);
        s += mu * term;
    }
    (s / d as i128).max(0) as u128
}

/// The extremal integer triple at height `degree`: `p` is the largest prime
/// at most `e^degree`, `g` the smallest primitive root with `g != -1`, and
/// `n = -1/(g+1) mod p`; the triple is `(n, n+1, p)` when `2n+1 >= p`, else
/// `(p-n-1, p-n, p)`. Minimality is conditional on the conjecture over Q.
pub fn construct_extremal_int(degree: usize) -> Result<ExtremalInstance<i64>, BoundsError> {
    construct_extremal_int_with_bound(degree, SIEVE_BOUND)
}

pub fn construct_extremal_int_with_bound(degree: usize, bound: u64) -> Result<ExtremalInstance<i64>, BoundsError> {
    if degree == 0 {
        return Err(BoundsError::ZeroHeight);
    }
    let limit = (degree as f64).exp().floor();
    if limit > bound as f64 {
        return Err(BoundsError::SieveBound { degree, bound });
    }
    let p = *primes_up_to(limit as usize).last().expect("e > 2") as i64;
    if p == 2 {
        let certificate = order_bound_int(1, 1, 2)?;
        return Ok(ExtremalInstance {
            triple: [1, 1, 2],
            degree,
            claimed_min: certificate.order,
            certificate,
            conditional: true,
            degenerate: true,
        });
    }
    let pu = p as u64;
    let group = integer_factor((pu - 1) as u128)?;
    let g = (2..pu)
        .find(|&g| g != pu - 1 && order_mod(g, pu, pu - 1, &group) == pu - 1)
        .expect("odd primes have a primitive root other than -1");
    let n = (-inv_mod(g as i128 + 1, p as i128).expect("g + 1 is a unit")).rem_euclid(p as i128) as i64;
    let triple = if 2 * n + 1 >= p { [n, n + 1, p] } else { [p - n - 1, p - n, p] };
    let certificate = order_bound_int(triple[0], triple[1], triple[2])?;
    Ok(ExtremalInstance {
        triple,
        degree,
        claimed_min: certificate.order,
        certificate,
        conditional: true,
        degenerate: false,
    })
}

/// The absolute value criteria for integers: `|a_i| <= sum_{j != i} |a_j|`
/// and no prime divides all but one coefficient.
pub fn int_criteria(a: &[i64]) -> bool {
    let total: i128 = a.iter().map(|&x| (x as i128).abs()).sum();
    let archimedean = a.iter().all(|&x| 2 * (x as i128).abs() <= total);
    let finite = (0..a.len()).all(|i| {
        let g = a.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |g, (_, &x)| gcd_i64(g, x));
        g == 1
    });
    archimedean && finite && a.iter().all(|&x| x != 0)
}

/// Options for [`min_balanced_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetSearch {
    pub size_bound: usize,
    pub max_multiplicity: usize,
    pub budget: u64,
    pub jobs: Jobs,
}

impl SubsetSearch {
    pub fn new(size_bound: usize) -> Self {
        Self { size_bound, max_multiplicity: 1, budget: crate::engine::DEFAULT_BUDGET, jobs: Jobs::SERIAL }
    }
}

/// Number of sub-multisets of size exactly `k` drawn from `pool` items with
/// multiplicity at most `mult`, saturating.
fn submultiset_count(pool: usize, k: usize, mult: usize) -> u128 {
    // ways[s] after processing each item
    let mut ways = vec![0u128; k + 1];
    ways[0] = 1;
    for _ in 0..pool {
        let mut next = vec![0u128; k + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for r in 0..=mult.min(k - s) {
                next[s + r] = next[s + r].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[k]
}

/// Per-value coordinate count differences `cnt[v][j] - cnt[v][0]`.
struct Imbalance {
    n: usize,
    diff: Vec<i32>,
    nonzero: usize,
}

impl Imbalance {
    fn new(n: usize, values: usize) -> Self {
        Self { n, diff: vec![0; values * n], nonzero: 0 }
    }

    fn bump(&mut self, idx: usize, delta: i32) {
        let before = self.diff[idx] != 0;
        self.diff[idx] += delta;
        let after = self.diff[idx] != 0;
        match (before, after) {
            (false, true) => self.nonzero += 1,
            (true, false) => self.nonzero -= 1,
            _ => {}
        }
    }

    fn apply(&mut self, tuple: &[usize], sign: i32) {
        let n = self.n;
        for (j, &v) in tuple.iter().enumerate() {
            if j == 0 {
                for k in 1..n {
                    self.bump(v * n + k, -sign);
                }
            } else {
                self.bump(v * n + j, sign);
            }
        }
    }
}

struct SubsetSearcher<'a> {
    pool: &'a [Vec<usize>],
    values: usize,
    n: usize,
    mult: usize,
}

impl SubsetSearcher<'_> {
    /// Lexicographically first balanced sub-multiset of size `k` whose first
    /// member is `first`.
    fn from_first(&self, first: usize, k: usize) -> Option<Vec<usize>> {
        let mut state = Imbalance::new(self.n, self.values);
        let mut chosen = vec![first];
        state.apply(&self.pool[first], 1);
        self.dfs(&mut state, &mut chosen, first, k - 1).then_some(chosen)
    }

    fn dfs(&self, state: &mut Imbalance, chosen: &mut Vec<usize>, start: usize, remaining: usize) -> bool {
        if remaining == 0 {
            return state.nonzero == 0;
        }
        // one member changes at most n(n-1) differences
        if state.nonzero > remaining * self.n * (self.n - 1) {
            return false;
        }
        for i in start..self.pool.len() {
            let repeats = chosen.iter().rev().take_while(|&&c| c == i).count();
            if repeats >= self.mult {
                continue;
            }
            state.apply(&self.pool[i], 1);
            chosen.push(i);
            if self.dfs(state, chosen, i, remaining - 1) {
                return true;
            }
            chosen.pop();
            state.apply(&self.pool[i], -1);
        }
        false
    }
}

/// Smallest balanced sub-multiset of `pool` (ties broken by lexicographic
/// order of pool indices) of size at most `opts.size_bound`, or `None`.
/// Every pool member must satisfy the relation.
pub fn min_balanced_search<T: RingElem + Send + Sync>(
    coeffs: &[T],
    pool: &[Vec<T>],
    opts: &SubsetSearch,
) -> Result<Option<BalancedMultiset<T>>, BoundsError> {
    if !(1..=2).contains(&opts.max_multiplicity) {
        return Err(BoundsError::Multiplicity(opts.max_multiplicity));
    }
    let required = (1..=opts.size_bound)
        .map(|k| submultiset_count(pool.len(), k, opts.max_multiplicity))
        .fold(0u128, u128::saturating_add);
    if required > opts.budget as u128 {
        return Err(BoundsError::BudgetExceeded { required, budget: opts.budget });
    }
    // validates arity and relation for every pool member
    crate::balanced::is_balanced(coeffs, pool)?;
    let n = coeffs.len();
    let mut ids = std::collections::HashMap::new();
    let encoded: Vec<Vec<usize>> = pool
        .iter()
        .map(|t| {
            t.iter()
                .map(|x| {
                    let next = ids.len();
                    *ids.entry(x.clone()).or_insert(next)
                })
                .collect()
        })
        .collect();
    let zero_free: Vec<bool> = pool.iter().map(|t| t.iter().any(|x| !x.is_zero())).collect();
    if zero_free.iter().any(|nz| !nz) {
        return Err(BalanceError::ZeroTuple { index: zero_free.iter().position(|nz| !nz).unwrap() }.into());
    }
    let searcher = SubsetSearcher { pool: &encoded, values: ids.len(), n, mult: opts.max_multiplicity };
    for k in 1..=opts.size_bound {
        let found = map_indexed(pool.len(), opts.jobs, |first| searcher.from_first(first, k));
        if let Some(sel) = found.into_iter().flatten().next() {
            let tuples = sel.iter().map(|&i| pool[i].clone()).collect();
            return Ok(Some(BalancedMultiset::new(coeffs, tuples)?));
        }
    }
    Ok(None)
}

/// The nonzero solutions in `V_N^n`, in lexicographic order.
pub fn fqt_solution_pool(a: &CoeffTuple, n_box: usize, cfg: &SearchConfig) -> Result<Vec<Vec<Poly>>, BoundsError> {
    let sols = enumerate_solutions(a, n_box, cfg)?;
    Ok((0..sols.len())
        .filter(|&k| sols.indices(k).iter().any(|&x| x != 0))
        .map(|k| sols.tuple(k))
        .collect())
}

/// Nonzero integer solutions with every entry in `[-bound, bound]`,
/// lexicographic by value.
pub fn int_solution_pool(coeffs: &[i64], bound: i64, budget: u64) -> Result<Vec<Vec<i64>>, BoundsError> {
    let n = coeffs.len();
    let side = (2 * bound + 1) as u128;
    let required = side.checked_pow((n - 1) as u32).unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(BoundsError::BudgetExceeded { required, budget });
    }
    let last = coeffs[n - 1];
    let mut out = Vec::new();
    let mut x = vec![-bound; n - 1];
    loop {
        let s: i64 = coeffs.iter().zip(&x).map(|(a, v)| a * v).sum();
        if s % last == 0 {
            let xn = -s / last;
            if xn.abs() <= bound && (xn != 0 || x.iter().any(|&v| v != 0)) {
                let mut t = x.clone();
                t.push(xn);
                out.push(t);
            }
        }
        let mut lvl = n - 1;
        loop {
            if lvl == 0 {
                out.sort();
                return Ok(out);
            }
            lvl -= 1;
            if x[lvl] < bound {
                x[lvl] += 1;
                for v in x.iter_mut().skip(lvl + 1) {
                    *v = -bound;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::balanced_multiset;

    fn p(q: u64, s: &str) -> Poly {
        Poly::parse(FieldParams::new(q).unwrap(), s).unwrap()
    }

    #[test]
    fn order_bound_fqt_examples() {
        let c = order_bound_fqt(&p(2, "1"), &p(2, "t^2"), &p(2, "t^2+t+1")).unwrap();
        assert_eq!((c.order, c.generator_flag), (3, true));
        assert_eq!(c.element, p(2, "t"));
        assert!(c.verify().unwrap());
        let c = order_bound_fqt(&p(2, "1"), &p(2, "1"), &p(2, "t")).unwrap();
        assert_eq!(c.order, 1);
        let c = order_bound_fqt(&p(2, "t"), &p(2, "1"), &p(2, "t^2+t+1")).unwrap();
        assert_eq!(c.order, 3);
        assert_eq!(
            order_bound_fqt(&p(2, "1"), &p(2, "t"), &p(2, "t^2+1")),
            Err(BoundsError::ReducibleModulus)
        );
        assert_eq!(
            order_bound_fqt(&p(2, "1"), &p(2, "t^2+t+1"), &p(2, "t^2+t+1")),
            Err(BoundsError::NotInvertible)
        );
    }

    #[test]
    fn order_bound_int_examples() {
        let c = order_bound_int(5, 6, 7).unwrap();
        assert_eq!((c.order, c.group_order, c.element), (6, 6, 5));
        assert!(c.verify().unwrap());
        assert_eq!(order_bound_int(1, 1, 2).unwrap().order, 1);
        assert_eq!(order_bound_int(2, 3, 5).unwrap().order, 1);
        assert_eq!(order_bound_int(1, 2, 4), Err(BoundsError::NotInvertible));
        assert!(order_bound_int(1, 2, 9).unwrap().verify().unwrap());
    }

    #[test]
    fn extremal_fqt_examples() {
        let e = construct_extremal_fqt(2, 1, 0).unwrap();
        assert_eq!(e.claimed_min, 1);
        let e = construct_extremal_fqt(2, 2, 0).unwrap();
        assert_eq!(e.triple, [p(2, "1"), p(2, "t^2"), p(2, "t^2+t+1")]);
        assert_eq!(e.claimed_min, 3);
        let e = construct_extremal_fqt(3, 1, 5).unwrap();
        assert_eq!(e.claimed_min, 2);
        assert_eq!(e.triple[2].deg(), Some(1));
        for (q, d) in [(2, 3), (2, 5), (3, 2), (5, 2), (7, 3)] {
            let e = construct_extremal_fqt(q, d, 11).unwrap();
            assert!(e.certificate.generator_flag && e.certificate.verify().unwrap());
            assert_eq!(e.claimed_min, (q as u128).pow(d as u32) - 1);
            assert!(check_criteria(&e.coeff_tuple()).passes);
            assert!(e.triple[0].deg().unwrap() < d && e.triple[1].deg() == Some(d));
            assert_eq!(e, construct_extremal_fqt(q, d, 11).unwrap());
        }
    }

    #[test]
    fn extremal_int_examples() {
        let e = construct_extremal_int(2).unwrap();
        assert_eq!((e.triple, e.claimed_min), ([5, 6, 7], 6));
        assert!(e.conditional);
        let e = construct_extremal_int(1).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.triple, [1, 1, 2]);
        let e = construct_extremal_int(3).unwrap();
        assert_eq!((e.triple, e.claimed_min), ([12, 13, 19], 18));
        for d in 2..=12 {
            let e = construct_extremal_int(d).unwrap();
            let [a, b, c] = e.triple;
            assert!(int_criteria(&e.triple), "D={d}");
            assert_eq!(e.claimed_min, (c - 1) as u128);
            assert!(e.certificate.verify().unwrap());
            // -(n+1)/n is the chosen primitive root, so -b/a has full order
            let g = neg_ratio_int(b, a, c).unwrap();
            assert_eq!(order_bound_int(-(g as i64), 1, c).unwrap().order, (c - 1) as u128);
        }
        assert!(matches!(
            construct_extremal_int_with_bound(20, SIEVE_BOUND),
            Err(BoundsError::SieveBound { .. })
        ));
    }

    #[test]
    fn min_search_examples() {
        let cfg = SearchConfig::default();
        let a = CoeffTuple::parse(FieldParams::new(2).unwrap(), "1;t^2;t^2+t+1").unwrap();
        let pool = fqt_solution_pool(&a, 2, &cfg).unwrap();
        let found = min_balanced_search(a.coeffs(), &pool, &SubsetSearch::new(3)).unwrap().unwrap();
        assert_eq!(found.size(), 3);
        assert!(min_balanced_search(a.coeffs(), &pool, &SubsetSearch::new(2)).unwrap().is_none());

        let a = CoeffTuple::parse(FieldParams::new(2).unwrap(), "1;t;t+1").unwrap();
        let pool = fqt_solution_pool(&a, 1, &cfg).unwrap();
        let found = min_balanced_search(a.coeffs(), &pool, &SubsetSearch::new(1)).unwrap().unwrap();
        assert_eq!(found.tuples(), &[vec![p(2, "1"); 3]]);

        let a = CoeffTuple::parse(FieldParams::new(2).unwrap(), "1;1;t").unwrap();
        let pool = fqt_solution_pool(&a, 2, &cfg).unwrap();
        assert!(min_balanced_search(a.coeffs(), &pool, &SubsetSearch::new(4)).unwrap().is_none());
        let mut two = SubsetSearch::new(4);
        two.max_multiplicity = 2;
        assert!(min_balanced_search(a.coeffs(), &pool, &two).unwrap().is_none());
    }

    #[test]
    fn extremal_sizes_are_minimal() {
        let cfg = SearchConfig::default();
        for (q, d) in [(2, 1), (2, 2), (3, 1)] {
            let e = construct_extremal_fqt(q, d, 3).unwrap();
            let a = e.coeff_tuple();
            let pool = fqt_solution_pool(&a, d, &cfg).unwrap();
            let bound = e.claimed_min as usize;
            let found = min_balanced_search(a.coeffs(), &pool, &SubsetSearch::new(bound)).unwrap().unwrap();
            assert_eq!(found.size() as u128, e.claimed_min);
            assert_eq!(balanced_multiset(&a, d, &cfg).unwrap().size() as u128, e.claimed_min);
        }
    }

    #[test]
    fn integer_search() {
        let pool = int_solution_pool(&[5, 6, 7], 6, 1 << 20).unwrap();
        let mut opts = SubsetSearch::new(6);
        opts.jobs = Jobs::new(2);
        if let Some(found) = min_balanced_search(&[5i64, 6, 7], &pool, &opts).unwrap() {
            assert!(found.size() as u128 >= order_bound_int(5, 6, 7).unwrap().order);
        }
        // (1, 1, 3) fails the archimedean criterion
        assert!(!int_criteria(&[1, 1, 3]));
        let pool = int_solution_pool(&[1, 1, 3], 3, 1 << 20).unwrap();
        assert!(min_balanced_search(&[1i64, 1, 3], &pool, &SubsetSearch::new(3)).unwrap().is_none());
    }

    #[test]
    fn search_is_independent_of_jobs() {
        let a = CoeffTuple::parse(FieldParams::new(3).unwrap(), "t;t+1;t+2").unwrap();
        let pool = fqt_solution_pool(&a, 1, &SearchConfig::default()).unwrap();
        let serial = min_balanced_search(a.coeffs(), &pool, &SubsetSearch::new(3)).unwrap();
        let mut par = SubsetSearch::new(3);
        par.jobs = Jobs::new(3);
        assert_eq!(serial, min_balanced_search(a.coeffs(), &pool, &par).unwrap());
    }

    #[test]
    fn submultiset_counts() {
        assert_eq!(submultiset_count(7, 3, 1), 35);
        // multisets of size 2 from 3 items with repeats: C(4,2) = 6
        assert_eq!(submultiset_count(3, 2, 2), 6);
    }
}
