//! Exhaustive solution search in boxes `V_N^n`.

use crate::algebra::{FieldParams, Poly};
use crate::balanced::BalancedMultiset;
use crate::par::{map_indexed, Jobs};

use super::{check_criteria, CoeffTuple, CriteriaWitness, EngineError};

/// Default cap on the number of candidate tuples visited.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Above this box size, products are computed on the fly instead of tabled.
const TABLE_LIMIT: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    pub jobs: Jobs,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, jobs: Jobs::SERIAL }
    }
}

impl SearchConfig {
    pub fn with_jobs(self, jobs: Jobs) -> Self {
        Self { jobs, ..self }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        Self { budget, ..self }
    }

    fn charge(&self, candidates: Option<u128>) -> Result<(), EngineError> {
        let required = candidates.unwrap_or(u128::MAX);
        if required > self.budget as u128 {
            return Err(EngineError::BudgetExceeded { required, budget: self.budget });
        }
        Ok(())
    }
}

/// The solutions found in `V_N^n`, stored as canonical indices, sorted
/// lexicographically by coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    field: FieldParams,
    n: usize,
    n_box: usize,
    indices: Vec<u64>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.indices.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn box_exponent(&self) -> usize {
        self.n_box
    }

    /// Canonical indices of the k-th solution.
    pub fn indices(&self, k: usize) -> &[u64] {
        &self.indices[k * self.n..(k + 1) * self.n]
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = &[u64]> {
        self.indices.chunks_exact(self.n)
    }

    pub fn tuple(&self, k: usize) -> Vec<Poly> {
        self.indices(k).iter().map(|&i| Poly::from_index(self.field, i)).collect()
    }

    pub fn to_tuples(&self) -> Vec<Vec<Poly>> {
        (0..self.len()).map(|k| self.tuple(k)).collect()
    }

    /// `counts[j][x]`: how often the value with index `x` occurs in coordinate `j`.
    pub fn coordinate_counts(&self) -> Vec<Vec<u64>> {
        let size = box_size(self.field, self.n_box).expect("box was enumerated") as usize;
        let mut counts = vec![vec![0u64; size]; self.n];
        for t in self.iter_indices() {
            for (j, &x) in t.iter().enumerate() {
                counts[j][x as usize] += 1;
            }
        }
        counts
    }
}

fn box_size(field: FieldParams, n_box: usize) -> Option<u64> {
    field.q().checked_pow(u32::try_from(n_box).ok()?)
}

/// Search state: coordinates in `free` range over `V_N`, `fixed` terms are
/// folded into `base`, and `solve` is recovered by exact division.
struct Kernel {
    field: FieldParams,
    n_box: usize,
    box_size: u64,
    width: usize,
    free: Vec<Poly>,
    tables: Vec<Vec<u64>>,
    base: Vec<u64>,
    divisor: Vec<u64>,
    inv_lead: u64,
}

impl Kernel {
    fn new(a: &CoeffTuple, n_box: usize, free: &[usize], fixed: &[(usize, u64)], solve: usize) -> Self {
        let field = a.field();
        let width = n_box + a.height();
        let box_size = box_size(field, n_box).expect("box size checked against budget");
        let free: Vec<Poly> = free.iter().map(|&i| a.coeffs()[i].clone()).collect();
        let mut base = vec![0u64; width];
        for &(i, x) in fixed {
            add_neg_product(field, &mut base, &a.coeffs()[i], &Poly::from_index(field, x));
        }
        let tables = if box_size <= TABLE_LIMIT {
            free.iter()
                .map(|c| {
                    let mut t = vec![0u64; box_size as usize * width];
                    for x in 0..box_size {
                        let row = &mut t[x as usize * width..(x as usize + 1) * width];
                        add_neg_product(field, row, c, &Poly::from_index(field, x));
                    }
                    t
                })
                .collect()
        } else {
            Vec::new()
        };
        let d = &a.coeffs()[solve];
        Self {
            field,
            n_box,
            box_size,
            width,
            free,
            tables,
            base,
            divisor: d.coeffs().to_vec(),
            inv_lead: field.inv(d.leading()).expect("nonzero leading coefficient"),
        }
    }

    /// `acc += -(a_p * x)` for free position `p`.
    fn add_term(&self, acc: &mut [u64], p: usize, x: u64) {
        if self.tables.is_empty() {
            add_neg_product(self.field, acc, &self.free[p], &Poly::from_index(self.field, x));
        } else {
            let row = &self.tables[p][x as usize * self.width..(x as usize + 1) * self.width];
            for (s, &r) in acc.iter_mut().zip(row) {
                *s = self.field.add(*s, r);
            }
        }
    }

    /// Index of `s / divisor` when the division is exact with quotient in `V_N`.
    fn solve(&self, s: &[u64], scratch: &mut Vec<u64>) -> Option<u64> {
        let f = self.field;
        let dd = self.divisor.len() - 1;
        scratch.clear();
        scratch.extend_from_slice(s);
        let mut quotient_index = 0u64;
        for pos in (dd..self.width).rev() {
            let c = scratch[pos];
            let qpos = pos - dd;
            let qc = f.mul(c, self.inv_lead);
            if qc != 0 {
                if qpos >= self.n_box {
                    return None;
                }
                for (k, &dk) in self.divisor.iter().enumerate() {
                    scratch[qpos + k] = f.sub(scratch[qpos + k], f.mul(qc, dk));
                }
            }
            if qpos < self.n_box {
                quotient_index = quotient_index * f.q() + qc;
            }
        }
        scratch[..dd].iter().all(|&c| c == 0).then_some(quotient_index)
    }

    /// Visits every assignment of the free coordinates whose first digit is
    /// `first`, calling `visit(digits, solved_index)` for each solution.
    fn run_chunk(&self, first: Option<u64>, visit: &mut impl FnMut(&[u64], u64)) {
        let m = self.free.len();
        let mut scratch = Vec::with_capacity(self.width);
        if m == 0 {
            if let Some(x) = self.solve(&self.base, &mut scratch) {
                visit(&[], x);
            }
            return;
        }
        let mut digits = vec![0u64; m];
        digits[0] = first.expect("chunked on the first free coordinate");
        let mut partial = vec![self.base.clone(); m + 1];
        let refill = |partial: &mut Vec<Vec<u64>>, digits: &[u64], from: usize| {
            for lvl in from..m {
                let (lo, hi) = partial.split_at_mut(lvl + 1);
                hi[0].copy_from_slice(&lo[lvl]);
                self.add_term(&mut hi[0], lvl, digits[lvl]);
            }
        };
        refill(&mut partial, &digits, 0);
        loop {
            if let Some(x) = self.solve(&partial[m], &mut scratch) {
                visit(&digits, x);
            }
            let mut lvl = m - 1;
            loop {
                if lvl == 0 {
                    return;
                }
                digits[lvl] += 1;
                if digits[lvl] < self.box_size {
                    break;
                }
                digits[lvl] = 0;
                lvl -= 1;
            }
            refill(&mut partial, &digits, lvl);
        }
    }

    fn chunks(&self) -> usize {
        if self.free.is_empty() {
            1
        } else {
            self.box_size as usize
        }
    }

    fn chunk_first(&self, c: usize) -> Option<u64> {
        (!self.free.is_empty()).then_some(c as u64)
    }
}

fn add_neg_product(field: FieldParams, acc: &mut [u64], a: &Poly, x: &Poly) {
    for (i, &ai) in a.coeffs().iter().enumerate() {
        for (j, &xj) in x.coeffs().iter().enumerate() {
            acc[i + j] = field.sub(acc[i + j], field.mul(ai, xj));
        }
    }
}

fn check_box(a: &CoeffTuple, n_box: usize) -> Result<(), EngineError> {
    if n_box < a.height() {
        return Err(EngineError::BoxTooSmall { n_box, height: a.height() });
    }
    Ok(())
}

fn candidates(a: &CoeffTuple, n_box: usize, free: usize) -> Option<u128> {
    (a.field().q() as u128).checked_pow(u32::try_from(n_box.checked_mul(free)?).ok()?)
}

/// All `(x_1, ..., x_n) in V_N^n` with `sum a_i x_i = 0`, including the zero
/// tuple, in lexicographic index order. Visits `q^{N(n-1)}` candidates.
pub fn enumerate_solutions(a: &CoeffTuple, n_box: usize, cfg: &SearchConfig) -> Result<SolutionSet, EngineError> {
    check_box(a, n_box)?;
    let n = a.n();
    cfg.charge(candidates(a, n_box, n - 1))?;
    let free: Vec<usize> = (0..n - 1).collect();
    let kernel = Kernel::new(a, n_box, &free, &[], n - 1);
    let parts = map_indexed(kernel.chunks(), cfg.jobs, |c| {
        let mut out = Vec::new();
        kernel.run_chunk(kernel.chunk_first(c), &mut |digits, x| {
            out.extend_from_slice(digits);
            out.push(x);
        });
        out
    });
    Ok(SolutionSet { field: a.field(), n, n_box, indices: parts.concat() })
}

/// Number of solutions in `V_N^n` whose coordinate `j` (0-based) equals `x`.
/// Visits `q^{N(n-2)}` candidates.
pub fn fiber_count(a: &CoeffTuple, n_box: usize, j: usize, x: &Poly, cfg: &SearchConfig) -> Result<u64, EngineError> {
    check_box(a, n_box)?;
    let n = a.n();
    if j >= n {
        return Err(EngineError::BadCoordinate(j));
    }
    if x.field() != a.field() || x.deg().is_some_and(|d| d >= n_box) {
        return Err(EngineError::OutsideBox(x.clone()));
    }
    cfg.charge(candidates(a, n_box, n - 2))?;
    let solve = if j == n - 1 { n - 2 } else { n - 1 };
    let free: Vec<usize> = (0..n).filter(|&i| i != j && i != solve).collect();
    let kernel = Kernel::new(a, n_box, &free, &[(j, x.to_index())], solve);
    let parts = map_indexed(kernel.chunks(), cfg.jobs, |c| {
        let mut count = 0u64;
        kernel.run_chunk(kernel.chunk_first(c), &mut |_, _| count += 1);
        count
    });
    Ok(parts.iter().sum())
}

/// `table[j][x]` = fiber count at coordinate `j`, value index `x`, for every
/// pair, from one pass over the solution set.
pub fn fiber_table(a: &CoeffTuple, n_box: usize, cfg: &SearchConfig) -> Result<Vec<Vec<u64>>, EngineError> {
    Ok(enumerate_solutions(a, n_box, cfg)?.coordinate_counts())
}

/// The solution set in `V_N^n` with the zero tuple removed, checked to be
/// balanced. Fails unless the tuple satisfies the absolute value criteria.
pub fn balanced_multiset(a: &CoeffTuple, n_box: usize, cfg: &SearchConfig) -> Result<BalancedMultiset<Poly>, EngineError> {
    let report = check_criteria(a);
    if !report.passes {
        let reason = match report.witness {
            Some(CriteriaWitness::Infinite { index }) => {
                format!("coefficient {} alone has the maximum degree", index + 1)
            }
            Some(CriteriaWitness::Finite { index, divisor }) => {
                format!("{divisor} divides every coefficient except number {}", index + 1)
            }
            None => unreachable!("failing report carries a witness"),
        };
        return Err(EngineError::NotSmythTuple(reason));
    }
    let sols = enumerate_solutions(a, n_box, cfg)?;
    let counts = sols.coordinate_counts();
    let size = counts[0].len();
    if !(0..size).all(|x| counts.iter().all(|c| c[x] == counts[0][x])) {
        return Err(crate::balanced::BalanceError::NotBalanced.into());
    }
    let tuples: Vec<Vec<Poly>> = (0..sols.len())
        .filter(|&k| sols.indices(k).iter().any(|&i| i != 0))
        .map(|k| sols.tuple(k))
        .collect();
    if tuples.is_empty() {
        return Err(crate::balanced::BalanceError::Empty.into());
    }
    Ok(BalancedMultiset::new_unchecked(tuples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balanced::is_balanced;
    use crate::engine::tests::tuple;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    fn texts(s: &SolutionSet) -> Vec<String> {
        s.to_tuples()
            .iter()
            .map(|t| t.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect()
    }

    /// Brute force over all of `V_N^n`.
    fn brute(a: &CoeffTuple, n_box: usize) -> Vec<Vec<u64>> {
        let size = box_size(a.field(), n_box).unwrap();
        let n = a.n();
        let total = size.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut t = vec![0u64; n];
                for j in (0..n).rev() {
                    t[j] = code % size;
                    code /= size;
                }
                t
            })
            .filter(|t| {
                let s = t.iter().zip(a.coeffs()).fold(Poly::zero(a.field()), |acc, (&x, c)| {
                    acc.add(&c.mul(&Poly::from_index(a.field(), x)))
                });
                s.is_zero()
            })
            .collect()
    }

    #[test]
    fn enumeration_examples() {
        let s = enumerate_solutions(&tuple(2, "1;t;t+1"), 1, &cfg()).unwrap();
        assert_eq!(texts(&s), ["0,0,0", "1,1,1"]);
        assert_eq!(enumerate_solutions(&tuple(2, "1;t;t+1"), 2, &cfg()).unwrap().len(), 8);
        assert_eq!(enumerate_solutions(&tuple(3, "1;1;1"), 1, &cfg()).unwrap().len(), 9);
        assert_eq!(
            enumerate_solutions(&tuple(2, "1;t;t+1"), 0, &cfg()),
            Err(EngineError::BoxTooSmall { n_box: 0, height: 1 })
        );
        let tight = cfg().with_budget(15);
        assert_eq!(
            enumerate_solutions(&tuple(2, "1;t;t+1"), 2, &tight),
            Err(EngineError::BudgetExceeded { required: 16, budget: 15 })
        );
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (q, s, n_box) in [
            (2, "1;t;t+1", 2),
            (3, "t;t+1;t+2", 2),
            (2, "1;1;t", 2),
            (3, "1;t^2;t^2+1;t", 2),
            (5, "1;t;t+4", 1),
            (2, "t^2+t+1;t^2;1", 2),
            (2, "t+1;t+1;t;1", 1),
        ] {
            let a = tuple(q, s);
            let got = enumerate_solutions(&a, n_box, &cfg()).unwrap();
            let want = brute(&a, n_box);
            assert_eq!(got.iter_indices().map(<[u64]>::to_vec).collect::<Vec<_>>(), want, "{s}");
        }
    }

    #[test]
    fn parallel_enumeration_is_identical() {
        let a = tuple(3, "t^2+1;t^2;t+1;1");
        let serial = enumerate_solutions(&a, 2, &cfg()).unwrap();
        let par = enumerate_solutions(&a, 2, &cfg().with_jobs(Jobs::new(4))).unwrap();
        assert_eq!(serial, par);
    }

    #[test]
    fn fiber_examples() {
        let f2 = FieldParams::new(2).unwrap();
        let a = tuple(2, "1;t;t+1");
        assert_eq!(fiber_count(&a, 1, 0, &Poly::one(f2), &cfg()).unwrap(), 1);
        for j in 0..3 {
            for x in Poly::all_below(f2, 2) {
                assert_eq!(fiber_count(&a, 2, j, &x, &cfg()).unwrap(), 2);
            }
        }
        let f3 = FieldParams::new(3).unwrap();
        assert_eq!(fiber_count(&tuple(3, "1;1;1"), 1, 1, &Poly::zero(f3), &cfg()).unwrap(), 3);
        assert_eq!(
            fiber_count(&a, 1, 0, &Poly::t(f2), &cfg()),
            Err(EngineError::OutsideBox(Poly::t(f2)))
        );
        assert_eq!(fiber_count(&a, 1, 3, &Poly::one(f2), &cfg()), Err(EngineError::BadCoordinate(3)));
    }

    #[test]
    fn fiber_count_agrees_with_table() {
        let a = tuple(3, "1;t+1;t;t^2+2*t");
        let table = fiber_table(&a, 2, &cfg()).unwrap();
        for (j, row) in table.iter().enumerate() {
            for (x, &c) in row.iter().enumerate() {
                let p = Poly::from_index(a.field(), x as u64);
                assert_eq!(fiber_count(&a, 2, j, &p, &cfg()).unwrap(), c);
            }
        }
    }

    #[test]
    fn balanced_examples() {
        let b = balanced_multiset(&tuple(2, "1;t;t+1"), 1, &cfg()).unwrap();
        assert_eq!(b.size(), 1);
        assert!(b.is_one_factor());
        let a = tuple(2, "1;t^2;t^2+t+1");
        let b = balanced_multiset(&a, 2, &cfg()).unwrap();
        assert_eq!(b.size(), 3);
        assert!(b.is_one_factor());
        assert_eq!(is_balanced(a.coeffs(), b.tuples()), Ok(true));
        assert!(matches!(
            balanced_multiset(&tuple(2, "1;1;t"), 1, &cfg()),
            Err(EngineError::NotSmythTuple(_))
        ));
    }
}
