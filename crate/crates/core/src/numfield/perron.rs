//! From a row-regular matrix with eigenvalue `alpha` to a doubly regular one,
//! and doubly regular matrices as sums of permutation matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{nullspace, primitive_integer_vector};

use super::quad::QuadInt;
use super::NumFieldError;

/// Largest dimension `perron_bridge` will produce.
pub const DEFAULT_BRIDGE_BUDGET: usize = 4096;

/// A square matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct IntMatrix {
    rows: Vec<Vec<u64>>,
}

impl TryFrom<Vec<Vec<u64>>> for IntMatrix {
    type Error = NumFieldError;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self, NumFieldError> {
        IntMatrix::new(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<u64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows
    }
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, NumFieldError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(NumFieldError::BadMatrix("matrix must be square and nonempty".into()));
        }
        Ok(Self { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.size()).map(|j| self.rows.iter().map(|r| r[j]).sum()).collect()
    }

    /// The common row and column sum, if there is one.
    pub fn regularity(&self) -> Option<u64> {
        let r = self.row_sums();
        let c = self.col_sums();
        (r.iter().chain(&c).all(|&x| x == r[0])).then_some(r[0])
    }

    /// Exact check of `self * z = alpha * z` with `z != 0`.
    pub fn has_eigenvector(&self, alpha: &QuadInt, z: &[QuadInt]) -> bool {
        if z.len() != self.size() || z.iter().all(QuadInt::is_zero) {
            return false;
        }
        self.rows.iter().zip(z).all(|(row, zi)| {
            let lhs = row
                .iter()
                .zip(z)
                .filter(|(c, _)| **c != 0)
                .fold(alpha.field.int(0), |s, (&c, zj)| s.add(&zj.scale(c as i64)));
            lhs == alpha.mul(zi)
        })
    }

    fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter().enumerate().filter(|(_, c)| **c > 0).map(|(j, _)| j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeStrategy {
    AlreadyRegular,
    ClosedClass,
    SignedCover,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    pub matrix: IntMatrix,
    pub eigenvector: Vec<QuadInt>,
    pub strategy: BridgeStrategy,
}

/// Strongly connected components in order of their smallest vertex.
fn components(m: &IntMatrix) -> Vec<Vec<usize>> {
    let n = m.size();
    // Kosaraju with explicit stacks
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, m.successors(s).collect::<Vec<_>>(), 0usize)];
        while let Some((v, succ, pos)) = stack.last_mut() {
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if !seen[w] {
                    seen[w] = true;
                    let next = m.successors(w).collect();
                    stack.push((w, next, 0));
                }
            } else {
                order.push(*v);
                stack.pop();
            }
        }
    }
    let mut preds = vec![Vec::new(); n];
    for i in 0..n {
        for j in m.successors(i) {
            preds[j].push(i);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &preds[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out.sort();
    out
}

fn is_closed(m: &IntMatrix, class: &[usize]) -> bool {
    class.iter().all(|&i| m.successors(i).all(|j| class.binary_search(&j).is_ok()))
}

/// Lifts an irreducible row-regular block to a doubly regular matrix: vertex
/// `i` is copied `w_i` times for the left Perron vector `w`, and the edges
/// into each class are dealt round-robin over its copies.
fn lift(block: &[Vec<u64>], values: &[QuadInt], r: u64, budget: usize) -> Option<(IntMatrix, Vec<QuadInt>)> {
    let k = block.len();
    // w (B - rI) = 0, i.e. (B - rI)^T w^T = 0
    let t: Vec<Vec<BigRational>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| {
                    let v = block[i][j] as i64 - if i == j { r as i64 } else { 0 };
                    BigRational::from_integer(BigInt::from(v))
                })
                .collect()
        })
        .collect();
    let kernel = nullspace(&t);
    if kernel.len() != 1 {
        return None;
    }
    let mut w = primitive_integer_vector(&kernel[0]);
    if w.iter().any(BigInt::is_negative) {
        w.iter_mut().for_each(|x| *x = -x.clone());
    }
    if w.iter().any(|x| !x.is_positive()) {
        return None;
    }
    let w: Vec<usize> = w.iter().map(|x| x.to_usize()).collect::<Option<_>>()?;
    let total: usize = w.iter().sum();
    if total > budget {
        return None;
    }
    let offsets: Vec<usize> = w.iter().scan(0, |acc, &x| {
        let o = *acc;
        *acc += x;
        Some(o)
    }).collect();
    let mut rows = vec![vec![0u64; total]; total];
    let mut dealt = vec![0usize; k];
    for i in 0..k {
        for copy in 0..w[i] {
            for j in 0..k {
                for _ in 0..block[i][j] {
                    rows[offsets[i] + copy][offsets[j] + dealt[j] % w[j]] += 1;
                    dealt[j] += 1;
                }
            }
        }
    }
    let z = (0..k).flat_map(|i| std::iter::repeat_n(values[i], w[i])).collect();
    Some((IntMatrix::new(rows).ok()?, z))
}

fn restrict(m: &IntMatrix, class: &[usize]) -> Vec<Vec<u64>> {
    class.iter().map(|&i| class.iter().map(|&j| m.rows[i][j]).collect()).collect()
}

/// Turns `C` (row sums `r`, `C z = alpha z`) into `D` with all row and column
/// sums `r` and `D z' = alpha z'`. The output is verified before it is returned.
pub fn perron_bridge(c: &IntMatrix, alpha: &QuadInt, z: &[QuadInt], budget: usize) -> Result<Bridge, NumFieldError> {
    let rows = c.row_sums();
    let r = rows[0];
    if rows.iter().any(|&x| x != r) || !c.has_eigenvector(alpha, z) {
        return Err(NumFieldError::BadMatrix("input needs equal row sums and C z = alpha z with z != 0".into()));
    }
    let verify = |b: Bridge| -> Option<Bridge> {
        (b.matrix.regularity() == Some(r) && b.matrix.has_eigenvector(alpha, &b.eigenvector)).then_some(b)
    };
    if c.regularity() == Some(r) {
        return Ok(Bridge { matrix: c.clone(), eigenvector: z.to_vec(), strategy: BridgeStrategy::AlreadyRegular });
    }
    let try_closed = |m: &IntMatrix, values: &[QuadInt], strategy| {
        components(m)
            .into_iter()
            .filter(|cl| is_closed(m, cl) && cl.iter().any(|&i| !values[i].is_zero()))
            .find_map(|cl| {
                let vals: Vec<QuadInt> = cl.iter().map(|&i| values[i]).collect();
                let (matrix, eigenvector) = lift(&restrict(m, &cl), &vals, r, budget)?;
                verify(Bridge { matrix, eigenvector, strategy })
            })
    };
    if let Some(b) = try_closed(c, z, BridgeStrategy::ClosedClass) {
        return Ok(b);
    }
    // signed cover: vertex i + s l carries (-1)^s z_i; rows with z_i = 0 are
    // rewired to an equal number of edges into p and -p
    let l = c.size();
    let p = z.iter().position(|x| !x.is_zero()).expect("z != 0");
    let mut cover = vec![vec![0u64; 2 * l]; 2 * l];
    for s in 0..2 {
        for i in 0..l {
            let row = &mut cover[i + s * l];
            if z[i].is_zero() {
                row[p] += r / 2;
                row[p + l] += r / 2;
                row[i + s * l] += r % 2;
            } else {
                for j in 0..l {
                    row[j + s * l] += c.rows[i][j];
                }
            }
        }
    }
    let cover = IntMatrix::new(cover)?;
    let values: Vec<QuadInt> = z.iter().copied().chain(z.iter().map(QuadInt::neg)).collect();
    debug_assert!(cover.has_eigenvector(alpha, &values));
    try_closed(&cover, &values, BridgeStrategy::SignedCover)
        .ok_or_else(|| NumFieldError::NoBridge { matrix: c.clone() })
}

/// Writes `D` (all row and column sums `r`) as a sum of `r` permutation
/// matrices by repeated perfect matchings. `perm[l] = k` puts a 1 at `(k, l)`.
pub fn birkhoff_decompose(d: &IntMatrix) -> Result<Vec<Vec<usize>>, NumFieldError> {
    let r = d.regularity().ok_or_else(|| NumFieldError::BadMatrix("row and column sums differ".into()))?;
    let n = d.size();
    let mut rest = d.rows.clone();
    let mut perms = Vec::with_capacity(r as usize);
    for _ in 0..r {
        // Kuhn: match each column to a row
        let mut row_of_col = vec![usize::MAX; n];
        let mut col_of_row = vec![usize::MAX; n];
        for col in 0..n {
            let mut visited = vec![false; n];
            if !augment(col, &rest, &mut visited, &mut row_of_col, &mut col_of_row) {
                return Err(NumFieldError::BadMatrix("no perfect matching".into()));
            }
        }
        for (col, &row) in row_of_col.iter().enumerate() {
            rest[row][col] -= 1;
        }
        perms.push(row_of_col);
    }
    debug_assert!(rest.iter().flatten().all(|&x| x == 0));
    Ok(perms)
}

fn augment(
    col: usize,
    m: &[Vec<u64>],
    visited: &mut [bool],
    row_of_col: &mut [usize],
    col_of_row: &mut [usize],
) -> bool {
    for row in 0..m.len() {
        if m[row][col] == 0 || visited[row] {
            continue;
        }
        visited[row] = true;
        if col_of_row[row] == usize::MAX || augment(col_of_row[row], m, visited, row_of_col, col_of_row) {
            col_of_row[row] = col;
            row_of_col[col] = row;
            return true;
        }
    }
    false
}

/// `sum_i P_i` for permutations in the `perm[l] = k` convention.
pub fn permutation_sum(perms: &[Vec<usize>]) -> Result<IntMatrix, NumFieldError> {
    let n = perms.first().map_or(0, Vec::len);
    let mut rows = vec![vec![0u64; n]; n];
    for p in perms {
        crate::balanced::invert_permutation(p, n).map_err(NumFieldError::BadMatrix)?;
        for (l, &k) in p.iter().enumerate() {
            rows[k][l] += 1;
        }
    }
    IntMatrix::new(rows)
}
