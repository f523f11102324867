//! Permutation-matrix certificates over F_q[t].

use crate::algebra::linalg::bareiss_det;
use crate::algebra::{ff_kernel, Poly, RatFunc};
use crate::balanced::{invert_permutation, BalanceError, BalancedMultiset, PermutationCertificate};

use super::{CoeffTuple, EngineError};

/// Largest dimension for which `verify_certificate` also recomputes the
/// determinant of `sum a_i X_i`.
pub const DEFAULT_DET_CHECK_BOUND: usize = 16;

/// `sum a_i X_i` where `X_i` sends basis vector `l` to `perm[l]`.
fn combination(a: &CoeffTuple, perms: &[Vec<usize>], m: usize) -> Vec<Vec<Poly>> {
    let zero = Poly::zero(a.field());
    let mut mat = vec![vec![zero; m]; m];
    for (c, perm) in a.coeffs().iter().zip(perms) {
        for (l, &k) in perm.iter().enumerate() {
            mat[k][l] = mat[k][l].add(c);
        }
    }
    mat
}

/// Checks the certificate row by row; with `det_bound >= m` also checks
/// `det(sum a_i X_i) = 0` by fraction-free elimination.
pub fn verify_certificate(
    a: &CoeffTuple,
    c: &PermutationCertificate<Poly>,
    det_bound: usize,
) -> Result<bool, EngineError> {
    if c.kernel_vector.iter().any(|v| v.field() != a.field()) {
        return Err(BalanceError::Dimension("kernel vector over a different field".into()).into());
    }
    if !c.verify_relation(a.coeffs())? {
        return Ok(false);
    }
    let m = c.dimension();
    if m <= det_bound {
        let det = bareiss_det(&combination(a, &c.permutations, m)).expect("m >= 1");
        if !det.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recovers a balanced multiset from permutations making `sum a_i X_i`
/// singular: a kernel vector `v_n` is cleared of denominators, `v_i = X_i v_n`
/// and the all-zero rows are dropped.
pub fn balanced_from_certificate(
    a: &CoeffTuple,
    perms: &[Vec<usize>],
) -> Result<BalancedMultiset<Poly>, EngineError> {
    if perms.len() != a.n() {
        return Err(BalanceError::Dimension(format!("{} permutations for {} coefficients", perms.len(), a.n())).into());
    }
    let m = perms[0].len();
    if m == 0 {
        return Err(BalanceError::Dimension("empty permutations".into()).into());
    }
    for (index, p) in perms.iter().enumerate() {
        invert_permutation(p, m).map_err(|reason| BalanceError::MalformedPermutation { index, reason })?;
    }
    let mat: Vec<Vec<RatFunc>> = combination(a, perms, m)
        .into_iter()
        .map(|row| row.into_iter().map(RatFunc::from_poly).collect())
        .collect();
    let kernel = ff_kernel(&mat).ok_or(EngineError::Nonsingular)?;
    let den = kernel
        .iter()
        .try_fold(Poly::one(a.field()), |l, x| {
            let g = l.gcd(x.den())?;
            Ok::<_, crate::algebra::AlgebraError>(l.mul(x.den()).div_exact(&g).expect("gcd divides"))
        })?;
    let v: Vec<Poly> = kernel
        .iter()
        .map(|x| x.num().mul(&den.div_exact(x.den()).expect("lcm of denominators")))
        .collect();
    let cert = PermutationCertificate { permutations: perms.to_vec(), kernel_vector: v };
    let rows: Vec<Vec<Poly>> = cert
        .row_tuples()?
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    Ok(BalancedMultiset::new(a.coeffs(), rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldParams;
    use crate::balanced::certificate_from_balanced;
    use crate::engine::tests::tuple;
    use crate::engine::{balanced_multiset, SearchConfig};

    fn one_cert(q: u64) -> PermutationCertificate<Poly> {
        let f = FieldParams::new(q).unwrap();
        PermutationCertificate { permutations: vec![vec![0]; 3], kernel_vector: vec![Poly::one(f)] }
    }

    #[test]
    fn verify_examples() {
        let a = tuple(2, "1;t;t+1");
        assert!(verify_certificate(&a, &one_cert(2), 16).unwrap());
        let mut zero = one_cert(2);
        zero.kernel_vector[0] = Poly::zero(a.field());
        assert!(!verify_certificate(&a, &zero, 16).unwrap());
        let f = a.field();
        let bad = CoeffTuple::new(vec![Poly::one(f), Poly::t(f), Poly::t(f)]).unwrap();
        assert!(!verify_certificate(&bad, &one_cert(2), 16).unwrap());
    }

    #[test]
    fn certificates_from_balanced_sets_verify() {
        for (q, s, n_box, m) in [(2, "1;t;t+1", 1, 1), (3, "1;1;1", 1, 8), (2, "1;t^2;t^2+t+1", 2, 3)] {
            let a = tuple(q, s);
            let b = balanced_multiset(&a, n_box, &SearchConfig::default()).unwrap();
            let c = certificate_from_balanced(&b);
            assert_eq!(c.dimension(), m);
            assert!(c.permutations[2].iter().enumerate().all(|(l, &k)| l == k));
            assert!(verify_certificate(&a, &c, 16).unwrap(), "{s}");
        }
    }

    #[test]
    fn from_certificate_examples() {
        let a = tuple(2, "1;t;t+1");
        let b = balanced_from_certificate(&a, &[vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(b.tuples().len(), 1);
        assert!(b.tuples()[0].iter().all(Poly::is_one));
        let id = vec![0, 1];
        let b = balanced_from_certificate(&a, &[id.clone(), id.clone(), id]).unwrap();
        assert_eq!(b.size(), 2);
        assert!(b.tuples().iter().flatten().all(Poly::is_one));
    }

    /// All permutations of 0..m in lexicographic order.
    fn perms(m: usize) -> Vec<Vec<usize>> {
        if m == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(m - 1) {
            for pos in 0..m {
                let mut q = p.clone();
                q.insert(pos, m - 1);
                out.push(q);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn failing_tuple_has_no_small_certificate() {
        let a = tuple(2, "1;1;t");
        for m in 1..=3 {
            let id: Vec<usize> = (0..m).collect();
            for p1 in perms(m) {
                for p2 in perms(m) {
                    let r = balanced_from_certificate(&a, &[p1.clone(), p2.clone(), id.clone()]);
                    assert_eq!(r, Err(EngineError::Nonsingular));
                }
            }
        }
    }

    #[test]
    fn round_trip_through_certificate() {
        let a = tuple(3, "t;t+1;t+2");
        let b = balanced_multiset(&a, 1, &SearchConfig::default()).unwrap();
        let c = certificate_from_balanced(&b);
        let back = balanced_from_certificate(&a, &c.permutations).unwrap();
        assert!(crate::balanced::is_balanced(a.coeffs(), back.tuples()).unwrap());
    }
}
