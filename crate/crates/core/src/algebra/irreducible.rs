//! Irreducibility testing and random irreducible generation over F_q.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factor::integer_factor;
use super::field::FieldParams;
use super::poly::Poly;
use super::AlgebraError;

/// Rabin's test: `f` of degree `d` is irreducible iff `t^(q^d) = t (mod f)`
/// and `gcd(t^(q^(d/l)) - t, f) = 1` for every prime `l | d`.
pub fn is_irreducible(f: &Poly) -> Result<bool, AlgebraError> {
    let d = match f.deg() {
        None | Some(0) => return Err(AlgebraError::ConstantPolynomial),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let field = f.field();
    let f = f.monic();
    let t = Poly::t(field);
    let q = field.q() as u128;

    // frob[k] = t^(q^k) mod f
    let mut frob = Vec::with_capacity(d + 1);
    let mut cur = t.rem(&f)?;
    frob.push(cur.clone());
    for _ in 0..d {
        cur = cur.pow_mod(q, &f)?;
        frob.push(cur.clone());
    }
    if frob[d] != t.rem(&f)? {
        return Ok(false);
    }
    for l in integer_factor(d as u128)?.primes() {
        let h = frob[d / l as usize].sub(&t);
        if !h.gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A uniformly sampled monic polynomial of degree exactly `degree`.
fn random_monic(field: FieldParams, degree: usize, rng: &mut impl Rng) -> Poly {
    let mut coeffs: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..field.q())).collect();
    coeffs.push(1);
    Poly::from_coeffs(field, coeffs)
}

/// A monic irreducible polynomial of degree `degree`, found by seeded
/// rejection sampling. Identical seeds give identical output.
pub fn random_irreducible(field: FieldParams, degree: usize, seed: u64) -> Poly {
    assert!(degree >= 1, "irreducible polynomials have positive degree");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let f = random_monic(field, degree, &mut rng);
        if is_irreducible(&f).expect("nonconstant candidate") {
            return f;
        }
    }
}

/// Every monic polynomial of degree `degree`, in canonical index order.
pub fn monic_of_degree(field: FieldParams, degree: usize) -> impl Iterator<Item = Poly> {
    let low = field.q().checked_pow(degree as u32).expect("count fits in u64");
    (0..low).map(move |i| {
        let mut coeffs = Poly::from_index(field, i).coeffs().to_vec();
        coeffs.resize(degree, 0);
        coeffs.push(1);
        Poly::from_coeffs(field, coeffs)
    })
}

/// All monic irreducibles of the given degree, by exhaustive sweep.
pub fn monic_irreducibles(field: FieldParams, degree: usize) -> Vec<Poly> {
    monic_of_degree(field, degree)
        .filter(|f| is_irreducible(f).expect("nonconstant"))
        .collect()
}
