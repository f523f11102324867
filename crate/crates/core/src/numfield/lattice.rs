//! Rounding in the lattice `Z[alpha]`: a nonnegative integer matrix with
//! constant row sums `n - 1` having `alpha` as an eigenvalue.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::perron::IntMatrix;
use super::quad::QuadInt;
use super::sqrt_sum::SqrtSum;
use super::NumFieldError;

/// Largest number of lattice points scanned in the ball.
pub const BALL_BUDGET: u64 = 1 << 20;

/// Radius grid: `round(64 * 2^(k/8)) / 64`.
const GRID_DENOM: i64 = 64;
const GRID_STEPS: u32 = 400;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step1 {
    pub alpha: QuadInt,
    pub n: usize,
    /// Lattice points of the ball, ascending.
    pub points: Vec<QuadInt>,
    pub matrix: IntMatrix,
    pub radius: BigRational,
    pub covering_radius_sq: BigRational,
}

/// `A = Z[alpha]` in coordinates `(u, v) -> u + v alpha`, with the integral
/// norm form `q(u, v) = a u^2 + b uv + c v^2`.
struct Lattice {
    alpha: QuadInt,
    rank: usize,
    trace: i128,
    norm: i128,
    form: (i128, i128, i128),
}

impl Lattice {
    fn new(alpha: QuadInt) -> Self {
        let (trace, norm) = (alpha.trace(), alpha.norm());
        if alpha.is_rational() {
            return Self { alpha, rank: 1, trace, norm, form: (1, 0, 0) };
        }
        let form = if alpha.field.is_imaginary() {
            (1, trace, norm)
        } else {
            (2, 2 * trace, trace * trace - 2 * norm)
        };
        Self { alpha, rank: 2, trace, norm, form }
    }

    fn q(&self, u: i128, v: i128) -> i128 {
        let (a, b, c) = self.form;
        a * u * u + b * u * v + c * v * v
    }

    fn point(&self, u: i128, v: i128) -> QuadInt {
        let k = self.alpha.field;
        let u = i64::try_from(u).expect("lattice coordinate overflow");
        let v = i64::try_from(v).expect("lattice coordinate overflow");
        k.int(u).add(&self.alpha.scale(v))
    }

    /// Coordinates of `alpha (u + v alpha)`.
    fn times_alpha(&self, u: i128, v: i128) -> (i128, i128) {
        if self.rank == 1 {
            (self.alpha.x as i128 * u, 0)
        } else {
            (-self.norm * v, u + self.trace * v)
        }
    }

    /// Largest archimedean absolute value of `alpha`.
    fn stretch(&self) -> SqrtSum {
        if self.rank == 1 {
            return SqrtSum::from_integer(self.alpha.x.abs());
        }
        if self.alpha.field.is_imaginary() {
            return SqrtSum::sqrt_of(BigRational::from_integer(self.norm.into()));
        }
        let disc = self.trace * self.trace - 4 * self.norm;
        SqrtSum::from_rational(BigRational::new(self.trace.abs().into(), 2.into()))
            .add(&SqrtSum::sqrt_of(BigRational::new(disc.into(), 4.into())))
    }

    /// Squared covering radius: the circumradius of `0, b1, b2` for a reduced
    /// basis with `<b1, b2> >= 0`.
    fn covering_radius_sq(&self) -> BigRational {
        if self.rank == 1 {
            return BigRational::new(1.into(), 4.into());
        }
        let (mut b1, mut b2) = ((1i128, 0i128), (0i128, 1i128));
        let dot2 = |x: (i128, i128), y: (i128, i128)| {
            let (a, b, c) = self.form;
            2 * a * x.0 * y.0 + b * (x.0 * y.1 + x.1 * y.0) + 2 * c * x.1 * y.1
        };
        loop {
            if dot2(b1, b1) > dot2(b2, b2) {
                std::mem::swap(&mut b1, &mut b2);
            }
            let (num, den) = (dot2(b1, b2), dot2(b1, b1));
            let mu = (2 * num + den).div_euclid(2 * den);
            if mu == 0 {
                break;
            }
            b2 = (b2.0 - mu * b1.0, b2.1 - mu * b1.1);
        }
        if dot2(b1, b2) < 0 {
            b2 = (-b2.0, -b2.1);
        }
        let q1 = self.q(b1.0, b1.1);
        let q2 = self.q(b2.0, b2.1);
        let q3 = self.q(b1.0 - b2.0, b1.1 - b2.1);
        let s = q1 + q2 - q3;
        BigRational::new(BigInt::from(q1 * q2 * q3), BigInt::from(4 * q1 * q2 - s * s))
    }
}

fn grid_radius(k: u32) -> BigRational {
    let r = (GRID_DENOM as f64 * 2f64.powf(k as f64 / 8.0)).round() as i64;
    BigRational::new(r.into(), GRID_DENOM.into())
}

/// Builds `C` and the ball points `z` with `C z = alpha z` and row sums `n - 1`.
/// Each row `z` puts weight `n - 2` on the ball point `z_1` closest to
/// `alpha z / (n-1)` and weight 1 on `z_2 = alpha z - (n-2) z_1`.
pub fn speyer_step1(alpha: &QuadInt, n: usize) -> Result<Step1, NumFieldError> {
    if n < 3 {
        return Err(NumFieldError::TooFewCoefficients(n));
    }
    let lat = Lattice::new(*alpha);
    let r = (n - 1) as i64;
    let c = lat.stretch();
    if c.cmp_exact(&SqrtSum::from_integer(r)) != Ordering::Less {
        return Err(NumFieldError::AlphaTooLarge { n });
    }
    let m_sq = lat.covering_radius_sq();
    let m = SqrtSum::sqrt_of(m_sq.clone());
    let slack = SqrtSum::from_integer(r).sub(&c);
    let rhs = m.scale(&BigRational::from_integer(BigInt::from(r * (r - 1))));
    let radius = (0..GRID_STEPS)
        .map(grid_radius)
        .find(|rad| slack.scale(rad).cmp_exact(&rhs) == Ordering::Greater)
        .ok_or_else(|| NumFieldError::Parameter("no radius on the grid satisfies the rounding inequality".into()))?;

    // ball: 4096 q(u, v) <= num^2
    let num = radius.numer() * BigInt::from(GRID_DENOM) / radius.denom();
    let num: i128 = i128::try_from(num).map_err(|_| NumFieldError::Parameter("radius overflow".into()))?;
    let scale = (GRID_DENOM * GRID_DENOM) as i128;
    let inside = |u: i128, v: i128| scale * lat.q(u, v) <= num * num;
    let r2 = (num as f64 / GRID_DENOM as f64).powi(2);
    let (a, b, cc) = lat.form;
    let (ub, vb) = if lat.rank == 1 {
        (r2.sqrt().ceil() as i128 + 1, 0)
    } else {
        let d = (4 * a * cc - b * b) as f64;
        (((4 * cc) as f64 * r2 / d).sqrt().ceil() as i128 + 1, ((4 * a) as f64 * r2 / d).sqrt().ceil() as i128 + 1)
    };
    let required = (2 * ub as u128 + 1) * (2 * vb as u128 + 1);
    if required > BALL_BUDGET as u128 {
        return Err(NumFieldError::BudgetExceeded { required, budget: BALL_BUDGET });
    }
    let mut coords: Vec<(QuadInt, (i128, i128))> = Vec::new();
    for u in -ub..=ub {
        for v in -vb..=vb {
            if inside(u, v) {
                coords.push((lat.point(u, v), (u, v)));
            }
        }
    }
    coords.sort();
    let index: HashMap<(i128, i128), usize> = coords.iter().enumerate().map(|(i, &(_, uv))| (uv, i)).collect();

    let size = coords.len();
    let mut rows = vec![vec![0u64; size]; size];
    let nm1 = r as i128;
    for (row, &(_, (u, v))) in coords.iter().enumerate() {
        let (pu, pv) = lat.times_alpha(u, v);
        // closest point to (pu, pv)/(n-1); the first minimum is the smallest in order
        let (z1, _) = coords
            .iter()
            .enumerate()
            .map(|(j, &(_, (x, y)))| (j, lat.q(nm1 * x - pu, nm1 * y - pv)))
            .fold((usize::MAX, i128::MAX), |best, cur| if cur.1 < best.1 { cur } else { best });
        let (x1, y1) = coords[z1].1;
        let z2 = (pu - (nm1 - 1) * x1, pv - (nm1 - 1) * y1);
        let z2 = *index
            .get(&z2)
            .ok_or_else(|| NumFieldError::Parameter("rounding left the ball".into()))?;
        rows[row][z1] += (n - 2) as u64;
        rows[row][z2] += 1;
    }
    let matrix = IntMatrix::new(rows)?;
    let points: Vec<QuadInt> = coords.into_iter().map(|(p, _)| p).collect();
    if !matrix.has_eigenvector(alpha, &points) {
        return Err(NumFieldError::Parameter("eigenvector identity failed".into()));
    }
    Ok(Step1 { alpha: *alpha, n, points, matrix, radius, covering_radius_sq: m_sq })
}
